#include "subdens/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subdens {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw std::invalid_argument("CubicSpline: need >= 3 matching nodes");
    for (size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CubicSpline: nodes must increase");

    // tridiagonal solve for natural end conditions
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    m_.assign(n, 0.0);
    b[0] = b[n - 1] = 1.0;
    for (size_t i = 1; i + 1 < n; ++i) {
        double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
        a[i] = hl / 6.0;
        b[i] = (hl + hr) / 3.0;
        c[i] = hr / 6.0;
        d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    // Thomas algorithm
    for (size_t i = 1; i < n; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
}

double CubicSpline::operator()(double x) const {
    const size_t n = x_.size();
    size_t i;
    if (x <= x_[1]) i = 0;
    else if (x >= x_[n - 2]) i = n - 2;
    else i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
    double h = x_[i + 1] - x_[i];
    double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

LogGridSpline::LogGridSpline(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || x.front() <= 0.0)
        throw std::invalid_argument("LogGridSpline: abscissae must be positive");
    xmin_ = x.front();
    xmax_ = x.back();
    std::vector<double> s(x.size());
    for (size_t i = 0; i < x.size(); ++i) s[i] = std::log(x[i]);
    spline_ = CubicSpline(std::move(s), std::move(y));
}

double LogGridSpline::operator()(double x) const {
    if (x < xmin_) return 0.0;
    if (x > xmax_) x = xmax_;
    return spline_(std::log(x));
}

HybridSpline HybridSpline::build(const std::function<double(double)>& f, double x_lo,
                                 double x_max, int n_log, int n_lin) {
    if (!(x_lo > 0.0 && x_max > x_lo))
        throw std::invalid_argument("HybridSpline: bad domain");
    HybridSpline h;
    h.xmax_ = x_max;
    h.split_ = std::min(1.0, 0.25 * x_max);
    if (h.split_ <= x_lo * 4.0) h.split_ = std::sqrt(x_lo * x_max);
    std::vector<double> xs, ys;
    xs.reserve(n_log + 1);
    double ratio = std::log(h.split_ / x_lo);
    for (int i = 0; i <= n_log; ++i) {
        double x = x_lo * std::exp(ratio * i / n_log);
        xs.push_back(x);
        ys.push_back(f(x));
    }
    h.low_ = LogGridSpline(xs, ys);
    std::vector<double> xu, yu;
    xu.reserve(n_lin + 1);
    for (int j = 0; j <= n_lin; ++j) {
        double x = h.split_ + (x_max - h.split_) * static_cast<double>(j) / n_lin;
        xu.push_back(x);
        yu.push_back(f(x));
    }
    h.high_ = CubicSpline(std::move(xu), std::move(yu));
    return h;
}

double HybridSpline::operator()(double x) const {
    if (x <= split_) return low_(x);
    if (x > xmax_) x = xmax_;
    return high_(x);
}

}  // namespace subdens
