#pragma once

#include <functional>
#include <vector>

namespace subdens {

/// Natural cubic spline on strictly increasing nodes. Evaluation outside the
/// node range clamps to the boundary cubic.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return x_.empty(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at nodes
};

/// Log-abscissa convenience: spline of f against ln(x) on a geometric grid,
/// with f(x) = 0 returned below the grid (intended for functions vanishing
/// toward the origin).
class LogGridSpline {
public:
    LogGridSpline() = default;
    LogGridSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return spline_.empty(); }
    double x_min() const { return xmin_; }
    double x_max() const { return xmax_; }

private:
    CubicSpline spline_;
    double xmin_ = 0.0, xmax_ = 0.0;
};

/// Sampled function on (0, x_max]: geometric nodes below the split point,
/// uniform nodes above, natural cubic splines in between. Returns 0 below the
/// lowest node. Suits convolution levels, which vanish toward the origin and
/// decay smoothly at the far end.
class HybridSpline {
public:
    HybridSpline() = default;

    static HybridSpline build(const std::function<double(double)>& f, double x_lo,
                              double x_max, int n_log, int n_lin);

    double operator()(double x) const;
    bool empty() const { return low_.empty(); }
    double x_max() const { return xmax_; }

private:
    LogGridSpline low_;
    CubicSpline high_;
    double split_ = 0.0, xmax_ = 0.0;
};

}  // namespace subdens
