#include "subdens/tail_conv.hpp"

#include <cmath>
#include <stdexcept>

#include "subdens/specfun.hpp"

namespace subdens::tail_conv {

namespace sf = specfun;

void DampedInversionPlan::validate(double growth_rate) const {
    if (n < 1) throw std::invalid_argument("DampedInversionPlan: n >= 1");
    if (m < n + 2) throw std::invalid_argument("DampedInversionPlan: requires m >= n + 2");
    if (!(c > growth_rate))
        throw std::invalid_argument("DampedInversionPlan: abscissa must exceed growth rate");
}

DampedInversionPlan make_plan(const SubordinatorModel& model, int n) {
    DampedInversionPlan plan;
    plan.n = n;
    plan.m = n + 3;  // one above the minimum, for |theta|^{-3} integrand decay
    plan.c = model.growth_rate + 1.0;
    plan.derivative_source = model.cumulant_derivative ? DerivativeSource::closed_form
                                                       : DerivativeSource::numeric_integral;
    return plan;
}

cplx lambda_n_m(const SubordinatorModel& model, int n, int m, cplx theta,
                DerivativeSource source, const quad::QuadratureConfig& cfg) {
    if (n < 1 || m < 1) throw std::invalid_argument("lambda_n_m: n, m >= 1");
    std::vector<cplx> derivs(m);  // kappa', ..., kappa^{(m)}
    for (int k = 1; k <= m; ++k) {
        if (source == DerivativeSource::closed_form && model.cumulant_derivative)
            derivs[k - 1] = model.cumulant_derivative(k, theta);
        else
            derivs[k - 1] = kappa_derivative_numeric(model, k, theta, cfg).value;
    }
    cplx kappa = model.cumulant(theta);
    cplx sum = 0.0;
    double binom = 1.0;  // C(n, j)
    for (int j = 1; j <= std::min(m, n); ++j) {
        binom = binom * (n - j + 1) / j;
        cplx B = sf::bell_partial(m, j, std::span<const cplx>(derivs.data(), m - j + 1));
        sum += binom * std::pow(kappa, n - j) * B;
    }
    return sum;
}

quad::IntegralResult u_n_via_damped_inversion(const SubordinatorModel& model,
                                              const DampedInversionPlan& plan, double x,
                                              const quad::QuadratureConfig& cfg) {
    plan.validate(model.growth_rate);
    if (!(x > 0.0)) throw std::invalid_argument("u_n_via_damped_inversion: x > 0");
    const int n = plan.n, m = plan.m;
    auto F = [&model, n, m, &plan, &cfg](cplx theta) {
        return lambda_n_m(model, n, m, theta, plan.derivative_source, cfg);
    };
    quad::IntegralResult r = quad::bromwich_integral(F, plan.c, x, cfg);
    // transform of x^m u_n is (-1)^m lambda_n^{(m)}
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double scale = sign * std::pow(x, -m);
    r.value *= scale;
    r.error_estimate *= std::abs(scale);
    return r;
}

// ---------------------------------------------------------------------------
// Convolution powers of the tail.
// ---------------------------------------------------------------------------

TailConvEngine::TailConvEngine(SubordinatorModel model, quad::QuadratureConfig cfg)
    : model_(std::move(model)), cfg_(std::move(cfg)) {}

double TailConvEngine::tail_conv_power(int n, double x) const {
    if (n < 1) throw std::invalid_argument("tail_conv_power: n >= 1");
    if (!(x > 0.0)) throw std::invalid_argument("tail_conv_power: x > 0");
    if (n == 1) return model_.tail(x);
    if (n == 2) {
        return quad::convolve_at(model_.tail, model_.tail_origin_exponent, model_.tail,
                                 model_.tail_origin_exponent, x, cfg_)
            .value;
    }
    ensure_levels(n, x);
    return conv_power_eval(n, x);
}

double TailConvEngine::conv_power_eval(int n, double x) const {
    // convolve the cached level n-1 with the exact tail
    const HybridSpline& prev = levels_[n - 3];
    auto prev_fn = [&prev](double y) { return prev(y); };
    auto r = quad::convolve_at(model_.tail, model_.tail_origin_exponent, prev_fn,
                               std::nullopt, x, cfg_);
    return r.value;
}

void TailConvEngine::ensure_levels(int n_max, double x_need) const {
    double x_max = std::max(x_need * 1.25 + 1.0, 8.0);
    if (x_max <= grid_x_max_ && static_cast<int>(levels_.size()) >= n_max - 2) return;
    if (x_max < grid_x_max_) x_max = grid_x_max_;
    levels_.clear();
    grid_x_max_ = x_max;
    const double x_lo = 1e-7 * x_max;
    const int n_log = 700, n_lin = 2400;
    for (int level = 3; level <= std::max(n_max, 3); ++level) {
        std::function<double(double)> f;
        if (level == 3) {
            f = [this](double x) {
                return quad::convolve_at(model_.tail, model_.tail_origin_exponent,
                                         model_.tail, model_.tail_origin_exponent, x, cfg_)
                    .value;
            };
        } else {
            const HybridSpline& prev = levels_.back();
            f = [this, &prev](double x) {
                auto prev_fn = [&prev](double y) { return prev(y); };
                return quad::convolve_at(model_.tail, model_.tail_origin_exponent, prev_fn,
                                         std::nullopt, x, cfg_)
                    .value;
            };
        }
        levels_.push_back(HybridSpline::build(f, x_lo, x_max, n_log, n_lin));
    }
}

TailConvEngine::DerivativeResult TailConvEngine::u_n_via_derivative(int n, double x) const {
    if (n < 1) throw std::invalid_argument("u_n_via_derivative: n >= 1");
    if (!(x > 0.0)) throw std::invalid_argument("u_n_via_derivative: x > 0");

    // V_n sampled around x; for n <= 2 evaluate directly, beyond that go
    // through the level cache (the convolution per stencil point then costs a
    // single quadrature over cached splines).
    double h0 = 0.02 * std::max(x, 0.5);
    if (n == 1) h0 = 1e-4 * std::max(x, 1.0);
    if (n == 2) h0 = 0.01 * std::max(x, 0.5);
    if (n >= 3) ensure_levels(n, x + (n + 2.0) * h0);

    auto Vn = [this, n](double z) { return tail_conv_power(n, z); };

    auto stencil = [&](double h) {
        // central n-th difference: sum_j (-1)^j C(n,j) V(x + (n/2 - j) h) / h^n
        double acc = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= n; ++j) {
            if (j > 0) binom = binom * (n - j + 1) / j;
            double sign = (j % 2 == 0) ? 1.0 : -1.0;
            acc += sign * binom * Vn(x + (0.5 * n - j) * h);
        }
        return acc / std::pow(h, n);
    };

    double d1 = stencil(h0);
    double d2 = stencil(0.5 * h0);
    double romberg = (4.0 * d2 - d1) / 3.0;
    double est = std::abs(d2 - d1) / 3.0;
    // roundoff floor of the difference quotient
    double vmag = std::abs(Vn(x));
    double floor_err = vmag * 1e-15 * std::pow(2.0, n) / std::pow(0.5 * h0, n);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return {sign * romberg, est + floor_err};
}

double laplace_identity_residual(const TailConvEngine& engine, int n, double theta) {
    if (!(theta > engine.model().growth_rate))
        throw std::domain_error("laplace_identity_residual: theta must exceed growth rate");
    if (n < 1) throw std::invalid_argument("laplace_identity_residual: n >= 1");
    const auto& model = engine.model();
    auto f = [&engine, n, theta](double x) {
        return std::exp(-theta * x) * engine.tail_conv_power(n, x);
    };
    quad::QuadratureConfig cfg = engine.config();
    // V_n ~ x^{n(1-alpha)-...} toward 0; only n=1 can be singular there
    cfg.origin_singularity_exponent =
        (n == 1) ? model.tail_origin_exponent : std::nullopt;
    auto lhs = quad::integrate_semi_infinite(quad::RealFn(f), 0.0, theta, cfg);
    cplx kp = model.cumulant(cplx(theta));
    double rhs = (((n % 2 == 0) ? 1.0 : -1.0) * std::pow(kp.real(), n)) / std::pow(theta, n);
    return std::abs(lhs.value - rhs) / std::abs(rhs);
}

}  // namespace subdens::tail_conv
