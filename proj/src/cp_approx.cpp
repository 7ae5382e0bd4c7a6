#include "subdens/cp_approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subdens::cp {

const char* to_string(EpsilonKind kind) {
    switch (kind) {
        case EpsilonKind::truncate: return "truncate";
        case EpsilonKind::exp_tilt: return "exp_tilt";
        case EpsilonKind::smooth_cut: return "smooth_cut";
    }
    return "?";
}

EpsilonKind epsilon_kind_from_string(const std::string& name) {
    if (name == "truncate") return EpsilonKind::truncate;
    if (name == "exp_tilt") return EpsilonKind::exp_tilt;
    if (name == "smooth_cut") return EpsilonKind::smooth_cut;
    throw std::invalid_argument("unknown epsilon scheme '" + name +
                                "'; valid: truncate, exp_tilt, smooth_cut");
}

void EpsilonScheme::validate() const {
    if (ladder.empty()) throw std::invalid_argument("EpsilonScheme: empty ladder");
    for (size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0))
            throw std::invalid_argument("EpsilonScheme: ladder entries must be positive");
        if (i > 0 && !(ladder[i] < ladder[i - 1]))
            throw std::invalid_argument("EpsilonScheme: ladder must strictly decrease");
    }
}

std::vector<double> EpsilonScheme::geometric_ladder(double eps0, double ratio, int count) {
    if (!(eps0 > 0.0) || !(ratio > 1.0) || count < 1)
        throw std::invalid_argument("geometric_ladder: eps0 > 0, ratio > 1, count >= 1");
    std::vector<double> l(count);
    for (int k = 0; k < count; ++k) l[k] = eps0 * std::pow(ratio, -k);
    return l;
}

EpsilonScheme EpsilonScheme::defaults(EpsilonKind kind) {
    return EpsilonScheme{kind, geometric_ladder(0.2, 2.0, 6)};
}

void CoefficientTable::validate() const {
    if (x_grid.empty()) throw std::invalid_argument("CoefficientTable: empty x grid");
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("CoefficientTable: bad n range");
    size_t rows = static_cast<size_t>(n_max - n_min + 1);
    if (values.size() != rows || error_estimates.size() != rows)
        throw std::invalid_argument("CoefficientTable: row count mismatch");
    for (size_t r = 0; r < rows; ++r) {
        if (values[r].size() != x_grid.size() || error_estimates[r].size() != x_grid.size())
            throw std::invalid_argument("CoefficientTable: column count mismatch");
        for (double e : error_estimates[r])
            if (e < 0.0) throw std::invalid_argument("CoefficientTable: negative error estimate");
    }
}

// ---------------------------------------------------------------------------
// Extrapolation
// ---------------------------------------------------------------------------

ExtrapolationResult extrapolate_to_zero(const std::vector<std::pair<double, double>>& samples,
                                        const ExtrapolationOptions& options) {
    if (samples.size() < 3)
        throw std::invalid_argument("extrapolate_to_zero: need at least 3 ladder points");
    std::vector<double> h(samples.size()), v(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        h[i] = samples[i].first;
        v[i] = samples[i].second;
        if (i > 0 && !(h[i] < h[i - 1]))
            throw std::invalid_argument("extrapolate_to_zero: eps must strictly decrease");
    }

    ExtrapolationResult out;
    bool constant = true;
    for (size_t i = 1; i < v.size(); ++i) constant = constant && v[i] == v[0];
    if (constant) {
        out.value = v[0];
        out.error_estimate = options.noise_floor;
        return out;
    }

    double stride;
    if (options.stride) {
        stride = *options.stride;
    } else {
        // fit the leading exponent from consecutive differences
        std::vector<double> fits;
        for (size_t i = 0; i + 2 < v.size(); ++i) {
            double d1 = v[i] - v[i + 1], d2 = v[i + 1] - v[i + 2];
            if (d1 == 0.0 || d2 == 0.0 || (d1 > 0) != (d2 > 0)) continue;
            fits.push_back(std::log(std::abs(d1 / d2)) / std::log(h[i] / h[i + 1]));
        }
        if (fits.empty()) {
            out.value = v.back();
            double spread = 0.0;
            for (size_t i = 1; i < v.size(); ++i)
                spread = std::max(spread, std::abs(v[i] - v[i - 1]));
            out.error_estimate = 2.0 * spread + options.noise_floor;
            out.erratic = true;
            return out;
        }
        std::sort(fits.begin(), fits.end());
        stride = fits[fits.size() / 2];
        double rounded = std::round(stride * 2.0) / 2.0;
        if (rounded > 0.0 && std::abs(stride - rounded) < 0.14) stride = rounded;
        if (stride <= 0.05) {
            out.value = v.back();
            out.error_estimate = 2.0 * std::abs(v.back() - v[v.size() - 2]) + options.noise_floor;
            out.erratic = true;
            return out;
        }
    }
    out.fitted_exponent = stride;

    double prev_final = v.back();
    double err = std::abs(v.back() - v[v.size() - 2]);
    double last_change = err;
    int repeats = options.log_blocks ? 2 : 1;
    int stage = 0;
    while (v.size() >= 2) {
        ++stage;
        double q = stride * ((stage + repeats - 1) / repeats);
        std::vector<double> w(v.size() - 1);
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            double rq = std::pow(h[i] / h[i + 1], q);
            w[i] = (rq * v[i + 1] - v[i]) / (rq - 1.0);
        }
        last_change = std::abs(w.back() - prev_final);
        prev_final = w.back();
        v = std::move(w);
        h.pop_back();
        if (v.size() >= 2) err = std::abs(v.back() - v[v.size() - 2]);
    }
    out.value = prev_final;
    out.error_estimate = std::max({err, last_change, options.noise_floor});
    return out;
}

ExtrapolationOptions extrapolation_policy(const SubordinatorModel& model) {
    ExtrapolationOptions o;
    if (model.stable_part && std::abs(model.stable_part->alpha - 0.5) < 1e-9) {
        o.stride = 0.5;  // half-integer error powers
    } else if (!model.stable_part && std::abs(model.u_origin_exponent + 1.0) < 1e-9) {
        o.stride = 1.0;  // x^{-1}-type origin: integer powers with log factors
        o.log_blocks = true;
    }
    return o;
}

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

CompoundPoissonEngine::CompoundPoissonEngine(SubordinatorModel model, EpsilonScheme scheme,
                                             quad::QuadratureConfig cfg)
    : model_(std::move(model)), scheme_(std::move(scheme)), cfg_(std::move(cfg)) {
    scheme_.validate();
    cfg_.validate();
}

double CompoundPoissonEngine::u_eps(double eps, double x) const {
    if (!(x > 0.0)) return 0.0;
    switch (scheme_.kind) {
        case EpsilonKind::truncate:
            return x >= eps ? model_.levy_density(x) : 0.0;
        case EpsilonKind::exp_tilt:
            return model_.levy_density(x) * std::exp(-eps * x);
        case EpsilonKind::smooth_cut:
            return model_.levy_density(x) * std::exp(-eps / x);
    }
    return 0.0;
}

std::optional<double> CompoundPoissonEngine::u_eps_origin_hint() const {
    // truncate and smooth_cut both vanish toward 0; exp_tilt keeps the raw
    // origin behaviour
    if (scheme_.kind == EpsilonKind::exp_tilt) {
        double s = model_.u_origin_exponent;
        if (s <= -1.0) return std::nullopt;  // callers guard; not integrable
        if (s < 0.0) return s;
    }
    return std::nullopt;
}

double CompoundPoissonEngine::c_epsilon_cached(double eps) const {
    auto it = c_cache_.find(eps);
    if (it != c_cache_.end()) return it->second;
    double c = c_epsilon(eps).value;
    c_cache_[eps] = c;
    return c;
}

quad::IntegralResult CompoundPoissonEngine::c_epsilon(double eps) const {
    if (!(eps > 0.0)) throw std::invalid_argument("c_epsilon: eps > 0");
    switch (scheme_.kind) {
        case EpsilonKind::truncate: {
            // closed-form tail: c(eps) = U+(eps)
            return quad::IntegralResult{model_.tail(eps), 0.0, 0, true};
        }
        case EpsilonKind::exp_tilt: {
            if (model_.u_origin_exponent <= -1.0)
                throw std::domain_error(
                    "c_epsilon: exp_tilt mass is infinite for this density (origin "
                    "exponent <= -1); the tilt damps the tail, not the origin");
            auto u = model_.levy_density;
            auto f = [u, eps](double x) { return u(x) * std::exp(-eps * x); };
            std::optional<double> hint;
            if (model_.u_origin_exponent < 0.0) hint = model_.u_origin_exponent;
            return quad::integrate_semi_infinite(quad::RealFn(f), 0.0,
                                                 eps + model_.u_decay_rate,
                                                 cfg_.with_exponent(hint));
        }
        case EpsilonKind::smooth_cut: {
            // int_0^inf e^{-eps/x} u(x) dx = int_0^inf e^{-w} U+(eps/w) dw
            auto tail = model_.tail;
            auto f = [tail, eps](double w) { return std::exp(-w) * tail(eps / w); };
            return quad::integrate_semi_infinite(quad::RealFn(f), 0.0, 1.0, cfg_);
        }
    }
    throw std::logic_error("c_epsilon: unreachable");
}

double CompoundPoissonEngine::u_eps_tail(double eps, double x) const {
    if (!(x > 0.0)) throw std::invalid_argument("u_eps_tail: x > 0");
    switch (scheme_.kind) {
        case EpsilonKind::truncate:
            return model_.tail(std::max(x, eps));
        case EpsilonKind::exp_tilt: {
            auto u = model_.levy_density;
            auto f = [u, eps](double y) { return u(y) * std::exp(-eps * y); };
            return quad::integrate_semi_infinite(quad::RealFn(f), x,
                                                 eps + model_.u_decay_rate, cfg_)
                .value;
        }
        case EpsilonKind::smooth_cut: {
            // int_x^inf e^{-eps/y} u(y) dy = U+(x) - int_0^x e^{-eps/y}... use
            // the direct form; the integrand is bounded on [x, inf)
            auto u = model_.levy_density;
            auto f = [u, eps](double y) { return u(y) * std::exp(-eps / y); };
            if (model_.u_decay_rate > 0.0)
                return quad::integrate_semi_infinite(quad::RealFn(f), x, model_.u_decay_rate,
                                                     cfg_)
                    .value;
            auto mapped = [&f, x](double w) { return f(x / w) * x / (w * w); };
            return quad::integrate_finite(quad::RealFn(mapped), 0.0, 1.0, cfg_).value;
        }
    }
    throw std::logic_error("u_eps_tail: unreachable");
}

double CompoundPoissonEngine::feasibility_integral(double eps) const {
    auto u = model_.levy_density;
    auto diff = [this, eps, u](double x) {
        return std::min(1.0, x) * std::abs(u_eps(eps, x) - u(x));
    };
    // head on (0, 1]: the integrand vanishes fast enough at 0 for all kinds
    double s_head = model_.u_origin_exponent + 1.0;  // truncate/smooth worst case
    if (scheme_.kind == EpsilonKind::exp_tilt) s_head = model_.u_origin_exponent + 2.0;
    std::optional<double> hint;
    if (s_head < 0.0) hint = std::max(s_head, -0.999);
    auto head = quad::integrate_finite(quad::RealFn(diff), 0.0, 1.0, cfg_.with_exponent(hint));
    // tail via inversion, handles both exponential and polynomial decay
    auto mapped = [&diff](double w) { return diff(1.0 / w) / (w * w); };
    auto tail = quad::integrate_finite(quad::RealFn(mapped), 0.0, 1.0,
                                       cfg_.with_exponent(std::nullopt));
    return head.value + tail.value;
}

double CompoundPoissonEngine::conv_power(double eps, int k, double x) const {
    if (k < 1) throw std::invalid_argument("conv_power: k >= 1");
    if (!(x > 0.0)) throw std::invalid_argument("conv_power: x > 0");
    if (scheme_.kind == EpsilonKind::exp_tilt && model_.u_origin_exponent <= -1.0 && k >= 2)
        throw std::domain_error("conv_power: exp_tilt convolutions diverge at the origin");
    if (k == 1) return u_eps(eps, x);
    if (scheme_.kind == EpsilonKind::truncate && x <= k * eps) return 0.0;
    if (k == 2) {
        auto ue = [this, eps](double y) { return u_eps(eps, y); };
        if (scheme_.kind == EpsilonKind::truncate) {
            // support-aware limits avoid the jump at eps
            auto f = [&ue, x](double y) { return ue(y) * ue(x - y); };
            return quad::integrate_finite(quad::RealFn(f), eps, x - eps, cfg_).value;
        }
        return quad::convolve_at(ue, u_eps_origin_hint(), ue, u_eps_origin_hint(), x, cfg_)
            .value;
    }
    ensure_pyramid(eps, k, x);
    const Pyramid& pyr = pyramids_.at(eps);
    const HybridSpline& prev = pyr.levels[k - 3];
    auto ue = [this, eps](double y) { return u_eps(eps, y); };
    auto prev_fn = [&prev](double y) { return prev(y); };
    return quad::convolve_at(ue, u_eps_origin_hint(), prev_fn, std::nullopt, x, cfg_).value;
}

void CompoundPoissonEngine::ensure_pyramid(double eps, int k_max, double x_need) const {
    double x_max = std::max(x_need * 1.25 + 0.5, 4.0);
    auto it = pyramids_.find(eps);
    if (it != pyramids_.end() && it->second.x_max >= x_max &&
        static_cast<int>(it->second.levels.size()) >= k_max - 2)
        return;
    if (it != pyramids_.end()) x_max = std::max(x_max, it->second.x_max);
    Pyramid pyr;
    pyr.x_max = x_max;
    const double x_lo = std::min(1e-6 * x_max, 0.01 * eps + 1e-9);
    const int n_log = 420, n_lin = 1100;
    for (int level = 3; level <= std::max(k_max, 3); ++level) {
        std::function<double(double)> f;
        if (level == 3) {
            f = [this, eps](double x) { return conv_power(eps, 2, x); };
        } else {
            const HybridSpline& prev = pyr.levels.back();
            f = [this, eps, &prev, level](double x) {
                if (scheme_.kind == EpsilonKind::truncate && x <= level * eps) return 0.0;
                auto prev_fn = [&prev](double y) { return prev(y); };
                auto uefn = [this, eps](double y) { return u_eps(eps, y); };
                return quad::convolve_at(uefn, u_eps_origin_hint(), prev_fn, std::nullopt,
                                         x, cfg_)
                    .value;
            };
        }
        pyr.levels.push_back(HybridSpline::build(f, x_lo, x_max, n_log, n_lin));
    }
    pyramids_[eps] = std::move(pyr);
}

double CompoundPoissonEngine::u_n_eps_recursive(double eps, int n, double x) const {
    if (n < 1) throw std::invalid_argument("u_n_eps_recursive: n >= 1");
    double c = c_epsilon(eps).value;
    std::vector<double> u_k(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        double acc = conv_power(eps, j, x);
        double binom = 1.0;
        for (int k = j - 1; k >= 1; --k) {
            // C(j, k) built downward from C(j, j-1) = j
            binom = binom * (k + 1) / (j - k);
            acc -= binom * std::pow(c, j - k) * u_k[k];
        }
        u_k[j] = acc;
    }
    return u_k[n];
}

CompoundPoissonEngine::UnEpsResult CompoundPoissonEngine::u_n_eps(double eps, int n,
                                                                  double x) const {
    if (n < 1) throw std::invalid_argument("u_n_eps: n >= 1");
    double c = c_epsilon(eps).value;
    // Kahan-compensated alternating sum of Eq.-style binomial terms
    double sum = 0.0, comp = 0.0, abs_sum = 0.0;
    double binom = 1.0;  // C(n, k), built from k = n downward
    for (int k = n; k >= 1; --k) {
        if (k < n) binom = binom * (k + 1) / (n - k);
        double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        double term = sign * binom * std::pow(c, n - k) * conv_power(eps, k, x);
        abs_sum += std::abs(term);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    UnEpsResult r;
    r.value = sum;
    r.condition_number = (sum == 0.0) ? abs_sum / 1e-300 : abs_sum / std::abs(sum);
    r.error_estimate = abs_sum * 1e-15;
    r.cancellation_warning = r.condition_number > 1e8;
    return r;
}

double CompoundPoissonEngine::tail_combination(double eps, int n, double x) const {
    if (n == 0) return 1.0;
    double c = c_epsilon(eps).value;
    // U_{n,eps}(x) = -sum_k a_k (c^k - I_k(x)), a_k = (-1)^{n-k} C(n,k) c^{n-k},
    // I_k(x) = int_0^x u_eps^{*k}
    double sum = 0.0, comp = 0.0;
    double binom = 1.0;
    for (int k = n; k >= 1; --k) {
        if (k < n) binom = binom * (k + 1) / (n - k);
        double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        double a_k = sign * binom * std::pow(c, n - k);
        double I_k;
        if (k == 1) {
            I_k = c - u_eps_tail(eps, x);
        } else {
            auto f = [this, eps, k](double y) { return conv_power(eps, k, y); };
            double lo = (scheme_.kind == EpsilonKind::truncate) ? k * eps : 0.0;
            if (lo >= x) {
                I_k = 0.0;
            } else {
                I_k = quad::integrate_finite(quad::RealFn(f), lo, x, cfg_).value;
            }
        }
        double term = -a_k * (std::pow(c, k) - I_k);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

CompoundPoissonEngine::SeriesResult CompoundPoissonEngine::series_cdf(double eps, double x,
                                                                      double t, int n_max,
                                                                      double tail_tol) const {
    SeriesResult r;
    double sum = 1.0;  // n = 0 term
    double tn = 1.0;
    int small_in_a_row = 0;
    r.terms_used = 0;
    for (int n = 1; n <= n_max; ++n) {
        tn *= t / n;
        if (t == 0.0) break;
        double un = tail_combination(eps, n, x);
        auto diag = u_n_eps(eps, n, x);
        r.max_condition = std::max(r.max_condition, diag.condition_number);
        double term = un * tn;
        sum += term;
        r.terms_used = n;
        if (std::abs(term) < tail_tol * std::max(1.0, std::abs(sum))) {
            if (++small_in_a_row >= 2) break;
        } else {
            small_in_a_row = 0;
        }
        if (r.max_condition > 1e12) {
            r.converged = false;
            break;
        }
    }
    r.value = sum;
    r.error_estimate = tail_tol + r.max_condition * 1e-16;
    if (small_in_a_row < 2 && r.terms_used == n_max) r.converged = false;
    return r;
}

CompoundPoissonEngine::ExtrapolatedCoefficient CompoundPoissonEngine::u_n_extrapolated(
    int n, double x, std::optional<ExtrapolationOptions> opts) const {
    ExtrapolatedCoefficient out;
    std::vector<std::pair<double, double>> samples;
    double noise = 0.0;
    for (double eps : scheme_.ladder) {
        auto r = u_n_eps(eps, n, x);
        out.ladder.push_back({eps, r.value, r.condition_number, r.error_estimate});
        // trim once cancellation noise dominates the value
        if (!samples.empty() && r.error_estimate > 0.02 * std::abs(r.value) &&
            samples.size() >= 4)
            break;
        samples.emplace_back(eps, r.value);
        noise = std::max(noise, r.error_estimate);
    }
    ExtrapolationOptions o = opts ? *opts : extrapolation_policy(model_);
    o.noise_floor = std::max(o.noise_floor, 20.0 * noise);
    auto e = extrapolate_to_zero(samples, o);
    out.value = e.value;
    out.error_estimate = e.error_estimate;
    out.fitted_exponent = e.fitted_exponent;
    return out;
}

quad::IntegralResult u2_stabilized(const SubordinatorModel& model, double x,
                                   const quad::QuadratureConfig& cfg) {
    if (!(x > 0.0)) throw std::invalid_argument("u2_stabilized: x > 0");
    auto u = model.levy_density;
    auto ubar = [u](double z) { return z * u(z); };
    const double ubar_x = ubar(x);
    // left half: y -> 0, bracket vanishes ~ y, weight u(y) ~ y^{sigma}
    auto left = [u, ubar, ubar_x, x](double y) { return u(y) * (ubar(x - y) - ubar_x); };
    // right half substituted z = x - y: weight smooth, bracket singular like
    // ubar(z) ~ z^{sigma+1}
    auto right = [u, ubar, ubar_x, x](double z) { return u(x - z) * (ubar(z) - ubar_x); };
    double s = model.u_origin_exponent;
    std::optional<double> left_hint, right_hint;
    if (s + 1.0 < 0.0) {
        left_hint = std::max(s + 1.0, -0.999);
        right_hint = left_hint;
    }
    auto r1 = quad::integrate_finite(quad::RealFn(left), 0.0, 0.5 * x, cfg.with_exponent(left_hint));
    auto r2 = quad::integrate_finite(quad::RealFn(right), 0.0, 0.5 * x, cfg.with_exponent(right_hint));
    quad::IntegralResult out;
    out.value = 2.0 / x * (r1.value + r2.value - ubar_x * model.tail(x));
    out.error_estimate = 2.0 / x * (r1.error_estimate + r2.error_estimate) +
                         std::abs(ubar_x) * 1e-14;
    out.evaluations = r1.evaluations + r2.evaluations;
    out.converged = r1.converged && r2.converged;
    return out;
}

}  // namespace subdens::cp
