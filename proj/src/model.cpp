#include "subdens/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "subdens/specfun.hpp"

namespace subdens {

namespace sf = specfun;

namespace {

constexpr double kSqrt2Pi = 2.50662827463100050241576528;
constexpr double kInf = std::numeric_limits<double>::infinity();

// truncated series for the positive stable density; valid where the terms
// decay below tolerance, which holds at moderate t/x for alpha < 1
double stable_series_p(double alpha, double x, double t) {
    if (!(x > 0.0)) return 0.0;
    if (t == 0.0) return 0.0;
    double sum = 0.0;
    double tn = 1.0;  // t^n / n!
    double last = kInf;
    int consecutive_small = 0;
    for (int n = 1; n <= 400; ++n) {
        tn *= t / n;
        double un = ((n % 2 == 0) ? 1.0 : -1.0) * sf::recip_gamma(-n * alpha) *
                    std::pow(x, -1.0 - n * alpha);
        double term = un * tn;
        sum += term;
        last = std::abs(term);
        if (last < 1e-16 * std::max(1.0, std::abs(sum))) {
            if (++consecutive_small >= 2) break;
        } else {
            consecutive_small = 0;
        }
    }
    return sum;
}

}  // namespace

SubordinatorModel make_stable(const StableParams& params) {
    const double alpha = params.alpha;
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("make_stable: alpha must lie in (0, 1)");
    // recip_gamma(-alpha) = 1/Gamma(-alpha) < 0 on (0,1), so coeff > 0
    const double coeff = -sf::recip_gamma(-alpha);
    const double tail_coeff = sf::recip_gamma(1.0 - alpha);

    SubordinatorModel m;
    m.name = "stable";
    m.levy_density = [coeff, alpha](double x) { return coeff * std::pow(x, -1.0 - alpha); };
    m.tail = [tail_coeff, alpha](double x) { return tail_coeff * std::pow(x, -alpha); };
    m.cumulant = [alpha](cplx th) -> cplx {
        if (th == cplx(0.0)) return 0.0;
        return -std::pow(th, alpha);
    };
    m.cumulant_derivative = [alpha](int k, cplx th) -> cplx {
        cplx f = -1.0;
        for (int i = 0; i < k; ++i) f *= (alpha - i);
        return f * std::pow(th, alpha - k);
    };
    m.continuation = m.cumulant;  // -theta^alpha, principal branch on the cone
    m.stable_part = StablePart{coeff, alpha, kInf};
    m.growth_rate = 0.0;
    m.oracle_u_n = [alpha](int n, double x) {
        double s = (n % 2 == 0) ? 1.0 : -1.0;
        return s * sf::recip_gamma(-n * alpha) * std::pow(x, -1.0 - n * alpha);
    };
    m.oracle_p = [alpha](double x, double t) { return stable_series_p(alpha, x, t); };
    m.levy_density_analytic = [coeff, alpha](cplx z) -> cplx {
        return coeff * std::pow(z, -1.0 - alpha);
    };
    m.levy_density_derivative = [coeff, alpha](int k, double x) {
        double f = coeff;
        for (int i = 1; i <= k; ++i) f *= -(alpha + i);
        return f * std::pow(x, -1.0 - alpha - k);
    };
    m.u_origin_exponent = -1.0 - alpha;
    m.u_decay_rate = 0.0;
    m.tail_origin_exponent = -alpha;
    m.cone_half_angle = 1.5;  // analytic on the cut plane; any psi < pi/2 works
    return m;
}

SubordinatorModel make_gamma() {
    SubordinatorModel m;
    m.name = "gamma";
    m.levy_density = [](double x) { return std::exp(-x) / x; };
    m.tail = [](double x) { return sf::exp_integral_e1(x); };
    m.cumulant = [](cplx th) -> cplx { return -std::log(1.0 + th); };
    m.cumulant_derivative = [](int k, cplx th) -> cplx {
        // kappa^{(k)} = (-1)^k (k-1)! (1+theta)^{-k}
        double f = (k % 2 == 0) ? 1.0 : -1.0;
        for (int i = 1; i < k; ++i) f *= i;
        return f * std::pow(1.0 + th, -static_cast<double>(k));
    };
    m.continuation = m.cumulant;  // -log(1+theta), cut along (-inf, -1]
    m.stable_part = std::nullopt;  // u ~ x^{-1}: no z^{-1-alpha} leading term
    m.growth_rate = 0.0;
    m.oracle_p = [](double x, double t) {
        return std::pow(x, t - 1.0) * std::exp(-x) * sf::recip_gamma(t);
    };
    // u_n(x) = x^{-1} e^{-x} sum_{k=0}^{n-1} n!/(n-1-k)! c_k ln^{n-1-k} x,
    // the Taylor coefficients of x^t t / Gamma(1+t) in t
    m.oracle_u_n = [](int n, double x) {
        static const std::vector<double> c = sf::recip_gamma_taylor_coeffs(64);
        if (n < 1) throw std::domain_error("oracle_u_n: n >= 1");
        if (n > 60) throw std::domain_error("oracle_u_n: n too large");
        double lx = std::log(x);
        double sum = 0.0;
        // factor n!/(n-1-k)! accumulated as a falling product
        double fall = 1.0;
        for (int j = n; j >= 1; --j) fall *= j;  // n!
        double denom_fact = 1.0;                 // (n-1)!
        for (int j = n - 1; j >= 1; --j) denom_fact *= j;
        // iterate k = 0..n-1; n!/(n-1-k)! = n! / (n-1-k)!
        double inv_fact = 1.0 / denom_fact;  // 1/(n-1-k)! at k=0
        for (int k = 0; k <= n - 1; ++k) {
            double coef = fall * inv_fact;
            sum += coef * c[k] * std::pow(lx, n - 1 - k);
            inv_fact *= (n - 1 - k);  // (n-1-k)! -> (n-2-k)! denominator shrink
        }
        return std::exp(-x) / x * sum;
    };
    m.levy_density_analytic = [](cplx z) -> cplx { return std::exp(-z) / z; };
    m.levy_density_derivative = [](int k, double x) {
        // d^k/dx^k [x^{-1} e^{-x}] = (-1)^k e^{-x} sum_j C(k,j) j! x^{-1-j}
        double sum = 0.0;
        double binom = 1.0, jfact = 1.0;
        for (int j = 0; j <= k; ++j) {
            if (j > 0) {
                binom = binom * (k - j + 1) / j;
                jfact *= j;
            }
            sum += binom * jfact * std::pow(x, -1.0 - j);
        }
        return ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(-x) * sum;
    };
    m.u_origin_exponent = -1.0;
    m.u_decay_rate = 1.0;
    m.tail_origin_exponent = std::nullopt;  // logarithmic, not algebraic
    m.cone_half_angle = 1.5;
    return m;
}

SubordinatorModel make_ig() {
    SubordinatorModel m;
    m.name = "ig";
    const double c0 = 1.0 / kSqrt2Pi;
    m.levy_density = [c0](double x) {
        return c0 * std::pow(x, -1.5) * std::exp(-0.5 * x);
    };
    m.tail = [](double x) {
        return std::sqrt(2.0 / (3.14159265358979323846 * x)) * std::exp(-0.5 * x) -
               sf::erfc(std::sqrt(0.5 * x));
    };
    m.cumulant = [](cplx th) -> cplx { return 1.0 - std::sqrt(1.0 + 2.0 * th); };
    m.cumulant_derivative = [](int k, cplx th) -> cplx {
        // kappa^{(k)} = (-1)^k (2k-3)!! (1+2 theta)^{-(2k-1)/2}
        double f = (k % 2 == 0) ? 1.0 : -1.0;
        for (int i = 2 * k - 3; i >= 1; i -= 2) f *= i;
        return f * std::pow(1.0 + 2.0 * th, -(2.0 * k - 1.0) / 2.0);
    };
    m.continuation = m.cumulant;  // cut along (-inf, -1/2]
    m.stable_part = StablePart{c0, 0.5, -0.5};
    m.growth_rate = 0.0;
    m.oracle_p = [c0](double x, double t) {
        return c0 * t * std::exp(t) * std::pow(x, -1.5) *
               std::exp(-0.5 * (t * t / x + x));
    };
    m.oracle_u_n = [](int n, double x) {
        const double sqrt_pi = 1.77245385090551602729816748;
        return n / sqrt_pi * std::pow(2.0, -0.5 * n) * std::pow(x, -1.0 - 0.5 * n) *
               std::exp(-0.5 * x) * sf::hermite(n - 1, std::sqrt(0.5 * x));
    };
    m.levy_density_analytic = [c0](cplx z) -> cplx {
        return c0 * std::pow(z, -1.5) * std::exp(-0.5 * z);
    };
    m.levy_density_derivative = [c0](int k, double x) {
        // Leibniz on x^{-3/2} e^{-x/2}
        double sum = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            if (j > 0) binom = binom * (k - j + 1) / j;
            // d^j x^{-3/2} = (-1)^j (3/2)(5/2)...(3/2+j-1) x^{-3/2-j}
            double pf = 1.0;
            for (int i = 0; i < j; ++i) pf *= -(1.5 + i);
            double de = std::pow(-0.5, k - j);  // d^{k-j} e^{-x/2}
            sum += binom * pf * std::pow(x, -1.5 - j) * de;
        }
        return sum * std::exp(-0.5 * x);
    };
    m.u_origin_exponent = -1.5;
    m.u_decay_rate = 0.5;
    m.tail_origin_exponent = -0.5;
    m.cone_half_angle = 1.5;
    return m;
}

SubordinatorModel make_from_density(std::string name, std::function<double(double)> u,
                                    double u_origin_exponent, double u_decay_rate,
                                    const quad::QuadratureConfig& cfg) {
    SubordinatorModel m;
    m.name = std::move(name);
    m.levy_density = std::move(u);
    m.u_origin_exponent = u_origin_exponent;
    m.u_decay_rate = u_decay_rate;
    m.growth_rate = 0.0;

    auto density = m.levy_density;
    std::optional<double> tail_hint;
    if (u_origin_exponent + 1.0 < 0.0) tail_hint = u_origin_exponent + 1.0;
    m.tail_origin_exponent = tail_hint;
    // tail by quadrature; polynomial tails handled via the 1/x substitution
    quad::QuadratureConfig tcfg = cfg;
    double decay = u_decay_rate;
    m.tail = [density, decay, tcfg](double x) {
        if (decay > 0.0) {
            return quad::integrate_semi_infinite(density, x, decay, tcfg).value;
        }
        auto mapped = [&density, x](double w) {
            double y = x / w;
            return density(y) * x / (w * w);
        };
        return quad::integrate_finite(quad::RealFn(mapped), 0.0, 1.0, tcfg).value;
    };
    auto tail_fn = m.tail;
    m.cumulant = [tail_fn, tcfg, tail_hint](cplx th) -> cplx {
        // kappa(theta) = -theta int_0^inf e^{-theta x} U+(x) dx
        if (th == cplx(0.0)) return 0.0;
        auto f = [&tail_fn, th](double x) { return std::exp(-th * x) * tail_fn(x); };
        quad::QuadratureConfig c2 = tcfg.with_exponent(tail_hint);
        auto r = quad::integrate_semi_infinite(quad::ComplexFn(f), 0.0, th.real(), c2);
        return -th * r.value;
    };
    m.cumulant_derivative = nullptr;
    m.cone_half_angle = 0.0;
    return m;
}

quad::ComplexIntegralResult kappa_derivative_numeric(const SubordinatorModel& model,
                                                     int k, cplx theta,
                                                     const quad::QuadratureConfig& cfg) {
    if (k < 1) throw std::domain_error("kappa_derivative_numeric: k >= 1");
    if (!(theta.real() > model.growth_rate))
        throw std::domain_error("kappa_derivative_numeric: requires Re theta > growth rate");
    auto u = model.levy_density;
    auto f = [u, k, theta](double x) -> cplx {
        return std::exp(-theta * x) * std::pow(x, k) * u(x);
    };
    quad::QuadratureConfig c = cfg.with_exponent(model.weighted_origin_exponent(k));
    double decay = theta.real() - model.growth_rate + model.u_decay_rate;
    auto r = quad::integrate_semi_infinite(quad::ComplexFn(f), 0.0, decay, c);
    if (k % 2 == 1) r.value = -r.value;
    return r;
}

quad::ComplexIntegralResult kappa_numeric(const SubordinatorModel& model, cplx theta,
                                          const quad::QuadratureConfig& cfg) {
    auto tail = model.tail;
    auto f = [tail, theta](double x) -> cplx { return std::exp(-theta * x) * tail(x); };
    quad::QuadratureConfig c = cfg.with_exponent(model.tail_origin_exponent);
    double decay = theta.real() - model.growth_rate + model.u_decay_rate;
    auto r = quad::integrate_semi_infinite(quad::ComplexFn(f), 0.0, decay, c);
    r.value *= -theta;
    return r;
}

cplx kappa_derivative(const SubordinatorModel& model, int k, cplx theta,
                      const quad::QuadratureConfig& cfg) {
    if (k == 0) {
        if (model.cumulant) return model.cumulant(theta);
        return kappa_numeric(model, theta, cfg).value;
    }
    if (model.cumulant_derivative) return model.cumulant_derivative(k, theta);
    return kappa_derivative_numeric(model, k, theta, cfg).value;
}

SubordinatorModel make_model_from_spec(const std::string& spec) {
    std::string name = spec;
    std::string params;
    if (auto pos = spec.find(':'); pos != std::string::npos) {
        name = spec.substr(0, pos);
        params = spec.substr(pos + 1);
    }
    auto get_param = [&params](const std::string& key) -> std::optional<double> {
        std::stringstream ss(params);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) continue;
            if (item.substr(0, eq) == key) return std::stod(item.substr(eq + 1));
        }
        return std::nullopt;
    };
    if (name == "stable") {
        auto alpha = get_param("alpha");
        if (!alpha)
            throw std::invalid_argument("model 'stable' requires alpha, e.g. stable:alpha=0.5");
        return make_stable({*alpha});
    }
    if (name == "gamma") return make_gamma();
    if (name == "ig") return make_ig();
    throw std::invalid_argument("unknown model '" + name +
                                "'; valid models: stable:alpha=<a>, gamma, ig");
}

}  // namespace subdens
