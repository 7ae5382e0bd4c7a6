#include "subdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace subdens::quad {

namespace {

constexpr double kPi = 3.14159265358979323846264338;

// ---------------------------------------------------------------------------
// Gauss-Legendre 7/15 pair, nodes generated once by Newton iteration.
// ---------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> x, w;
};

GaussRule make_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int iter = 0; iter < 100; ++iter) {
            p0 = 1.0;
            p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        r.x[i] = -t;
        r.x[n - 1 - i] = t;
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        r.w[i] = wi;
        r.w[n - 1 - i] = wi;
    }
    return r;
}

const GaussRule& gauss7() {
    static const GaussRule r = make_gauss(7);
    return r;
}
const GaussRule& gauss15() {
    static const GaussRule r = make_gauss(15);
    return r;
}

template <typename T>
double norm_of(const T& v) {
    if constexpr (std::is_same_v<T, double>) return std::abs(v);
    else return std::abs(v);
}

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
};

// one G7/G15 evaluation over [a, b]
template <typename T, typename F>
Panel<T> eval_panel(const F& f, double a, double b, long& evals) {
    const GaussRule& g7 = gauss7();
    const GaussRule& g15 = gauss15();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T s15{};
    for (int i = 0; i < 15; ++i) s15 += g15.w[i] * f(mid + half * g15.x[i]);
    T s7{};
    for (int i = 0; i < 7; ++i) s7 += g7.w[i] * f(mid + half * g7.x[i]);
    evals += 22;
    s15 *= half;
    s7 *= half;
    return Panel<T>{a, b, s15, norm_of<T>(s15 - s7)};
}

template <typename T, typename F, typename R>
R adaptive_core(const F& f, double a, double b, const QuadratureConfig& cfg) {
    R out;
    if (!(b > a)) {
        if (b == a) return out;
        throw std::invalid_argument("integrate_finite: requires a < b");
    }
    std::vector<Panel<T>> panels;
    panels.push_back(eval_panel<T>(f, a, b, out.evaluations));
    int splits = 0;
    while (true) {
        T total{};
        double err = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            err += p.error;
        }
        double tol = std::max(cfg.abs_tol, cfg.rel_tol * norm_of<T>(total));
        if (err <= tol || splits >= cfg.max_subdivisions) {
            out.value = total;
            out.error_estimate = err;
            out.converged = err <= std::max(tol, 4.0 * tol);
            return out;
        }
        // split the worst panel
        size_t worst = 0;
        for (size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        Panel<T> p = panels[worst];
        double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) {  // interval exhausted at machine precision
            out.value = total;
            out.error_estimate = err;
            out.converged = false;
            return out;
        }
        panels[worst] = eval_panel<T>(f, p.a, m, out.evaluations);
        panels.push_back(eval_panel<T>(f, m, p.b, out.evaluations));
        ++splits;
    }
}

// Apply the left-endpoint substitution y = a + u^p, p = 1/(1+s), mapping the
// integrand x^s behaviour at a to a bounded one at u = 0.
template <typename T, typename F, typename R>
R integrate_with_hint(const F& f, double a, double b, const QuadratureConfig& cfg) {
    cfg.validate();
    if (cfg.origin_singularity_exponent && *cfg.origin_singularity_exponent != 0.0) {
        double s = *cfg.origin_singularity_exponent;
        double p = 1.0 / (1.0 + s);
        double ub = std::pow(b - a, 1.0 / p);
        auto g = [&f, a, p](double u) -> T {
            double up = std::pow(u, p);
            return f(a + up) * (p * std::pow(u, p - 1.0));
        };
        return adaptive_core<T, decltype(g), R>(g, 0.0, ub, cfg);
    }
    return adaptive_core<T, F, R>(f, a, b, cfg);
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
    if (origin_singularity_exponent &&
        !(*origin_singularity_exponent > -1.0 && *origin_singularity_exponent <= 0.0))
        throw std::invalid_argument(
            "QuadratureConfig: singularity exponent must lie in (-1, 0]");
}

IntegralResult integrate_finite(const RealFn& f, double a, double b,
                                const QuadratureConfig& cfg) {
    return integrate_with_hint<double, RealFn, IntegralResult>(f, a, b, cfg);
}

ComplexIntegralResult integrate_finite(const ComplexFn& f, double a, double b,
                                       const QuadratureConfig& cfg) {
    return integrate_with_hint<std::complex<double>, ComplexFn, ComplexIntegralResult>(
        f, a, b, cfg);
}

namespace {

double truncation_point(double a, double decay_rate, const QuadratureConfig& cfg) {
    if (!(decay_rate > 0.0))
        throw std::invalid_argument("integrate_semi_infinite: decay_rate must be > 0");
    double eff = std::min(cfg.abs_tol, 1e-14) * 1e-2;
    return a + std::max(10.0 / decay_rate, -std::log(eff) / decay_rate);
}

}  // namespace

IntegralResult integrate_semi_infinite(const RealFn& f, double a, double decay_rate,
                                       const QuadratureConfig& cfg) {
    return integrate_finite(f, a, truncation_point(a, decay_rate, cfg), cfg);
}

ComplexIntegralResult integrate_semi_infinite(const ComplexFn& f, double a,
                                              double decay_rate,
                                              const QuadratureConfig& cfg) {
    return integrate_finite(f, a, truncation_point(a, decay_rate, cfg), cfg);
}

IntegralResult convolve_at(const RealFn& f, std::optional<double> f_exponent,
                           const RealFn& g, std::optional<double> g_exponent,
                           double x, const QuadratureConfig& cfg) {
    if (!(x > 0.0)) throw std::invalid_argument("convolve_at: requires x > 0");
    // int_0^{x/2} f(y) g(x-y) dy   (f singular at the left end)
    auto left = [&](double y) { return f(y) * g(x - y); };
    // int_0^{x/2} g(z) f(x-z) dz   (g singular at the left end)
    auto right = [&](double z) { return g(z) * f(x - z); };
    IntegralResult r1 =
        integrate_finite(RealFn(left), 0.0, 0.5 * x, cfg.with_exponent(f_exponent));
    IntegralResult r2 =
        integrate_finite(RealFn(right), 0.0, 0.5 * x, cfg.with_exponent(g_exponent));
    IntegralResult out;
    out.value = r1.value + r2.value;
    out.error_estimate = r1.error_estimate + r2.error_estimate;
    out.evaluations = r1.evaluations + r2.evaluations;
    out.converged = r1.converged && r2.converged;
    return out;
}

IntegralResult convolve_at(const RealFn& f, const RealFn& g, double x,
                           const QuadratureConfig& cfg) {
    return convolve_at(f, cfg.origin_singularity_exponent, g,
                       cfg.origin_singularity_exponent, x, cfg);
}

// ---------------------------------------------------------------------------
// Wynn epsilon acceleration for the oscillatory vertical-line tails.
// ---------------------------------------------------------------------------

namespace {

// Full-table Wynn epsilon on a short sequence of partial sums.
std::complex<double> wynn_epsilon(const std::vector<std::complex<double>>& s,
                                  double* stability = nullptr) {
    size_t n = s.size();
    if (n == 0) return 0.0;
    if (n == 1) return s[0];
    std::vector<std::vector<std::complex<double>>> e(n + 1);
    e[0].assign(n, 0.0);
    e[1] = s;
    std::complex<double> best = s.back();
    double last_change = std::abs(s[n - 1] - s[n - 2]);
    for (size_t k = 2; k <= n; ++k) {
        e[k].assign(n + 1 - k, 0.0);
        for (size_t i = 0; i + k <= n; ++i) {
            std::complex<double> diff = e[k - 1][i + 1] - e[k - 1][i];
            if (std::abs(diff) < 1e-290) {
                e[k].resize(i);
                break;
            }
            e[k][i] = e[k - 2][i + 1] + 1.0 / diff;
        }
        if (e[k].empty()) break;
        if (k % 2 == 1) {  // odd columns are auxiliary
            continue;
        }
        std::complex<double> cand = e[k].back();
        double change = std::abs(cand - best);
        best = cand;
        last_change = change;
    }
    if (stability) *stability = last_change;
    return best;
}

}  // namespace

IntegralResult bromwich_integral(const TransformFn& F, double c, double x,
                                 const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(x > 0.0)) throw std::invalid_argument("bromwich_integral: requires x > 0");
    // value = e^{cx}/(2pi) * int_0^inf G(y) dy,
    // G(y) = F(c+iy) e^{iyx} + F(c-iy) e^{-iyx}  (conjugate pair, no symmetry
    // assumed; the unpaired imaginary part is the error signal).
    auto G = [&](double y) -> std::complex<double> {
        std::complex<double> up = F({c, y}) * std::exp(std::complex<double>(0.0, y * x));
        std::complex<double> dn = F({c, -y}) * std::exp(std::complex<double>(0.0, -y * x));
        return up + dn;
    };
    const double prefactor = std::exp(c * x) / (2.0 * kPi);
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol) / std::max(prefactor, 1.0);

    QuadratureConfig inner = cfg;
    inner.origin_singularity_exponent.reset();
    inner.abs_tol = std::max(tol * 1e-3, 1e-15);
    inner.rel_tol = cfg.rel_tol * 1e-2;
    inner.max_subdivisions = cfg.max_subdivisions;

    const double half_period = kPi / x;
    const double y0 = 4.0 * half_period;
    ComplexIntegralResult head = integrate_finite(ComplexFn(G), 0.0, y0, inner);

    long evals = head.evaluations;
    double quad_err = head.error_estimate;
    std::complex<double> partial = head.value;
    std::vector<std::complex<double>> sums;
    sums.push_back(partial);

    const int max_panels = 512;
    std::complex<double> accel = partial;
    double accel_err = std::abs(partial);
    QuadratureConfig panel_cfg = inner;
    panel_cfg.max_subdivisions = 40;
    int small_count = 0;
    bool tail_converged = false;
    for (int k = 0; k < max_panels; ++k) {
        double a = y0 + k * half_period;
        ComplexIntegralResult seg = integrate_finite(ComplexFn(G), a, a + half_period, panel_cfg);
        evals += seg.evaluations;
        quad_err += seg.error_estimate;
        partial += seg.value;
        sums.push_back(partial);
        double stability = 0.0;
        std::complex<double> cand = wynn_epsilon(sums, &stability);
        double change = std::abs(cand - accel);
        accel = cand;
        accel_err = std::max(stability, change);
        if (std::abs(seg.value) < 0.05 * tol) ++small_count;
        else small_count = 0;
        if ((accel_err < tol && k >= 3) || small_count >= 2) {
            tail_converged = true;
            break;
        }
        // cap the window the epsilon table works on
        if (sums.size() > 60) sums.erase(sums.begin(), sums.begin() + 20);
    }

    IntegralResult out;
    out.value = prefactor * accel.real();
    out.error_estimate =
        prefactor * (quad_err + accel_err * 0.5 + std::abs(accel.imag()));
    out.evaluations = evals;
    out.converged = tail_converged;
    return out;
}

// ---------------------------------------------------------------------------
// Tilted two-ray contour.
// ---------------------------------------------------------------------------

double ContourSpec::ray_angle() const { return 0.5 * kPi + psi; }

void ContourSpec::validate() const {
    if (!(psi > 0.0 && psi < 0.5 * kPi))
        throw std::invalid_argument("ContourSpec: psi must lie in (0, pi/2)");
    if (nodes < 16) throw std::invalid_argument("ContourSpec: nodes must be >= 16");
    if (truncation_radius < 0.0)
        throw std::invalid_argument("ContourSpec: negative truncation radius");
}

IntegralResult ray_pair_integral(const TransformFn& F, const ContourSpec& spec,
                                 double x, const QuadratureConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (!(x > 0.0)) throw std::invalid_argument("ray_pair_integral: requires x > 0");
    const double phi = spec.ray_angle();
    const double decay = x * std::sin(spec.psi);  // |e^{theta x}| ~ e^{cx} e^{-s decay}
    const std::complex<double> dir_up = std::exp(std::complex<double>(0.0, phi));
    const std::complex<double> dir_dn = std::conj(dir_up);
    const double c = spec.c;

    // Scale of the integrand near the corner, used for the truncation rule
    // e^{x Re theta(R)} < abs_tol / (10 max|F|).
    double fmax = 1e-300;
    for (double s : {0.0, 1.0, 2.0, 4.0, 8.0}) {
        fmax = std::max(fmax, std::abs(F(c + s * dir_up)));
    }
    double R = spec.truncation_radius;
    if (R <= 0.0) {
        double target = std::min(cfg.abs_tol, 1e-12) / (10.0 * fmax);
        R = (c * x - std::log(target)) / decay;
        R = std::max(R, 8.0);
        // one refinement pass with the integrand sampled near the tail
        fmax = std::max(fmax, std::abs(F(c + R * dir_up)) * 10.0);
        R = std::max(R, (c * x - std::log(std::min(cfg.abs_tol, 1e-12) / (10.0 * fmax))) / decay);
    }

    auto ray_term = [&](const std::complex<double>& dir, double s) {
        std::complex<double> theta = c + s * dir;
        return F(theta) * std::exp(theta * x) * dir;
    };
    auto upper = [&](double s) { return ray_term(dir_up, s); };
    auto lower = [&](double s) { return ray_term(dir_dn, s); };

    // Geometrically graded panel edges concentrated at the corner.
    int panels = std::max(6, spec.nodes / 30);
    std::vector<double> edges;
    edges.push_back(0.0);
    double first = R * std::pow(2.0, -std::min(panels - 1, 44));
    for (int j = 0; j <= std::min(panels - 1, 44); ++j)
        edges.push_back(std::min(R, first * std::pow(2.0, j)));
    edges.back() = R;

    QuadratureConfig seg_cfg = cfg;
    seg_cfg.origin_singularity_exponent.reset();
    seg_cfg.abs_tol = std::max(cfg.abs_tol * 1e-2, 1e-16);
    seg_cfg.max_subdivisions = std::max(16, spec.nodes / 8);

    ComplexIntegralResult up{}, dn{};
    for (size_t j = 0; j + 1 < edges.size(); ++j) {
        ComplexIntegralResult a =
            integrate_finite(ComplexFn(upper), edges[j], edges[j + 1], seg_cfg);
        ComplexIntegralResult b =
            integrate_finite(ComplexFn(lower), edges[j], edges[j + 1], seg_cfg);
        up.value += a.value;
        up.error_estimate += a.error_estimate;
        up.evaluations += a.evaluations;
        up.converged = up.converged && a.converged;
        dn.value += b.value;
        dn.error_estimate += b.error_estimate;
        dn.evaluations += b.evaluations;
        dn.converged = dn.converged && b.converged;
    }

    // Extend with doubling segments if the contribution has not died out.
    double tail_tol = 0.05 * std::max(cfg.abs_tol, 1e-15);
    double lo = R, hi = 2.0 * R;
    bool truncation_ok = false;
    for (int k = 0; k < 24; ++k) {
        ComplexIntegralResult a = integrate_finite(ComplexFn(upper), lo, hi, seg_cfg);
        ComplexIntegralResult b = integrate_finite(ComplexFn(lower), lo, hi, seg_cfg);
        up.evaluations += a.evaluations + b.evaluations;
        if (std::abs(a.value) + std::abs(b.value) < tail_tol) {
            truncation_ok = true;
            break;
        }
        up.value += a.value;
        dn.value += b.value;
        up.error_estimate += a.error_estimate;
        dn.error_estimate += b.error_estimate;
        lo = hi;
        hi *= 2.0;
    }

    // (1/2 pi i) [ integral out along the upper ray - integral in along the
    // lower ray ]
    std::complex<double> total = (up.value - dn.value) / std::complex<double>(0.0, 2.0 * kPi);
    IntegralResult out;
    out.value = total.real();
    out.error_estimate = (up.error_estimate + dn.error_estimate) / (2.0 * kPi) +
                         std::abs(total.imag());
    out.evaluations = up.evaluations + dn.evaluations;
    out.converged = up.converged && dn.converged && truncation_ok;
    return out;
}

}  // namespace subdens::quad
