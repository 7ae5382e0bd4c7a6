#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subdens/interpolation.hpp"
#include "subdens/model.hpp"
#include "subdens/quadrature.hpp"

namespace subdens::cp {

enum class EpsilonKind { truncate, exp_tilt, smooth_cut };

const char* to_string(EpsilonKind kind);
EpsilonKind epsilon_kind_from_string(const std::string& name);

/// Which approximation u_eps replaces the Levy density, plus the epsilon
/// ladder the extrapolation runs over.
///   truncate:   u_eps = u on [eps, inf), 0 below
///   exp_tilt:   u_eps = u(x) e^{-eps x}  (tail damping; the total mass stays
///               infinite for infinite-activity densities, which c_epsilon
///               reports as a domain error)
///   smooth_cut: u_eps = e^{-eps/x} u(x)
struct EpsilonScheme {
    EpsilonKind kind = EpsilonKind::smooth_cut;
    std::vector<double> ladder;

    void validate() const;
    static std::vector<double> geometric_ladder(double eps0, double ratio, int count);
    static EpsilonScheme defaults(EpsilonKind kind = EpsilonKind::smooth_cut);
};

/// Grid of coefficient values with a method tag and per-entry error estimates.
struct CoefficientTable {
    std::vector<double> x_grid;
    int n_min = 1;
    int n_max = 1;
    std::string method;
    std::vector<std::vector<double>> values;           // [n - n_min][x index]
    std::vector<std::vector<double>> error_estimates;  // same shape

    void validate() const;
    double at(int n, std::size_t xi) const { return values[n - n_min][xi]; }
    double error_at(int n, std::size_t xi) const { return error_estimates[n - n_min][xi]; }
};

struct ExtrapolationOptions {
    /// When set, eliminate powers stride, 2*stride, ... of the ladder
    /// parameter; otherwise the leading exponent is fitted from the data.
    std::optional<double> stride;
    /// Eliminate each power twice (handles eps^j log(eps) blocks).
    bool log_blocks = false;
    /// Absolute noise level of the samples; folded into the error estimate.
    double noise_floor = 0.0;
};

struct ExtrapolationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double fitted_exponent = 0.0;
    bool erratic = false;
};

/// Richardson-type limit of samples (eps_i, v_i), eps_i strictly decreasing.
ExtrapolationResult extrapolate_to_zero(const std::vector<std::pair<double, double>>& samples,
                                        const ExtrapolationOptions& options = {});

/// Extrapolation defaults appropriate for the model's origin structure.
ExtrapolationOptions extrapolation_policy(const SubordinatorModel& model);

/// Compound-Poisson approximation engine for one model and scheme. Spline
/// pyramids of convolution powers build lazily per epsilon; building is not
/// thread-safe, evaluation afterwards is pure.
class CompoundPoissonEngine {
public:
    CompoundPoissonEngine(SubordinatorModel model, EpsilonScheme scheme,
                          quad::QuadratureConfig cfg = {});

    const SubordinatorModel& model() const { return model_; }
    const EpsilonScheme& scheme() const { return scheme_; }
    const quad::QuadratureConfig& config() const { return cfg_; }

    double u_eps(double eps, double x) const;
    /// int_x^inf u_eps
    double u_eps_tail(double eps, double x) const;
    /// c(eps) = int_0^inf u_eps; domain error when the mass is infinite.
    quad::IntegralResult c_epsilon(double eps) const;
    /// int_0^inf (1 ^ x) |u_eps - u| dx  (the dominated-feasibility integral)
    double feasibility_integral(double eps) const;

    /// u_eps^{*k}(x). k = 1 exact, k = 2 direct quadrature, k >= 3 through
    /// cached spline levels.
    double conv_power(double eps, int k, double x) const;

    struct UnEpsResult {
        double value = 0.0;
        double condition_number = 1.0;  // sum |terms| / |value|
        double error_estimate = 0.0;
        bool cancellation_warning = false;
    };
    /// Alternating binomial combination of convolution powers.
    UnEpsResult u_n_eps(double eps, int n, double x) const;
    /// Same value through the inductive rearrangement; agreement with
    /// u_n_eps is a rounding-level identity.
    double u_n_eps_recursive(double eps, int n, double x) const;

    /// U_{n,eps}(x): 1 for n = 0, -int_x^inf u_{n,eps} otherwise.
    double tail_combination(double eps, int n, double x) const;

    struct SeriesResult {
        double value = 0.0;
        int terms_used = 0;
        double max_condition = 1.0;
        double error_estimate = 0.0;
        bool converged = true;
    };
    /// P(X_t <= x) = sum_n U_{n,eps}(x) t^n / n!, truncated when two
    /// consecutive terms fall below tail_tol.
    SeriesResult series_cdf(double eps, double x, double t, int n_max = 40,
                            double tail_tol = 1e-10) const;

    struct LadderPoint {
        double eps;
        double value;
        double condition_number;
        double error_estimate;
    };
    struct ExtrapolatedCoefficient {
        double value = 0.0;
        double error_estimate = 0.0;
        double fitted_exponent = 0.0;
        std::vector<LadderPoint> ladder;
    };
    /// u_n(x) as the extrapolated limit over the scheme's ladder. Noisy
    /// small-eps rungs (by cancellation condition) are trimmed before
    /// extrapolating.
    ExtrapolatedCoefficient u_n_extrapolated(int n, double x,
                                             std::optional<ExtrapolationOptions> opts =
                                                 std::nullopt) const;

private:
    struct Pyramid {
        double x_max = 0.0;
        std::vector<HybridSpline> levels;  // levels[i] = u_eps^{*(i+2)}
    };
    void ensure_pyramid(double eps, int k_max, double x_max) const;
    std::optional<double> u_eps_origin_hint() const;

    SubordinatorModel model_;
    EpsilonScheme scheme_;
    quad::QuadratureConfig cfg_;
    mutable std::map<double, Pyramid> pyramids_;
};

/// Cancellation-free route to u_2 (differentiable densities):
/// u_2(x) = 2 x^{-1} [ int_0^x u(y) (ubar(x-y) - ubar(x)) dy - ubar(x) U+(x) ],
/// ubar(x) = x u(x).
quad::IntegralResult u2_stabilized(const SubordinatorModel& model, double x,
                                   const quad::QuadratureConfig& cfg = {});

}  // namespace subdens::cp
