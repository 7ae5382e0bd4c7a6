#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>

#include "subdens/quadrature.hpp"

namespace subdens {

using cplx = std::complex<double>;

/// Leading origin singularity u(z) = coefficient * z^{-1-alpha} + O(|z|^beta).
struct StablePart {
    double coefficient = 0.0;            // a > 0
    double alpha = 0.5;                  // in (0, 1)
    double remainder_exponent = 0.0;     // beta > -1; +inf when the remainder vanishes
};

struct StableParams {
    double alpha;
};
struct GammaParams {};  // unit shape and rate
struct IGParams {};     // unit parameters

/// Evaluator bundle for one Levy family. Immutable after construction; all
/// members are pure functions, safe for concurrent use.
struct SubordinatorModel {
    std::string name;

    std::function<double(double)> levy_density;                 // u(x), x > 0
    std::function<double(double)> tail;                         // int_x^inf u
    std::function<cplx(cplx)> cumulant;                         // kappa, Re theta >= 0
    std::function<cplx(int, cplx)> cumulant_derivative;         // closed form or null
    std::optional<std::function<cplx(cplx)>> continuation;      // kappa on the cone
    std::optional<StablePart> stable_part;
    double growth_rate = 0.0;
    std::optional<std::function<double(int, double)>> oracle_u_n;
    std::optional<std::function<double(double, double)>> oracle_p;  // p(x; t)

    /// u extended to complex arguments in the cone |arg z| <= cone_half_angle.
    std::optional<std::function<cplx(cplx)>> levy_density_analytic;
    /// k-th derivative of u, when known in closed form.
    std::optional<std::function<double(int, double)>> levy_density_derivative;

    double u_origin_exponent = -1.0;   // u(x) ~ C x^{this} as x -> 0
    double u_decay_rate = 0.0;         // exponential decay of u at infinity (0 = polynomial)
    std::optional<double> tail_origin_exponent;  // tail ~ x^{this}, when singular
    double cone_half_angle = 0.0;      // largest psi with u analytic in |arg z| <= psi

    /// Origin hint for integrands of the form x^k u(x).
    std::optional<double> weighted_origin_exponent(int k) const {
        double s = u_origin_exponent + k;
        if (s < 0.0) return std::max(s, -0.999999);
        return std::nullopt;
    }
};

SubordinatorModel make_stable(const StableParams& params);
SubordinatorModel make_gamma();
SubordinatorModel make_ig();

/// User-defined model from a Levy density alone; tail and cumulant are
/// derived numerically.
SubordinatorModel make_from_density(std::string name,
                                    std::function<double(double)> u,
                                    double u_origin_exponent,
                                    double u_decay_rate,
                                    const quad::QuadratureConfig& cfg = {});

/// kappa^{(k)}(theta) = (-1)^k int_0^inf e^{-theta x} x^k u(x) dx, the
/// quadrature fallback used when no closed-form derivative is registered.
quad::ComplexIntegralResult kappa_derivative_numeric(const SubordinatorModel& model,
                                                     int k, cplx theta,
                                                     const quad::QuadratureConfig& cfg = {});

/// Cumulant by quadrature (via the tail: kappa = -theta int e^{-theta x} U+ dx).
quad::ComplexIntegralResult kappa_numeric(const SubordinatorModel& model, cplx theta,
                                          const quad::QuadratureConfig& cfg = {});

/// kappa^{(k)} with closed form preferred, numeric fallback otherwise.
cplx kappa_derivative(const SubordinatorModel& model, int k, cplx theta,
                      const quad::QuadratureConfig& cfg = {});

/// Parse "name[:key=value[,key=value]*]", e.g. "stable:alpha=0.5".
/// Throws std::invalid_argument naming the valid models on failure.
SubordinatorModel make_model_from_spec(const std::string& spec);

}  // namespace subdens
