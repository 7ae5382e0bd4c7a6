#pragma once

#include <complex>
#include <functional>
#include <optional>

namespace subdens::quad {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 400;
    /// Integrand behaves like x^s near the singular (left) endpoint, s in (-1, 0].
    std::optional<double> origin_singularity_exponent;

    void validate() const;
    QuadratureConfig with_exponent(std::optional<double> s) const {
        QuadratureConfig c = *this;
        c.origin_singularity_exponent = s;
        return c;
    }
    QuadratureConfig tightened(double factor) const {
        QuadratureConfig c = *this;
        c.abs_tol *= factor;
        c.rel_tol *= factor;
        return c;
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

struct ComplexIntegralResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;
using TransformFn = std::function<std::complex<double>(std::complex<double>)>;

/// Adaptive integration of f over (a, b). A singular left endpoint is handled
/// by the algebraic substitution y = a + u^{1/(1+s)} when the exponent hint is
/// set.
IntegralResult integrate_finite(const RealFn& f, double a, double b,
                                const QuadratureConfig& cfg);
ComplexIntegralResult integrate_finite(const ComplexFn& f, double a, double b,
                                       const QuadratureConfig& cfg);

/// Integral over (a, inf) for integrands with eventual exponential decay at
/// the given rate; truncates where the decay envelope is below tolerance.
IntegralResult integrate_semi_infinite(const RealFn& f, double a, double decay_rate,
                                       const QuadratureConfig& cfg);
ComplexIntegralResult integrate_semi_infinite(const ComplexFn& f, double a,
                                              double decay_rate,
                                              const QuadratureConfig& cfg);

/// Convolution value (f * g)(x) = int_0^x f(y) g(x-y) dy, split at x/2 with
/// each factor's origin-singularity hint applied at its own endpoint.
IntegralResult convolve_at(const RealFn& f, std::optional<double> f_exponent,
                           const RealFn& g, std::optional<double> g_exponent,
                           double x, const QuadratureConfig& cfg);

/// Same, using cfg.origin_singularity_exponent for both factors.
IntegralResult convolve_at(const RealFn& f, const RealFn& g, double x,
                           const QuadratureConfig& cfg);

/// (1/2 pi i) int_{c-i inf}^{c+i inf} F(theta) e^{theta x} dtheta, evaluated in
/// conjugate pairs so the result is real up to the unpaired residual, which is
/// folded into the error estimate. Oscillatory tails are summed over
/// half-period panels and accelerated.
IntegralResult bromwich_integral(const TransformFn& F, double c, double x,
                                 const QuadratureConfig& cfg);

/// Two-ray tilted contour through offset c with rays at angles
/// +-(pi/2 + psi). truncation_radius 0 means automatic from the decay of
/// e^{theta x} on the rays; nodes is the panel budget per ray.
struct ContourSpec {
    double c = 1.0;
    double psi = 0.5;
    double truncation_radius = 0.0;
    int nodes = 512;

    double ray_angle() const;
    void validate() const;
};

/// (1/2 pi i) int_C F(theta) e^{theta x} dtheta over the two-ray contour.
IntegralResult ray_pair_integral(const TransformFn& F, const ContourSpec& spec,
                                 double x, const QuadratureConfig& cfg);

}  // namespace subdens::quad
