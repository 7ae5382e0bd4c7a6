#pragma once

#include <functional>
#include <optional>

#include "subdens/model.hpp"
#include "subdens/quadrature.hpp"

namespace subdens::contour {

/// Analytic continuation of the cumulant to the cone
/// |arg(theta - growth_rate)| < pi/2 + psi.
///
/// When the model registers a closed form it is wrapped directly. Otherwise
/// the continuation is assembled from the leading stable term plus rotated
/// Laplace transforms of the remainder v(z) = u(z) - a z^{-1-alpha}:
///   kappa(theta) = a Gamma(-alpha) theta^alpha + lambda_rot(theta) - lambda(0),
/// the rotation direction following the sign of Im theta.
class ContinuedCumulant {
public:
    /// Closed-form wrap (generic = false) or generic construction from the
    /// stable part (generic = true, requires levy_density_analytic).
    static ContinuedCumulant make(const SubordinatorModel& model, double psi,
                                  bool force_generic = false,
                                  const quad::QuadratureConfig& cfg = {});

    cplx operator()(cplx theta) const { return eval_(theta); }

    bool is_generic() const { return generic_; }
    double psi() const { return psi_; }
    /// a, alpha of the stable leading term (0, 0 for closed-form wraps).
    double stable_coefficient() const { return a_; }
    double stable_exponent() const { return alpha_; }
    /// lambda(0) = int_0^inf v(x) dx (generic construction only).
    double lambda_zero() const { return lambda0_; }
    /// Rotated transforms lambda_-/lambda_+ (generic construction only).
    cplx lambda_minus(cplx w) const;
    cplx lambda_plus(cplx w) const;

private:
    std::function<cplx(cplx)> eval_;
    std::function<cplx(cplx, int)> lambda_rot_;  // sign: -1 upper, +1 lower
    bool generic_ = false;
    double psi_ = 0.0, a_ = 0.0, alpha_ = 0.0, lambda0_ = 0.0;
};

/// Continuation for the model with the given contour half-angle; closed form
/// preferred. Throws when neither a closed form nor a stable part with an
/// analytic density is available.
ContinuedCumulant continue_cumulant(const SubordinatorModel& model, double psi,
                                    const quad::QuadratureConfig& cfg = {});

quad::ContourSpec default_contour(const SubordinatorModel& model);

/// u_n(x) = (1/2 pi i) int_C kappa(theta)^n e^{theta x} dtheta.
quad::IntegralResult u_n_contour(const SubordinatorModel& model,
                                 const quad::ContourSpec& spec, int n, double x,
                                 const quad::QuadratureConfig& cfg = {});

/// p(x; t) = (1/2 pi i) int_C e^{kappa(theta) t + theta x} dtheta. Any real t,
/// including 0 (which yields 0) and negative values, is accepted.
quad::IntegralResult p_contour(const SubordinatorModel& model,
                               const quad::ContourSpec& spec, double x, double t,
                               const quad::QuadratureConfig& cfg = {});

/// n-th time derivative: (1/2 pi i) int_C kappa^n e^{kappa t + theta x} dtheta.
quad::IntegralResult p_t_derivative_contour(const SubordinatorModel& model,
                                            const quad::ContourSpec& spec, double x,
                                            double t, int n,
                                            const quad::QuadratureConfig& cfg = {});

/// p(x; t) on the vertical line Re theta = c (the reference route).
quad::IntegralResult p_bromwich(const SubordinatorModel& model, double c, double x,
                                double t, const quad::QuadratureConfig& cfg = {});

}  // namespace subdens::contour
