#pragma once

#include <vector>

#include "subdens/interpolation.hpp"
#include "subdens/model.hpp"
#include "subdens/quadrature.hpp"

namespace subdens::tail_conv {

enum class DerivativeSource { closed_form, numeric_integral };

/// Plan for recovering u_n(x) from the m-th derivative of kappa(theta)^n on a
/// vertical line. m >= n+2 makes the damped transform absolutely integrable.
struct DampedInversionPlan {
    int n = 1;
    int m = 4;          // damping order; make_plan defaults it to n+3
    double c = 1.0;     // abscissa, must exceed the growth rate
    DerivativeSource derivative_source = DerivativeSource::closed_form;

    void validate(double growth_rate) const;
};

DampedInversionPlan make_plan(const SubordinatorModel& model, int n);

/// lambda_n^{(m)}(theta) = d^m/dtheta^m kappa(theta)^n, assembled by Faa di
/// Bruno from the cumulant derivatives:
///   lambda_n^{(m)} = sum_{j=1}^{m^n} C(n,j) kappa^{n-j} B_{m,j}(kappa', ...).
cplx lambda_n_m(const SubordinatorModel& model, int n, int m, cplx theta,
                DerivativeSource source = DerivativeSource::closed_form,
                const quad::QuadratureConfig& cfg = {});

/// u_n(x) via the damped Bromwich integral: the transform of x^m u_n(x) is
/// (-1)^m lambda_n^{(m)}(theta).
quad::IntegralResult u_n_via_damped_inversion(const SubordinatorModel& model,
                                              const DampedInversionPlan& plan, double x,
                                              const quad::QuadratureConfig& cfg = {});

/// Convolution powers of the tail integral and the derivative route for u_n.
/// Level caches build lazily (not thread-safe while building); evaluation on a
/// built engine is pure.
class TailConvEngine {
public:
    explicit TailConvEngine(SubordinatorModel model, quad::QuadratureConfig cfg = {});

    /// (U+)^{*n}(x); n = 1 returns the registered tail exactly, n = 2 is a
    /// direct convolution, higher levels convolve cached splines of the
    /// previous level with the tail.
    double tail_conv_power(int n, double x) const;

    struct DerivativeResult {
        double value;
        double error_estimate;
    };
    /// u_n(x) = (-1)^n d^n/dx^n (U+)^{*n}(x), Romberg-paired central
    /// differences; the error estimate is the pair disagreement plus a
    /// roundoff floor.
    DerivativeResult u_n_via_derivative(int n, double x) const;

    const SubordinatorModel& model() const { return model_; }
    const quad::QuadratureConfig& config() const { return cfg_; }

private:
    double conv_power_eval(int n, double x) const;
    void ensure_levels(int n_max, double x_max) const;

    SubordinatorModel model_;
    quad::QuadratureConfig cfg_;
    mutable std::vector<HybridSpline> levels_;  // levels_[i] caches (U+)^{*(i+2)}
    mutable double grid_x_max_ = 0.0;
};

/// Relative residual of the transform identity
/// int_0^inf e^{-theta x} (U+)^{*n}(x) dx = (-1)^n kappa(theta)^n / theta^n.
double laplace_identity_residual(const TailConvEngine& engine, int n, double theta);

}  // namespace subdens::tail_conv
