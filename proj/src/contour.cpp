#include "subdens/contour.hpp"

#include <cmath>
#include <stdexcept>

#include "subdens/specfun.hpp"

namespace subdens::contour {

namespace sf = specfun;

ContinuedCumulant ContinuedCumulant::make(const SubordinatorModel& model, double psi,
                                          bool force_generic,
                                          const quad::QuadratureConfig& cfg) {
    ContinuedCumulant cc;
    cc.psi_ = psi;
    if (model.continuation && !force_generic) {
        cc.eval_ = *model.continuation;
        return cc;
    }
    if (!model.stable_part || !model.levy_density_analytic)
        throw std::invalid_argument(
            "ContinuedCumulant: model has neither a closed-form continuation nor a "
            "stable part with an analytic density");
    if (model.cone_half_angle > 0.0 && psi >= model.cone_half_angle)
        throw std::invalid_argument("ContinuedCumulant: psi exceeds the analytic cone");

    const StablePart sp = *model.stable_part;
    const double a = sp.coefficient;
    const double alpha = sp.alpha;
    const cplx gamma_neg_alpha = 1.0 / sf::recip_gamma(cplx(-alpha, 0.0));
    auto u_cplx = *model.levy_density_analytic;

    // remainder of the Levy density beyond its leading power
    auto v = [u_cplx, a, alpha](cplx z) -> cplx {
        return u_cplx(z) - a * std::pow(z, -1.0 - alpha);
    };
    const bool v_vanishes = !std::isfinite(sp.remainder_exponent);

    // lambda(0) = int_0^inf v(x) dx, with the origin hint beta
    double lambda0 = 0.0;
    if (!v_vanishes) {
        std::optional<double> hint;
        if (sp.remainder_exponent < 0.0) hint = sp.remainder_exponent;
        auto v_real = [&v](double x) { return v(cplx(x, 0.0)).real(); };
        double decay = model.u_decay_rate > 0.0 ? model.u_decay_rate : 1.0 + alpha;
        quad::QuadratureConfig c0 = cfg.with_exponent(hint);
        if (model.u_decay_rate > 0.0)
            lambda0 = quad::integrate_semi_infinite(quad::RealFn(v_real), 0.0, decay, c0).value;
        else {
            // split + inversion for polynomial tails
            auto head = quad::integrate_finite(quad::RealFn(v_real), 0.0, 1.0, c0);
            auto mapped = [&v_real](double w) { return v_real(1.0 / w) / (w * w); };
            auto tail = quad::integrate_finite(quad::RealFn(mapped), 0.0, 1.0,
                                               cfg.with_exponent(std::nullopt));
            lambda0 = head.value + tail.value;
        }
    }

    // rotated transforms: lambda_sign(w) = int_0^inf e^{-w x} v(x e^{i s psi}) e^{i s psi} dx
    auto lambda_rot = [v, psi, cfg, v_vanishes](cplx w, int s) -> cplx {
        if (v_vanishes) return 0.0;
        cplx rot = std::exp(cplx(0.0, s * psi));
        auto f = [&v, rot, w](double xx) -> cplx { return std::exp(-w * xx) * v(rot * xx) * rot; };
        double decay = std::max(w.real() * 0.8, 1e-3);
        return quad::integrate_semi_infinite(quad::ComplexFn(f), 0.0, decay, cfg).value;
    };

    cc.generic_ = true;
    cc.a_ = a;
    cc.alpha_ = alpha;
    cc.lambda0_ = lambda0;
    cc.lambda_rot_ = lambda_rot;
    cc.eval_ = [a, alpha, gamma_neg_alpha, lambda0, lambda_rot, psi](cplx theta) -> cplx {
        cplx head = a * gamma_neg_alpha * std::pow(theta, alpha);
        int s = (theta.imag() >= 0.0) ? -1 : +1;  // upper half-plane rotates by -psi
        cplx w = theta * std::exp(cplx(0.0, s * psi));
        return head + lambda_rot(w, s) - lambda0;
    };
    return cc;
}

cplx ContinuedCumulant::lambda_minus(cplx w) const {
    if (!generic_) throw std::logic_error("lambda_minus: closed-form continuation");
    return lambda_rot_(w, -1);
}

cplx ContinuedCumulant::lambda_plus(cplx w) const {
    if (!generic_) throw std::logic_error("lambda_plus: closed-form continuation");
    return lambda_rot_(w, +1);
}

ContinuedCumulant continue_cumulant(const SubordinatorModel& model, double psi,
                                    const quad::QuadratureConfig& cfg) {
    return ContinuedCumulant::make(model, psi, false, cfg);
}

quad::ContourSpec default_contour(const SubordinatorModel& model) {
    quad::ContourSpec spec;
    spec.c = model.growth_rate + 1.0;
    spec.psi = 0.5;
    spec.nodes = 512;
    return spec;
}

namespace {

quad::IntegralResult contour_integral(const SubordinatorModel& model,
                                      const quad::ContourSpec& spec,
                                      const std::function<cplx(cplx)>& weight, double x,
                                      const quad::QuadratureConfig& cfg) {
    if (!(spec.c > model.growth_rate))
        throw std::invalid_argument("contour: offset must exceed the growth rate");
    ContinuedCumulant kappa = continue_cumulant(model, spec.psi, cfg);
    auto F = [&kappa, &weight](cplx theta) { return weight(kappa(theta)); };
    return quad::ray_pair_integral(F, spec, x, cfg);
}

}  // namespace

quad::IntegralResult u_n_contour(const SubordinatorModel& model,
                                 const quad::ContourSpec& spec, int n, double x,
                                 const quad::QuadratureConfig& cfg) {
    if (n < 1) throw std::invalid_argument("u_n_contour: n >= 1");
    auto w = [n](cplx kappa) { return std::pow(kappa, n); };
    return contour_integral(model, spec, w, x, cfg);
}

quad::IntegralResult p_contour(const SubordinatorModel& model,
                               const quad::ContourSpec& spec, double x, double t,
                               const quad::QuadratureConfig& cfg) {
    auto w = [t](cplx kappa) { return std::exp(kappa * t); };
    return contour_integral(model, spec, w, x, cfg);
}

quad::IntegralResult p_t_derivative_contour(const SubordinatorModel& model,
                                            const quad::ContourSpec& spec, double x,
                                            double t, int n,
                                            const quad::QuadratureConfig& cfg) {
    if (n < 0) throw std::invalid_argument("p_t_derivative_contour: n >= 0");
    auto w = [t, n](cplx kappa) { return std::pow(kappa, n) * std::exp(kappa * t); };
    return contour_integral(model, spec, w, x, cfg);
}

quad::IntegralResult p_bromwich(const SubordinatorModel& model, double c, double x,
                                double t, const quad::QuadratureConfig& cfg) {
    if (!(c > model.growth_rate))
        throw std::invalid_argument("p_bromwich: abscissa must exceed the growth rate");
    auto kappa = model.cumulant;
    auto F = [kappa, t](cplx theta) { return std::exp(kappa(theta) * t); };
    return quad::bromwich_integral(F, c, x, cfg);
}

}  // namespace subdens::contour
