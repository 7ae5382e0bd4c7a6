#pragma once

// Self-contained special-function kernel. Everything here is a pure function
// of its arguments; safe to call concurrently.

#include <complex>
#include <span>
#include <vector>

namespace subdens::specfun {

inline constexpr double euler_gamma = 0.57721566490153286060651209;

/// 1/Gamma(z) as an entire function: exactly zero at z = 0, -1, -2, ...
std::complex<double> recip_gamma(std::complex<double> z);
double recip_gamma(double x);

/// Gamma(z) for Re z cases where it is finite; poles propagate as inf.
std::complex<double> gamma_fn(std::complex<double> z);
double gamma_fn(double x);

/// Complementary error function, 1 - (2/sqrt(pi)) int_0^x exp(-s^2) ds.
double erfc(double x);

/// Exponential integral E1(x) = int_x^inf exp(-s)/s ds, x > 0.
double exp_integral_e1(double x);

/// Physicists' Hermite polynomial H_n(x).
double hermite(int n, double x);

/// Riemann zeta at integer arguments n >= 2 (table for small n, direct
/// summation beyond).
double riemann_zeta_int(int n);

/// Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1}) by the standard
/// double recurrence. args must supply at least n-k+1 entries.
double bell_partial(int n, int k, std::span<const double> args);
std::complex<double> bell_partial(int n, int k, std::span<const std::complex<double>> args);

/// Complete exponential Bell polynomial Y_n(x_1,...,x_n); Y_0 = 1.
/// Computed by the convolution recurrence, so that sum_k B_{n,k} = Y_n is a
/// genuine cross-check between two independent recurrences.
double bell_complete(int n, std::span<const double> args);

/// Taylor coefficients c_0..c_n_max of 1/Gamma(1+z) = sum c_n z^n,
/// from the complete Bell polynomials with gamma/zeta arguments.
std::vector<double> recip_gamma_taylor_coeffs(int n_max);

/// Dense polynomial with invariants: coefficients.size() == degree+1 and a
/// nonzero leading coefficient unless degree == 0. Coefficients are in
/// ascending order of power.
class PolySeq {
public:
    explicit PolySeq(std::vector<double> coefficients);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    double evaluate(double x) const;

    /// Coefficient form of the physicists' Hermite polynomial H_n.
    static PolySeq hermite(int n);

private:
    std::vector<double> coeffs_;
};

}  // namespace subdens::specfun
