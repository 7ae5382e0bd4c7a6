#include "subdens/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subdens::specfun {

namespace {

using cplx = std::complex<double>;

// sin(pi z) with argument reduction on the real part, accurate near integers.
cplx sin_pi(cplx z) {
    double x = z.real(), y = z.imag();
    // reduce x modulo 2 exactly
    double r = std::fmod(x, 2.0);
    if (r > 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    // sin(pi(x+iy)) = sin(pi x)cosh(pi y) + i cos(pi x)sinh(pi y)
    const double pi = 3.14159265358979323846264338;
    double sp, cp;
    // use reflection so the sine argument is small where it matters
    if (r > 0.5) { sp = std::sin(pi * (1.0 - r)); cp = -std::cos(pi * (1.0 - r)); }
    else if (r < -0.5) { sp = -std::sin(pi * (1.0 + r)); cp = -std::cos(pi * (1.0 + r)); }
    else { sp = std::sin(pi * r); cp = std::cos(pi * r); }
    if (y == 0.0) return {sp, 0.0};
    return {sp * std::cosh(pi * y), cp * std::sinh(pi * y)};
}

// log Gamma by the Stirling series, valid for Re w >= 10.
cplx log_gamma_stirling(cplx w) {
    // Bernoulli numbers B_2n for the asymptotic series
    static const double b2n[] = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
        -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0,
        -174611.0 / 330.0};
    const double half_log_two_pi = 0.91893853320467274178032974;
    cplx lw = std::log(w);
    cplx s = (w - 0.5) * lw - w + half_log_two_pi;
    cplx w2 = w * w;
    cplx p = w;
    for (int n = 1; n <= 10; ++n) {
        s += b2n[n - 1] / (2.0 * n * (2.0 * n - 1.0)) / p;
        p *= w2;
    }
    return s;
}

// 1/Gamma(z) for Re z >= 0.5 via upward shift into the Stirling region.
// The shift factors stay explicit so that recip_gamma(z+1) = recip_gamma(z)/z
// holds to rounding accuracy: z and z+1 shift to the same Stirling argument.
cplx recip_gamma_right(cplx z) {
    int m = 0;
    double re = z.real();
    if (re < 10.0) m = static_cast<int>(std::ceil(10.0 - re));
    cplx w = z + static_cast<double>(m);
    cplx prod = 1.0;
    for (int j = 0; j < m; ++j) prod *= (z + static_cast<double>(j));
    return prod * std::exp(-log_gamma_stirling(w));
}

// Gamma(w0) for Re w0 >= 0.5, same shift scheme.
cplx gamma_right(cplx w0) {
    int m = 0;
    double re = w0.real();
    if (re < 10.0) m = static_cast<int>(std::ceil(10.0 - re));
    cplx w = w0 + static_cast<double>(m);
    cplx prod = 1.0;
    for (int j = 0; j < m; ++j) prod *= (w0 + static_cast<double>(j));
    return std::exp(log_gamma_stirling(w)) / prod;
}

bool is_nonpositive_integer(cplx z) {
    if (z.imag() != 0.0) return false;
    double x = z.real();
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace

std::complex<double> recip_gamma(std::complex<double> z) {
    if (is_nonpositive_integer(z)) return 0.0;
    if (z.real() >= 0.5) return recip_gamma_right(z);
    // reflection: 1/Gamma(z) = sin(pi z)/pi * Gamma(1-z)
    const double pi = 3.14159265358979323846264338;
    return sin_pi(z) / pi * gamma_right(1.0 - z);
}

double recip_gamma(double x) {
    return recip_gamma(std::complex<double>(x, 0.0)).real();
}

std::complex<double> gamma_fn(std::complex<double> z) {
    std::complex<double> r = recip_gamma(z);
    if (r == std::complex<double>(0.0, 0.0))
        return {std::numeric_limits<double>::infinity(), 0.0};
    return 1.0 / r;
}

double gamma_fn(double x) { return gamma_fn(std::complex<double>(x, 0.0)).real(); }

double erfc(double x) { return std::erfc(x); }

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: requires x > 0");
    if (x <= 1.0) {
        // power series E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k/(k k!)
        double sum = -euler_gamma - std::log(x);
        double term = 1.0;
        for (int k = 1; k < 40; ++k) {
            term *= -x / k;
            double add = -term / k;
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    // continued fraction (modified Lentz)
    const double tiny = 1e-300;
    double b = x + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 200; ++i) {
        double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

double hermite(int n, double x) {
    if (n < 0) throw std::domain_error("hermite: n must be >= 0");
    if (n == 0) return 1.0;
    double hm = 1.0, h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        double hn = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hn;
    }
    return h;
}

double riemann_zeta_int(int n) {
    if (n < 2) throw std::domain_error("riemann_zeta_int: requires n >= 2");
    static const double table[] = {
        1.6449340668482264365,  // zeta(2)
        1.2020569031595942854,
        1.0823232337111381915,
        1.0369277551433699263,
        1.0173430619844491397,
        1.0083492773819228268,
        1.0040773561979443394,
        1.0020083928260822144,
        1.0009945751278180853,
        1.0004941886041194646,
        1.0002460865533080483,
        1.0001227133475784891,
        1.0000612481350587048,
        1.0000305882363070205,
        1.0000152822594086519,
        1.0000076371976378998,
        1.0000038172932649998,
        1.0000019082127165539,
        1.0000009539620338728,  // zeta(20)
    };
    if (n <= 20) return table[n - 2];
    // terms decay like j^-n; a short direct sum reaches machine precision
    double s = 1.0;
    for (int j = 2; j < 64; ++j) {
        double t = std::pow(static_cast<double>(j), -n);
        s += t;
        if (t < 1e-18) break;
    }
    return s;
}

namespace {

template <typename T>
T bell_partial_impl(int n, int k, std::span<const T> args) {
    if (k < 1 || k > n) throw std::domain_error("bell_partial: requires 1 <= k <= n");
    if (static_cast<int>(args.size()) < n - k + 1)
        throw std::domain_error("bell_partial: needs at least n-k+1 arguments");
    // B[i][j] over 0..n x 0..k, recurrence
    // B_{i,j} = sum_{l=1..i-j+1} C(i-1, l-1) x_l B_{i-l, j-1}
    std::vector<std::vector<T>> B(n + 1, std::vector<T>(k + 1, T{}));
    B[0][0] = T{1.0};
    // binomial table
    std::vector<std::vector<double>> C(n + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i <= n; ++i) {
        C[i][0] = 1.0;
        for (int j = 1; j <= i; ++j)
            C[i][j] = C[i - 1][j - 1] + (j <= i - 1 ? C[i - 1][j] : 0.0);
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= std::min(i, k); ++j) {
            T acc{};
            for (int l = 1; l <= i - j + 1; ++l) {
                if (l - 1 >= static_cast<int>(args.size())) break;
                acc += C[i - 1][l - 1] * args[l - 1] * B[i - l][j - 1];
            }
            B[i][j] = acc;
        }
    }
    return B[n][k];
}

}  // namespace

double bell_partial(int n, int k, std::span<const double> args) {
    return bell_partial_impl<double>(n, k, args);
}

std::complex<double> bell_partial(int n, int k, std::span<const std::complex<double>> args) {
    return bell_partial_impl<std::complex<double>>(n, k, args);
}

double bell_complete(int n, std::span<const double> args) {
    if (n < 0) throw std::domain_error("bell_complete: requires n >= 0");
    if (static_cast<int>(args.size()) < n)
        throw std::domain_error("bell_complete: needs at least n arguments");
    // Y_{m+1} = sum_{k=0..m} C(m,k) x_{k+1} Y_{m-k}, Y_0 = 1
    std::vector<double> Y(n + 1);
    Y[0] = 1.0;
    std::vector<std::vector<double>> C(n + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i <= n; ++i) {
        C[i][0] = 1.0;
        for (int j = 1; j <= i; ++j)
            C[i][j] = C[i - 1][j - 1] + (j <= i - 1 ? C[i - 1][j] : 0.0);
    }
    for (int m = 0; m < n; ++m) {
        double acc = 0.0;
        for (int k = 0; k <= m; ++k) acc += C[m][k] * args[k] * Y[m - k];
        Y[m + 1] = acc;
    }
    return Y[n];
}

std::vector<double> recip_gamma_taylor_coeffs(int n_max) {
    if (n_max < 1) throw std::domain_error("recip_gamma_taylor_coeffs: n_max >= 1");
    // 1/Gamma(1+z) = exp(gamma z + sum_{k>=2} (-1)^{k-1} zeta(k) z^k / k)
    //             = sum_n Y_n(a_1..a_n)/n! z^n,  a_1 = gamma,
    //               a_k = (-1)^{k-1} (k-1)! zeta(k)  for k >= 2.
    std::vector<double> a(n_max);
    a[0] = euler_gamma;
    double fact = 1.0;  // (k-1)!
    for (int k = 2; k <= n_max; ++k) {
        fact *= (k - 1);
        a[k - 1] = ((k % 2 == 1) ? 1.0 : -1.0) * fact * riemann_zeta_int(k);
    }
    std::vector<double> c(n_max + 1);
    c[0] = 1.0;
    double nfact = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        nfact *= n;
        c[n] = bell_complete(n, std::span<const double>(a.data(), n)) / nfact;
    }
    return c;
}

PolySeq::PolySeq(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw std::invalid_argument("PolySeq: empty coefficient list");
    if (coeffs_.size() > 1 && coeffs_.back() == 0.0)
        throw std::invalid_argument("PolySeq: zero leading coefficient");
}

double PolySeq::evaluate(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolySeq PolySeq::hermite(int n) {
    if (n < 0) throw std::domain_error("PolySeq::hermite: n >= 0");
    std::vector<double> hm{1.0};
    if (n == 0) return PolySeq(hm);
    std::vector<double> h{0.0, 2.0};
    for (int k = 1; k < n; ++k) {
        std::vector<double> hn(k + 2, 0.0);
        for (size_t j = 0; j < h.size(); ++j) hn[j + 1] += 2.0 * h[j];
        for (size_t j = 0; j < hm.size(); ++j) hn[j] -= 2.0 * k * hm[j];
        hm = std::move(h);
        h = std::move(hn);
    }
    return PolySeq(h);
}

}  // namespace subdens::specfun
