#ifndef SGC_WEIGHT_ENUM_HPP
#define SGC_WEIGHT_ENUM_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgc/llr.hpp"

namespace sgc {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Dense polynomial with exact nonnegative integer coefficients.
struct DensePolynomial {
    std::vector<BigInt> coeffs;  // coeffs[d] multiplies z^d

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    const BigInt& coeff(std::size_t d) const {
        static const BigInt zero = 0;
        return d < coeffs.size() ? coeffs[d] : zero;
    }
};

inline BigInt binomial_big(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::size_t j = 1; j <= k; ++j) {
        r *= static_cast<unsigned long>(n - k + j);
        r /= static_cast<unsigned long>(j);
    }
    return r;
}

// q_k(z) = (1/2)[(1+z)^k + (1-z)^k]: even binomial terms only.
inline DensePolynomial qk_poly(std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    DensePolynomial p;
    p.coeffs.assign(k + 1, 0);
    for (std::size_t m = 0; m <= k; m += 2) p.coeffs[m] = binomial_big(k, m);
    return p;
}

// coeff[ poly^M, z^n ] by iterated convolution truncated at degree n.
inline BigInt coeff_power(const DensePolynomial& poly, std::size_t M, std::size_t n) {
    std::vector<BigInt> acc(n + 1, 0);
    acc[0] = 1;
    std::vector<BigInt> next(n + 1);
    for (std::size_t step = 0; step < M; ++step) {
        for (auto& c : next) c = 0;
        for (std::size_t d = 0; d <= n; ++d) {
            if (acc[d] == 0) continue;
            const std::size_t dmax = std::min(poly.coeffs.size() - 1, n - d);
            for (std::size_t e = 0; e <= dmax; ++e) {
                if (poly.coeffs[e] == 0) continue;
                next[d + e] += acc[d] * poly.coeffs[e];
            }
        }
        acc.swap(next);
    }
    return acc[n];
}

// Expected number of weight-w codewords in the (l,k) ensemble at
// blocklength N, in exact rational arithmetic:
//   binom(N,w) * coeff[q_k^M, z^{lw}] / binom(F, lw),  F = N l = M k.
inline BigRational expected_weight_enumerator(std::size_t l, std::size_t k,
                                              std::size_t N, std::size_t w) {
    if ((N * l) % k != 0) throw std::invalid_argument("N*l must be divisible by k");
    if (w > N) throw std::invalid_argument("w exceeds N");
    const std::size_t F = N * l;
    const std::size_t M = F / k;
    const BigInt num = binomial_big(N, w) * coeff_power(qk_poly(k), M, l * w);
    const BigInt den = binomial_big(F, l * w);
    return BigRational(num, den);
}

namespace detail {

inline double log_big(const BigInt& x) {
    if (x <= 0) return -kInf;
    const long bits = static_cast<long>(boost::multiprecision::msb(x));
    const long shift = std::max(0L, bits - 62);
    const double top = (x >> shift).convert_to<double>();
    return std::log(top) + static_cast<double>(shift) * kLn2;
}

inline double logaddexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace detail

inline double log_expected_weight_enumerator_exact(std::size_t l, std::size_t k,
                                                   std::size_t N, std::size_t w) {
    const BigRational r = expected_weight_enumerator(l, k, N, w);
    if (r == 0) return -kInf;
    return detail::log_big(boost::multiprecision::numerator(r)) -
           detail::log_big(boost::multiprecision::denominator(r));
}

// Floating-point path: ln of the same quantity via log-gamma factorials and
// a log-domain convolution for the coefficient. Relative error well below
// 1e-9 on the ln scale; usable far beyond the exact-arithmetic budget.
inline double log_expected_weight_enumerator(std::size_t l, std::size_t k,
                                             std::size_t N, std::size_t w) {
    if ((N * l) % k != 0) throw std::invalid_argument("N*l must be divisible by k");
    const std::size_t F = N * l;
    const std::size_t M = F / k;
    const std::size_t n = l * w;

    auto lbinom = [](std::size_t a, std::size_t b) {
        if (b > a) return -kInf;
        return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
    };

    const DensePolynomial q = qk_poly(k);
    std::vector<double> logq(q.coeffs.size(), -kInf);
    for (std::size_t d = 0; d < q.coeffs.size(); ++d)
        if (q.coeffs[d] != 0) logq[d] = detail::log_big(q.coeffs[d]);

    std::vector<double> acc(n + 1, -kInf), next(n + 1);
    acc[0] = 0.0;
    for (std::size_t step = 0; step < M; ++step) {
        std::fill(next.begin(), next.end(), -kInf);
        for (std::size_t d = 0; d <= n; ++d) {
            if (acc[d] == -kInf) continue;
            const std::size_t dmax = std::min(q.coeffs.size() - 1, n - d);
            for (std::size_t e = 0; e <= dmax; e += 2)
                if (logq[e] != -kInf)
                    next[d + e] = detail::logaddexp(next[d + e], acc[d] + logq[e]);
        }
        acc.swap(next);
    }
    if (acc[n] == -kInf) return -kInf;
    return lbinom(N, w) + acc[n] - lbinom(F, n);
}

struct SaddlePoint {
    double phi;  // growth rate, natural logs
    double z;    // saddle location
    double residual;
};

namespace detail {

// (z/k) q'_k(z) / q_k(z) and its z-derivative, via r = (1-z)/(1+z).
inline double saddle_value(std::size_t k, double z) {
    const double r = (1.0 - z) / (1.0 + z);
    const double rk1 = std::pow(r, static_cast<double>(k - 1));
    const double rk = rk1 * r;
    return z * (1.0 - rk1) / ((1.0 + z) * (1.0 + rk));
}

inline double saddle_derivative(std::size_t k, double z) {
    const double eps = std::max(1e-9, 1e-7 * z);
    return (saddle_value(k, z + eps) - saddle_value(k, std::max(z - eps, 0.0))) /
           (eps + std::min(eps, z));
}

inline double log_qk(std::size_t k, double z) {
    // ln q_k(z) = ln(1/2) + k ln(1+z) + ln(1 + r^k)
    const double r = (1.0 - z) / (1.0 + z);
    return -kLn2 + k * std::log1p(z) + std::log1p(std::pow(r, static_cast<double>(k)));
}

}  // namespace detail

// Solves the saddle equation omega = (z/k) q'_k(z)/q_k(z) for z > 0 by Newton
// iteration started at omega/(1-omega), safeguarded by a bisection bracket,
// then evaluates phi(omega) = (1-l) h(omega) + (l/k) ln q_k(z) - omega l ln z.
inline SaddlePoint growth_rate(std::size_t l, std::size_t k, double omega) {
    if (!(omega > 0.0 && omega < 1.0))
        throw std::invalid_argument("omega must lie in (0,1)");
    double lo = 1e-12, hi = 1e12;
    if (detail::saddle_value(k, hi) < omega)
        throw std::runtime_error("saddle equation has no root: omega beyond the "
                                 "reachable weight range for this k");
    double z = std::min(std::max(omega / (1.0 - omega), lo), hi);
    double f = detail::saddle_value(k, z) - omega;
    for (int it = 0; it < 200 && std::fabs(f) > 1e-14; ++it) {
        if (f > 0)
            hi = z;
        else
            lo = z;
        const double d = detail::saddle_derivative(k, z);
        double zn = d > 0 ? z - f / d : 0.0;
        if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
        z = zn;
        f = detail::saddle_value(k, z) - omega;
    }
    SaddlePoint sp;
    sp.z = z;
    sp.residual = std::fabs(f);
    if (sp.residual > 1e-12)
        throw std::runtime_error("saddle solve stalled; residual " +
                                 std::to_string(sp.residual));
    sp.phi = (1.0 - static_cast<double>(l)) * entropy_nats(omega) +
             (static_cast<double>(l) / static_cast<double>(k)) * detail::log_qk(k, z) -
             omega * static_cast<double>(l) * std::log(z);
    return sp;
}

// First strictly positive zero of phi. Scans upward for the negative dip and
// the sign change, then bisects the crossing to the requested width.
inline double omega_star(std::size_t l, std::size_t k, double tol) {
    double prev_omega = 0.0;
    double neg_omega = -1.0;
    double cross_lo = -1.0, cross_hi = -1.0;
    for (double omega = 1e-4; omega < 0.5; omega *= 1.12) {
        const double phi = growth_rate(l, k, omega).phi;
        if (phi < 0.0 && neg_omega < 0.0) neg_omega = omega;
        if (neg_omega > 0.0 && phi > 0.0) {
            cross_lo = prev_omega;
            cross_hi = omega;
            break;
        }
        prev_omega = omega;
    }
    if (cross_lo < 0.0)
        throw std::runtime_error("no gap detected: phi has no negative dip near 0");
    while (cross_hi - cross_lo > tol) {
        const double mid = 0.5 * (cross_lo + cross_hi);
        if (growth_rate(l, k, mid).phi < 0.0)
            cross_lo = mid;
        else
            cross_hi = mid;
    }
    return 0.5 * (cross_lo + cross_hi);
}

// Random-code distance exponent R - 1 + h2(delta), in bits.
inline double rce_exponent(double rate, double delta) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("rate outside (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta outside (0,1)");
    return rate - 1.0 + entropy2(delta);
}

// Gilbert-Varshamov distance: first zero of the exponent, h2(d) = 1 - R.
inline double gilbert_varshamov(double rate, double tol) {
    double lo = 0.0, hi = 0.5;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (rce_exponent(rate, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sgc

#endif
