#ifndef SGC_LLR_HPP
#define SGC_LLR_HPP

#include <cassert>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace sgc {

// Half log-likelihood ratio convention throughout: v = (1/2) ln Q(y|0)/Q(y|1).
// +/-inf are legal values and kept symbolic; finite values are clamped to
// +/-kLlrCap before entering tanh/atanh arithmetic.
inline constexpr double kLlrCap = 25.0;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// With every |h| below this bound the plain tanh product stays far enough
// from +/-1 that atanh keeps full precision; above it the check-node rule
// runs in sign/log-magnitude form.
inline constexpr double kTanhSafe = 4.0;

inline constexpr double kLn2 = 0.6931471805599453094;

inline double clamp_llr(double v, double cap = kLlrCap) {
    if (v > cap) return cap;
    if (v < -cap) return -cap;
    return v;
}

// Sum of LLRs where opposing certainties would be NaN; contradictory
// +inf/-inf collapse to 0 (cannot occur on erasure channels, where all
// infinite evidence is consistent).
inline double llr_sum(std::span<const double> vs) {
    double s = 0.0;
    int pos = 0, neg = 0;
    for (double v : vs) {
        if (v == kInf)
            ++pos;
        else if (v == -kInf)
            ++neg;
        else
            s += v;
    }
    if (pos && neg) return 0.0;
    if (pos) return kInf;
    if (neg) return -kInf;
    return s;
}

inline double llr_add(double a, double b) {
    const double vs[2] = {a, b};
    return llr_sum(vs);
}

// ln tanh(h) for h > 0, stable over the whole range.
inline double log_tanh(double h) {
    const double e = std::exp(-2.0 * h);
    return std::log1p(-e) - std::log1p(e);
}

// Check-node rule u = atanh( prod_i tanh(h_i) ), half-LLR convention.
// Finite inputs are clamped to the cap first; an exact-zero factor gives
// u = 0; all-infinite inputs give a signed infinity; a single finite input
// passes through exactly (infinite cofactors only carry sign). The plain
// tanh product is used while it stays clear of +/-1 (error ~1e-10 at the
// switch point, well under the Monte Carlo noise of its callers); the
// sign/log-magnitude form covers the saturated regime.
inline double check_combine(std::span<const double> hs, double cap = kLlrCap) {
    constexpr double plain_bound = 12.0;
    int sign = 1;
    std::size_t finite = 0;
    double last = 0.0;
    double maxabs = 0.0;
    for (double h : hs) {
        if (h == 0.0) return 0.0;
        if (h < 0) sign = -sign;
        double a = std::fabs(h);
        if (std::isinf(a)) continue;  // |tanh| = 1 exactly
        a = std::min(a, cap);
        ++finite;
        last = a;
        maxabs = std::max(maxabs, a);
    }
    if (finite == 0) return sign > 0 ? kInf : -kInf;
    double u;
    if (finite == 1) {
        u = last;
    } else if (maxabs <= plain_bound) {
        double prod = 1.0;
        for (double h : hs) {
            const double a = std::fabs(h);
            if (!std::isinf(a)) prod *= std::tanh(a);
        }
        u = std::atanh(prod);
    } else {
        double logmag = 0.0;  // sum of ln|tanh h_i| over finite inputs
        for (double h : hs) {
            const double a = std::fabs(h);
            if (!std::isinf(a)) logmag += log_tanh(std::min(a, cap));
        }
        // atanh(e^S) = (1/2)[ln(1+e^S) - ln(1-e^S)], S <= 0
        u = 0.5 * (std::log1p(std::exp(logmag)) - std::log(-std::expm1(logmag)));
    }
    return sign > 0 ? clamp_llr(u, cap) : -clamp_llr(u, cap);
}

// All outgoing check-node messages at once: out[e] = check_combine of the
// inputs excluding e, in O(k) via forward/backward partial products. The
// log-magnitude accumulators add same-signed terms only, so precision
// matches the one-shot rule.
inline void check_node_pass(std::span<const double> in, std::span<double> out,
                            double cap = kLlrCap) {
    const std::size_t k = in.size();
    if (k == 1) {
        out[0] = kInf;  // empty product
        return;
    }
    // classify inputs once
    static thread_local std::vector<double> logmag_buf, tanh_buf;
    logmag_buf.resize(k);
    tanh_buf.resize(k);
    std::size_t zeros = 0, negs = 0, finites = 0;
    bool all_small = true;
    for (std::size_t i = 0; i < k; ++i) {
        const double h = in[i];
        if (h == 0.0) {
            ++zeros;
            logmag_buf[i] = 0.0;
            tanh_buf[i] = 0.0;
            continue;
        }
        if (h < 0) ++negs;
        double a = std::fabs(h);
        if (std::isinf(a)) {
            logmag_buf[i] = 0.0;
            tanh_buf[i] = 1.0;
            continue;
        }
        a = std::min(a, cap);
        ++finites;
        if (a > kTanhSafe) all_small = false;
        logmag_buf[i] = log_tanh(a);
        tanh_buf[i] = std::tanh(a);
    }

    auto signed_result = [&](std::size_t e, double mag) {
        const bool neg = (negs - (in[e] < 0 ? 1 : 0)) & 1u;
        return neg ? -mag : mag;
    };

    if (zeros >= 2) {
        for (std::size_t i = 0; i < k; ++i) out[i] = 0.0;
        return;
    }
    if (zeros == 1) {
        for (std::size_t i = 0; i < k; ++i) out[i] = 0.0;
        std::size_t ze = 0;
        while (in[ze] != 0.0) ++ze;
        // the zero edge itself sees the product of everything else
        const double rest = [&] {
            static thread_local std::vector<double> others;
            others.clear();
            for (std::size_t i = 0; i < k; ++i)
                if (i != ze) others.push_back(in[i]);
            return check_combine(others, cap);
        }();
        out[ze] = rest;
        return;
    }

    static thread_local std::vector<double> pre, suf;
    pre.resize(k + 1);
    suf.resize(k + 1);
    if (all_small && finites == k) {
        pre[0] = 1.0;
        suf[k] = 1.0;
        for (std::size_t i = 0; i < k; ++i)
            pre[i + 1] = pre[i] * tanh_buf[i] * (in[i] < 0 ? -1.0 : 1.0);
        for (std::size_t i = k; i-- > 0;)
            suf[i] = suf[i + 1] * tanh_buf[i] * (in[i] < 0 ? -1.0 : 1.0);
        for (std::size_t e = 0; e < k; ++e)
            out[e] = clamp_llr(std::atanh(pre[e] * suf[e + 1]), cap);
        return;
    }
    pre[0] = 0.0;
    suf[k] = 0.0;
    for (std::size_t i = 0; i < k; ++i) pre[i + 1] = pre[i] + logmag_buf[i];
    for (std::size_t i = k; i-- > 0;) suf[i] = suf[i + 1] + logmag_buf[i];
    for (std::size_t e = 0; e < k; ++e) {
        const std::size_t fin_excl = finites - (std::isfinite(in[e]) ? 1 : 0);
        if (fin_excl == 0) {
            out[e] = signed_result(e, kInf);
            continue;
        }
        const double S = pre[e] + suf[e + 1];
        const double u = 0.5 * (std::log1p(std::exp(S)) - std::log(-std::expm1(S)));
        out[e] = signed_result(e, clamp_llr(u, cap));
    }
}

// Binary entropy in nats with the 0 log 0 = 0 convention.
inline double entropy_nats(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

// Binary entropy in bits.
inline double entropy2(double p) { return entropy_nats(p) / kLn2; }

// P(x=0) for a bit with half-LLR v.
inline double prob0_of_llr(double v) {
    if (v == kInf) return 1.0;
    if (v == -kInf) return 0.0;
    return 1.0 / (1.0 + std::exp(-2.0 * v));
}

}  // namespace sgc

#endif
