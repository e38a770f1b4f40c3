#ifndef SGC_CHANNEL_HPP
#define SGC_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "sgc/llr.hpp"
#include "sgc/rng.hpp"

namespace sgc {

enum class ChannelKind { BSC, BEC, ZC, AWGN };

// Channel output: a bit, the erasure mark (BEC), or a real value (AWGN).
struct OutputSymbol {
    enum class Tag { Bit, Erasure, Real } tag;
    double value;  // 0/1 for Bit, the observation for Real

    static OutputSymbol bit(int b) { return {Tag::Bit, static_cast<double>(b)}; }
    static OutputSymbol erasure() { return {Tag::Erasure, 0.0}; }
    static OutputSymbol real(double y) { return {Tag::Real, y}; }

    bool is_erasure() const { return tag == Tag::Erasure; }
    int bit_value() const { return static_cast<int>(value); }
};

inline const char* to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::BSC: return "bsc";
        case ChannelKind::BEC: return "bec";
        case ChannelKind::ZC: return "zc";
        case ChannelKind::AWGN: return "awgn";
    }
    return "?";
}

inline ChannelKind channel_kind_from_string(const std::string& s) {
    if (s == "bsc") return ChannelKind::BSC;
    if (s == "bec") return ChannelKind::BEC;
    if (s == "zc") return ChannelKind::ZC;
    if (s == "awgn") return ChannelKind::AWGN;
    throw std::invalid_argument("unknown channel kind: " + s);
}

namespace detail {

// Adaptive Simpson quadrature. Throws if the tolerance cannot be met within
// the recursion budget, reporting the tolerance actually achieved.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth,
                                   double& worst) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (depth <= 0) {
        worst = std::max(worst, std::fabs(err));
        return left + right + err;
    }
    if (std::fabs(err) <= tol) return left + right + err;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double worst = 0.0;
    double v = adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48, worst);
    if (worst > tol)
        throw std::runtime_error("quadrature did not converge; achieved tolerance " +
                                 std::to_string(worst));
    return v;
}

}  // namespace detail

// Memoryless binary-input channel. Immutable; sampling takes the caller's
// generator, so values are safely shared across workers.
class ChannelModel {
  public:
    static ChannelModel bsc(double p) { return ChannelModel(ChannelKind::BSC, p); }
    static ChannelModel bec(double eps) { return ChannelModel(ChannelKind::BEC, eps); }
    static ChannelModel zc(double p) { return ChannelModel(ChannelKind::ZC, p); }
    static ChannelModel awgn(double sigma) {
        return ChannelModel(ChannelKind::AWGN, sigma);
    }

    static ChannelModel make(ChannelKind kind, double param) {
        return ChannelModel(kind, param);
    }
    static ChannelModel make(const std::string& kind, double param) {
        return ChannelModel(channel_kind_from_string(kind), param);
    }

    ChannelKind kind() const { return kind_; }
    double param() const { return param_; }
    bool symmetric() const { return kind_ != ChannelKind::ZC; }

    // Q(y|x); a probability for discrete outputs, a density for AWGN.
    double transition_prob(int x, const OutputSymbol& y) const {
        check_alphabet(y);
        const double p = param_;
        switch (kind_) {
            case ChannelKind::BSC:
                return y.bit_value() == x ? 1.0 - p : p;
            case ChannelKind::BEC:
                if (y.is_erasure()) return p;
                return y.bit_value() == x ? 1.0 - p : 0.0;
            case ChannelKind::ZC:
                // 0 is transmitted correctly; 1 flips with probability p.
                if (x == 0) return y.bit_value() == 0 ? 1.0 : 0.0;
                return y.bit_value() == 1 ? 1.0 - p : p;
            case ChannelKind::AWGN: {
                const double mean = x == 0 ? 1.0 : -1.0;  // 0 -> +1, 1 -> -1
                const double d = y.value - mean;
                return std::exp(-d * d / (2.0 * p * p)) /
                       std::sqrt(2.0 * M_PI * p * p);
            }
        }
        return 0.0;
    }

    OutputSymbol sample_output(int x, Rng& rng) const {
        const double p = param_;
        switch (kind_) {
            case ChannelKind::BSC:
                return OutputSymbol::bit(bernoulli(rng, p) ? x ^ 1 : x);
            case ChannelKind::BEC:
                if (bernoulli(rng, p)) return OutputSymbol::erasure();
                return OutputSymbol::bit(x);
            case ChannelKind::ZC:
                if (x == 1 && bernoulli(rng, p)) return OutputSymbol::bit(0);
                return OutputSymbol::bit(x);
            case ChannelKind::AWGN: {
                std::normal_distribution<double> noise(0.0, p);
                return OutputSymbol::real((x == 0 ? 1.0 : -1.0) + noise(rng));
            }
        }
        return OutputSymbol::bit(0);
    }

    // Half log-likelihood (1/2) ln Q(y|0)/Q(y|1); +/-inf permitted.
    double llr(const OutputSymbol& y) const {
        check_alphabet(y);
        const double p = param_;
        switch (kind_) {
            case ChannelKind::BSC: {
                const double v = 0.5 * std::log((1.0 - p) / p);
                return y.bit_value() == 0 ? v : -v;
            }
            case ChannelKind::BEC:
                if (y.is_erasure()) return 0.0;
                return y.bit_value() == 0 ? kInf : -kInf;
            case ChannelKind::ZC:
                if (y.bit_value() == 1) return -kInf;  // Q(1|0) = 0
                return 0.5 * std::log(1.0 / p);
            case ChannelKind::AWGN:
                return y.value / (p * p);
        }
        return 0.0;
    }

    // Channel capacity in bits per use. BSC/BEC closed form, ZC via the
    // optimal input bias, AWGN by adaptive quadrature (abs tol 1e-8).
    double capacity() const {
        const double p = param_;
        switch (kind_) {
            case ChannelKind::BSC:
                return 1.0 - entropy2(p);
            case ChannelKind::BEC:
                return 1.0 - p;
            case ChannelKind::ZC:
                return mutual_information_zc(zc_optimal_alpha(p), p);
            case ChannelKind::AWGN:
                return bms_capacity_quadrature();
        }
        return 0.0;
    }

    // I(X;Y) for the uniform input; equals capacity on symmetric channels.
    double uniform_input_rate() const {
        if (kind_ == ChannelKind::ZC) return mutual_information_zc(0.5, param_);
        return capacity();
    }

    // alpha(p) maximizing the ZC mutual information.
    static double zc_optimal_alpha(double p) {
        const double pb = 1.0 - p;
        if (p <= 0.0) return 0.5;
        const double t = std::pow(p, p / pb);
        return t / (1.0 + pb * t);
    }

    // I_alpha(X;Y) = h(alpha pbar) - alpha h(p) for the ZC, in bits.
    static double mutual_information_zc(double alpha, double p) {
        const double pb = 1.0 - p;
        return entropy2(alpha * pb) - alpha * entropy2(p);
    }

  private:
    ChannelModel(ChannelKind kind, double param) : kind_(kind), param_(param) {
        switch (kind_) {
            case ChannelKind::BSC:
            case ChannelKind::BEC:
            case ChannelKind::ZC:
                if (param_ < 0.0 || param_ > 1.0)
                    throw std::invalid_argument("channel parameter outside [0,1]");
                break;
            case ChannelKind::AWGN:
                if (!(param_ > 0.0))
                    throw std::invalid_argument("AWGN sigma must be positive");
                break;
        }
    }

    void check_alphabet(const OutputSymbol& y) const {
        switch (y.tag) {
            case OutputSymbol::Tag::Erasure:
                if (kind_ != ChannelKind::BEC)
                    throw std::invalid_argument("erasure symbol on a non-erasure channel");
                break;
            case OutputSymbol::Tag::Real:
                if (kind_ != ChannelKind::AWGN)
                    throw std::invalid_argument("real-valued symbol on a discrete channel");
                break;
            case OutputSymbol::Tag::Bit:
                if (kind_ == ChannelKind::AWGN)
                    throw std::invalid_argument("bit symbol on a continuous channel");
                break;
        }
    }

    double bms_capacity_quadrature() const {
        const double sigma = param_;
        auto q0 = [&](double y) {
            return transition_prob(0, OutputSymbol::real(y));
        };
        auto q1 = [&](double y) {
            return transition_prob(1, OutputSymbol::real(y));
        };
        // C = 1 + int Q(y|0) log2( Q(y|0) / (Q(y|0)+Q(y|1)) ) dy
        auto integrand = [&](double y) {
            const double a = q0(y), b = q1(y);
            if (a <= 0.0) return 0.0;
            return a * std::log2(a / (a + b));
        };
        const double lo = -1.0 - 12.0 * sigma, hi = 1.0 + 12.0 * sigma;
        return 1.0 + detail::adaptive_simpson(integrand, lo, hi, 1e-8);
    }

    ChannelKind kind_;
    double param_;
};

}  // namespace sgc

#endif
