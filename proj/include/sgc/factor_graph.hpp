#ifndef SGC_FACTOR_GRAPH_HPP
#define SGC_FACTOR_GRAPH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sgc {

// Factor graph over binary variables with arbitrary nonnegative
// compatibility functions.
struct FactorGraphGeneric {
    struct Factor {
        std::vector<std::size_t> scope;  // ordered, distinct variable ids
        // evaluator over an assignment of the scope (bits, scope order)
        std::function<double(const std::uint8_t*)> psi;
    };

    std::size_t num_vars = 0;
    std::vector<Factor> factors;

    void validate() const {
        for (const auto& f : factors) {
            if (f.scope.size() > 20) throw std::invalid_argument("factor scope too wide");
            for (auto v : f.scope)
                if (v >= num_vars) throw std::invalid_argument("scope out of range");
        }
    }
};

using Marginals = std::vector<std::array<double, 2>>;

// Flooding-schedule sum-product over a generic binary factor graph, with
// per-message normalization and optional damping on the factor-to-variable
// messages. Variable messages start from the product of adjacent degree-1
// factors, so unary evidence is active from the first round.
class GenericBp {
  public:
    explicit GenericBp(const FactorGraphGeneric& g, double damping = 0.0)
        : g_(g), damping_(damping) {
        g_.validate();
        if (damping < 0.0 || damping >= 1.0)
            throw std::invalid_argument("damping must lie in [0,1)");
        var_factors_.resize(g_.num_vars);
        for (std::size_t f = 0; f < g_.factors.size(); ++f)
            for (std::size_t s = 0; s < g_.factors[f].scope.size(); ++s)
                var_factors_[g_.factors[f].scope[s]].push_back({f, s});
        // edge storage: per factor, per scope slot
        var_to_fac_.resize(g_.factors.size());
        fac_to_var_.resize(g_.factors.size());
        for (std::size_t f = 0; f < g_.factors.size(); ++f) {
            var_to_fac_[f].assign(g_.factors[f].scope.size(), {0.5, 0.5});
            fac_to_var_[f].assign(g_.factors[f].scope.size(), {0.5, 0.5});
        }
        init_variable_messages();
    }

    bool unsat_evidence() const { return unsat_evidence_; }

    // One parallel round: factor pass from the current variable messages,
    // then variable pass from the fresh factor messages.
    void step() {
        factor_pass();
        variable_pass();
    }

    void run(std::size_t iterations) {
        for (std::size_t t = 0; t < iterations && !unsat_evidence_; ++t) step();
    }

    Marginals marginals() const {
        Marginals out(g_.num_vars, {1.0, 1.0});
        for (std::size_t i = 0; i < g_.num_vars; ++i) {
            for (auto [f, s] : var_factors_[i]) {
                out[i][0] *= fac_to_var_[f][s][0];
                out[i][1] *= fac_to_var_[f][s][1];
            }
            const double z = out[i][0] + out[i][1];
            if (z <= 0.0) {
                unsat_evidence_ = true;
                out[i] = {0.5, 0.5};
                continue;
            }
            out[i][0] /= z;
            out[i][1] /= z;
        }
        return out;
    }

    // nu_{i->f} for the slot s of factor f, and nu-hat_{f->i}.
    std::array<double, 2> var_message(std::size_t f, std::size_t s) const {
        return var_to_fac_[f][s];
    }
    std::array<double, 2> fac_message(std::size_t f, std::size_t s) const {
        return fac_to_var_[f][s];
    }

  private:
    void init_variable_messages() {
        for (std::size_t f = 0; f < g_.factors.size(); ++f) {
            const auto& scope = g_.factors[f].scope;
            for (std::size_t s = 0; s < scope.size(); ++s) {
                std::array<double, 2> m{1.0, 1.0};
                for (auto [f2, s2] : var_factors_[scope[s]]) {
                    if (f2 == f) continue;
                    if (g_.factors[f2].scope.size() != 1) continue;
                    std::uint8_t bit0 = 0, bit1 = 1;
                    m[0] *= g_.factors[f2].psi(&bit0);
                    m[1] *= g_.factors[f2].psi(&bit1);
                }
                normalize(m);
                var_to_fac_[f][s] = m;
            }
        }
    }

    void normalize(std::array<double, 2>& m) const {
        const double z = m[0] + m[1];
        if (z <= 0.0) {
            unsat_evidence_ = true;
            m = {0.5, 0.5};
            return;
        }
        m[0] /= z;
        m[1] /= z;
    }

    void factor_pass() {
        std::uint8_t assign[20];
        for (std::size_t f = 0; f < g_.factors.size(); ++f) {
            const auto& factor = g_.factors[f];
            const std::size_t deg = factor.scope.size();
            const std::size_t combos = std::size_t{1} << deg;
            std::vector<std::array<double, 2>> fresh(deg, {0.0, 0.0});
            for (std::size_t mask = 0; mask < combos; ++mask) {
                for (std::size_t s = 0; s < deg; ++s)
                    assign[s] = (mask >> s) & 1u;
                const double psi = factor.psi(assign);
                if (psi == 0.0) continue;
                // product of incoming messages, excluding one slot at a time
                double full = psi;
                for (std::size_t s = 0; s < deg; ++s)
                    full *= var_to_fac_[f][s][assign[s]];
                if (full == 0.0) {
                    // recompute per-slot with exclusion to keep zeros exact
                    for (std::size_t s = 0; s < deg; ++s) {
                        double part = psi;
                        for (std::size_t s2 = 0; s2 < deg; ++s2)
                            if (s2 != s) part *= var_to_fac_[f][s2][assign[s2]];
                        fresh[s][assign[s]] += part;
                    }
                } else {
                    for (std::size_t s = 0; s < deg; ++s)
                        fresh[s][assign[s]] += full / var_to_fac_[f][s][assign[s]];
                }
            }
            for (std::size_t s = 0; s < deg; ++s) {
                normalize(fresh[s]);
                if (damping_ > 0.0) {
                    fresh[s][0] = (1.0 - damping_) * fresh[s][0] +
                                  damping_ * fac_to_var_[f][s][0];
                    fresh[s][1] = (1.0 - damping_) * fresh[s][1] +
                                  damping_ * fac_to_var_[f][s][1];
                }
                fac_to_var_[f][s] = fresh[s];
            }
        }
    }

    void variable_pass() {
        for (std::size_t i = 0; i < g_.num_vars; ++i) {
            const auto& adj = var_factors_[i];
            for (auto [f, s] : adj) {
                std::array<double, 2> m{1.0, 1.0};
                for (auto [f2, s2] : adj) {
                    if (f2 == f && s2 == s) continue;
                    m[0] *= fac_to_var_[f2][s2][0];
                    m[1] *= fac_to_var_[f2][s2][1];
                }
                normalize(m);
                var_to_fac_[f][s] = m;
            }
        }
    }

    FactorGraphGeneric g_;
    double damping_;
    mutable bool unsat_evidence_ = false;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> var_factors_;
    std::vector<std::vector<std::array<double, 2>>> var_to_fac_;
    std::vector<std::vector<std::array<double, 2>>> fac_to_var_;
};

inline Marginals generic_bp(const FactorGraphGeneric& g, std::size_t iterations,
                            double damping = 0.0, bool* unsat_evidence = nullptr) {
    GenericBp bp(g, damping);
    bp.run(iterations);
    const Marginals m = bp.marginals();
    if (unsat_evidence) *unsat_evidence = bp.unsat_evidence();
    return m;
}

// Exhaustive marginals for the factorized measure; the oracle counterpart
// of generic_bp. Requires num_vars <= 24; throws if the measure is
// identically zero.
inline Marginals exact_marginals(const FactorGraphGeneric& g) {
    if (g.num_vars > 24) throw std::invalid_argument("too many variables to enumerate");
    g.validate();
    Marginals out(g.num_vars, {0.0, 0.0});
    std::vector<std::uint8_t> assign(g.num_vars);
    std::uint8_t scope_bits[20];
    double z = 0.0;
    const std::size_t combos = std::size_t{1} << g.num_vars;
    for (std::size_t mask = 0; mask < combos; ++mask) {
        for (std::size_t i = 0; i < g.num_vars; ++i) assign[i] = (mask >> i) & 1u;
        double w = 1.0;
        for (const auto& f : g.factors) {
            for (std::size_t s = 0; s < f.scope.size(); ++s)
                scope_bits[s] = assign[f.scope[s]];
            w *= f.psi(scope_bits);
            if (w == 0.0) break;
        }
        if (w == 0.0) continue;
        z += w;
        for (std::size_t i = 0; i < g.num_vars; ++i) out[i][assign[i]] += w;
    }
    if (z <= 0.0) throw std::runtime_error("measure is identically zero");
    for (auto& m : out) {
        m[0] /= z;
        m[1] /= z;
    }
    return out;
}

}  // namespace sgc

#endif
