#ifndef SGC_SAT_HPP
#define SGC_SAT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgc/factor_graph.hpp"
#include "sgc/llr.hpp"
#include "sgc/rng.hpp"

namespace sgc {

struct Literal {
    std::size_t var;
    bool negated;

    bool satisfied_by(std::uint8_t value) const {
        // value 1 = True
        return negated ? value == 0 : value == 1;
    }
    bool operator<(const Literal& o) const {
        return var != o.var ? var < o.var : negated < o.negated;
    }
    bool operator==(const Literal& o) const {
        return var == o.var && negated == o.negated;
    }
};

struct CnfFormula {
    std::size_t num_vars = 0;
    std::vector<std::vector<Literal>> clauses;

    bool clause_satisfied(std::size_t c, const std::vector<std::uint8_t>& a) const {
        for (const auto& lit : clauses[c])
            if (lit.satisfied_by(a[lit.var])) return true;
        return false;
    }
    bool satisfied(const std::vector<std::uint8_t>& a) const {
        for (std::size_t c = 0; c < clauses.size(); ++c)
            if (!clause_satisfied(c, a)) return false;
        return true;
    }
};

// Uniform k-clauses with uniform signs, drawn independently; repeated
// clauses are allowed (and counted by the caller if needed). The
// duplicate-free variant redraws until all clauses are distinct.
inline CnfFormula random_ksat(std::size_t n, double alpha, std::size_t k, Rng& rng,
                              bool allow_duplicates = true) {
    if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= N");
    const std::size_t m = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
    double log_count = 0.0;  // log2 of the number of distinct k-clauses
    for (std::size_t j = 0; j < k; ++j)
        log_count += std::log2(static_cast<double>(n - j) / static_cast<double>(j + 1));
    log_count += static_cast<double>(k);
    if (!allow_duplicates && std::log2(static_cast<double>(std::max<std::size_t>(m, 1))) > log_count)
        throw std::invalid_argument("more distinct clauses requested than exist");

    CnfFormula f;
    f.num_vars = n;
    std::set<std::vector<Literal>> seen;
    while (f.clauses.size() < m) {
        std::vector<std::size_t> vars;
        while (vars.size() < k) {
            const std::size_t v = uniform_index(rng, n);
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        std::vector<Literal> clause;
        clause.reserve(k);
        for (std::size_t v : vars) clause.push_back({v, bernoulli(rng, 0.5)});
        if (!allow_duplicates) {
            auto key = clause;
            std::sort(key.begin(), key.end());
            if (!seen.insert(key).second) continue;
        }
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

// Uniform measure over satisfying assignments, by exhaustive enumeration.
// Marginals are P(x_i = True). Throws on UNSAT input (no measure exists).
struct SatMarginals {
    std::vector<double> p_true;
    std::uint64_t solution_count = 0;
};

inline SatMarginals brute_force_marginals(const CnfFormula& f) {
    if (f.num_vars > 24) throw std::invalid_argument("too many variables to enumerate");
    SatMarginals out;
    out.p_true.assign(f.num_vars, 0.0);
    std::vector<std::uint8_t> a(f.num_vars);
    const std::size_t combos = std::size_t{1} << f.num_vars;
    for (std::size_t mask = 0; mask < combos; ++mask) {
        for (std::size_t i = 0; i < f.num_vars; ++i) a[i] = (mask >> i) & 1u;
        if (!f.satisfied(a)) continue;
        ++out.solution_count;
        for (std::size_t i = 0; i < f.num_vars; ++i)
            if (a[i]) out.p_true[i] += 1.0;
    }
    if (out.solution_count == 0) throw std::runtime_error("formula is UNSAT");
    for (auto& p : out.p_true) p /= static_cast<double>(out.solution_count);
    return out;
}

inline FactorGraphGeneric to_factor_graph(const CnfFormula& f) {
    FactorGraphGeneric g;
    g.num_vars = f.num_vars;
    for (const auto& clause : f.clauses) {
        FactorGraphGeneric::Factor fac;
        std::vector<bool> negated;
        for (const auto& lit : clause) {
            fac.scope.push_back(lit.var);
            negated.push_back(lit.negated);
        }
        fac.psi = [negated](const std::uint8_t* bits) {
            for (std::size_t s = 0; s < negated.size(); ++s) {
                const bool sat = negated[s] ? bits[s] == 0 : bits[s] == 1;
                if (sat) return 1.0;
            }
            return 0.0;
        };
        g.factors.push_back(std::move(fac));
    }
    return g;
}

// DIMACS CNF, 1-indexed signed literals, clauses terminated by 0.
inline std::string to_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
    for (const auto& clause : f.clauses) {
        for (const auto& lit : clause)
            os << (lit.negated ? '-' : ' ') << lit.var + 1 << ' ';
        os << "0\n";
    }
    return os.str();
}

inline CnfFormula from_dimacs(std::istream& in) {
    CnfFormula f;
    std::string line;
    bool have_header = false;
    long long declared_clauses = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            long long n;
            if (!(ls >> p >> cnf >> n >> declared_clauses) || cnf != "cnf" || n <= 0)
                throw std::invalid_argument("bad DIMACS header");
            f.num_vars = static_cast<std::size_t>(n);
            have_header = true;
            continue;
        }
        if (!have_header) throw std::invalid_argument("DIMACS clause before header");
        long long lit;
        std::vector<Literal> clause;
        while (ls >> lit) {
            if (lit == 0) {
                if (!clause.empty()) f.clauses.push_back(clause);
                clause.clear();
                continue;
            }
            const std::size_t v = static_cast<std::size_t>(std::llabs(lit)) - 1;
            if (v >= f.num_vars) throw std::invalid_argument("DIMACS literal out of range");
            clause.push_back({v, lit < 0});
        }
        if (!clause.empty()) f.clauses.push_back(clause);
    }
    if (!have_header) throw std::invalid_argument("missing DIMACS header");
    if (declared_clauses >= 0 &&
        static_cast<std::size_t>(declared_clauses) != f.clauses.size())
        throw std::invalid_argument("DIMACS clause count mismatch");
    return f;
}

inline CnfFormula from_dimacs(const std::string& text) {
    std::istringstream is(text);
    return from_dimacs(is);
}

// Rooted random tree formula: every variable of generation g < depth spawns
// Poisson(k alpha) clauses, each holding that variable plus k-1 fresh
// children, all literal signs fair coins. Boundary = generation-depth
// variables.
struct TreeFormula {
    CnfFormula formula;
    std::size_t root = 0;
    std::size_t depth = 0;
    std::vector<std::size_t> generation;  // per variable
    std::vector<std::size_t> boundary;    // variables at generation == depth
};

inline TreeFormula sample_tree_formula(std::size_t k, double alpha, std::size_t depth,
                                       Rng& rng) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    TreeFormula t;
    t.depth = depth;
    t.formula.num_vars = 1;
    t.generation.push_back(0);
    std::poisson_distribution<int> poisson(static_cast<double>(k) * alpha);
    std::vector<std::size_t> frontier{0};
    for (std::size_t g = 0; g < depth; ++g) {
        std::vector<std::size_t> next;
        for (std::size_t v : frontier) {
            const int spawn = poisson(rng);
            for (int c = 0; c < spawn; ++c) {
                std::vector<Literal> clause;
                clause.push_back({v, bernoulli(rng, 0.5)});
                for (std::size_t j = 0; j + 1 < k; ++j) {
                    const std::size_t child = t.formula.num_vars++;
                    t.generation.push_back(g + 1);
                    next.push_back(child);
                    clause.push_back({child, bernoulli(rng, 0.5)});
                }
                t.formula.clauses.push_back(std::move(clause));
            }
        }
        frontier = std::move(next);
    }
    for (std::size_t v = 0; v < t.formula.num_vars; ++v)
        if (t.generation[v] == depth && depth > 0) t.boundary.push_back(v);
    return t;
}

namespace detail {

// Unnormalized root measure of the tree formula with the boundary clamped;
// returns false if the conditioned formula is UNSAT. Exact sum-product on
// the tree (messages normalized to avoid underflow; only the ratio at the
// root is used).
struct TreeElim {
    const TreeFormula& t;
    std::vector<std::vector<std::size_t>> var_clauses;   // per var, clause ids
    std::vector<char> clamped;
    std::vector<std::uint8_t> clamp_value;

    explicit TreeElim(const TreeFormula& tree) : t(tree) {
        var_clauses.resize(t.formula.num_vars);
        for (std::size_t c = 0; c < t.formula.clauses.size(); ++c)
            for (const auto& lit : t.formula.clauses[c])
                var_clauses[lit.var].push_back(c);
        clamped.assign(t.formula.num_vars, 0);
        clamp_value.assign(t.formula.num_vars, 0);
    }

    // message from variable v upward, excluding clause `skip`
    std::array<double, 2> var_message(std::size_t v, std::size_t skip) {
        std::array<double, 2> m{1.0, 1.0};
        if (clamped[v]) {
            m = {clamp_value[v] == 0 ? 1.0 : 0.0, clamp_value[v] == 1 ? 1.0 : 0.0};
        }
        for (std::size_t c : var_clauses[v]) {
            if (c == skip) continue;
            const auto cm = clause_message(c, v);
            m[0] *= cm[0];
            m[1] *= cm[1];
        }
        const double z = m[0] + m[1];
        if (z > 0.0) {
            m[0] /= z;
            m[1] /= z;
        }
        return m;
    }

    // message from clause c to its parent variable v (v in scope; children
    // are the other scope variables, strictly deeper by construction)
    std::array<double, 2> clause_message(std::size_t c, std::size_t parent) {
        const auto& clause = t.formula.clauses[c];
        std::vector<std::array<double, 2>> child_msgs;
        std::vector<std::size_t> child_idx;
        std::size_t parent_idx = 0;
        for (std::size_t s = 0; s < clause.size(); ++s) {
            if (clause[s].var == parent) {
                parent_idx = s;
                continue;
            }
            child_idx.push_back(s);
            child_msgs.push_back(var_message(clause[s].var, c));
        }
        std::array<double, 2> out{0.0, 0.0};
        const std::size_t combos = std::size_t{1} << child_idx.size();
        for (int pv = 0; pv <= 1; ++pv) {
            const bool parent_sat =
                clause[parent_idx].satisfied_by(static_cast<std::uint8_t>(pv));
            for (std::size_t mask = 0; mask < combos; ++mask) {
                bool sat = parent_sat;
                double w = 1.0;
                for (std::size_t j = 0; j < child_idx.size(); ++j) {
                    const std::uint8_t bit = (mask >> j) & 1u;
                    w *= child_msgs[j][bit];
                    sat = sat || clause[child_idx[j]].satisfied_by(bit);
                }
                if (sat) out[pv] += w;
            }
        }
        return out;
    }
};

}  // namespace detail

struct DecayProbeResult {
    double h_max = 0.0;  // over admissible boundary assignments
    double h_min = 0.0;
    std::size_t admissible = 0;
    std::size_t evaluated = 0;
};

enum class BoundaryMethod { Exhaustive, Sampled };

// Extremes over boundary assignments of the root half log-likelihood
// (1/2) ln mu(True|boundary)/mu(False|boundary); +-inf when the root is
// forced. Exhaustive enumerates all assignments (boundary must be small);
// Sampled lower-bounds the spread from random assignments.
inline DecayProbeResult decay_probe(const TreeFormula& t, BoundaryMethod method,
                                    Rng* rng = nullptr, std::size_t samples = 256) {
    DecayProbeResult res;
    res.h_max = -kInf;
    res.h_min = kInf;

    detail::TreeElim elim(t);
    const std::size_t b = t.boundary.size();

    auto eval_assignment = [&](std::size_t mask) -> std::optional<double> {
        for (std::size_t j = 0; j < b; ++j) {
            elim.clamped[t.boundary[j]] = 1;
            elim.clamp_value[t.boundary[j]] = (mask >> j) & 1u;
        }
        std::array<double, 2> root{1.0, 1.0};
        if (elim.clamped[t.root]) {
            root = {elim.clamp_value[t.root] == 0 ? 1.0 : 0.0,
                    elim.clamp_value[t.root] == 1 ? 1.0 : 0.0};
        }
        for (std::size_t c : elim.var_clauses[t.root]) {
            const auto cm = elim.clause_message(c, t.root);
            root[0] *= cm[0];
            root[1] *= cm[1];
        }
        const double z = root[0] + root[1];
        if (z <= 0.0) return std::nullopt;  // inadmissible boundary
        // value 1 = True; h = (1/2) ln mu(True)/mu(False)
        if (root[1] == 0.0) return -kInf;
        if (root[0] == 0.0) return kInf;
        return 0.5 * std::log(root[1] / root[0]);
    };

    if (method == BoundaryMethod::Exhaustive) {
        if (b > 24) throw std::invalid_argument("boundary too large to enumerate");
        const std::size_t combos = std::size_t{1} << b;
        for (std::size_t mask = 0; mask < combos; ++mask) {
            ++res.evaluated;
            if (auto h = eval_assignment(mask)) {
                ++res.admissible;
                res.h_max = std::max(res.h_max, *h);
                res.h_min = std::min(res.h_min, *h);
            }
        }
    } else {
        if (!rng) throw std::invalid_argument("sampled method needs a generator");
        for (std::size_t s = 0; s < samples; ++s) {
            std::size_t mask = 0;
            for (std::size_t j = 0; j < b; ++j)
                if (bernoulli(*rng, 0.5)) mask |= std::size_t{1} << j;
            ++res.evaluated;
            if (auto h = eval_assignment(mask)) {
                ++res.admissible;
                res.h_max = std::max(res.h_max, *h);
                res.h_min = std::min(res.h_min, *h);
            }
        }
    }
    if (res.admissible == 0)
        throw std::runtime_error("no admissible boundary extension found");
    return res;
}

}  // namespace sgc

#endif
