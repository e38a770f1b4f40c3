#ifndef SGC_TANNER_HPP
#define SGC_TANNER_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgc/rng.hpp"

namespace sgc {

// Bipartite variable/check graph with explicit edge identity. Immutable
// after construction.
class TannerGraph {
  public:
    TannerGraph(std::size_t n_vars, std::size_t n_checks,
                std::vector<std::pair<std::size_t, std::size_t>> edges)
        : n_(n_vars), m_(n_checks), edges_(std::move(edges)) {
        auto sorted = edges_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("duplicate (variable, check) pair");
        var_adj_.resize(n_);
        chk_adj_.resize(m_);
        var_edges_.resize(n_);
        chk_edges_.resize(m_);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto [i, a] = edges_[e];
            if (i >= n_ || a >= m_) throw std::invalid_argument("edge out of range");
            var_adj_[i].push_back(a);
            chk_adj_[a].push_back(i);
            var_edges_[i].push_back(e);
            chk_edges_[a].push_back(e);
        }
    }

    std::size_t num_vars() const { return n_; }
    std::size_t num_checks() const { return m_; }
    std::size_t num_edges() const { return edges_.size(); }

    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
        return edges_;
    }
    std::size_t edge_var(std::size_t e) const { return edges_[e].first; }
    std::size_t edge_chk(std::size_t e) const { return edges_[e].second; }

    const std::vector<std::size_t>& var_neighbors(std::size_t i) const {
        return var_adj_[i];
    }
    const std::vector<std::size_t>& chk_neighbors(std::size_t a) const {
        return chk_adj_[a];
    }
    const std::vector<std::size_t>& var_edge_ids(std::size_t i) const {
        return var_edges_[i];
    }
    const std::vector<std::size_t>& chk_edge_ids(std::size_t a) const {
        return chk_edges_[a];
    }

    std::size_t max_var_degree() const {
        std::size_t d = 0;
        for (auto& v : var_adj_) d = std::max(d, v.size());
        return d;
    }
    std::size_t max_chk_degree() const {
        std::size_t d = 0;
        for (auto& v : chk_adj_) d = std::max(d, v.size());
        return d;
    }

  private:
    std::size_t n_, m_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> var_adj_, chk_adj_;
    std::vector<std::vector<std::size_t>> var_edges_, chk_edges_;
};

struct RegularEnsembleParams {
    std::size_t var_degree;   // l >= 2
    std::size_t chk_degree;   // k > l
    std::size_t block_length; // N, with N*l divisible by k

    RegularEnsembleParams(std::size_t l, std::size_t k, std::size_t n)
        : var_degree(l), chk_degree(k), block_length(n) {
        if (l < 1) throw std::invalid_argument("variable degree must be >= 1");
        if (k <= l) throw std::invalid_argument("check degree must exceed variable degree");
        if ((n * l) % k != 0)
            throw std::invalid_argument("N*l must be divisible by k");
    }

    std::size_t num_checks() const { return block_length * var_degree / chk_degree; }
    double design_rate() const {
        return 1.0 - static_cast<double>(var_degree) / static_cast<double>(chk_degree);
    }
};

struct SampleStats {
    std::size_t multi_pairs = 0;    // (i,a) pairs drawn with multiplicity >= 2
    std::size_t removed_edges = 0;  // sockets lost to the resolution rule
};

// Configuration-model draw: N*l variable sockets matched to M*k check
// sockets by a uniform permutation. Multi-edges of even multiplicity are
// deleted, odd multiplicity keeps a single edge, so resolved degrees can
// fall below (l,k).
inline TannerGraph sample_regular(const RegularEnsembleParams& params, Rng& rng,
                                  SampleStats* stats = nullptr) {
    const std::size_t n = params.block_length;
    const std::size_t m = params.num_checks();
    const std::size_t f = n * params.var_degree;

    std::vector<std::uint32_t> perm(f);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = f; i > 1; --i)
        std::swap(perm[i - 1], perm[uniform_index(rng, i)]);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(f);
    for (std::size_t s = 0; s < f; ++s)
        pairs.emplace_back(s / params.var_degree, perm[s] / params.chk_degree);
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(f);
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        const std::size_t mult = j - i;
        if (mult % 2 == 1)
            edges.push_back(pairs[i]);
        if (stats && mult >= 2) {
            ++stats->multi_pairs;
            stats->removed_edges += mult - (mult % 2);
        }
        i = j;
    }
    return TannerGraph(n, m, std::move(edges));
}

// Girth of the bipartite graph: length of the shortest cycle (even, >= 4),
// or nullopt for a forest. Exhaustive BFS from every variable node.
inline std::optional<std::size_t> girth(const TannerGraph& g) {
    const std::size_t n = g.num_vars(), m = g.num_checks();
    std::size_t best = SIZE_MAX;
    // nodes 0..n-1 variables, n..n+m-1 checks
    auto neighbors = [&](std::size_t u) -> const std::vector<std::size_t>& {
        return u < n ? g.var_neighbors(u) : g.chk_neighbors(u - n);
    };
    auto encode = [&](std::size_t u, bool is_chk) { return is_chk ? n + u : u; };
    std::vector<std::size_t> dist(n + m), parent(n + m);
    for (std::size_t root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        std::deque<std::size_t> q;
        dist[root] = 0;
        parent[root] = SIZE_MAX;
        q.push_back(root);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop_front();
            if (2 * dist[u] >= best) continue;
            const bool u_is_chk = u >= n;
            for (std::size_t w : neighbors(u)) {
                const std::size_t v = encode(w, !u_is_chk);
                if (v == parent[u]) continue;  // no parallel edges after resolution
                if (dist[v] == SIZE_MAX) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push_back(v);
                } else {
                    best = std::min(best, dist[u] + dist[v] + 1);
                }
            }
        }
    }
    if (best == SIZE_MAX) return std::nullopt;
    return best;
}

// Monte Carlo estimate of P{ B_{i->a}(r) is cycle-free } for a uniformly
// random directed edge of a fresh ensemble draw. The radius counts
// non-reversing path length in edges, so variable generations sit at even
// distances and check layers at odd ones.
inline double tree_neighborhood_fraction(const RegularEnsembleParams& params,
                                         std::size_t radius, std::size_t trials,
                                         Rng& rng) {
    if (radius == 0) return 1.0;
    std::size_t tree_count = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const TannerGraph g = sample_regular(params, rng);
        if (g.num_edges() == 0) {
            ++tree_count;
            continue;
        }
        const std::size_t e = uniform_index(rng, g.num_edges());
        const std::size_t root = g.edge_var(e);
        const std::size_t avoid = g.edge_chk(e);

        std::vector<char> seen_var(g.num_vars(), 0), seen_chk(g.num_checks(), 0);
        seen_var[root] = 1;
        bool is_tree = true;
        // frontier of (variable, check it was entered through); paths never
        // immediately reverse
        std::vector<std::pair<std::size_t, std::size_t>> frontier{{root, avoid}};
        for (std::size_t dist = 0; dist < radius && is_tree && !frontier.empty();
             dist += 2) {
            std::vector<std::pair<std::size_t, std::size_t>> next;
            const bool expand_vars = dist + 1 < radius;
            for (auto [i, entry] : frontier) {
                for (std::size_t a : g.var_neighbors(i)) {
                    if (a == entry) continue;
                    if (seen_chk[a]) {
                        is_tree = false;
                        break;
                    }
                    seen_chk[a] = 1;
                    if (!expand_vars) continue;
                    for (std::size_t j : g.chk_neighbors(a)) {
                        if (j == i) continue;
                        if (seen_var[j]) {
                            is_tree = false;
                            break;
                        }
                        seen_var[j] = 1;
                        next.emplace_back(j, a);
                    }
                    if (!is_tree) break;
                }
                if (!is_tree) break;
            }
            frontier = std::move(next);
        }
        if (is_tree) ++tree_count;
    }
    return static_cast<double>(tree_count) / static_cast<double>(trials);
}

// alist interchange format: "N M", "max_var_deg max_chk_deg", the two degree
// lists, then 1-indexed adjacency lists (variables first). Zero padding on
// the adjacency lines is tolerated on input and not produced on output.
inline std::string to_alist(const TannerGraph& g) {
    if (g.num_edges() == 0)
        throw std::invalid_argument("refusing to serialize a graph with no edges");
    std::ostringstream os;
    os << g.num_vars() << ' ' << g.num_checks() << '\n';
    os << g.max_var_degree() << ' ' << g.max_chk_degree() << '\n';
    for (std::size_t i = 0; i < g.num_vars(); ++i)
        os << g.var_neighbors(i).size() << (i + 1 < g.num_vars() ? ' ' : '\n');
    for (std::size_t a = 0; a < g.num_checks(); ++a)
        os << g.chk_neighbors(a).size() << (a + 1 < g.num_checks() ? ' ' : '\n');
    for (std::size_t i = 0; i < g.num_vars(); ++i) {
        const auto& adj = g.var_neighbors(i);
        for (std::size_t k = 0; k < adj.size(); ++k)
            os << adj[k] + 1 << (k + 1 < adj.size() ? ' ' : '\n');
        if (adj.empty()) os << '\n';
    }
    for (std::size_t a = 0; a < g.num_checks(); ++a) {
        const auto& adj = g.chk_neighbors(a);
        for (std::size_t k = 0; k < adj.size(); ++k)
            os << adj[k] + 1 << (k + 1 < adj.size() ? ' ' : '\n');
        if (adj.empty()) os << '\n';
    }
    return os.str();
}

inline TannerGraph from_alist(std::istream& in) {
    auto next = [&in]() -> long long {
        long long v;
        if (!(in >> v)) throw std::invalid_argument("alist: truncated input");
        return v;
    };
    const long long n = next(), m = next();
    if (n <= 0 || m <= 0) throw std::invalid_argument("alist: bad dimensions");
    const long long maxvd = next(), maxcd = next();
    std::vector<long long> vdeg(n), cdeg(m);
    for (auto& d : vdeg) {
        d = next();
        if (d < 0 || d > maxvd) throw std::invalid_argument("alist: bad variable degree");
    }
    for (auto& d : cdeg) {
        d = next();
        if (d < 0 || d > maxcd) throw std::invalid_argument("alist: bad check degree");
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::vector<std::size_t>> chk_of_var(n);
    for (long long i = 0; i < n; ++i) {
        for (long long k = 0; k < vdeg[i]; ++k) {
            const long long a = next();
            if (a == 0) { --k; continue; }  // tolerate zero padding
            if (a < 1 || a > m) throw std::invalid_argument("alist: check index range");
            chk_of_var[i].push_back(static_cast<std::size_t>(a - 1));
            edges.emplace_back(i, a - 1);
        }
    }
    // The check-side lists are redundant; read and verify consistency.
    std::vector<std::vector<std::size_t>> var_of_chk(m);
    for (long long a = 0; a < m; ++a) {
        for (long long k = 0; k < cdeg[a]; ++k) {
            const long long i = next();
            if (i == 0) { --k; continue; }
            if (i < 1 || i > n) throw std::invalid_argument("alist: variable index range");
            var_of_chk[a].push_back(static_cast<std::size_t>(i - 1));
        }
    }
    for (auto& [i, a] : edges) {
        auto& lst = var_of_chk[a];
        if (std::find(lst.begin(), lst.end(), i) == lst.end())
            throw std::invalid_argument("alist: adjacency lists disagree");
    }
    std::size_t check_side_edges = 0;
    for (auto& lst : var_of_chk) check_side_edges += lst.size();
    if (check_side_edges != edges.size())
        throw std::invalid_argument("alist: adjacency lists disagree");
    if (edges.empty()) throw std::invalid_argument("alist: graph has no edges");
    return TannerGraph(static_cast<std::size_t>(n), static_cast<std::size_t>(m),
                       std::move(edges));
}

inline TannerGraph from_alist(const std::string& text) {
    std::istringstream is(text);
    return from_alist(is);
}

}  // namespace sgc

#endif
