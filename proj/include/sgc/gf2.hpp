#ifndef SGC_GF2_HPP
#define SGC_GF2_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgc/bitvec.hpp"
#include "sgc/rng.hpp"
#include "sgc/tanner.hpp"

namespace sgc {

using Codeword = BitVec;

// M x N binary matrix, bit-packed rows. Row a has support equal to the
// neighborhood of check a in the companion Tanner graph.
class ParityCheckMatrix {
  public:
    ParityCheckMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), r_(rows, BitVec(cols)) {}

    explicit ParityCheckMatrix(const TannerGraph& g)
        : ParityCheckMatrix(g.num_checks(), g.num_vars()) {
        for (auto& [i, a] : g.edges()) r_[a].set(i, true);
    }

    static ParityCheckMatrix from_rows(
        const std::vector<std::vector<std::uint8_t>>& rows) {
        if (rows.empty()) throw std::invalid_argument("empty matrix");
        ParityCheckMatrix h(rows.size(), rows[0].size());
        for (std::size_t a = 0; a < rows.size(); ++a) {
            if (rows[a].size() != rows[0].size())
                throw std::invalid_argument("ragged rows");
            for (std::size_t i = 0; i < rows[a].size(); ++i)
                if (rows[a][i]) h.set(a, i, true);
        }
        return h;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool get(std::size_t a, std::size_t i) const { return r_[a].get(i); }
    void set(std::size_t a, std::size_t i, bool v) { r_[a].set(i, v); }
    const BitVec& row(std::size_t a) const { return r_[a]; }

    bool is_codeword(const BitVec& x) const {
        if (x.size() != cols_) throw std::invalid_argument("length mismatch");
        for (auto& row : r_)
            if (row.dot(x)) return false;
        return true;
    }

    // Tanner graph with one check node per row (support = row support).
    TannerGraph to_graph() const {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t a = 0; a < rows_; ++a)
            for (std::size_t i = 0; i < cols_; ++i)
                if (r_[a].get(i)) edges.emplace_back(i, a);
        return TannerGraph(cols_, rows_, std::move(edges));
    }

    std::size_t rank() const { return reduced().pivots.size(); }

    // Basis of the null space over GF(2); size N - rank(H).
    std::vector<Codeword> codeword_basis() const {
        const auto red = reduced();
        std::vector<char> is_pivot(cols_, 0);
        for (auto p : red.pivots) is_pivot[p] = 1;
        std::vector<Codeword> basis;
        for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
            if (is_pivot[free_col]) continue;
            Codeword v(cols_);
            v.set(free_col, true);
            for (std::size_t r = 0; r < red.pivots.size(); ++r)
                if (red.rows[r].get(free_col)) v.set(red.pivots[r], true);
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    struct Reduced {
        std::vector<BitVec> rows;
        std::vector<std::size_t> pivots;  // pivot column of rows[r]
    };

    // Row echelon form with back substitution (RREF).
    Reduced reduced() const {
        Reduced out;
        out.rows = r_;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t sel = r;
            while (sel < rows_ && !out.rows[sel].get(c)) ++sel;
            if (sel == rows_) continue;
            std::swap(out.rows[r], out.rows[sel]);
            for (std::size_t q = 0; q < rows_; ++q)
                if (q != r && out.rows[q].get(c)) out.rows[q] ^= out.rows[r];
            out.pivots.push_back(c);
            ++r;
        }
        out.rows.resize(out.pivots.size());
        return out;
    }

    std::size_t rows_, cols_;
    std::vector<BitVec> r_;
};

// Uniform GF(2) combination of the basis vectors.
inline Codeword sample_codeword(const std::vector<Codeword>& basis,
                                std::size_t block_length, Rng& rng) {
    Codeword x(block_length);
    for (const auto& b : basis)
        if (bernoulli(rng, 0.5)) x ^= b;
    return x;
}

inline Codeword sample_codeword(const ParityCheckMatrix& h, Rng& rng) {
    return sample_codeword(h.codeword_basis(), h.cols(), rng);
}

// Number of parity checks violated by x; zero exactly on codewords.
inline std::size_t unsat_count(const ParityCheckMatrix& h, const BitVec& x) {
    if (x.size() != h.cols()) throw std::invalid_argument("length mismatch");
    std::size_t u = 0;
    for (std::size_t a = 0; a < h.rows(); ++a)
        if (h.row(a).dot(x)) ++u;
    return u;
}

// The parity-check matrix used as the running worked example: N=7, M=3.
inline ParityCheckMatrix example_hamming_like() {
    return ParityCheckMatrix::from_rows({{1, 0, 1, 0, 1, 0, 1},
                                         {0, 1, 1, 0, 0, 1, 1},
                                         {0, 0, 0, 1, 1, 1, 1}});
}

}  // namespace sgc

#endif
