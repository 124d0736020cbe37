#include "asymde/gf2.hpp"

#include <bit>
#include <cstring>

#include "asymde/kernels.hpp"

namespace asymde::gf2 {

GF2Matrix::GF2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0) {}

void GF2Matrix::add_row(std::size_t dst, std::size_t src) {
    kernels::active().xor_words(row(dst), row(src), wpr_);
}

std::vector<std::uint64_t> GF2Matrix::multiply(const std::vector<std::uint64_t>& x) const {
    BitVec out = make_bitvec(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        const std::uint64_t* rw = row(r);
        for (std::size_t w = 0; w < wpr_; ++w) acc ^= rw[w] & x[w];
        bv_set(out, r, std::popcount(acc) & 1);
    }
    return out;
}

GF2Matrix GF2Matrix::identity(std::size_t n) {
    GF2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

GF2Matrix GF2Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
    GF2Matrix m(rows.size(), rows.at(0).size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            if (rows[r][c]) m.set(r, c, true);
    return m;
}

BitVec make_bitvec(std::size_t nbits) { return BitVec((nbits + 63) / 64, 0); }

bool bv_is_zero(const BitVec& v) {
    for (auto w : v)
        if (w) return false;
    return true;
}

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> eliminate(GF2Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t w = 0; w < m.words_per_row(); ++w)
                std::swap(m.row(r)[w], m.row(p)[w]);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m.get(i, c)) m.add_row(i, r);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const GF2Matrix& a) {
    GF2Matrix m = a;
    return eliminate(m).size();
}

GF2Basis null_space_basis(const GF2Matrix& a) {
    GF2Matrix m = a;
    const std::vector<std::size_t> pivots = eliminate(m);

    std::vector<char> is_pivot(a.cols(), 0);
    for (auto c : pivots) is_pivot[c] = 1;

    GF2Basis basis;
    basis.cols = a.cols();
    basis.pivot_cols = pivots;
    for (std::size_t fc = 0; fc < a.cols(); ++fc) {
        if (is_pivot[fc]) continue;
        BitVec v = make_bitvec(a.cols());
        bv_set(v, fc, true);
        // back-substitute: pivot row r has its pivot at pivots[r]
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (m.get(r, fc)) bv_set(v, pivots[r], true);
        basis.rows.push_back(std::move(v));
    }
    return basis;
}

std::vector<BitVec> enumerate_codewords(const GF2Matrix& a, std::size_t cap) {
    const GF2Basis basis = null_space_basis(a);
    const std::size_t dim = basis.size();
    if (dim >= 63 || (std::size_t{1} << dim) > cap)
        throw CapacityExceeded("null space of dimension " + std::to_string(dim) +
                               " exceeds enumeration cap");
    const std::size_t count = std::size_t{1} << dim;
    std::vector<BitVec> words;
    words.reserve(count);
    const std::size_t nw = make_bitvec(a.cols()).size();
    for (std::size_t mask = 0; mask < count; ++mask) {
        BitVec x(nw, 0);
        for (std::size_t b = 0; b < dim; ++b)
            if ((mask >> b) & 1)
                kernels::active().xor_words(x.data(), basis.rows[b].data(), nw);
        words.push_back(std::move(x));
    }
    return words;
}

}  // namespace asymde::gf2
