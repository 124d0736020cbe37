#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace asymde::gf2 {

// Dense matrix over GF(2), rows packed into 64-bit words.
class GF2Matrix {
public:
    GF2Matrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (word(r, c >> 6) >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t& w = bits_[r * wpr_ + (c >> 6)];
        const std::uint64_t m = std::uint64_t{1} << (c & 63);
        if (v) w |= m; else w &= ~m;
    }
    void flip(std::size_t r, std::size_t c) {
        bits_[r * wpr_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
    }

    std::uint64_t* row(std::size_t r) { return bits_.data() + r * wpr_; }
    const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * wpr_; }

    // xor row src into row dst
    void add_row(std::size_t dst, std::size_t src);

    // A * x over GF(2); x packed as bit vector of length cols()
    std::vector<std::uint64_t> multiply(const std::vector<std::uint64_t>& x) const;

    static GF2Matrix identity(std::size_t n);
    static GF2Matrix from_rows(const std::vector<std::vector<int>>& rows);

private:
    std::uint64_t word(std::size_t r, std::size_t wi) const { return bits_[r * wpr_ + wi]; }

    std::size_t rows_, cols_, wpr_;
    std::vector<std::uint64_t> bits_;
};

// Packed bit vector helpers used by the encoder and the audits.
using BitVec = std::vector<std::uint64_t>;
BitVec make_bitvec(std::size_t nbits);
inline bool bv_get(const BitVec& v, std::size_t i) { return (v[i >> 6] >> (i & 63)) & 1u; }
inline void bv_set(BitVec& v, std::size_t i, bool b) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (b) v[i >> 6] |= m; else v[i >> 6] &= ~m;
}
bool bv_is_zero(const BitVec& v);

// Null-space basis of a matrix, rows are generator vectors.
struct GF2Basis {
    std::size_t cols = 0;                 // ambient dimension
    std::vector<BitVec> rows;             // basis of {x : A x = 0}
    std::vector<std::size_t> pivot_cols;  // pivot record from elimination

    std::size_t size() const { return rows.size(); }
};

struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t rank(const GF2Matrix& a);

// Deterministic elimination: first nonzero pivot in scan order, so the
// generator matrix is reproducible across runs.
GF2Basis null_space_basis(const GF2Matrix& a);

// All 2^(cols - rank) codewords; throws CapacityExceeded if that exceeds cap.
std::vector<BitVec> enumerate_codewords(const GF2Matrix& a, std::size_t cap);

}  // namespace asymde::gf2
