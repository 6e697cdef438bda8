#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrm {

// Dense bit-packed vector over GF(2). Public indices are 1-based.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t len);

    // Parses a string of '0'/'1' characters; whitespace is ignored.
    static BitVector from_string(std::string_view bits);
    static BitVector ones(std::size_t len);
    static BitVector unit(std::size_t len, std::size_t i);
    static BitVector concat(const BitVector& a, const BitVector& b);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool v = true);
    void flip(std::size_t i);

    std::size_t weight() const;
    bool any() const;
    bool none() const { return !any(); }
    // 1-based position of the first set bit, or 0 if there is none.
    std::size_t first_one() const;
    std::vector<std::size_t> support() const;

    bool dot(const BitVector& o) const;
    BitVector slice(std::size_t first, std::size_t len) const;
    BitVector punctured() const { return slice(2, len_ - 1); }

    BitVector& operator^=(const BitVector& o);
    BitVector& operator&=(const BitVector& o);
    BitVector& operator|=(const BitVector& o);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

    bool operator==(const BitVector& o) const = default;
    std::strong_ordering operator<=>(const BitVector& o) const;

    std::string to_string() const;
    std::size_t hash() const;

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

  private:
    void check_index(std::size_t i) const;
    void check_same_size(const BitVector& o) const;

    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const { return v.hash(); }
};

// Dense GF(2) matrix stored as a list of rows. Public indices are 1-based.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);
    BitMatrix(std::vector<BitVector> rows, std::size_t cols);

    static BitMatrix from_strings(const std::vector<std::string>& rows);
    static BitMatrix identity(std::size_t n);
    static BitMatrix vstack(const BitMatrix& a, const BitMatrix& b);

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return cols_; }

    const BitVector& row(std::size_t i) const;
    BitVector& row(std::size_t i);
    const std::vector<BitVector>& rows() const { return rows_; }
    BitVector column(std::size_t j) const;

    bool get(std::size_t i, std::size_t j) const { return row(i).get(j); }
    void set(std::size_t i, std::size_t j, bool v = true) { row(i).set(j, v); }

    void append_row(BitVector v);

    BitMatrix transpose() const;
    // x·M for a row vector x of length n_rows.
    BitVector left_multiply(const BitVector& x) const;
    BitMatrix operator*(const BitMatrix& o) const;
    BitMatrix kron(const BitMatrix& o) const;
    // Keeps only the listed columns (1-based), in the given order.
    BitMatrix select_columns(const std::vector<std::size_t>& cols) const;

    bool operator==(const BitMatrix& o) const = default;

    // One row per line, '0'/'1' characters.
    std::string to_string() const;
    static BitMatrix parse(std::string_view text);

  private:
    std::vector<BitVector> rows_;
    std::size_t cols_ = 0;
};

// Reduced row echelon form with leftmost pivots; pivot columns (1-based) are
// written to `pivots` when given. Zero rows are dropped.
BitMatrix row_reduce(const BitMatrix& m, std::vector<std::size_t>* pivots = nullptr);

std::size_t rank(const BitMatrix& m);

// Basis of the left kernel {x : x·M = 0}.
BitMatrix kernel(const BitMatrix& m);

// [[1,1],[0,1]] tensored m times.
BitMatrix tensor_power_uut(unsigned m);

// Coefficients x with x·M = v, if v lies in the row space of M.
std::optional<BitVector> solve_membership(const BitVector& v, const BitMatrix& m);

bool in_row_space(const BitVector& v, const BitMatrix& m);

// All 2^rows combinations of the rows of m; rows must be few.
std::vector<BitVector> enumerate_row_space(const BitMatrix& m);

}  // namespace qrm
