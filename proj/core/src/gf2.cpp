#include "qrm/gf2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qrm {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t len) { return (len + kWordBits - 1) / kWordBits; }

}  // namespace

BitVector::BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
    std::size_t n = 0;
    for (char c : bits) {
        if (c == '0' || c == '1') {
            ++n;
        } else if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '|') {
            throw std::invalid_argument("BitVector::from_string: bad character '" + std::string(1, c) + "'");
        }
    }
    BitVector v(n);
    std::size_t i = 0;
    for (char c : bits) {
        if (c == '0' || c == '1') {
            ++i;
            if (c == '1') v.set(i);
        }
    }
    return v;
}

BitVector BitVector::ones(std::size_t len) {
    BitVector v(len);
    for (std::size_t w = 0; w < v.words_.size(); ++w) v.words_[w] = ~std::uint64_t{0};
    if (len % kWordBits != 0) v.words_.back() &= (std::uint64_t{1} << (len % kWordBits)) - 1;
    return v;
}

BitVector BitVector::unit(std::size_t len, std::size_t i) {
    BitVector v(len);
    v.set(i);
    return v;
}

BitVector BitVector::concat(const BitVector& a, const BitVector& b) {
    BitVector v(a.len_ + b.len_);
    for (std::size_t i = 1; i <= a.len_; ++i)
        if (a.get(i)) v.set(i);
    for (std::size_t i = 1; i <= b.len_; ++i)
        if (b.get(i)) v.set(a.len_ + i);
    return v;
}

void BitVector::check_index(std::size_t i) const {
    if (i == 0 || i > len_)
        throw std::out_of_range("BitVector index " + std::to_string(i) + " outside 1.." + std::to_string(len_));
}

void BitVector::check_same_size(const BitVector& o) const {
    if (o.len_ != len_)
        throw std::invalid_argument("BitVector length mismatch: " + std::to_string(len_) + " vs " +
                                    std::to_string(o.len_));
}

bool BitVector::get(std::size_t i) const {
    check_index(i);
    --i;
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool v) {
    check_index(i);
    --i;
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (v)
        words_[i / kWordBits] |= mask;
    else
        words_[i / kWordBits] &= ~mask;
}

void BitVector::flip(std::size_t i) {
    check_index(i);
    --i;
    words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
}

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
}

bool BitVector::any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t x) { return x != 0; });
}

std::size_t BitVector::first_one() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w])) + 1;
    return 0;
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t x = words_[w];
        while (x != 0) {
            out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(x)) + 1);
            x &= x - 1;
        }
    }
    return out;
}

bool BitVector::dot(const BitVector& o) const {
    check_same_size(o);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
    return std::popcount(acc) & 1;
}

BitVector BitVector::slice(std::size_t first, std::size_t len) const {
    if (len == 0) return BitVector(0);
    if (first == 0 || first + len - 1 > len_) throw std::out_of_range("BitVector::slice out of range");
    BitVector v(len);
    for (std::size_t i = 0; i < len; ++i)
        if (get(first + i)) v.set(i + 1);
    return v;
}

BitVector& BitVector::operator^=(const BitVector& o) {
    check_same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
}

BitVector& BitVector::operator&=(const BitVector& o) {
    check_same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
}

BitVector& BitVector::operator|=(const BitVector& o) {
    check_same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
}

std::strong_ordering BitVector::operator<=>(const BitVector& o) const {
    if (auto c = len_ <=> o.len_; c != 0) return c;
    // Lexicographic on positions 1..n.
    for (std::size_t i = 1; i <= len_; ++i) {
        bool a = get(i), b = o.get(i);
        if (a != b) return a ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
}

std::string BitVector::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 1; i <= len_; ++i)
        if (get(i)) s[i - 1] = '1';
    return s;
}

std::size_t BitVector::hash() const {
    std::size_t h = len_ * 0x9e3779b97f4a7c15ULL;
    for (auto x : words_) h = (h ^ x) * 0x100000001b3ULL + (h >> 29);
    return h;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows, BitVector(cols)), cols_(cols) {}

BitMatrix::BitMatrix(std::vector<BitVector> rows, std::size_t cols) : rows_(std::move(rows)), cols_(cols) {
    for (const auto& r : rows_)
        if (r.size() != cols_) throw std::invalid_argument("BitMatrix: ragged rows");
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
    std::vector<BitVector> rs;
    rs.reserve(rows.size());
    for (const auto& s : rows) rs.push_back(BitVector::from_string(s));
    std::size_t cols = rs.empty() ? 0 : rs.front().size();
    return BitMatrix(std::move(rs), cols);
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 1; i <= n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::vstack(const BitMatrix& a, const BitMatrix& b) {
    if (a.n_rows() == 0) return b;
    if (b.n_rows() == 0) return a;
    if (a.cols_ != b.cols_) throw std::invalid_argument("BitMatrix::vstack: column mismatch");
    BitMatrix out = a;
    for (const auto& r : b.rows_) out.rows_.push_back(r);
    return out;
}

const BitVector& BitMatrix::row(std::size_t i) const {
    if (i == 0 || i > rows_.size()) throw std::out_of_range("BitMatrix row " + std::to_string(i) + " out of range");
    return rows_[i - 1];
}

BitVector& BitMatrix::row(std::size_t i) {
    if (i == 0 || i > rows_.size()) throw std::out_of_range("BitMatrix row " + std::to_string(i) + " out of range");
    return rows_[i - 1];
}

BitVector BitMatrix::column(std::size_t j) const {
    BitVector c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].get(j)) c.set(i + 1);
    return c;
}

void BitMatrix::append_row(BitVector v) {
    if (rows_.empty() && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw std::invalid_argument("BitMatrix::append_row: length mismatch");
    rows_.push_back(std::move(v));
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j : rows_[i].support()) t.rows_[j - 1].set(i + 1);
    return t;
}

BitVector BitMatrix::left_multiply(const BitVector& x) const {
    if (x.size() != rows_.size()) throw std::invalid_argument("BitMatrix::left_multiply: length mismatch");
    BitVector out(cols_);
    for (std::size_t i : x.support()) out ^= rows_[i - 1];
    return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& o) const {
    if (cols_ != o.n_rows()) throw std::invalid_argument("BitMatrix::operator*: shape mismatch");
    BitMatrix out(rows_.size(), o.cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) out.rows_[i] = o.left_multiply(rows_[i]);
    return out;
}

BitMatrix BitMatrix::kron(const BitMatrix& o) const {
    BitMatrix out(rows_.size() * o.n_rows(), cols_ * o.cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j : rows_[i].support())
            for (std::size_t k = 0; k < o.n_rows(); ++k)
                for (std::size_t l : o.rows_[k].support())
                    out.rows_[i * o.n_rows() + k].set((j - 1) * o.cols_ + l);
    return out;
}

BitMatrix BitMatrix::select_columns(const std::vector<std::size_t>& cols) const {
    BitMatrix out(rows_.size(), cols.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (rows_[i].get(cols[c])) out.rows_[i].set(c + 1);
    return out;
}

std::string BitMatrix::to_string() const {
    std::string s;
    for (const auto& r : rows_) {
        s += r.to_string();
        s += '\n';
    }
    return s;
}

BitMatrix BitMatrix::parse(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty()) lines.push_back(cur);
            cur.clear();
        } else if (c != '\r' && c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return from_strings(lines);
}

namespace {

// Gaussian elimination on `rows` (leftmost pivot first). When `track` is
// non-null, row operations are mirrored on it.
std::vector<std::size_t> eliminate(std::vector<BitVector>& rows, std::size_t cols, std::vector<BitVector>* track,
                                   bool full) {
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c = 1; c <= cols && next < rows.size(); ++c) {
        std::size_t sel = next;
        while (sel < rows.size() && !rows[sel].get(c)) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[next]);
        if (track) std::swap((*track)[sel], (*track)[next]);
        for (std::size_t i = full ? 0 : next + 1; i < rows.size(); ++i) {
            if (i != next && rows[i].get(c)) {
                rows[i] ^= rows[next];
                if (track) (*track)[i] ^= (*track)[next];
            }
        }
        pivots.push_back(c);
        ++next;
    }
    return pivots;
}

}  // namespace

BitMatrix row_reduce(const BitMatrix& m, std::vector<std::size_t>* pivots) {
    std::vector<BitVector> rows = m.rows();
    auto piv = eliminate(rows, m.n_cols(), nullptr, true);
    rows.resize(piv.size());
    if (pivots) *pivots = piv;
    return BitMatrix(std::move(rows), m.n_cols());
}

std::size_t rank(const BitMatrix& m) {
    std::vector<BitVector> rows = m.rows();
    return eliminate(rows, m.n_cols(), nullptr, false).size();
}

BitMatrix kernel(const BitMatrix& m) {
    std::vector<BitVector> rows = m.rows();
    std::vector<BitVector> track = BitMatrix::identity(m.n_rows()).rows();
    auto piv = eliminate(rows, m.n_cols(), &track, false);
    std::vector<BitVector> basis(track.begin() + static_cast<std::ptrdiff_t>(piv.size()), track.end());
    return BitMatrix(std::move(basis), m.n_rows());
}

BitMatrix tensor_power_uut(unsigned m) {
    BitMatrix out = BitMatrix::identity(1);
    const BitMatrix base = BitMatrix::from_strings({"11", "01"});
    for (unsigned i = 0; i < m; ++i) out = out.kron(base);
    return out;
}

std::optional<BitVector> solve_membership(const BitVector& v, const BitMatrix& m) {
    if (v.size() != m.n_cols()) throw std::invalid_argument("solve_membership: length mismatch");
    std::vector<BitVector> rows = m.rows();
    std::vector<BitVector> track = BitMatrix::identity(m.n_rows()).rows();
    auto piv = eliminate(rows, m.n_cols(), &track, false);
    BitVector rest = v;
    BitVector coeff(m.n_rows());
    for (std::size_t k = 0; k < piv.size(); ++k) {
        if (rest.get(piv[k])) {
            rest ^= rows[k];
            coeff ^= track[k];
        }
    }
    if (rest.any()) return std::nullopt;
    return coeff;
}

bool in_row_space(const BitVector& v, const BitMatrix& m) { return solve_membership(v, m).has_value(); }

std::vector<BitVector> enumerate_row_space(const BitMatrix& m) {
    if (m.n_rows() > 24) throw std::invalid_argument("enumerate_row_space: too many rows");
    std::vector<BitVector> out;
    out.reserve(std::size_t{1} << m.n_rows());
    out.emplace_back(m.n_cols());
    for (std::size_t i = 1; i <= m.n_rows(); ++i) {
        std::size_t sz = out.size();
        for (std::size_t k = 0; k < sz; ++k) out.push_back(out[k] ^ m.row(i));
    }
    return out;
}

}  // namespace qrm
