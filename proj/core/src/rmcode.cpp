#include "qrm/rmcode.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrm {

std::size_t binom(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

std::size_t rm_dimension(int r, int m) {
    std::size_t d = 0;
    for (int i = 0; i <= r && i <= m; ++i) d += binom(m, i);
    return d;
}

Monomial::Monomial(int m, std::vector<int> vars) : m_(m), vars_(std::move(vars)) {
    if (m < 0) throw std::invalid_argument("Monomial: negative number of variables");
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    for (int v : vars_) {
        if (v < 1 || v > m)
            throw std::out_of_range("Monomial: variable x" + std::to_string(v) + " outside 1.." + std::to_string(m));
        index_ |= std::size_t{1} << (m - v);
    }
}

Monomial Monomial::from_index(int m, std::size_t index) {
    if (index >= (std::size_t{1} << m)) throw std::out_of_range("Monomial::from_index out of range");
    std::vector<int> vars;
    for (int i = 1; i <= m; ++i)
        if ((index >> (m - i)) & 1U) vars.push_back(i);
    return Monomial(m, std::move(vars));
}

int Monomial::degree() const { return static_cast<int>(vars_.size()); }

bool Monomial::contains(int i) const { return std::binary_search(vars_.begin(), vars_.end(), i); }

Monomial Monomial::times(const Monomial& o) const {
    if (o.m_ != m_) throw std::invalid_argument("Monomial::times: ambient mismatch");
    std::vector<int> v = vars_;
    v.insert(v.end(), o.vars_.begin(), o.vars_.end());
    return Monomial(m_, std::move(v));
}

Monomial Monomial::shifted_down() const {
    if (m_ == 0) throw std::invalid_argument("Monomial::shifted_down: no variables");
    std::vector<int> v;
    for (int x : vars_)
        if (x != 1) v.push_back(x - 1);
    return Monomial(m_ - 1, std::move(v));
}

std::string Monomial::to_string() const {
    if (vars_.empty()) return "1";
    std::string s;
    for (int v : vars_) s += "x" + std::to_string(v);
    return s;
}

BitVector eval_vector(const Monomial& f) {
    const std::size_t n = std::size_t{1} << f.ambient();
    const std::size_t a = f.canonical_index();
    BitVector v(n);
    for (std::size_t j = 0; j < n; ++j)
        if ((j & a) == a) v.set(j + 1);
    return v;
}

BitVector eval_vector(const Polynomial& f, int m) {
    BitVector v(std::size_t{1} << m);
    for (const auto& t : f) {
        if (t.ambient() != m) throw std::invalid_argument("eval_vector: ambient mismatch");
        v ^= eval_vector(t);
    }
    return v;
}

BitVector eval_vector_with_complements(const Monomial& a, const std::vector<int>& b) {
    const int m = a.ambient();
    const std::size_t n = std::size_t{1} << m;
    std::size_t zero_mask = 0;
    for (int i : b) {
        if (i < 1 || i > m) throw std::out_of_range("eval_vector_with_complements: variable out of range");
        zero_mask |= std::size_t{1} << (m - i);
    }
    const std::size_t one_mask = a.canonical_index();
    BitVector v(n);
    for (std::size_t j = 0; j < n; ++j)
        if ((j & one_mask) == one_mask && (j & zero_mask) == 0) v.set(j + 1);
    return v;
}

namespace {

void check_params(int r, int m) {
    if (m < 0) throw std::invalid_argument("RM parameters: m must be >= 0");
    if (r < -1) throw std::invalid_argument("RM parameters: r must be >= -1");
    if (r > m)
        throw std::invalid_argument("RM parameters: r = " + std::to_string(r) + " exceeds m = " + std::to_string(m));
}

GeneratorSet monomial_band(int a, int b, int m) {
    GeneratorSet g;
    const std::size_t n = std::size_t{1} << m;
    g.matrix = BitMatrix(0, n);
    for (std::size_t j = 0; j < n; ++j) {
        Monomial f = Monomial::from_index(m, j);
        if (f.degree() > b && f.degree() <= a) {
            g.matrix.append_row(eval_vector(f));
            g.monomials.push_back(f);
        }
    }
    return g;
}

}  // namespace

GeneratorSet generator_matrix(int r, int m) {
    check_params(r, m);
    return monomial_band(r, -1, m);
}

GeneratorSet puncture(const GeneratorSet& g) {
    GeneratorSet out;
    out.monomials = g.monomials;
    std::size_t cols = g.matrix.n_cols() == 0 ? 0 : g.matrix.n_cols() - 1;
    out.matrix = BitMatrix(0, cols);
    for (const auto& r : g.matrix.rows()) out.matrix.append_row(r.punctured());
    return out;
}

GeneratorSet drop_constant(const GeneratorSet& g) {
    GeneratorSet out;
    out.matrix = BitMatrix(0, g.matrix.n_cols());
    for (std::size_t i = 0; i < g.monomials.size(); ++i) {
        if (g.monomials[i].degree() == 0) continue;
        out.matrix.append_row(g.matrix.row(i + 1));
        out.monomials.push_back(g.monomials[i]);
    }
    return out;
}

GeneratorSet punctured_generator(int r, int m) {
    check_params(r, m);
    if (m == 1 && r == 1) {
        // G(1,1)* is rank deficient; by convention return G(0,1)* = [1].
        return puncture(generator_matrix(0, 1));
    }
    if (r >= m) throw std::invalid_argument("punctured_generator: G(r, r)* is rank deficient (r = m)");
    return puncture(generator_matrix(r, m));
}

GeneratorSet quotient_generators(int a, int b, int m) {
    if (b < -1 || b > a || a > m)
        throw std::invalid_argument("quotient_generators: require -1 <= b <= a <= m");
    return monomial_band(a, b, m);
}

BitVector encode(const BitVector& msg, const GeneratorSet& g) {
    if (msg.size() != g.matrix.n_rows()) throw std::invalid_argument("encode: message length does not match G");
    return g.matrix.left_multiply(msg);
}

BitVector syndrome(const BitVector& word, int r, int m) {
    check_params(r, m);
    if (word.size() != (std::size_t{1} << m)) throw std::invalid_argument("syndrome: word length is not 2^m");
    const auto h = generator_matrix(m - r - 1, m);
    BitVector s(h.matrix.n_rows());
    for (std::size_t i = 1; i <= h.matrix.n_rows(); ++i)
        if (word.dot(h.matrix.row(i))) s.set(i);
    return s;
}

std::vector<std::size_t> bit_subset(int i, int k, int m) {
    if (i < 1 || i > m) throw std::out_of_range("bit_subset: axis out of range");
    const auto e = eval_vector(Monomial(m, {i}));
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j <= e.size(); ++j)
        if (static_cast<int>(e.get(j)) == (k & 1)) out.push_back(j);
    return out;
}

std::vector<std::size_t> qubit_partition_set(const std::vector<int>& s, const std::vector<int>& t, int m) {
    if (s.size() != t.size()) throw std::invalid_argument("qubit_partition_set: |s| != |t|");
    std::vector<int> seen = s;
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("qubit_partition_set: repeated axis");
    std::vector<std::size_t> out;
    const std::size_t n = std::size_t{1} << m;
    for (std::size_t j = 1; j <= n; ++j) out.push_back(j);
    for (std::size_t a = 0; a < s.size(); ++a) {
        auto b = bit_subset(s[a], t[a], m);
        std::vector<std::size_t> keep;
        std::set_intersection(out.begin(), out.end(), b.begin(), b.end(), std::back_inserter(keep));
        out = std::move(keep);
    }
    return out;
}

void QubitIndexMap::insert(const BitVector& row, std::size_t qubit) {
    if (qubit == 0) throw std::invalid_argument("QubitIndexMap: qubit indices are 1-based");
    if (lookup_.count(row)) throw std::invalid_argument("QubitIndexMap: duplicate row " + row.to_string());
    if (used_.count(qubit)) throw std::invalid_argument("QubitIndexMap: qubit " + std::to_string(qubit) + " reused");
    lookup_.emplace(row, qubit);
    used_.emplace(qubit, entries_.size());
    entries_.emplace_back(row, qubit);
}

std::size_t QubitIndexMap::at(const BitVector& row) const {
    auto it = lookup_.find(row);
    if (it == lookup_.end()) throw std::out_of_range("QubitIndexMap: no entry for row " + row.to_string());
    return it->second;
}

QubitIndexMap row_index_map(const BitMatrix& g) {
    QubitIndexMap m;
    for (std::size_t i = 1; i <= g.n_rows(); ++i) m.insert(g.row(i), i);
    return m;
}

QubitIndexMap row_index_map(const GeneratorSet& g) { return row_index_map(g.matrix); }

}  // namespace qrm
