#pragma once

// Brute-force oracles and random generators shared by the unit tests and the
// acceptance binary. Everything here is deliberately naive.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <unordered_set>
#include <vector>

#include "qrm/circuit.hpp"
#include "qrm/gf2.hpp"
#include "qrm/rmcode.hpp"
#include "qrm/synth.hpp"

namespace qrm {
// Readable gtest failure output.
inline void PrintTo(const BitVector& v, std::ostream* os) { *os << v.to_string(); }
}  // namespace qrm

namespace qrm::testing {

// Seed from QRM_TEST_SEED when set, so failures can be replayed.
inline std::uint64_t test_seed(std::uint64_t fallback = 20240611) {
    if (const char* s = std::getenv("QRM_TEST_SEED")) return std::strtoull(s, nullptr, 10);
    return fallback;
}

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t salt = 0) : rng(test_seed() ^ (salt * 0x9E3779B97F4A7C15ULL)) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

    BitVector bits(std::size_t n, double p = 0.5) {
        BitVector v(n);
        for (std::size_t i = 1; i <= n; ++i)
            if (coin(p)) v.set(i);
        return v;
    }
    BitMatrix matrix(std::size_t rows, std::size_t cols, double p = 0.5) {
        BitMatrix m(0, cols);
        for (std::size_t i = 0; i < rows; ++i) m.append_row(bits(cols, p));
        return m;
    }
    // Random element of span(rows) (length n).
    BitVector combo(const std::vector<BitVector>& rows, std::size_t n) {
        BitVector v(n);
        for (const auto& r : rows)
            if (coin()) v ^= r;
        return v;
    }
    std::vector<int> subset(int m, double p = 0.5) {
        std::vector<int> s;
        for (int i = 1; i <= m; ++i)
            if (coin(p)) s.push_back(i);
        return s;
    }
};

// Every element of span(rows); rows must be few.
inline std::unordered_set<BitVector, BitVectorHash> span_set(const std::vector<BitVector>& rows, std::size_t n) {
    std::unordered_set<BitVector, BitVectorHash> out{BitVector(n)};
    for (const auto& r : rows) {
        std::vector<BitVector> add;
        for (const auto& v : out) add.push_back(v ^ r);
        for (auto& v : add) out.insert(std::move(v));
    }
    return out;
}

inline std::size_t brute_rank(const BitMatrix& m) {
    const std::size_t size = span_set(m.rows(), m.n_cols()).size();
    std::size_t r = 0;
    while ((std::size_t{1} << r) < size) ++r;
    return r;
}

// {x in GF(2)^n : x . row = 0 for every row}, by enumeration (n <= 20).
inline std::vector<BitVector> brute_dual(const std::vector<BitVector>& rows, std::size_t n) {
    std::vector<BitVector> out;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        BitVector x(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((v >> i) & 1U) x.set(i + 1);
        bool ok = true;
        for (const auto& r : rows)
            if (x.dot(r)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(std::move(x));
    }
    return out;
}

// Amplitude map keyed by a 64-bit word (bit q-1 holds qubit q). Independent
// of the library simulators; widths up to 64.
using Amps = std::map<std::uint64_t, std::complex<double>>;

inline std::uint64_t word_of(const BitVector& v) {
    std::uint64_t w = 0;
    for (std::size_t i = 1; i <= v.size(); ++i)
        if (v.get(i)) w |= std::uint64_t{1} << (i - 1);
    return w;
}

inline Amps simulate_amps(const Circuit& c, const BitVector& input) {
    const std::size_t n = c.width();
    // P(p) moves the qubit at position i to position p(i).
    std::uint64_t start = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (input.get(i)) start |= std::uint64_t{1} << (c.initial_perm()(i) - 1);
    Amps s{{start, 1.0}};
    const double h = 1.0 / std::sqrt(2.0);
    for (const auto& g : c.gates()) {
        const std::uint64_t a = std::uint64_t{1} << (g.a - 1);
        Amps next;
        if (g.kind == GateKind::H) {
            for (const auto& [k, amp] : s) {
                next[k & ~a] += h * amp;
                next[k | a] += ((k & a) ? -h : h) * amp;
            }
            for (auto it = next.begin(); it != next.end();) it = std::abs(it->second) < 1e-12 ? next.erase(it) : std::next(it);
        } else if (g.kind == GateKind::X) {
            for (const auto& [k, amp] : s) next[k ^ a] += amp;
        } else {
            const std::uint64_t b = std::uint64_t{1} << (g.b - 1);
            for (const auto& [k, amp] : s) next[(k & a) ? k ^ b : k] += amp;
        }
        s = std::move(next);
    }
    return s;
}

// Uniform superposition over w + span(coset).
inline Amps coset_amps(const BitVector& w, const std::vector<BitVector>& coset) {
    const auto span = span_set(coset, w.size());
    const double a = 1.0 / std::sqrt(static_cast<double>(span.size()));
    Amps out;
    for (const auto& c : span) out[word_of(w ^ c)] = a;
    return out;
}

inline double max_amp_deviation(const Amps& x, const Amps& y) {
    double d = 0;
    for (const auto& [k, a] : x) {
        auto it = y.find(k);
        d = std::max(d, std::abs(a - (it == y.end() ? 0.0 : it->second)));
    }
    for (const auto& [k, b] : y)
        if (!x.count(k)) d = std::max(d, std::abs(b));
    return d;
}

// Dense real vectors for the factorization identities; qubit 1 is the most
// significant bit of the index.
using Dense = std::vector<double>;

inline std::size_t dense_index(const BitVector& v) {
    std::size_t idx = 0;
    for (std::size_t i = 1; i <= v.size(); ++i) idx = (idx << 1) | (v.get(i) ? 1U : 0U);
    return idx;
}

inline Dense dense_coset(const BitVector& w, const std::vector<BitVector>& coset) {
    Dense d(std::size_t{1} << w.size(), 0.0);
    const auto span = span_set(coset, w.size());
    const double a = 1.0 / std::sqrt(static_cast<double>(span.size()));
    for (const auto& c : span) d[dense_index(w ^ c)] = a;
    return d;
}

inline Dense dense_kron(const Dense& a, const Dense& b) {
    Dense out(a.size() * b.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0.0)
            for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

inline double dense_deviation(const Dense& a, const Dense& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline std::vector<BitVector> rows_of(const GeneratorSet& g) { return g.matrix.rows(); }

inline std::vector<BitVector> punctured(const std::vector<BitVector>& rows) {
    std::vector<BitVector> out;
    for (const auto& r : rows) out.push_back(r.punctured());
    return out;
}

// Evaluation of x_A straight from the definition: point j (0-based) has
// x_i = bit (m - i) of j.
inline BitVector monomial_eval(int m, const std::vector<int>& vars) {
    const std::size_t n = std::size_t{1} << m;
    BitVector v(n);
    for (std::size_t j = 0; j < n; ++j) {
        bool one = true;
        for (int i : vars) one = one && ((j >> (m - i)) & 1U);
        if (one) v.set(j + 1);
    }
    return v;
}

inline std::vector<std::vector<int>> subsets_of_size_between(int m, int lo, int hi) {
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
        const int d = __builtin_popcount(mask);
        if (d < lo || d > hi) continue;
        std::vector<int> vars;
        for (int i = 1; i <= m; ++i)
            if ((mask >> (m - i)) & 1U) vars.push_back(i);
        out.push_back(vars);
    }
    return out;
}

// Rows of RM(a, m) / RM(b, m): monomials of degree b+1 .. a.
inline std::vector<BitVector> quotient_rows(int a, int b, int m) {
    std::vector<BitVector> out;
    for (const auto& vars : subsets_of_size_between(m, b + 1, a)) out.push_back(monomial_eval(m, vars));
    return out;
}

inline std::vector<BitVector> rm_rows(int r, int m) { return quotient_rows(r, -1, m); }

inline std::vector<BitVector> without_constant(const std::vector<BitVector>& rows, std::size_t n) {
    std::vector<BitVector> out;
    for (const auto& r : rows)
        if (r != BitVector::ones(n)) out.push_back(r);
    return out;
}

// Splits w into its first `lead` bits and the rest.
inline std::pair<BitVector, BitVector> halves(const BitVector& w, std::size_t lead) {
    return {w.slice(1, lead), w.slice(lead + 1, w.size() - lead)};
}

// sum over u in span(b_rows) of kron(|w1 + lift(u)>_A, |w2 + u>_B), normalized
// by 1/sqrt(|B|), against |w>_C.
inline double factorization_deviation(const BitVector& w, const std::vector<BitVector>& whole_coset, std::size_t lead,
                                      const std::vector<BitVector>& coset_a, const std::vector<BitVector>& coset_b,
                                      const std::vector<BitVector>& b_rows, bool puncture_first) {
    const Dense lhs = dense_coset(w, whole_coset);
    const auto [w1, w2] = halves(w, lead);
    const auto b = span_set(b_rows, w2.size());
    Dense rhs(lhs.size(), 0.0);
    const double norm = 1.0 / std::sqrt(static_cast<double>(b.size()));
    for (const auto& u : b) {
        const BitVector lift = puncture_first ? u.punctured() : u;
        const Dense t = dense_kron(dense_coset(w1 ^ lift, coset_a), dense_coset(w2 ^ u, coset_b));
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += norm * t[i];
    }
    return dense_deviation(lhs, rhs);
}

// Codeword identities for the four code families (m <= 4). Each returns the
// largest deviation over `samples` random words.
inline double theorem_qrm(int r, int m, Gen& gen, int samples) {
    double worst = 0;
    const std::size_t h = std::size_t{1} << (m - 1);
    for (int s = 0; s < samples; ++s) {
        const BitVector w = gen.combo(rm_rows(r, m), 2 * h);
        worst = std::max(worst, factorization_deviation(w, rm_rows(m - r - 1, m), h, rm_rows(m - r - 2, m - 1),
                                                        rm_rows(m - r - 2, m - 1), quotient_rows(m - r - 1, m - r - 2, m - 1),
                                                        false));
    }
    return worst;
}

// pRM(r, m)^perp, by enumeration.
inline std::vector<BitVector> punctured_dual(int r, int m) {
    const std::size_t n = (std::size_t{1} << m) - 1;
    const auto all = brute_dual(punctured(rm_rows(r, m)), n);
    // Reduce to a basis.
    std::vector<std::size_t> piv;
    BitMatrix mat(all, n);
    return row_reduce(mat, &piv).rows();
}

inline double theorem_pqrm(int r, int m, Gen& gen, int samples) {
    double worst = 0;
    const std::size_t h = std::size_t{1} << (m - 1);
    const auto whole = punctured_dual(r, m);
    const auto first = punctured_dual(r, m - 1);
    for (int s = 0; s < samples; ++s) {
        const BitVector w = gen.combo(punctured(rm_rows(r, m)), 2 * h - 1);
        worst = std::max(worst, factorization_deviation(w, whole, h - 1, first, rm_rows(m - r - 2, m - 1),
                                                        quotient_rows(m - r - 1, m - r - 2, m - 1), true));
    }
    return worst;
}

inline double theorem_zqrm(int r, int m, int rd, Gen& gen, int samples) {
    double worst = 0;
    const std::size_t h = std::size_t{1} << (m - 1);
    for (int s = 0; s < samples; ++s) {
        const BitVector w = gen.combo(rm_rows(rd, m), 2 * h);
        worst = std::max(worst, factorization_deviation(w, rm_rows(r, m), h, rm_rows(r - 1, m - 1), rm_rows(r - 1, m - 1),
                                                        quotient_rows(r, r - 1, m - 1), false));
    }
    return worst;
}

inline double theorem_pzqrm(int r, int m, int rd, Gen& gen, int samples) {
    double worst = 0;
    const std::size_t h = std::size_t{1} << (m - 1);
    const auto whole = without_constant(punctured(rm_rows(r, m)), 2 * h - 1);
    const auto first = without_constant(punctured(rm_rows(r - 1, m - 1)), h - 1);
    for (int s = 0; s < samples; ++s) {
        const BitVector w = gen.combo(punctured(rm_rows(rd, m)), 2 * h - 1);
        worst = std::max(worst, factorization_deviation(w, whole, h - 1, first, rm_rows(r - 1, m - 1),
                                                        quotient_rows(r, r - 1, m - 1), true));
    }
    return worst;
}

// Leading (first) one of each row of G(r, m) sits in a distinct column.
inline bool lemma_leading_entries(int r, int m) {
    std::set<std::size_t> lead;
    for (const auto& row : rm_rows(r, m))
        if (!lead.insert(row.first_one()).second) return false;
    return true;
}

// wt(x_A prod_{i in B}(1 + x_i)) = 2^(m - |A| - |B|) for disjoint A, B.
inline bool lemma_weight(int m, const std::vector<int>& a, const std::vector<int>& b) {
    const BitVector v = eval_vector_with_complements(Monomial(m, a), b);
    return v.weight() == (std::size_t{1} << (m - static_cast<int>(a.size()) - static_cast<int>(b.size())));
}

// For g free of x_1: Eval(x_1 g) = (0, u), Eval(g) = (u, u), Eval((1 + x_1) g) = (u, 0).
inline bool lemma_halves(const Monomial& g) {
    const int m = g.ambient();
    const std::size_t h = std::size_t{1} << (m - 1);
    if (g.contains(1)) return true;
    const BitVector u = eval_vector(g.shifted_down());
    std::vector<int> with_x1 = g.vars();
    with_x1.insert(with_x1.begin(), 1);
    const BitVector zero(h);
    return eval_vector(Monomial(m, with_x1)) == BitVector::concat(zero, u) &&
           eval_vector(g) == BitVector::concat(u, u) &&
           eval_vector_with_complements(g, {1}) == BitVector::concat(u, zero);
}

inline std::vector<BitVector> with_one(std::vector<BitVector> rows, int m) {
    rows.insert(rows.begin(), BitVector::ones(std::size_t{1} << m));
    return rows;
}

// Message rows and coset rows of each family, written out from the code
// definitions with the test-side monomial evaluator.
struct OracleCode {
    std::vector<BitVector> message;
    std::vector<BitVector> coset;
};

inline OracleCode oracle_code(const CodeSpec& s) {
    const int r = s.r, m = s.m;
    switch (s.family) {
        case Family::QRM:
        case Family::RowReducedQRM:
            return {quotient_rows(r, m - r - 1, m), rm_rows(m - r - 1, m)};
        case Family::BasisQRM:
            return {rm_rows(r, m), {}};
        case Family::PQRM:
            return {punctured(with_one(quotient_rows(r, m - r - 1, m), m)), punctured(quotient_rows(m - r - 1, 0, m))};
        case Family::BasisPQRM:
            return {punctured(rm_rows(r, m)), {}};
        case Family::StatePrepPQRM:
            return {punctured(quotient_rows(r, std::max(m - r - 1, 0), m)), punctured(quotient_rows(m - r - 1, 0, m))};
        case Family::ZQRM:
            return {quotient_rows(*s.rd, r, m), rm_rows(r, m)};
        case Family::PZQRM:
            return {punctured(with_one(quotient_rows(*s.rd, r, m), m)), punctured(quotient_rows(r, 0, m))};
        case Family::StatePrepPZQRM:
            return {punctured(quotient_rows(*s.rd, r, m)), punctured(quotient_rows(r, 0, m))};
    }
    return {};
}

// span(a + coset) == span(b + coset), with a independent modulo the coset.
inline bool same_span_modulo(const std::vector<BitVector>& a, const std::vector<BitVector>& b,
                      const std::vector<BitVector>& coset, std::size_t n) {
    auto join = [&](const std::vector<BitVector>& x) {
        auto all = coset;
        all.insert(all.end(), x.begin(), x.end());
        return BitMatrix(all, n);
    };
    const auto ja = join(a), jb = join(b);
    const std::size_t base = rank(BitMatrix(coset, n));
    if (rank(ja) != base + a.size() || rank(jb) != rank(ja)) return false;
    for (const auto& row : ja.rows())
        if (!in_row_space(row, jb)) return false;
    return true;
}

}  // namespace qrm::testing
