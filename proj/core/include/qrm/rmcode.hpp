#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qrm/gf2.hpp"

namespace qrm {

std::size_t binom(int n, int k);

// dim RM(r, m) = sum_{i=0}^{r} C(m, i); zero for r < 0.
std::size_t rm_dimension(int r, int m);

// x_A = prod_{i in A} x_i over variables x_1..x_m.
class Monomial {
  public:
    Monomial() = default;
    Monomial(int m, std::vector<int> vars);
    static Monomial one(int m) { return Monomial(m, {}); }
    // Monomial whose canonical row index (0-based) is `index`.
    static Monomial from_index(int m, std::size_t index);

    int ambient() const { return m_; }
    int degree() const;
    const std::vector<int>& vars() const { return vars_; }
    bool contains(int i) const;
    // Row position in tensor_power_uut(m), 0-based: sum over i in A of 2^(m-i).
    std::size_t canonical_index() const { return index_; }

    Monomial times(const Monomial& o) const;
    // Drops x_1 and renames x_i to x_{i-1}; the result lives in m-1 variables.
    Monomial shifted_down() const;

    std::string to_string() const;
    bool operator==(const Monomial& o) const { return m_ == o.m_ && index_ == o.index_; }

  private:
    int m_ = 0;
    std::vector<int> vars_;
    std::size_t index_ = 0;
};

// A GF(2) polynomial as a sum of distinct monomials.
using Polynomial = std::vector<Monomial>;

BitVector eval_vector(const Monomial& f);
BitVector eval_vector(const Polynomial& f, int m);
// Evaluation of x_A * prod_{i in B} (1 + x_i).
BitVector eval_vector_with_complements(const Monomial& a, const std::vector<int>& b);

struct GeneratorSet {
    BitMatrix matrix;
    std::vector<Monomial> monomials;

    std::size_t size() const { return monomials.size(); }
    const BitVector& row(std::size_t i) const { return matrix.row(i); }
};

// Canonical G(r, m): rows of tensor_power_uut(m) with weight >= 2^(m-r).
GeneratorSet generator_matrix(int r, int m);

// G(r, m)* with the first column removed.
GeneratorSet punctured_generator(int r, int m);

// Rows of G(a, m) that are not rows of G(b, m): monomials with b < degree <= a.
GeneratorSet quotient_generators(int a, int b, int m);

GeneratorSet puncture(const GeneratorSet& g);
GeneratorSet drop_constant(const GeneratorSet& g);

BitVector encode(const BitVector& msg, const GeneratorSet& g);

// word · H^T with H = G(m-r-1, m).
BitVector syndrome(const BitVector& word, int r, int m);

// B^(m)(i; k): positions j with Eval(x_i)_j = k.
std::vector<std::size_t> bit_subset(int i, int k, int m);

// Q^(m)(s; t): intersection of bit subsets.
std::vector<std::size_t> qubit_partition_set(const std::vector<int>& s, const std::vector<int>& t, int m);

// Injective map from generator rows to 1-based qubit indices.
class QubitIndexMap {
  public:
    void insert(const BitVector& row, std::size_t qubit);
    bool contains(const BitVector& row) const { return lookup_.count(row) != 0; }
    std::size_t at(const BitVector& row) const;
    std::size_t operator[](const BitVector& row) const { return at(row); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::pair<BitVector, std::size_t>>& entries() const { return entries_; }

  private:
    std::vector<std::pair<BitVector, std::size_t>> entries_;
    std::unordered_map<BitVector, std::size_t, BitVectorHash> lookup_;
    std::unordered_map<std::size_t, std::size_t> used_;
};

// rim(G)[g_i] = i.
QubitIndexMap row_index_map(const BitMatrix& g);
QubitIndexMap row_index_map(const GeneratorSet& g);

}  // namespace qrm
