#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qrm/circuit.hpp"
#include "qrm/gf2.hpp"
#include "qrm/rmcode.hpp"

namespace qrm {

enum class Family {
    QRM,
    BasisQRM,
    PQRM,
    BasisPQRM,
    StatePrepPQRM,
    ZQRM,
    PZQRM,
    StatePrepPZQRM,
    RowReducedQRM,
};

std::string family_name(Family f);
// Accepts the names printed by family_name and the short CLI aliases.
Family parse_family(const std::string& name);

struct CodeSpec {
    Family family = Family::QRM;
    int r = 0;
    int m = 0;
    std::optional<int> rd;  // r◇ for the zero-rate families
    std::optional<int> md;  // m◇ for the zero-rate families

    static CodeSpec qrm(int r, int m) { return {Family::QRM, r, m, {}, {}}; }
    static CodeSpec make(Family f, int r, int m) { return {f, r, m, {}, {}}; }
    static CodeSpec zero_rate(Family f, int r, int m, int rd, int md) { return {f, r, m, rd, md}; }

    bool zero_rate_family() const;
    // Qubit count of the encoder.
    std::size_t width() const;
    std::string to_string() const;
    bool operator==(const CodeSpec& o) const = default;
};

// Throws std::invalid_argument naming the violated bound.
void validate(const CodeSpec& spec);
bool is_valid(const CodeSpec& spec);

// Every valid spec of the given family with m (or m◇) at most max_m.
std::vector<CodeSpec> enumerate_specs(Family f, int max_m);

struct SynthResult {
    Circuit circuit;
    // Rows of the stacked generator matrix -> input qubit of the encoder.
    QubitIndexMap index_map;
    // Rows carrying the logical message, in message order.
    std::vector<BitVector> message_rows;
    std::size_t message_width = 0;
    std::size_t ancilla_count = 0;
    // Permutation of the outermost recursion step (identity for base cases).
    Permutation outer_permutation;

    std::vector<std::size_t> message_qubits() const;
    // Input basis state with message bit i placed on the qubit of message row i.
    BitVector input_for(const BitVector& msg) const;
};

struct SynthOptions {
    // Move the extra CNOT of U*(r, r+1) ahead of the U^c block of the inner
    // U*(r-1, r), as allowed by linearity of the CNOT-only subcircuit.
    bool commute_punctured_cnot = false;
};

SynthResult synthesize(const CodeSpec& spec, const SynthOptions& opts = {});

SynthResult recursive_qrm(int r, int m);
SynthResult recursive_basis_qrm(int r, int m);
SynthResult recursive_pqrm(int r, int m, const SynthOptions& opts = {});
SynthResult recursive_basis_pqrm(int r, int m, const SynthOptions& opts = {});
SynthResult recursive_stateprep_pqrm(int r, int m);
SynthResult recursive_zqrm(int r, int m, int rd, int md);
SynthResult recursive_pzqrm(int r, int m, int rd, int md, const SynthOptions& opts = {});
SynthResult recursive_stateprep_pzqrm(int r, int m, int rd, int md);
SynthResult row_reduced_encoder(int r, int m);

enum class PrepState { Zero, Plus };

// Prepares |0> or |+> of pzQRM(rd, md) from the all-zero register.
SynthResult stateprep_pzqrm(int rd, int md, PrepState which, const SynthOptions& opts = {});

std::size_t predict_cnot_count(const CodeSpec& spec);
std::size_t predict_stateprep_pzqrm(int rd, int md, PrepState which);

// Individual recurrences.
std::size_t zeta_qrm(int r, int m);
std::size_t zeta_basis(int r, int m);
std::size_t zeta_pqrm(int r, int m);
std::size_t zeta_basis_pqrm(int r, int m);
std::size_t zeta_stateprep_pqrm(int r, int m);
std::size_t zeta_zqrm(int r, int m, int rd, int md);
std::size_t zeta_pzqrm(int r, int m, int rd, int md);
std::size_t zeta_stateprep_pzqrm(int r, int m, int rd, int md);
std::size_t zeta_row_reduced(int r, int m);

// Row transform of the row-reduced encoder: x_A -> sum over A ⊆ B ⊆ S_s(A) of x_B.
std::vector<int> fill_set(const Monomial& a, int s);
BitVector row_reduced_row(const Monomial& a, int s);

}  // namespace qrm
