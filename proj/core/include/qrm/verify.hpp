#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrm/circuit.hpp"
#include "qrm/gf2.hpp"
#include "qrm/synth.hpp"

namespace qrm {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kDenseMaxQubits = 16;

// Dense state on n <= 16 qubits. Qubit 1 is the most significant bit of the
// amplitude index, so kron(a, b) puts a's qubits first.
class Statevector {
  public:
    Statevector() = default;
    static Statevector basis(const BitVector& bits);
    static Statevector zeros(std::size_t n);  // all amplitudes zero

    std::size_t n_qubits() const { return n_; }
    const std::vector<Amplitude>& amplitudes() const { return amp_; }
    Amplitude& operator[](std::size_t index) { return amp_[index]; }
    Amplitude operator[](std::size_t index) const { return amp_[index]; }
    Amplitude amplitude(const BitVector& bits) const;
    std::size_t index_of(const BitVector& bits) const;

    void h(std::size_t q);
    void x(std::size_t q);
    void cnot(std::size_t c, std::size_t t);
    void permute(const Permutation& p);
    void apply(const Gate& g);
    void apply(const Circuit& c);

    double norm() const;
    void scale(Amplitude s);
    Statevector& operator+=(const Statevector& o);

  private:
    std::size_t n_ = 0;
    std::vector<Amplitude> amp_;
    std::size_t mask(std::size_t q) const;
};

Statevector kron(const Statevector& a, const Statevector& b);
double max_deviation(const Statevector& a, const Statevector& b);

Statevector dense_simulate(const Circuit& c, const BitVector& input);

// Sparse amplitude map for exhaustive message sweeps; exact same gate
// semantics as Statevector, without the 16-qubit cap.
class SparseState {
  public:
    explicit SparseState(const BitVector& bits);
    std::size_t n_qubits() const { return n_; }
    const std::unordered_map<BitVector, Amplitude, BitVectorHash>& terms() const { return terms_; }

    void apply(const Gate& g);
    void apply(const Circuit& c);
    void permute(const Permutation& p);

  private:
    std::size_t n_;
    std::unordered_map<BitVector, Amplitude, BitVectorHash> terms_;
};

SparseState sparse_simulate(const Circuit& c, const BitVector& input);

// Logical generator rows and coset rows of a family, built straight from the
// Reed-Muller generator matrices (independent of the synthesized circuits).
std::vector<BitVector> message_generator(const CodeSpec& spec);
std::vector<BitVector> coset_generator(const CodeSpec& spec);

// Uniform superposition over w ⊕ span(coset).
std::vector<std::pair<BitVector, Amplitude>> reference_terms(const BitVector& w, const std::vector<BitVector>& coset);
Statevector reference_state(const BitVector& w, const std::vector<BitVector>& coset);
Statevector reference_codeword(const CodeSpec& spec, const BitVector& msg);
// Classical word msg * message_generator(spec).
BitVector logical_word(const CodeSpec& spec, const BitVector& msg);

// Largest |a - b| over all basis states of either sparse map.
double max_deviation(const SparseState& s, const std::vector<std::pair<BitVector, Amplitude>>& ref);

struct PauliOp {
    BitVector x;
    BitVector z;
    bool negative = false;

    static PauliOp identity(std::size_t n);
    static PauliOp x_type(const BitVector& support);
    static PauliOp z_type(const BitVector& support);
    std::size_t size() const { return x.size(); }
    bool commutes_with(const PauliOp& o) const;
    std::string to_string() const;
    bool operator==(const PauliOp& o) const = default;
};

// Product of Hermitian Paulis; throws if they anticommute.
PauliOp multiply(const PauliOp& a, const PauliOp& b);

// Stabilizer tableau with destabilizers (rows 1..n) and stabilizers
// (rows n+1..2n), stored column-wise so gate updates are word-parallel.
class StabilizerTableau {
  public:
    StabilizerTableau() = default;
    explicit StabilizerTableau(std::size_t n);  // |0...0>
    static StabilizerTableau basis(const BitVector& bits);
    // Builds a tableau from n independent commuting generators.
    static StabilizerTableau from_generators(const std::vector<PauliOp>& gens);

    std::size_t n_qubits() const { return n_; }

    void h(std::size_t q);
    void x(std::size_t q);
    void cnot(std::size_t c, std::size_t t);
    void permute(const Permutation& p);
    void apply(const Gate& g);
    void apply(const Circuit& c);

    PauliOp stabilizer(std::size_t i) const;    // 1-based
    PauliOp destabilizer(std::size_t i) const;  // 1-based
    std::vector<PauliOp> generators() const;
    // n x 2n matrix (x | z) of the stabilizer generators.
    BitMatrix symplectic_matrix() const;

    // +1 / -1 if +-p is in the stabilizer group, nullopt otherwise.
    std::optional<int> sign_of(const PauliOp& p) const;

    bool operator==(const StabilizerTableau& o) const = default;

  private:
    PauliOp row(std::size_t r) const;
    std::size_t n_ = 0;
    std::vector<BitVector> xcol_;  // per qubit, 2n row bits
    std::vector<BitVector> zcol_;
    BitVector sign_;
};

StabilizerTableau tableau_simulate(const Circuit& c, const StabilizerTableau& input);

// True iff p itself (sign included) lies in the stabilizer group.
bool check_stabilized(const StabilizerTableau& t, const PauliOp& p);

// n minus the total dimension of the subgroups supported inside each part.
std::size_t fattal_entanglement(const StabilizerTableau& t, const std::vector<std::vector<std::size_t>>& parts);

// Entanglement of the code space rather than of one codeword: every message
// qubit starts as half of a Bell pair with a reference qubit, and the
// references join the last part. For a bipartition this is n - rank of the
// code stabilizers local to each side.
std::size_t code_entanglement(const SynthResult& enc, const std::vector<std::vector<std::size_t>>& parts);

struct DegeneracyResult {
    bool non_degenerate = true;
    std::size_t errors_checked = 0;
    std::optional<std::pair<PauliOp, PauliOp>> witness;
};

// Distinct syndromes for all Pauli errors of weight <= t on QRM(r, m).
DegeneracyResult degeneracy_check(int r, int m, std::size_t t);
std::size_t correctable_weight(int r, int m);

bool css_condition_check(int r, int m);

// X- and Z-type stabilizer generators of a family's code state.
std::vector<PauliOp> css_stabilizers(const CodeSpec& spec, const BitVector& msg);

struct Check {
    std::string name;
    bool pass = false;
    std::string details;
};

struct VerifyReport {
    std::string spec;
    std::vector<Check> checks;
    bool all_pass() const;
};

nlohmann::json to_json(const VerifyReport& r);

struct VerifyOptions {
    bool dense = true;            // exhaustive amplitude oracle when width <= 16
    bool tableau = true;          // stabilizer checks on |0> and sampled messages
    bool degeneracy = false;      // QRM only, small m
    std::size_t max_messages = std::size_t{1} << 16;  // exhaustive below, sampled above
    std::size_t samples = 32;
    unsigned seed = 1;
};

VerifyReport verify_spec(const CodeSpec& spec, const VerifyOptions& opts = {});

}  // namespace qrm
