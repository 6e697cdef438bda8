#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qrm {

enum class GateKind { H, CNOT, X };

// Single gate; indices are 1-based. For CNOT, `a` is the control and `b` the target.
struct Gate {
    GateKind kind = GateKind::H;
    std::size_t a = 0;
    std::size_t b = 0;

    static Gate h(std::size_t q) { return {GateKind::H, q, 0}; }
    static Gate x(std::size_t q) { return {GateKind::X, q, 0}; }
    static Gate cnot(std::size_t c, std::size_t t) { return {GateKind::CNOT, c, t}; }

    bool is_cnot() const { return kind == GateKind::CNOT; }
    bool operator==(const Gate& o) const = default;
};

// Image p̄ = (p(1), ..., p(n)). Applying P(p) moves the qubit at position i to position p(i).
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<std::size_t> image);
    static Permutation identity(std::size_t n);

    std::size_t size() const { return image_.size(); }
    std::size_t operator()(std::size_t i) const { return image_.at(i - 1); }
    const std::vector<std::size_t>& image() const { return image_; }
    bool is_identity() const;

    Permutation inverse() const;
    // (this ∘ first)(i) = this(first(i)): apply `first`, then this.
    Permutation after(const Permutation& first) const;

    bool operator==(const Permutation& o) const = default;

  private:
    std::vector<std::size_t> image_;
};

// Initial permutation followed by an ordered gate list.
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(std::size_t width);
    Circuit(std::size_t width, Permutation initial_perm, std::vector<Gate> gates);

    std::size_t width() const { return width_; }
    const Permutation& initial_perm() const { return perm_; }
    const std::vector<Gate>& gates() const { return gates_; }

    void add(const Gate& g);
    void h(std::size_t q) { add(Gate::h(q)); }
    void x(std::size_t q) { add(Gate::x(q)); }
    void cnot(std::size_t c, std::size_t t) { add(Gate::cnot(c, t)); }

    bool operator==(const Circuit& o) const = default;

  private:
    void check_gate(const Gate& g) const;

    std::size_t width_ = 0;
    Permutation perm_;
    std::vector<Gate> gates_;
};

// Collects gates and permutations in time order, then moves every
// permutation to the front by relabeling the gates that precede it.
class CircuitBuilder {
  public:
    explicit CircuitBuilder(std::size_t width);

    std::size_t width() const { return width_; }
    void gate(const Gate& g);
    void h(std::size_t q) { gate(Gate::h(q)); }
    void x(std::size_t q) { gate(Gate::x(q)); }
    void cnot(std::size_t c, std::size_t t) { gate(Gate::cnot(c, t)); }
    void permute(const Permutation& p);
    // Places `sub` on qubits offset+1 .. offset+sub.width().
    void embed(const Circuit& sub, std::size_t offset);
    std::size_t gate_count() const { return n_gates_; }

    Circuit build() const;

  private:
    struct Op {
        bool is_perm;
        Gate g;
        std::size_t perm_index;
    };
    std::size_t width_;
    std::size_t n_gates_ = 0;
    std::vector<Op> ops_;
    std::vector<Permutation> perms_;
};

std::size_t cnot_count(const Circuit& c);
std::size_t hadamard_count(const Circuit& c);

// ASAP greedy layering; permutations are free.
std::size_t depth(const Circuit& c);

struct Rational {
    std::size_t num = 0;
    std::size_t den = 1;
    double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
};

enum class EdConvention {
    XForward,    // X errors, control -> target
    ZBackward,   // Z errors, target -> control
    Union,       // qubits reached by the X or the Z part of an error
    Undirected,  // both endpoints of a CNOT share everything either endpoint has seen
};

// Average number of other qubits reached by an error present on one qubit at
// the start of the circuit (plus one per qubit with include_self).
Rational error_prop_distance(const Circuit& c, EdConvention conv, bool include_self = false);
// Union convention without self; matches the reference E_d values.
Rational error_prop_distance(const Circuit& c);

// P^-1(p) g P(p): indices mapped through p^-1.
Gate conjugate_through_perm(const Gate& g, const Permutation& p);

Circuit inverse(const Circuit& c);

// Runs `first` and then `second` on the same register.
Circuit compose(const Circuit& first, const Circuit& second);

std::size_t cross_partition_cnots(const Circuit& c, const std::vector<std::size_t>& part);

struct QasmOptions {
    // Emit the initial permutation as a comment header instead of swaps.
    bool perm_as_comment = false;
};

std::string to_qasm(const Circuit& c, const QasmOptions& opts = {});
Circuit parse_qasm(std::string_view text);

nlohmann::json to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace qrm
