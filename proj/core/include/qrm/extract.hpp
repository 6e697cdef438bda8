#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "qrm/circuit.hpp"
#include "qrm/synth.hpp"
#include "qrm/verify.hpp"

namespace qrm {

// Inverse sub-encoders U(r, m-l)^† applied on the 2^l Plotkin parts of an
// encoded QRM(r, m) register.
struct ExtractionPlan {
    CodeSpec source;
    int level = 0;
    // Parts Q(1..l; t) with t counting up in binary, axis 1 most significant.
    std::vector<std::vector<std::size_t>> parts;
    Circuit decoder;
};

// Requires a QRM spec with r >= ceil((m-1)/2) and 0 <= l <= m - r.
ExtractionPlan build_extraction(const CodeSpec& spec, int l);

struct ExtractionReport {
    // Z-basis GHZ groups: X on every member and Z_i Z_j for every pair stabilize.
    std::vector<std::vector<std::size_t>> groups;
    // Same structure with X and Z exchanged (|+...+> + |-...->).
    std::vector<std::vector<std::size_t>> x_basis_groups;
    // Qubits outside all groups that are +-Z eigenstates.
    std::vector<std::size_t> deterministic_qubits;
    // Qubits that are neither in a group nor a Z eigenstate.
    std::vector<std::size_t> other_qubits;
    bool stabilizers_verified = false;
    // Entanglement across {each group} ∪ {each remaining qubit}; 0 means the
    // groups are the only entanglement left.
    std::size_t residual_entanglement = 0;
    // Entanglement across the 2^l parts after decoding.
    std::size_t party_entanglement = 0;
    // Lower bound C(m-l, m-r-1) on the number of GHZ groups (0 when l = 0).
    std::size_t expected_min_groups = 0;

    // Every non-group qubit is a Z eigenstate and every group verified.
    bool clean() const { return stabilizers_verified && other_qubits.empty() && x_basis_groups.empty(); }
};

// Applies the plan's decoder to `state` (the encoded |0> of plan.source).
ExtractionReport run_extraction(const ExtractionPlan& plan, const StabilizerTableau& state);

// Group analysis without applying any decoder.
ExtractionReport analyze_groups(const StabilizerTableau& t);

nlohmann::json to_json(const ExtractionReport& r);

}  // namespace qrm
