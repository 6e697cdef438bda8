#include "qrm/extract.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qrm/rmcode.hpp"

namespace qrm {

namespace {

int ceil_half(int x) { return x <= 0 ? 0 : (x + 1) / 2; }

// Places `sub` on the listed qubits (sub qubit i -> qubits[i-1]).
void embed_on(CircuitBuilder& b, const Circuit& sub, const std::vector<std::size_t>& qubits) {
    if (!sub.initial_perm().is_identity()) {
        auto image = Permutation::identity(b.width()).image();
        for (std::size_t i = 1; i <= sub.width(); ++i) image[qubits[i - 1] - 1] = qubits[sub.initial_perm()(i) - 1];
        b.permute(Permutation(image));
    }
    for (const auto& g : sub.gates()) {
        switch (g.kind) {
            case GateKind::H: b.h(qubits[g.a - 1]); break;
            case GateKind::X: b.x(qubits[g.a - 1]); break;
            case GateKind::CNOT: b.cnot(qubits[g.a - 1], qubits[g.b - 1]); break;
        }
    }
}

// Components of the graph on `nodes` with an edge wherever `linked` holds.
std::vector<std::vector<std::size_t>> components(const std::vector<std::size_t>& nodes,
                                                 const std::function<bool(std::size_t, std::size_t)>& linked) {
    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (find(i) != find(j) && linked(nodes[i], nodes[j])) parent[find(j)] = find(i);
    std::vector<std::vector<std::size_t>> out;
    std::vector<long> slot(nodes.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[root])].push_back(nodes[i]);
    }
    return out;
}

PauliOp pauli_on(std::size_t n, const std::vector<std::size_t>& qubits, bool x_type) {
    BitVector s(n);
    for (std::size_t q : qubits) s.set(q);
    return x_type ? PauliOp::x_type(s) : PauliOp::z_type(s);
}

// X^{⊗G} (or Z^{⊗G}) and the chained pairs Z_i Z_{i+1} (or X X) all present.
bool verify_group(const StabilizerTableau& t, const std::vector<std::size_t>& g, bool z_basis) {
    const std::size_t n = t.n_qubits();
    if (!t.sign_of(pauli_on(n, g, z_basis))) return false;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        if (!t.sign_of(pauli_on(n, {g[i], g[i + 1]}, !z_basis))) return false;
    return true;
}

}  // namespace

ExtractionPlan build_extraction(const CodeSpec& spec, int l) {
    if (spec.family != Family::QRM) throw std::invalid_argument("extraction needs a qrm spec, got " + family_name(spec.family));
    validate(spec);
    const int r = spec.r, m = spec.m;
    if (r < ceil_half(m - 1)) throw std::invalid_argument("extraction needs r >= ceil((m-1)/2)");
    if (l < 0 || l > m - r)
        throw std::invalid_argument("extraction level must satisfy 0 <= l <= m - r = " + std::to_string(m - r) + ", got " +
                                    std::to_string(l));
    ExtractionPlan plan;
    plan.source = spec;
    plan.level = l;
    const std::size_t n = std::size_t{1} << m;
    std::vector<int> axes(static_cast<std::size_t>(l));
    std::iota(axes.begin(), axes.end(), 1);
    for (std::size_t t = 0; t < (std::size_t{1} << l); ++t) {
        std::vector<int> bits(static_cast<std::size_t>(l));
        for (int a = 0; a < l; ++a) bits[static_cast<std::size_t>(a)] = static_cast<int>((t >> (l - 1 - a)) & 1U);
        plan.parts.push_back(qubit_partition_set(axes, bits, m));
    }
    const Circuit dec = inverse(recursive_qrm(r, m - l).circuit);
    CircuitBuilder b(n);
    for (const auto& part : plan.parts) embed_on(b, dec, part);
    plan.decoder = b.build();
    return plan;
}

ExtractionReport analyze_groups(const StabilizerTableau& t) {
    const std::size_t n = t.n_qubits();
    ExtractionReport rep;
    std::vector<std::size_t> open;
    std::vector<bool> x_eigen(n + 1, false);
    for (std::size_t q = 1; q <= n; ++q) {
        if (t.sign_of(pauli_on(n, {q}, false))) {
            rep.deterministic_qubits.push_back(q);
        } else {
            x_eigen[q] = t.sign_of(pauli_on(n, {q}, true)).has_value();
            if (!x_eigen[q]) open.push_back(q);
        }
    }
    bool ok = true;
    std::vector<std::size_t> leftover;
    for (auto& g : components(open, [&](std::size_t a, std::size_t b) { return t.sign_of(pauli_on(n, {a, b}, false)).has_value(); })) {
        if (g.size() >= 2 && verify_group(t, g, true)) {
            rep.groups.push_back(g);
        } else {
            leftover.insert(leftover.end(), g.begin(), g.end());
        }
    }
    std::sort(leftover.begin(), leftover.end());
    for (auto& g : components(leftover, [&](std::size_t a, std::size_t b) { return t.sign_of(pauli_on(n, {a, b}, true)).has_value(); })) {
        if (g.size() >= 2 && verify_group(t, g, false))
            rep.x_basis_groups.push_back(g);
        else
            rep.other_qubits.insert(rep.other_qubits.end(), g.begin(), g.end());
    }
    for (std::size_t q = 1; q <= n; ++q)
        if (x_eigen[q]) rep.other_qubits.push_back(q);
    std::sort(rep.other_qubits.begin(), rep.other_qubits.end());
    for (const auto& g : rep.groups) ok = ok && verify_group(t, g, true);

    std::vector<std::vector<std::size_t>> blocks = rep.groups;
    blocks.insert(blocks.end(), rep.x_basis_groups.begin(), rep.x_basis_groups.end());
    std::vector<bool> covered(n + 1, false);
    for (const auto& g : blocks)
        for (std::size_t q : g) covered[q] = true;
    for (std::size_t q = 1; q <= n; ++q)
        if (!covered[q]) blocks.push_back({q});
    rep.residual_entanglement = fattal_entanglement(t, blocks);
    rep.stabilizers_verified = ok;
    return rep;
}

ExtractionReport run_extraction(const ExtractionPlan& plan, const StabilizerTableau& state) {
    if (state.n_qubits() != plan.decoder.width()) throw std::invalid_argument("run_extraction: state width mismatch");
    const StabilizerTableau t = tableau_simulate(plan.decoder, state);
    ExtractionReport rep = analyze_groups(t);
    rep.party_entanglement = fattal_entanglement(t, plan.parts);
    const int m = plan.source.m, r = plan.source.r;
    // One party (l = 0) shares nothing.
    rep.expected_min_groups = plan.level == 0 ? 0 : binom(m - plan.level, m - r - 1);
    // Every reported group must span all parts with one qubit per part.
    for (const auto& g : rep.groups) {
        if (g.size() != plan.parts.size()) rep.stabilizers_verified = false;
        for (const auto& part : plan.parts) {
            const auto hits = std::count_if(g.begin(), g.end(), [&](std::size_t q) {
                return std::binary_search(part.begin(), part.end(), q);
            });
            if (hits != 1) rep.stabilizers_verified = false;
        }
    }
    return rep;
}

nlohmann::json to_json(const ExtractionReport& r) {
    return {{"groups", r.groups},
            {"x_basis_groups", r.x_basis_groups},
            {"deterministic_qubits", r.deterministic_qubits},
            {"other_qubits", r.other_qubits},
            {"stabilizers_verified", r.stabilizers_verified},
            {"residual_entanglement", r.residual_entanglement},
            {"party_entanglement", r.party_entanglement},
            {"expected_min_groups", r.expected_min_groups}};
}

}  // namespace qrm
