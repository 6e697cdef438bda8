#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "qrm/extract.hpp"

namespace qrm {
namespace {

struct Run {
    ExtractionPlan plan;
    StabilizerTableau decoded;
    ExtractionReport report;
};

Run extract(int r, int m, int l) {
    const auto spec = CodeSpec::qrm(r, m);
    const auto enc = synthesize(spec);
    const auto state = tableau_simulate(enc.circuit, StabilizerTableau(enc.circuit.width()));
    auto plan = build_extraction(spec, l);
    auto decoded = tableau_simulate(plan.decoder, state);
    auto report = run_extraction(plan, state);
    return {std::move(plan), std::move(decoded), std::move(report)};
}

PauliOp single(std::size_t n, std::size_t q, bool x) {
    BitVector v(n);
    v.set(q);
    return x ? PauliOp::x_type(v) : PauliOp::z_type(v);
}

// X on every member and Z Z on neighbouring members, or the same with X and Z
// exchanged, must all stabilize the decoded state.
bool ghz_verified(const StabilizerTableau& t, const std::vector<std::size_t>& group, bool z_basis) {
    const std::size_t n = t.n_qubits();
    BitVector all(n);
    for (std::size_t q : group) all.set(q);
    if (!check_stabilized(t, z_basis ? PauliOp::x_type(all) : PauliOp::z_type(all))) return false;
    for (std::size_t i = 1; i < group.size(); ++i) {
        BitVector pair(n);
        pair.set(group[i - 1]);
        pair.set(group[i]);
        if (!check_stabilized(t, z_basis ? PauliOp::z_type(pair) : PauliOp::x_type(pair))) return false;
    }
    return true;
}

int part_of(const ExtractionPlan& plan, std::size_t q) {
    for (std::size_t j = 0; j < plan.parts.size(); ++j)
        for (std::size_t p : plan.parts[j])
            if (p == q) return static_cast<int>(j);
    return -1;
}

TEST(Extract, FourPartyGroupsOfQrm24) {
    const auto run = extract(2, 4, 2);
    const auto& rep = run.report;
    EXPECT_EQ(rep.groups, (std::vector<std::vector<std::size_t>>{{2, 6, 10, 14}, {3, 7, 11, 15}}));
    EXPECT_TRUE(rep.stabilizers_verified);
    for (const auto& g : rep.groups) EXPECT_TRUE(ghz_verified(run.decoded, g, true));
    // The leftover weight-one block ends in the X basis, not in Z eigenstates.
    EXPECT_EQ(rep.x_basis_groups, (std::vector<std::vector<std::size_t>>{{1, 5, 9, 13}}));
    for (const auto& g : rep.x_basis_groups) EXPECT_TRUE(ghz_verified(run.decoded, g, false));
    EXPECT_EQ(rep.deterministic_qubits, (std::vector<std::size_t>{4, 8, 12, 16}));
    EXPECT_TRUE(rep.other_qubits.empty());
    EXPECT_EQ(rep.expected_min_groups, 2u);
}

TEST(Extract, BellPairsAtLevelOne) {
    for (int m = 2; m <= 6; ++m)
        for (int r = 0; r < m; ++r) {
            if (!is_valid(CodeSpec::qrm(r, m))) continue;
            const auto run = extract(r, m, 1);
            const auto& rep = run.report;
            EXPECT_EQ(rep.groups.size(), binom(m - 1, m - r - 1)) << r << "," << m;
            EXPECT_TRUE(rep.clean()) << r << "," << m;
            for (const auto& g : rep.groups) {
                ASSERT_EQ(g.size(), 2u);
                EXPECT_NE(part_of(run.plan, g[0]), part_of(run.plan, g[1]));
                EXPECT_TRUE(ghz_verified(run.decoded, g, true));
            }
            // Pairs are the only entanglement across the cut.
            EXPECT_EQ(rep.party_entanglement, 2 * rep.groups.size());
            EXPECT_EQ(rep.residual_entanglement, 0u);
        }
}

TEST(Extract, GroupCountMeetsBoundAtEveryLevel) {
    for (int m = 2; m <= 6; ++m)
        for (int r = 0; r < m; ++r) {
            if (!is_valid(CodeSpec::qrm(r, m))) continue;
            for (int l = 0; l <= m - r; ++l) {
                const auto run = extract(r, m, l);
                const auto& rep = run.report;
                EXPECT_TRUE(rep.stabilizers_verified);
                EXPECT_EQ(rep.expected_min_groups, l == 0 ? 0 : binom(m - l, m - r - 1));
                EXPECT_GE(rep.groups.size(), rep.expected_min_groups) << r << "," << m << " l=" << l;
                EXPECT_EQ(run.plan.parts.size(), std::size_t{1} << l);
                for (const auto& g : rep.groups) {
                    // One member per party.
                    EXPECT_EQ(g.size(), std::size_t{1} << l);
                    std::set<int> owners;
                    for (std::size_t q : g) owners.insert(part_of(run.plan, q));
                    EXPECT_EQ(owners.size(), g.size());
                    EXPECT_TRUE(ghz_verified(run.decoded, g, true));
                }
                for (std::size_t q : rep.deterministic_qubits) {
                    const auto z = single(run.decoded.n_qubits(), q, false);
                    EXPECT_TRUE(run.decoded.sign_of(z).has_value()) << "qubit " << q;
                }
            }
        }
}

TEST(Extract, LevelZeroUndoesTheEncoder) {
    const auto run = extract(2, 4, 0);
    EXPECT_TRUE(run.report.groups.empty());
    EXPECT_EQ(run.report.deterministic_qubits.size(), 16u);
    for (std::size_t q = 1; q <= 16; ++q) EXPECT_TRUE(check_stabilized(run.decoded, single(16, q, false)));
}

TEST(Extract, AnalyzeHandBuiltGhz) {
    Circuit c(4);
    c.h(1);
    c.cnot(1, 2);
    c.cnot(1, 3);
    c.x(4);
    const auto rep = analyze_groups(tableau_simulate(c, StabilizerTableau(4)));
    EXPECT_EQ(rep.groups, (std::vector<std::vector<std::size_t>>{{1, 2, 3}}));
    EXPECT_EQ(rep.deterministic_qubits, (std::vector<std::size_t>{4}));
    EXPECT_TRUE(rep.x_basis_groups.empty());
    EXPECT_TRUE(rep.stabilizers_verified);
    EXPECT_EQ(rep.residual_entanglement, 0u);
}

TEST(Extract, RejectsBadLevels) {
    EXPECT_THROW(build_extraction(CodeSpec::qrm(2, 4), 3), std::invalid_argument);
    EXPECT_THROW(build_extraction(CodeSpec::qrm(2, 4), -1), std::invalid_argument);
    EXPECT_THROW(build_extraction(CodeSpec::make(Family::PQRM, 2, 4), 1), std::invalid_argument);
}

TEST(Extract, JsonReport) {
    const auto j = to_json(extract(2, 4, 2).report);
    EXPECT_EQ(j["groups"].size(), 2u);
    EXPECT_TRUE(j.contains("deterministic_qubits"));
    EXPECT_TRUE(j.contains("expected_min_groups"));
}

}  // namespace
}  // namespace qrm
