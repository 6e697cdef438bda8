// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qrm/circuit.hpp"
#include "qrm/extract.hpp"
#include "qrm/synth.hpp"
#include "qrm/verify.hpp"

namespace {

using namespace qrm;

const std::vector<Family> kFamilies = {Family::QRM,           Family::BasisQRM, Family::PQRM,
                                       Family::BasisPQRM,     Family::StatePrepPQRM, Family::ZQRM,
                                       Family::PZQRM,         Family::StatePrepPZQRM, Family::RowReducedQRM};

struct Outcome {
    bool pass = true;
    std::ostringstream notes;
    void fail(const std::string& why) {
        pass = false;
        notes << why << "; ";
    }
};

// 1. Reference CNOT counts of the recursive and row-reduced encoders.
void table_counts(Outcome& o) {
    struct Row {
        int r, m;
        std::size_t red, rec;
    };
    const std::vector<Row> rows = {{1, 3, 12, 10},   {2, 4, 53, 30},   {3, 4, 29, 32},   {3, 6, 470, 176},
                                   {4, 6, 367, 190}, {5, 6, 125, 192}, {3, 7, 960, 372}, {4, 7, 1389, 430}};
    for (const auto& row : rows) {
        const std::size_t rec = cnot_count(recursive_qrm(row.r, row.m).circuit);
        const std::size_t red = cnot_count(row_reduced_encoder(row.r, row.m).circuit);
        if (rec != row.rec || red != row.red)
            o.fail("(" + std::to_string(row.r) + "," + std::to_string(row.m) + ") got " + std::to_string(red) + "/" +
                   std::to_string(rec));
    }
    o.notes << rows.size() << " rows";
}

// 2. State preparation counts and depths.
void table_state_prep(Outcome& o) {
    struct Row {
        int rd, md;
        std::size_t c0, cp, d0, dp;
    };
    const std::vector<Row> rows = {
        {1, 3, 8, 9, 4, 5}, {1, 4, 22, 24, 5, 6}, {2, 5, 63, 65, 6, 10}, {2, 6, 150, 153, 7, 11}, {2, 7, 332, 336, 8, 12}};
    for (const auto& row : rows) {
        const auto z = stateprep_pzqrm(row.rd, row.md, PrepState::Zero).circuit;
        const auto p = stateprep_pzqrm(row.rd, row.md, PrepState::Plus).circuit;
        const std::size_t got[4] = {cnot_count(z), cnot_count(p), depth(z), depth(p)};
        if (got[0] != row.c0 || got[1] != row.cp || got[2] != row.d0 || got[3] != row.dp)
            o.fail("(" + std::to_string(row.rd) + "," + std::to_string(row.md) + ") got " + std::to_string(got[0]) + "," +
                   std::to_string(got[1]) + " depth " + std::to_string(got[2]) + "," + std::to_string(got[3]));
    }
    o.notes << rows.size() << " rows";
}

// 3. Recurrence and circuit agree for every valid spec with m <= 7.
void recurrence_sweep(Outcome& o) {
    std::size_t n = 0;
    for (Family f : kFamilies)
        for (const auto& spec : enumerate_specs(f, 7)) {
            ++n;
            const std::size_t got = cnot_count(synthesize(spec).circuit), want = predict_cnot_count(spec);
            if (got != want) o.fail(spec.to_string() + " circuit " + std::to_string(got) + " vs " + std::to_string(want));
        }
    o.notes << n << " specs";
}

double coset_check(const SynthResult& s, const CodeSpec& spec, const BitVector& msg, const testing::OracleCode& code) {
    BitVector w(spec.width());
    for (std::size_t i = 1; i <= msg.size(); ++i)
        if (msg.get(i)) w ^= s.message_rows[i - 1];
    return testing::max_amp_deviation(testing::simulate_amps(s.circuit, s.input_for(msg)),
                                      testing::coset_amps(w, code.coset));
}

// 4. Every family instance of width <= 16, every basis message.
void dense_oracle(Outcome& o) {
    std::size_t instances = 0, messages = 0;
    double worst = 0;
    for (Family f : kFamilies)
        for (const auto& spec : enumerate_specs(f, 4)) {
            if (spec.width() > 16) continue;
            ++instances;
            const auto s = synthesize(spec);
            const auto code = testing::oracle_code(spec);
            if (!testing::same_span_modulo(s.message_rows, code.message, code.coset, spec.width())) {
                o.fail(spec.to_string() + " message rows");
                continue;
            }
            const std::size_t k = s.message_width;
            for (std::uint64_t t = 0; t < (std::uint64_t{1} << k); ++t) {
                BitVector msg(k);
                for (std::size_t i = 1; i <= k; ++i)
                    if ((t >> (i - 1)) & 1U) msg.set(i);
                const double d = coset_check(s, spec, msg, code);
                worst = std::max(worst, d);
                ++messages;
                if (d >= 1e-9) {
                    o.fail(spec.to_string() + " msg " + msg.to_string());
                    break;
                }
            }
        }
    // Classical codeword through the basis encoder.
    const auto basis = recursive_basis_qrm(2, 3);
    const auto word = testing::simulate_amps(basis.circuit, basis.input_for(BitVector::from_string("1010101")));
    if (word.size() != 1 || word.begin()->first != testing::word_of(BitVector::from_string("11000000")))
        o.fail("classical codeword of 1010101");
    // U(2, 4) end to end: outer permutation and all messages.
    const auto u = recursive_qrm(2, 4);
    if (u.outer_permutation.image() != std::vector<std::size_t>{3, 5, 6, 9, 10, 12, 1, 2, 4, 7, 8, 11, 13, 14, 15, 16})
        o.fail("U(2,4) permutation");
    o.notes << instances << " instances, " << messages << " messages, max deviation " << worst;
}

// 5. Encoded |0> of QRM(r, m) is fixed by X and Z of every row of G(m-r-1, m).
void tableau_scale(Outcome& o, double& m10_seconds) {
    std::size_t checked = 0;
    for (int m = 1; m <= 10; ++m) {
        const auto start = std::chrono::steady_clock::now();
        for (int r = 0; r < m; ++r) {
            const auto spec = CodeSpec::qrm(r, m);
            if (!is_valid(spec)) continue;
            const auto enc = synthesize(spec);
            const auto t = tableau_simulate(enc.circuit, StabilizerTableau(enc.circuit.width()));
            for (const auto& row : testing::rm_rows(m - r - 1, m)) {
                checked += 2;
                if (!check_stabilized(t, PauliOp::x_type(row)) || !check_stabilized(t, PauliOp::z_type(row))) {
                    o.fail(spec.to_string() + " row " + row.to_string());
                    break;
                }
            }
        }
        if (m == 10) m10_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    o.notes << checked << " stabilizer checks, m=10 took " << m10_seconds << " s";
}

// 6. Code-space entanglement across the first Plotkin cut.
void entanglement(Outcome& o) {
    std::size_t n_specs = 0;
    for (int m = 1; m <= 8; ++m)
        for (int r = 0; r < m; ++r) {
            if (!is_valid(CodeSpec::qrm(r, m))) continue;
            ++n_specs;
            const std::size_t h = std::size_t{1} << (m - 1);
            std::vector<std::size_t> lo, hi;
            for (std::size_t q = 1; q <= 2 * h; ++q) (q <= h ? lo : hi).push_back(q);
            std::size_t e = 0;
            for (int i = m - r - 1; i <= r; ++i) e += binom(m - 1, i);
            const auto enc = recursive_qrm(r, m);
            const std::size_t ent = code_entanglement(enc, {lo, hi});
            const std::size_t cross = cross_partition_cnots(enc.circuit, lo);
            if (ent != 2 * e || cross != e)
                o.fail("(" + std::to_string(r) + "," + std::to_string(m) + ") entanglement " + std::to_string(ent) +
                       " cross " + std::to_string(cross) + " want " + std::to_string(2 * e) + "/" + std::to_string(e));
        }
    o.notes << n_specs << " specs";
}

// 7. GHZ extraction from QRM(2,4) at l = 2 and Bell pairs at l = 1.
void extraction(Outcome& o) {
    const auto spec = CodeSpec::qrm(2, 4);
    const auto state = tableau_simulate(recursive_qrm(2, 4).circuit, StabilizerTableau(16));
    const auto rep = run_extraction(build_extraction(spec, 2), state);
    if (rep.groups != std::vector<std::vector<std::size_t>>{{2, 6, 10, 14}, {3, 7, 11, 15}}) o.fail("QRM(2,4) groups");
    if (!rep.stabilizers_verified) o.fail("QRM(2,4) group stabilizers");
    // Every qubit outside the two groups must be a Z eigenstate.
    std::vector<std::size_t> not_z;
    for (const auto& g : rep.x_basis_groups) not_z.insert(not_z.end(), g.begin(), g.end());
    not_z.insert(not_z.end(), rep.other_qubits.begin(), rep.other_qubits.end());
    if (!not_z.empty()) {
        std::string list;
        for (std::size_t q : not_z) list += (list.empty() ? "" : ",") + std::to_string(q);
        o.fail("QRM(2,4) qubits {" + list + "} are not Z eigenstates (X-basis GHZ)");
    }
    std::size_t pairs_checked = 0;
    for (int m = 2; m <= 6; ++m)
        for (int r = 0; r < m; ++r) {
            const auto s = CodeSpec::qrm(r, m);
            if (!is_valid(s)) continue;
            const auto st = tableau_simulate(recursive_qrm(r, m).circuit, StabilizerTableau(s.width()));
            const auto pairs = run_extraction(build_extraction(s, 1), st);
            ++pairs_checked;
            bool ok = pairs.stabilizers_verified && pairs.groups.size() == binom(m - 1, m - r - 1);
            for (const auto& g : pairs.groups) ok = ok && g.size() == 2;
            if (!ok) o.fail(s.to_string() + " Bell pairs " + std::to_string(pairs.groups.size()));
        }
    o.notes << pairs_checked << " Bell-pair specs";
}

// 8. Factorization identities (m <= 4) and monomial lemmas (m <= 6).
void theorems(Outcome& o) {
    testing::Gen gen(8);
    double worst = 0;
    for (int m = 2; m <= 4; ++m)
        for (int r = 0; r < m; ++r) {
            if (2 * r >= m - 1) {
                worst = std::max(worst, testing::theorem_qrm(r, m, gen, 8));
                if (r < m - 1) worst = std::max(worst, testing::theorem_pqrm(r, m, gen, 8));
            }
            for (int rd = r; rd <= m && r >= 1; ++rd) {
                worst = std::max(worst, testing::theorem_zqrm(r, m, rd, gen, 8));
                worst = std::max(worst, testing::theorem_pzqrm(r, m, rd, gen, 8));
            }
        }
    if (worst >= 1e-9) o.fail("factorization deviation " + std::to_string(worst));
    std::size_t lemma_cases = 0;
    for (int m = 0; m <= 6; ++m) {
        for (int r = 0; r <= m; ++r, ++lemma_cases)
            if (!testing::lemma_leading_entries(r, m)) o.fail("leading entries");
        // Every disjoint (A, B): each variable is in A, in B or in neither.
        std::size_t total = 1;
        for (int i = 0; i < m; ++i) total *= 3;
        for (std::size_t code = 0; code < total; ++code, ++lemma_cases) {
            std::vector<int> a, b;
            std::size_t c = code;
            for (int i = 1; i <= m; ++i, c /= 3) {
                if (c % 3 == 1) a.push_back(i);
                if (c % 3 == 2) b.push_back(i);
            }
            if (!testing::lemma_weight(m, a, b)) o.fail("weight lemma");
        }
        if (m >= 1)
            for (std::size_t idx = 0; idx < (std::size_t{1} << m); ++idx, ++lemma_cases)
                if (!testing::lemma_halves(Monomial::from_index(m, idx))) o.fail("halves lemma");
    }
    o.notes << "max deviation " << worst << ", " << lemma_cases << " lemma cases";
}

// 9. Distinct syndromes for all correctable errors.
void degeneracy(Outcome& o) {
    for (auto [r, m] : std::vector<std::pair<int, int>>{{1, 3}, {2, 4}}) {
        const std::size_t t = correctable_weight(r, m);
        const auto res = degeneracy_check(r, m, t);
        const std::size_t n = std::size_t{1} << m;
        std::size_t expect = 0, pw = 1;
        for (std::size_t w = 0; w <= t; ++w, pw *= 3) expect += binom(static_cast<int>(n), static_cast<int>(w)) * pw;
        if (!res.non_degenerate || res.errors_checked != expect)
            o.fail("QRM(" + std::to_string(r) + "," + std::to_string(m) + ")");
        o.notes << "QRM(" << r << "," << m << ") t=" << t << " errors=" << res.errors_checked << " ";
    }
}

// 10. Error propagation against the reference values.
void error_propagation(Outcome& o) {
    struct Row {
        int r, m;
        double red, rec;
    };
    const std::vector<Row> rows = {{1, 3, 3.37, 3.5},    {2, 4, 7.06, 7.0},     {3, 4, 4.5, 8.12},
                                   {3, 6, 16.73, 15.87}, {4, 6, 14.53, 19.75},  {5, 6, 5.84, 20.78},
                                   {3, 7, 20.35, 18.375}, {4, 7, 26.0, 26.93}};
    double worst = 0;
    for (const auto& row : rows) {
        const double red = error_prop_distance(row_reduced_encoder(row.r, row.m).circuit).value();
        const double rec = error_prop_distance(recursive_qrm(row.r, row.m).circuit).value();
        const double d = std::max(std::abs(red - row.red), std::abs(rec - row.rec));
        worst = std::max(worst, d);
        if (d > 0.01 + 1e-12)
            o.fail("(" + std::to_string(row.r) + "," + std::to_string(row.m) + ") " + std::to_string(red) + "/" +
                   std::to_string(rec));
    }
    o.notes << "max |diff| " << worst;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0: no limit
        std::function<void(Outcome&)> run;
    };
    double m10 = 0;
    const std::vector<Criterion> all = {
        {1, "reference CNOT counts", 10, table_counts},
        {2, "reference state preparation counts and depths", 30, table_state_prep},
        {3, "recurrence equals circuit count for m <= 7", 0, recurrence_sweep},
        {4, "dense amplitude oracle, width <= 16", 0, dense_oracle},
        {5, "tableau stabilizers up to m = 10", 0, [&](Outcome& o) { tableau_scale(o, m10); }},
        {6, "entanglement across the first Plotkin cut, m <= 8", 0, entanglement},
        {7, "GHZ extraction", 0, extraction},
        {8, "factorization identities and monomial lemmas", 0, theorems},
        {9, "non-degeneracy of QRM(1,3) and QRM(2,4)", 0, degeneracy},
        {10, "E_d within 0.01 of reference values", 0, error_propagation},
    };
    int failures = 0;
    for (const auto& c : all) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0 && secs > c.limit_s) o.fail("took longer than " + std::to_string(c.limit_s) + " s");
        if (c.id == 5 && m10 > 60) o.fail("m = 10 took longer than 60 s");
        if (!o.pass) ++failures;
        char t[32];
        std::snprintf(t, sizeof t, "%.2f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " [" << t << "] " << o.notes.str()
                  << std::endl;
    }
    std::cout << (all.size() - failures) << "/" << all.size() << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
