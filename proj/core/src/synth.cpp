#include "qrm/synth.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <cstdint>
#include <tuple>

namespace qrm {

namespace {

int ceil_half(int x) { return x <= 0 ? 0 : (x + 1) / 2; }

std::size_t pow2(int e) { return std::size_t{1} << e; }

// Encoder circuit with its row -> input-qubit map. `hook` is the gate index
// right after which a CNOT targeting the last qubit may be placed without
// changing the encoder (only tracked for U*(r, r+1)).
// A row the encoder prepares on its own (Hadamard inputs and their images
// through sub-encoders): just before gate `at` (frame after the initial
// permutation), qubit `qubit` holds the coefficient of `row`.
struct Tap {
    BitVector row;
    std::size_t qubit = 0;
    std::size_t at = 0;
};

struct Enc {
    Circuit circuit;
    QubitIndexMap map;
    std::size_t hook = 0;
    Permutation outer;  // permutation of the outermost step
    std::vector<Tap> taps;
};
using EncPtr = std::shared_ptr<const Enc>;

enum class Kind { Qrm, Basis, Pqrm, BasisPqrm, SpPqrm, Zqrm, Pzqrm, SpPzqrm };

using Key = std::tuple<Kind, int, int, int, int, bool>;

std::mutex cache_mu;
std::map<Key, EncPtr>& cache() {
    static std::map<Key, EncPtr> c;
    return c;
}

template <class F>
EncPtr memo(const Key& key, F&& make) {
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = cache().find(key);
        if (it != cache().end()) return it->second;
    }
    EncPtr e = std::make_shared<const Enc>(make());
    std::lock_guard<std::mutex> lock(cache_mu);
    return cache().emplace(key, std::move(e)).first->second;
}

std::vector<BitVector> rows_of(const GeneratorSet& g) { return g.matrix.rows(); }

std::vector<BitVector> punctured_rows(const std::vector<BitVector>& rows) {
    std::vector<BitVector> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.punctured());
    return out;
}

// Rows of G(a, m) \ G(b, m), optionally with the constant row put first.
std::vector<BitVector> band(int a, int b, int m, bool with_one = false) {
    auto rows = rows_of(quotient_generators(a, b, m));
    if (with_one && b >= 0) rows.insert(rows.begin(), BitVector::ones(pow2(m)));
    return rows;
}

std::vector<BitVector> without_one(const std::vector<BitVector>& rows) {
    std::vector<BitVector> out;
    for (const auto& r : rows)
        if (r.weight() != r.size()) out.push_back(r);
    return out;
}

std::vector<BitVector> doubled(const std::vector<BitVector>& rows, bool puncture_first) {
    std::vector<BitVector> out;
    for (const auto& r : rows) out.push_back(BitVector::concat(puncture_first ? r.punctured() : r, r));
    return out;
}

// Input qubit i+1 goes to targets[i] (0: unassigned); unassigned inputs
// fill the unused positions in increasing order.
Permutation placement(std::size_t n, const std::vector<std::size_t>& targets) {
    std::vector<std::size_t> img(n, 0);
    std::vector<bool> used(n + 1, false);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] == 0) continue;
        if (targets[i] > n || used[targets[i]])
            throw std::logic_error("placement: conflicting target " + std::to_string(targets[i]));
        img[i] = targets[i];
        used[targets[i]] = true;
    }
    std::size_t next = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (img[i] != 0) continue;
        while (used[next]) ++next;
        img[i] = next;
        used[next] = true;
    }
    return Permutation(std::move(img));
}

struct Halves {
    BitVector first;
    BitVector second;
};

// Splits a row of length 2h (or 2h-1 when punctured) into its two Plotkin halves.
Halves split(const BitVector& row, std::size_t h, bool punctured) {
    const std::size_t lead = punctured ? h - 1 : h;
    return {row.slice(1, lead), row.slice(lead + 1, h)};
}

// Destination of a stacked row under the Plotkin permutation: (u, u) or
// (u*, u) rows go to M1[u] (M1[u*]); (0, v) rows go to off + M2[v].
std::size_t plotkin_target(const BitVector& row, std::size_t h, bool punctured, const QubitIndexMap& m1,
                           const QubitIndexMap& m2, std::size_t off) {
    auto [a, b] = split(row, h, punctured);
    if (a.none()) return off + m2.at(b);
    const BitVector u_lead = punctured ? b.punctured() : b;
    if (a != u_lead) throw std::logic_error("row " + row.to_string() + " is neither (u,u) nor (0,v)");
    return m1.at(a);
}

Enc finish(CircuitBuilder& b, std::vector<BitVector> stacked) {
    Enc e{b.build(), {}, 0, {}, {}};
    for (std::size_t i = 0; i < stacked.size(); ++i) e.map.insert(stacked[i], i + 1);
    return e;
}

EncPtr enc_basis(int r, int m);
EncPtr enc_qrm(int r, int m);
EncPtr enc_pqrm(int r, int m, bool commute);
EncPtr enc_basis_pqrm(int r, int m, bool commute);
EncPtr enc_sp_pqrm(int r, int m);
EncPtr enc_zqrm(int r, int m, int rd, int md);
EncPtr enc_pzqrm(int r, int m, int rd, int md, bool commute);
EncPtr enc_sp_pzqrm(int r, int m, int rd, int md);

// GF(2) symbolic run of a CNOT/H circuit: every mapped input starts as its
// own symbol, other inputs are |0>, and each Hadamard replaces its qubit with
// a fresh symbol.
struct LinearTrace {
    struct Probe {
        std::size_t qubit;
        std::size_t at;  // gate index the value is available before
    };
    std::vector<std::vector<std::pair<std::size_t, BitVector>>> history;  // per qubit, (from gate, value)
    std::unordered_map<BitVector, Probe, BitVectorHash> first_seen;
    std::vector<BitVector> final_values;

    BitVector value_at(std::size_t q, std::size_t at) const {
        const auto& h = history[q - 1];
        auto it = std::upper_bound(h.begin(), h.end(), at, [](std::size_t a, const auto& e) { return a < e.first; });
        return std::prev(it)->second;
    }
};

LinearTrace trace_linear(const Circuit& c, const QubitIndexMap& inputs) {
    const std::size_t n = c.width();
    std::size_t n_h = 0;
    for (const auto& g : c.gates())
        if (g.kind == GateKind::H) ++n_h;
    const std::size_t syms = n + n_h;
    LinearTrace tr;
    tr.history.resize(n);
    std::vector<BitVector> val(n, BitVector(syms));
    for (const auto& [row, i] : inputs.entries()) val[c.initial_perm()(i) - 1] = BitVector::unit(syms, i);
    for (std::size_t q = 1; q <= n; ++q) {
        tr.history[q - 1].emplace_back(0, val[q - 1]);
        tr.first_seen.emplace(val[q - 1], LinearTrace::Probe{q, 0});
    }
    std::size_t fresh = n;
    const auto& gates = c.gates();
    for (std::size_t gi = 0; gi < gates.size(); ++gi) {
        const Gate& g = gates[gi];
        std::size_t changed = 0;
        if (g.kind == GateKind::H) {
            val[g.a - 1] = BitVector::unit(syms, ++fresh);
            changed = g.a;
        } else if (g.kind == GateKind::CNOT) {
            val[g.b - 1] ^= val[g.a - 1];
            changed = g.b;
        } else {
            continue;  // X only flips a phase-free constant
        }
        tr.history[changed - 1].emplace_back(gi + 1, val[changed - 1]);
        tr.first_seen.emplace(val[changed - 1], LinearTrace::Probe{changed, gi + 1});
    }
    tr.final_values = std::move(val);
    return tr;
}

// ANF coefficient of every monomial (by evaluation index) of the output word,
// as a combination of symbols.
std::vector<BitVector> output_coefficients(const LinearTrace& tr, bool punctured) {
    const std::size_t syms = tr.final_values.front().size();
    std::vector<BitVector> c;
    if (punctured) c.emplace_back(syms);
    for (const auto& v : tr.final_values) c.push_back(v);
    for (std::size_t bit = 1; bit < c.size(); bit <<= 1)
        for (std::size_t j = 0; j < c.size(); ++j)
            if (j & bit) c[j] ^= c[j ^ bit];
    return c;
}

const Tap* find_tap(const Enc& e, const BitVector& row) {
    for (const auto& t : e.taps)
        if (t.row == row) return &t;
    return nullptr;
}

// Shared Plotkin step: Hadamards on the inputs listed in `hadamards`, the
// permutation, the CNOT fan from M1[u] (or M1[u*]) to off + M2[u], then the
// two sub-encoders side by side.
//
// When the first sub-encoder prepares a fan row itself (a state-preparation
// child), the parent leaves that input alone and reads the row from the
// child's tap instead. With `loose_fan`, a fan row u the child only holds as
// u + w (w a single monomial) is copied as w; the u part differs by a row the
// parent code already contains.
Enc plotkin_step(int m, bool punctured, const std::vector<BitVector>& stacked, const std::vector<std::size_t>& hadamards,
                 const Enc& c1, const Enc& c2, const std::vector<BitVector>& fan, bool loose_fan = false) {
    const std::size_t h = pow2(m - 1);
    const std::size_t lead = punctured ? h - 1 : h;
    const std::size_t off = lead;
    const std::size_t n = off + h;

    // Rows a sub-encoder prepares without an input qubit; their parent input
    // stays an idle ancilla.
    std::vector<bool> internal(stacked.size(), false);
    std::vector<std::size_t> targets;
    targets.reserve(stacked.size());
    for (std::size_t i = 0; i < stacked.size(); ++i) {
        const auto [a, second] = split(stacked[i], h, punctured);
        const bool in_c1 = !a.none();
        const Enc& child = in_c1 ? c1 : c2;
        const BitVector& key = in_c1 ? a : second;
        if (!child.map.contains(key) && (loose_fan || find_tap(child, key))) {
            internal[i] = true;
            targets.push_back(0);
            continue;
        }
        targets.push_back(plotkin_target(stacked[i], h, punctured, c1.map, c2.map, off));
    }
    Permutation outer = placement(n, targets);

    CircuitBuilder b(n);
    std::vector<std::size_t> own_h;
    for (std::size_t q : hadamards) {
        const auto [a, second] = split(stacked[q - 1], h, punctured);
        if (internal[q - 1] || (a.none() ? find_tap(c2, second) : find_tap(c1, a))) continue;  // the child prepares it
        b.h(q);
        own_h.push_back(q);
    }
    b.permute(outer);

    struct Insert {
        std::size_t at;
        Gate g;
    };
    std::vector<Insert> inserts;
    std::vector<BitVector> copied(c1.taps.size(), BitVector(h));  // second half each c1 tap reaches
    if (!loose_fan) {
        for (const auto& u : fan) {
            const BitVector key = punctured ? u.punctured() : u;
            const std::size_t target = off + c2.map.at(u);
            const Tap* t = find_tap(c1, key);
            if (!t) {
                b.cnot(c1.map.at(key), target);
                continue;
            }
            inserts.push_back({t->at, Gate::cnot(t->qubit, target)});
            copied[static_cast<std::size_t>(t - c1.taps.data())] ^= u;
        }
    } else {
        // The child prepares some fan rows itself. Copy, for each fan monomial
        // u, its coefficient in the child's output word from wherever that
        // linear combination first sits on a single qubit; otherwise add up
        // the fresh Hadamard symbols one CNOT at a time.
        const LinearTrace tr = trace_linear(c1.circuit, c1.map);
        const auto coeff = output_coefficients(tr, punctured);
        std::vector<std::size_t> tap_symbol;
        for (const auto& t : c1.taps) {
            const BitVector v = tr.value_at(t.qubit, t.at);
            if (v.weight() != 1) throw std::logic_error("plotkin_step: tap does not hold a single symbol");
            tap_symbol.push_back(v.first_one());
        }
        for (const auto& u : fan) {
            const BitVector& f = coeff[u.first_one() - 1];
            if (f.none()) continue;
            const std::size_t target = off + c2.map.at(u);
            if (auto it = tr.first_seen.find(f); it != tr.first_seen.end()) {
                inserts.push_back({it->second.at, Gate::cnot(it->second.qubit, target)});
            } else {
                for (std::size_t sym : f.support()) {
                    auto one = tr.first_seen.find(BitVector::unit(f.size(), sym));
                    if (one == tr.first_seen.end()) throw std::logic_error("plotkin_step: symbol never isolated");
                    inserts.push_back({one->second.at, Gate::cnot(one->second.qubit, target)});
                }
            }
            for (std::size_t k = 0; k < c1.taps.size(); ++k)
                if (f.get(tap_symbol[k])) copied[k] ^= u;
        }
    }

    const std::size_t base1 = b.gate_count();
    if (inserts.empty()) {
        b.embed(c1.circuit, 0);
    } else {
        std::stable_sort(inserts.begin(), inserts.end(), [](const Insert& x, const Insert& y) { return x.at < y.at; });
        CircuitBuilder tmp(n);
        tmp.embed(Circuit(c1.circuit.width(), c1.circuit.initial_perm(), {}), 0);
        std::size_t k = 0;
        const auto& gates = c1.circuit.gates();
        for (std::size_t gi = 0; gi <= gates.size(); ++gi) {
            while (k < inserts.size() && inserts[k].at == gi) tmp.gate(inserts[k++].g);
            if (gi < gates.size()) tmp.gate(gates[gi]);
        }
        b.embed(tmp.build(), 0);
    }
    const std::size_t base2 = b.gate_count();
    b.embed(c2.circuit, off);

    Enc e{b.build(), {}, 0, std::move(outer), {}};
    for (std::size_t i = 0; i < stacked.size(); ++i)
        if (!internal[i]) e.map.insert(stacked[i], i + 1);
    for (std::size_t q : own_h) e.taps.push_back({stacked[q - 1], e.circuit.initial_perm()(q), own_h.size()});
    auto shifted = [&](std::size_t at) {
        std::size_t extra = 0;
        for (const auto& ins : inserts)
            if (ins.at <= at) ++extra;
        return base1 + at + extra;
    };
    for (std::size_t k = 0; k < c1.taps.size(); ++k) {
        const auto& t = c1.taps[k];
        e.taps.push_back({BitVector::concat(t.row, copied[k]), t.qubit, shifted(t.at)});
    }
    for (const auto& t : c2.taps) e.taps.push_back({BitVector::concat(BitVector(lead), t.row), off + t.qubit, base2 + t.at});
    return e;
}

std::vector<std::size_t> range_positions(std::size_t first, std::size_t count) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(first + i);
    return v;
}

EncPtr enc_basis(int r, int m) {
    return memo({Kind::Basis, r, m, 0, 0, false}, [&]() -> Enc {
        if (m == 0) {
            Enc e{Circuit(1), {}, 0, {}, {}};
            e.map.insert(BitVector::ones(1), 1);
            return e;
        }
        const int rc = std::min(r, m - 1);
        auto child = enc_basis(rc, m - 1);
        auto stacked = rows_of(generator_matrix(r, m));
        return plotkin_step(m, false, stacked, {}, *child, *child, rows_of(generator_matrix(rc, m - 1)));
    });
}

EncPtr enc_qrm(int r, int m) {
    if (r == m) return enc_basis(m, m);
    return memo({Kind::Qrm, r, m, 0, 0, false}, [&]() -> Enc {
        auto child = enc_qrm(r, m - 1);
        auto g1 = band(r, m - r - 1, m);
        auto g2 = band(m - r - 1, m - r - 2, m - 1);
        auto stacked = g1;
        for (auto& row : doubled(g2, false)) stacked.push_back(row);
        return plotkin_step(m, false, stacked, range_positions(g1.size() + 1, g2.size()), *child, *child,
                            band(r, m - r - 2, m - 1));
    });
}

EncPtr enc_pqrm(int r, int m, bool commute) {
    return memo({Kind::Pqrm, r, m, 0, 0, commute}, [&]() -> Enc {
        if (m == 1) {
            Enc e{Circuit(1), {}, 0, {}, {}};
            e.map.insert(BitVector::ones(1), 1);
            return e;
        }
        if (m > r + 1) {
            auto c1 = enc_pqrm(r, m - 1, commute);
            auto c2 = enc_qrm(r, m - 1);
            auto g1 = punctured_rows(band(r, m - r - 1, m, true));
            auto g2 = band(m - r - 1, m - r - 2, m - 1);
            auto stacked = g1;
            for (auto& row : doubled(g2, true)) stacked.push_back(row);
            return plotkin_step(m, true, stacked, range_positions(g1.size() + 1, g2.size()), *c1, *c2,
                                band(r, m - r - 2, m - 1));
        }
        // m = r + 1: (w1*, w1 + w2) plus the (v*, v) row with v = 0...01.
        auto c1 = enc_pqrm(r - 1, r, commute);
        auto c2 = enc_basis(r - 1, r);
        const std::size_t h = pow2(r);
        const std::size_t off = h - 1;
        const std::size_t n = off + h;
        auto stacked = punctured_rows(rows_of(generator_matrix(r, r + 1)));
        const BitVector e_last = BitVector::unit(h, h);
        std::vector<std::size_t> targets;
        for (const auto& row : stacked) {
            auto [a, b] = split(row, h, true);
            if (b == e_last && a == e_last.punctured())
                targets.push_back(n);
            else
                targets.push_back(plotkin_target(row, h, true, c1->map, c2->map, off));
        }
        CircuitBuilder b(n);
        Permutation outer = placement(n, targets);
        b.permute(outer);
        for (const auto& u : rows_of(generator_matrix(r - 1, r))) b.cnot(c1->map.at(u.punctured()), off + c2->map.at(u));
        if (commute) {
            // Extra CNOT placed at the inner encoder's hook instead of after it.
            std::vector<Gate> gates = c1->circuit.gates();
            gates.insert(gates.begin() + static_cast<std::ptrdiff_t>(c1->hook), Gate::cnot(n, off));
            CircuitBuilder tmp(n);
            tmp.embed(Circuit(off, c1->circuit.initial_perm(), {}), 0);
            for (const auto& g : gates) tmp.gate(g);
            b.embed(tmp.build(), 0);
        } else {
            b.embed(c1->circuit, 0);
            b.cnot(n, off);
        }
        const std::size_t hook = b.gate_count();
        b.embed(c2->circuit, off);
        Enc e = finish(b, stacked);
        e.hook = hook;
        e.outer = std::move(outer);
        return e;
    });
}

EncPtr enc_basis_pqrm(int r, int m, bool commute) {
    if (r == m - 1) return enc_pqrm(r, m, commute);
    return memo({Kind::BasisPqrm, r, m, 0, 0, commute}, [&]() -> Enc {
        auto c1 = enc_basis_pqrm(r, m - 1, commute);
        auto c2 = enc_basis(r, m - 1);
        auto stacked = punctured_rows(rows_of(generator_matrix(r, m)));
        return plotkin_step(m, true, stacked, {}, *c1, *c2, rows_of(generator_matrix(r, m - 1)));
    });
}

EncPtr enc_sp_pqrm(int r, int m) {
    return memo({Kind::SpPqrm, r, m, 0, 0, false}, [&]() -> Enc {
        if (m == 0) return Enc{Circuit(0), {}, 0, {}, {}};
        if (m == 1) {
            // r = 0 or 1: the only non-constant row is x_1, punctured to [1].
            Enc e{Circuit(1), {}, 0, {}, {}};
            e.map.insert(BitVector::ones(1), 1);
            return e;
        }
        if (r >= m - 1) {
            // r = m: rows of G(r, r) \ {1}; r = m - 1: rows of G(r+1, r+1) \ {1}.
            const int top = r == m ? r : r + 1;
            const int sub = top - 1;
            auto c1 = enc_sp_pqrm(sub, sub);
            auto c2 = enc_qrm(sub, sub);
            auto stacked = punctured_rows(without_one(rows_of(generator_matrix(top, top))));
            return plotkin_step(m, true, stacked, {}, *c1, *c2, without_one(rows_of(generator_matrix(sub, sub))));
        }
        auto c1 = enc_sp_pqrm(r, m - 1);
        auto c2 = enc_qrm(r, m - 1);
        auto g1 = punctured_rows(band(r, m - r - 1, m));
        auto g2 = band(m - r - 1, m - r - 2, m - 1);
        auto stacked = g1;
        for (auto& row : doubled(g2, true)) stacked.push_back(row);
        return plotkin_step(m, true, stacked, range_positions(g1.size() + 1, g2.size()), *c1, *c2,
                            band(r, m - r - 2, m - 1));
    });
}

bool narrow(int rd, int md) { return 2 * rd + 1 <= md; }

// Rewrites a state-preparation encoder so that every output monomial has a
// single Hadamard symbol as its coefficient. Hadamards move to the front
// (each acts on an untouched qubit) and are followed by CNOTs between the
// fresh qubits; the prepared state is unchanged. A parent fan then copies
// each monomial with one CNOT straight after the Hadamard layer.
Enc monomial_basis(const Enc& e) {
    const Circuit& c = e.circuit;
    const std::size_t n = c.width();
    std::vector<bool> touched(n + 1, false);
    std::vector<Gate> hs, rest;
    for (const auto& g : c.gates()) {
        if (g.kind == GateKind::H) {
            if (touched[g.a]) return e;
            hs.push_back(g);
        } else {
            rest.push_back(g);
            touched[g.b] = true;
        }
        touched[g.a] = true;
    }
    std::vector<Gate> gates = hs;
    gates.insert(gates.end(), rest.begin(), rest.end());
    const LinearTrace tr = trace_linear(Circuit(n, c.initial_perm(), gates), e.map);
    const auto coeff = output_coefficients(tr, true);

    struct Row {
        std::size_t index;
        BitVector f;
    };
    std::vector<Row> rows;
    bool mixed = false;
    for (std::size_t j = 0; j < coeff.size(); ++j) {
        if (coeff[j].none()) continue;
        for (std::size_t s : coeff[j].support())
            if (s <= n) return e;  // depends on a mapped input
        mixed |= coeff[j].weight() > 1;
        rows.push_back({j, coeff[j]});
    }
    if (!mixed || rows.size() != hs.size()) return e;
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.f.weight() < b.f.weight(); });

    // Column elimination: adding column p into column q is CNOT(q -> p) right
    // after the Hadamards.
    const std::size_t syms = coeff.front().size();
    std::vector<bool> pivot(syms + 1, false);
    std::vector<Gate> basis;
    std::vector<Tap> taps;
    const std::size_t len = coeff.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t p = 0;
        for (std::size_t s : rows[i].f.support())
            if (!pivot[s]) {
                p = s;
                break;
            }
        if (p == 0) return e;  // singular
        pivot[p] = true;
        for (std::size_t s : rows[i].f.support()) {
            if (s == p) continue;
            for (auto& r : rows)
                if (r.f.get(p)) r.f.flip(s);
            basis.push_back(Gate::cnot(hs[s - n - 1].a, hs[p - n - 1].a));
        }
        BitVector word(len);
        for (std::size_t k = 0; k < len; ++k)
            if ((k & rows[i].index) == rows[i].index) word.set(k + 1);
        taps.push_back({word.punctured(), hs[p - n - 1].a, hs.size()});
    }
    gates = hs;
    gates.insert(gates.end(), basis.begin(), basis.end());
    gates.insert(gates.end(), rest.begin(), rest.end());
    Enc out{Circuit(n, c.initial_perm(), std::move(gates)), e.map, 0, e.outer, std::move(taps)};
    return out;
}

EncPtr enc_sp_pqrm_monomial(int r, int m) {
    return memo({Kind::SpPqrm, r, m, 0, 0, true}, [&]() -> Enc { return monomial_basis(*enc_sp_pqrm(r, m)); });
}

EncPtr enc_zqrm(int r, int m, int rd, int md) {
    if (narrow(rd, md) && r == -1) return enc_basis(rd, m);
    return memo({Kind::Zqrm, r, m, rd, md, false}, [&]() -> Enc {
        if (!narrow(rd, md) && m == rd) {
            auto c = enc_basis(rd, rd);
            CircuitBuilder b(c->circuit.width());
            for (const auto& g : rows_of(generator_matrix(r, rd))) b.h(c->map.at(g));
            b.embed(c->circuit, 0);
            Enc e{b.build(), c->map, 0, {}, {}};
            return e;
        }
        auto child = enc_zqrm(r - 1, m - 1, rd, md);
        auto g1 = band(rd, r, m);
        auto g2 = band(r, r - 1, m - 1);
        auto stacked = g1;
        for (auto& row : doubled(g2, false)) stacked.push_back(row);
        return plotkin_step(m, false, stacked, range_positions(g1.size() + 1, g2.size()), *child, *child,
                            band(rd, r - 1, m - 1));
    });
}

EncPtr enc_pzqrm(int r, int m, int rd, int md, bool commute) {
    if (narrow(rd, md) && r == 0) return enc_basis_pqrm(rd, m, commute);
    return memo({Kind::Pzqrm, r, m, rd, md, commute}, [&]() -> Enc {
        if (!narrow(rd, md) && m == rd + 1) {
            auto c = enc_pqrm(rd, rd + 1, commute);
            CircuitBuilder b(c->circuit.width());
            for (const auto& g : without_one(rows_of(generator_matrix(r, rd + 1)))) b.h(c->map.at(g.punctured()));
            b.embed(c->circuit, 0);
            return Enc{b.build(), c->map, 0, {}, {}};
        }
        auto c1 = enc_pzqrm(r - 1, m - 1, rd, md, commute);
        auto c2 = enc_zqrm(r - 1, m - 1, rd, md);
        auto g1 = punctured_rows(band(rd, r, m, true));
        auto g2 = band(r, r - 1, m - 1);
        auto stacked = g1;
        for (auto& row : doubled(g2, true)) stacked.push_back(row);
        return plotkin_step(m, true, stacked, range_positions(g1.size() + 1, g2.size()), *c1, *c2,
                            band(rd, r - 1, m - 1));
    });
}

EncPtr enc_sp_pzqrm(int r, int m, int rd, int md) {
    if (narrow(rd, md) && r == 0) return enc_sp_pqrm_monomial(rd, m);
    return memo({Kind::SpPzqrm, r, m, rd, md, false}, [&]() -> Enc {
        if (!narrow(rd, md) && m == rd + 1) {
            auto c = enc_sp_pqrm(rd, rd + 1);
            CircuitBuilder b(c->circuit.width());
            for (const auto& g : without_one(rows_of(generator_matrix(r, rd + 1)))) b.h(c->map.at(g.punctured()));
            b.embed(c->circuit, 0);
            return Enc{b.build(), c->map, 0, {}, {}};
        }
        auto c1 = enc_sp_pzqrm(r - 1, m - 1, rd, md);
        auto c2 = enc_zqrm(r - 1, m - 1, rd, md);
        auto g1 = punctured_rows(band(rd, r, m));
        auto g2 = band(r, r - 1, m - 1);
        auto stacked = g1;
        for (auto& row : doubled(g2, true)) stacked.push_back(row);
        return plotkin_step(m, true, stacked, range_positions(g1.size() + 1, g2.size()), *c1, *c2,
                            band(rd, r - 1, m - 1), narrow(rd, md));
    });
}

SynthResult to_result(const Enc& e, std::vector<BitVector> message_rows) {
    SynthResult s;
    s.circuit = e.circuit;
    s.index_map = e.map;
    s.message_rows = std::move(message_rows);
    s.message_width = s.message_rows.size();
    s.ancilla_count = s.circuit.width() - s.message_width;
    s.outer_permutation = e.outer.size() ? e.outer : Permutation::identity(s.circuit.width());
    return s;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::vector<int> fill_set(const Monomial& a, int s) {
    std::vector<int> out = a.vars();
    for (int i = 1; static_cast<int>(out.size()) < s && i <= a.ambient(); ++i)
        if (!a.contains(i)) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

BitVector row_reduced_row(const Monomial& a, int s) {
    // x_A * prod_{i in S \ A} (1 + x_i) expands to the sum over A ⊆ B ⊆ S of x_B.
    std::vector<int> comp;
    for (int i : fill_set(a, s))
        if (!a.contains(i)) comp.push_back(i);
    return eval_vector_with_complements(a, comp);
}

std::string family_name(Family f) {
    switch (f) {
        case Family::QRM: return "qrm";
        case Family::BasisQRM: return "basis-qrm";
        case Family::PQRM: return "pqrm";
        case Family::BasisPQRM: return "basis-pqrm";
        case Family::StatePrepPQRM: return "stateprep-pqrm";
        case Family::ZQRM: return "zqrm";
        case Family::PZQRM: return "pzqrm";
        case Family::StatePrepPZQRM: return "stateprep-pzqrm";
        case Family::RowReducedQRM: return "rred";
    }
    return "?";
}

Family parse_family(const std::string& name) {
    static const std::map<std::string, Family> names = {
        {"qrm", Family::QRM},
        {"basis-qrm", Family::BasisQRM},
        {"basis", Family::BasisQRM},
        {"pqrm", Family::PQRM},
        {"basis-pqrm", Family::BasisPQRM},
        {"stateprep-pqrm", Family::StatePrepPQRM},
        {"sp-pqrm", Family::StatePrepPQRM},
        {"zqrm", Family::ZQRM},
        {"pzqrm", Family::PZQRM},
        {"stateprep-pzqrm", Family::StatePrepPZQRM},
        {"sp-pzqrm", Family::StatePrepPZQRM},
        {"rred", Family::RowReducedQRM},
        {"row-reduced", Family::RowReducedQRM},
    };
    auto it = names.find(name);
    if (it == names.end()) throw std::invalid_argument("unknown family '" + name + "'");
    return it->second;
}

bool CodeSpec::zero_rate_family() const {
    return family == Family::ZQRM || family == Family::PZQRM || family == Family::StatePrepPZQRM;
}

std::size_t CodeSpec::width() const {
    switch (family) {
        case Family::PQRM:
        case Family::BasisPQRM:
        case Family::StatePrepPQRM:
        case Family::PZQRM:
        case Family::StatePrepPZQRM:
            return pow2(m) - 1;
        default:
            return pow2(m);
    }
}

std::string CodeSpec::to_string() const {
    std::string s = family_name(family) + "(" + std::to_string(r) + "," + std::to_string(m);
    if (rd && md) s += ";" + std::to_string(*rd) + "," + std::to_string(*md);
    return s + ")";
}

void validate(const CodeSpec& s) {
    const int r = s.r, m = s.m;
    require(m >= 0 && m <= 16, "m must lie in 0..16");
    switch (s.family) {
        case Family::QRM:
        case Family::RowReducedQRM:
            require(r <= m, "r <= m violated");
            require(r >= ceil_half(m - 1), "CSS condition violated: r >= ceil((m-1)/2) is required, got r = " +
                                               std::to_string(r) + ", m = " + std::to_string(m));
            return;
        case Family::BasisQRM:
            require(r >= 0 && r <= m, "0 <= r <= m violated");
            return;
        case Family::PQRM:
            require(r < m, "r < m violated: no unitary encoder exists for pQRM(r, r)");
            require(r >= ceil_half(m - 1), "CSS condition violated: r >= ceil((m-1)/2) is required");
            return;
        case Family::BasisPQRM:
            require(r >= 0 && r < m, "0 <= r < m violated");
            return;
        case Family::StatePrepPQRM:
            require(m >= 1, "m >= 1 required");
            require(r <= m, "r <= m violated");
            require(r >= ceil_half(m - 1), "r >= ceil((m-1)/2) violated");
            return;
        case Family::ZQRM:
        case Family::PZQRM:
        case Family::StatePrepPZQRM: {
            require(s.rd.has_value() && s.md.has_value(), "zero-rate families need r◇ and m◇ (--rd, --md)");
            const int rd = *s.rd, md = *s.md;
            require(rd >= 0 && rd < md, "0 <= r◇ < m◇ violated");
            require(rd - r == md - m, "(r, m) must equal (r◇ - i, m◇ - i)");
            const int i = rd - r;
            int i_max;
            if (s.family == Family::ZQRM)
                i_max = narrow(rd, md) ? rd + 1 : md - rd;
            else
                i_max = narrow(rd, md) ? rd : md - rd - 1;
            require(i >= 0 && i <= i_max,
                    "iteration index i = r◇ - r must lie in 0.." + std::to_string(i_max) + ", got " + std::to_string(i));
            if (s.family == Family::StatePrepPZQRM && narrow(rd, md))
                require(rd >= ceil_half(md - rd - 1),
                        "state preparation needs m◇ <= 3 r◇ + 1 so the final stage is a valid pQRM state preparation");
            if (s.family == Family::StatePrepPZQRM && narrow(rd, md) && i > 0)
                require(r > 0, "r = 0 is the final stage U(*,s)(r◇, m), which carries no message; use stateprep-pqrm");
            // At m◇ = 3 r◇ + 1 the final stage has no message rows, so the
            // intermediate stages only make sense inside the full preparation.
            if (s.family == Family::StatePrepPZQRM && narrow(rd, md) && i > 0)
                require(md < 3 * rd + 1, "m◇ = 3 r◇ + 1 admits only i = 0: the final stage carries no message");
            return;
        }
    }
}

bool is_valid(const CodeSpec& s) {
    try {
        validate(s);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

std::vector<CodeSpec> enumerate_specs(Family f, int max_m) {
    std::vector<CodeSpec> out;
    CodeSpec probe{f, 0, 0, {}, {}};
    if (probe.zero_rate_family()) {
        for (int md = 1; md <= max_m; ++md)
            for (int rd = 0; rd < md; ++rd)
                for (int i = 0; i <= rd + 1; ++i) {
                    CodeSpec s = CodeSpec::zero_rate(f, rd - i, md - i, rd, md);
                    if (is_valid(s)) out.push_back(s);
                }
    } else {
        for (int m = 0; m <= max_m; ++m)
            for (int r = -1; r <= m; ++r) {
                CodeSpec s = CodeSpec::make(f, r, m);
                if (is_valid(s)) out.push_back(s);
            }
    }
    return out;
}

std::vector<std::size_t> SynthResult::message_qubits() const {
    std::vector<std::size_t> q;
    q.reserve(message_rows.size());
    for (const auto& row : message_rows) q.push_back(index_map.at(row));
    return q;
}

BitVector SynthResult::input_for(const BitVector& msg) const {
    if (msg.size() != message_width) throw std::invalid_argument("input_for: message length mismatch");
    BitVector in(circuit.width());
    for (std::size_t i = 1; i <= msg.size(); ++i)
        if (msg.get(i)) in.set(index_map.at(message_rows[i - 1]));
    return in;
}

SynthResult recursive_basis_qrm(int r, int m) {
    validate(CodeSpec::make(Family::BasisQRM, r, m));
    return to_result(*enc_basis(r, m), rows_of(generator_matrix(r, m)));
}

SynthResult recursive_qrm(int r, int m) {
    validate(CodeSpec::qrm(r, m));
    auto rows = r == m ? rows_of(generator_matrix(m, m)) : band(r, m - r - 1, m);
    return to_result(*enc_qrm(r, m), std::move(rows));
}

SynthResult recursive_pqrm(int r, int m, const SynthOptions& opts) {
    validate(CodeSpec::make(Family::PQRM, r, m));
    return to_result(*enc_pqrm(r, m, opts.commute_punctured_cnot), punctured_rows(band(r, m - r - 1, m, true)));
}

SynthResult recursive_basis_pqrm(int r, int m, const SynthOptions& opts) {
    validate(CodeSpec::make(Family::BasisPQRM, r, m));
    return to_result(*enc_basis_pqrm(r, m, opts.commute_punctured_cnot),
                     punctured_rows(rows_of(generator_matrix(r, m))));
}

SynthResult recursive_stateprep_pqrm(int r, int m) {
    validate(CodeSpec::make(Family::StatePrepPQRM, r, m));
    return to_result(*enc_sp_pqrm(r, m), punctured_rows(band(r, std::max(m - r - 1, 0), m)));
}

SynthResult recursive_zqrm(int r, int m, int rd, int md) {
    validate(CodeSpec::zero_rate(Family::ZQRM, r, m, rd, md));
    return to_result(*enc_zqrm(r, m, rd, md), band(rd, r, m));
}

SynthResult recursive_pzqrm(int r, int m, int rd, int md, const SynthOptions& opts) {
    validate(CodeSpec::zero_rate(Family::PZQRM, r, m, rd, md));
    return to_result(*enc_pzqrm(r, m, rd, md, opts.commute_punctured_cnot), punctured_rows(band(rd, r, m, true)));
}

SynthResult recursive_stateprep_pzqrm(int r, int m, int rd, int md) {
    validate(CodeSpec::zero_rate(Family::StatePrepPZQRM, r, m, rd, md));
    return to_result(*enc_sp_pzqrm(r, m, rd, md), punctured_rows(band(rd, r, m)));
}

SynthResult row_reduced_encoder(int r, int m) {
    validate(CodeSpec::make(Family::RowReducedQRM, r, m));
    const std::size_t n = pow2(m);
    const auto g1 = quotient_generators(r, std::max(m - r - 1, -1), m);
    const auto g2 = generator_matrix(m - r - 1, m);
    std::vector<BitVector> stacked;
    for (const auto& a : g1.monomials) stacked.push_back(row_reduced_row(a, r));
    for (const auto& c : g2.monomials) stacked.push_back(row_reduced_row(c, m - r - 1));
    const std::size_t k1 = g1.size();
    const std::size_t k = stacked.size();

    // Leading entries are distinct, so completing with unit rows and sorting by
    // leading column gives an upper unitriangular T.
    std::vector<std::size_t> lead(k);
    std::vector<bool> used(n + 1, false);
    for (std::size_t i = 0; i < k; ++i) {
        lead[i] = stacked[i].first_one();
        if (used[lead[i]]) throw std::logic_error("row_reduced_encoder: repeated leading entry");
        used[lead[i]] = true;
    }
    std::vector<const BitVector*> t_rows(n + 1, nullptr);
    for (std::size_t i = 0; i < k; ++i) t_rows[lead[i]] = &stacked[i];

    CircuitBuilder b(n);
    for (std::size_t i = k1 + 1; i <= k; ++i) b.h(i);
    const Permutation outer = placement(n, lead);
    b.permute(outer);
    // Column elimination row by row; each off-diagonal one costs a CNOT and the
    // resulting operations run in reverse order.
    std::vector<Gate> ops;
    for (std::size_t j = 1; j <= n; ++j) {
        if (!t_rows[j]) continue;
        for (std::size_t l : t_rows[j]->support())
            if (l != j) ops.push_back(Gate::cnot(j, l));
    }
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) b.gate(*it);

    SynthResult s;
    s.circuit = b.build();
    for (std::size_t i = 0; i < k; ++i) s.index_map.insert(stacked[i], i + 1);
    s.message_rows.assign(stacked.begin(), stacked.begin() + static_cast<std::ptrdiff_t>(k1));
    s.message_width = k1;
    s.ancilla_count = n - k1;
    s.outer_permutation = outer;
    return s;
}

SynthResult stateprep_pzqrm(int rd, int md, PrepState which, const SynthOptions& opts) {
    if (which == PrepState::Zero) {
        auto s = recursive_stateprep_pzqrm(rd, md, rd, md);
        return s;
    }
    auto enc = recursive_pzqrm(rd, md, rd, md, opts);
    // Logical |+>: Hadamard on the message qubit of the constant row.
    CircuitBuilder b(enc.circuit.width());
    b.h(enc.index_map.at(BitVector::ones(enc.circuit.width())));
    b.embed(enc.circuit, 0);
    SynthResult s;
    s.circuit = b.build();
    s.index_map = enc.index_map;
    s.message_width = 0;
    s.ancilla_count = s.circuit.width();
    return s;
}

SynthResult synthesize(const CodeSpec& spec, const SynthOptions& opts) {
    validate(spec);
    switch (spec.family) {
        case Family::QRM: return recursive_qrm(spec.r, spec.m);
        case Family::BasisQRM: return recursive_basis_qrm(spec.r, spec.m);
        case Family::PQRM: return recursive_pqrm(spec.r, spec.m, opts);
        case Family::BasisPQRM: return recursive_basis_pqrm(spec.r, spec.m, opts);
        case Family::StatePrepPQRM: return recursive_stateprep_pqrm(spec.r, spec.m);
        case Family::ZQRM: return recursive_zqrm(spec.r, spec.m, *spec.rd, *spec.md);
        case Family::PZQRM: return recursive_pzqrm(spec.r, spec.m, *spec.rd, *spec.md, opts);
        case Family::StatePrepPZQRM: return recursive_stateprep_pzqrm(spec.r, spec.m, *spec.rd, *spec.md);
        case Family::RowReducedQRM: return row_reduced_encoder(spec.r, spec.m);
    }
    throw std::invalid_argument("synthesize: unknown family");
}

// ---- Gate-count recurrences ----

namespace {

std::size_t binom_sum(int n, int lo, int hi) {
    std::size_t s = 0;
    for (int i = std::max(lo, 0); i <= hi; ++i) s += binom(n, i);
    return s;
}

}  // namespace

std::size_t zeta_basis(int r, int m) {
    if (m == 0) return 0;
    if (r == m) return pow2(m - 1) + 2 * zeta_basis(m - 1, m - 1);
    return binom_sum(m - 1, 0, r) + 2 * zeta_basis(r, m - 1);
}

std::size_t zeta_qrm(int r, int m) {
    if (r == m) return zeta_basis(m, m);
    return binom_sum(m - 1, m - r - 1, r) + 2 * zeta_qrm(r, m - 1);
}

std::size_t zeta_pqrm(int r, int m) {
    if (m == r + 1) {
        if (r == 0) return 0;
        return pow2(r) + zeta_pqrm(r - 1, r) + zeta_basis(r - 1, r);
    }
    return binom_sum(m - 1, m - r - 1, r) + zeta_pqrm(r, m - 1) + zeta_qrm(r, m - 1);
}

std::size_t zeta_basis_pqrm(int r, int m) {
    if (r == m - 1) return zeta_pqrm(r, m);
    return binom_sum(m - 1, 0, r) + zeta_basis_pqrm(r, m - 1) + zeta_basis(r, m - 1);
}

std::size_t zeta_stateprep_pqrm(int r, int m) {
    if (m <= 1) return 0;
    if (r == m) return pow2(r - 1) - 1 + zeta_stateprep_pqrm(r - 1, r - 1) + zeta_qrm(r - 1, r - 1);
    if (m == r + 1) return pow2(r) - 1 + zeta_stateprep_pqrm(r, r) + zeta_qrm(r, r);
    return binom_sum(m - 1, m - r - 1, r) + zeta_stateprep_pqrm(r, m - 1) + zeta_qrm(r, m - 1);
}

std::size_t zeta_zqrm(int r, int m, int rd, int md) {
    if (narrow(rd, md) && r == -1) return zeta_basis(rd, m);
    if (!narrow(rd, md) && m == rd) return zeta_qrm(rd, rd);
    return binom_sum(m - 1, r, rd) + 2 * zeta_zqrm(r - 1, m - 1, rd, md);
}

std::size_t zeta_pzqrm(int r, int m, int rd, int md) {
    if (narrow(rd, md) && r == 0) return zeta_basis_pqrm(rd, m);
    if (!narrow(rd, md) && m == rd + 1) return zeta_pqrm(rd, rd + 1);
    return binom_sum(m - 1, r, rd) + zeta_pzqrm(r - 1, m - 1, rd, md) + zeta_zqrm(r - 1, m - 1, rd, md);
}

std::size_t zeta_stateprep_pzqrm(int r, int m, int rd, int md) {
    if (narrow(rd, md) && r == 0) return zeta_stateprep_pqrm(rd, m);
    if (!narrow(rd, md) && m == rd + 1) return zeta_stateprep_pqrm(rd, rd + 1);
    return binom_sum(m - 1, r, rd) + zeta_stateprep_pzqrm(r - 1, m - 1, rd, md) + zeta_zqrm(r - 1, m - 1, rd, md);
}

std::size_t zeta_row_reduced(int r, int m) {
    if (r == m) return 0;
    std::size_t second = 0;
    for (int i = 0; i <= m - r - 1; ++i) second += binom(m, i) * (pow2(r + 1) - 1);
    if (r == m - r - 1) return second;
    std::size_t first = 0;
    for (int i = m - r; i <= r; ++i) first += binom(m, i) * (pow2(m - r) - 1);
    return first + second;
}

std::size_t predict_cnot_count(const CodeSpec& s) {
    validate(s);
    switch (s.family) {
        case Family::QRM: return zeta_qrm(s.r, s.m);
        case Family::BasisQRM: return zeta_basis(s.r, s.m);
        case Family::PQRM: return zeta_pqrm(s.r, s.m);
        case Family::BasisPQRM: return zeta_basis_pqrm(s.r, s.m);
        case Family::StatePrepPQRM: return zeta_stateprep_pqrm(s.r, s.m);
        case Family::ZQRM: return zeta_zqrm(s.r, s.m, *s.rd, *s.md);
        case Family::PZQRM: return zeta_pzqrm(s.r, s.m, *s.rd, *s.md);
        case Family::StatePrepPZQRM: return zeta_stateprep_pzqrm(s.r, s.m, *s.rd, *s.md);
        case Family::RowReducedQRM: return zeta_row_reduced(s.r, s.m);
    }
    return 0;
}

std::size_t predict_stateprep_pzqrm(int rd, int md, PrepState which) {
    return which == PrepState::Zero ? zeta_stateprep_pzqrm(rd, md, rd, md) : zeta_pzqrm(rd, md, rd, md);
}

}  // namespace qrm
