#include "qrm/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qrm/rmcode.hpp"

namespace qrm {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_qubit(std::size_t q, std::size_t n) {
    if (q == 0 || q > n) throw std::out_of_range("qubit " + std::to_string(q) + " outside 1.." + std::to_string(n));
}

}  // namespace

// ---- Statevector ----

std::size_t Statevector::mask(std::size_t q) const {
    check_qubit(q, n_);
    return std::size_t{1} << (n_ - q);
}

Statevector Statevector::zeros(std::size_t n) {
    if (n > kDenseMaxQubits)
        throw std::invalid_argument("Statevector: " + std::to_string(n) + " qubits exceeds the dense limit of 16");
    Statevector s;
    s.n_ = n;
    s.amp_.assign(std::size_t{1} << n, Amplitude{0.0, 0.0});
    return s;
}

Statevector Statevector::basis(const BitVector& bits) {
    Statevector s = zeros(bits.size());
    s.amp_[s.index_of(bits)] = 1.0;
    return s;
}

std::size_t Statevector::index_of(const BitVector& bits) const {
    if (bits.size() != n_) throw std::invalid_argument("Statevector: basis label length mismatch");
    std::size_t idx = 0;
    for (std::size_t q = 1; q <= n_; ++q)
        if (bits.get(q)) idx |= std::size_t{1} << (n_ - q);
    return idx;
}

Amplitude Statevector::amplitude(const BitVector& bits) const { return amp_[index_of(bits)]; }

void Statevector::h(std::size_t q) {
    const std::size_t m = mask(q);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & m) continue;
        const Amplitude a = amp_[i], b = amp_[i | m];
        amp_[i] = (a + b) * kInvSqrt2;
        amp_[i | m] = (a - b) * kInvSqrt2;
    }
}

void Statevector::x(std::size_t q) {
    const std::size_t m = mask(q);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if (!(i & m)) std::swap(amp_[i], amp_[i | m]);
}

void Statevector::cnot(std::size_t c, std::size_t t) {
    if (c == t) throw std::invalid_argument("cnot: control equals target");
    const std::size_t mc = mask(c), mt = mask(t);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & mc) && !(i & mt)) std::swap(amp_[i], amp_[i | mt]);
}

void Statevector::permute(const Permutation& p) {
    if (p.size() != n_) throw std::invalid_argument("permute: size mismatch");
    if (p.is_identity()) return;
    std::vector<Amplitude> out(amp_.size());
    for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
        if (amp_[idx] == Amplitude{}) continue;
        std::size_t to = 0;
        for (std::size_t q = 1; q <= n_; ++q)
            if (idx & (std::size_t{1} << (n_ - q))) to |= std::size_t{1} << (n_ - p(q));
        out[to] = amp_[idx];
    }
    amp_ = std::move(out);
}

void Statevector::apply(const Gate& g) {
    switch (g.kind) {
        case GateKind::H: h(g.a); break;
        case GateKind::X: x(g.a); break;
        case GateKind::CNOT: cnot(g.a, g.b); break;
    }
}

void Statevector::apply(const Circuit& c) {
    if (c.width() != n_) throw std::invalid_argument("Statevector::apply: width mismatch");
    permute(c.initial_perm());
    for (const auto& g : c.gates()) apply(g);
}

double Statevector::norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

void Statevector::scale(Amplitude s) {
    for (auto& a : amp_) a *= s;
}

Statevector& Statevector::operator+=(const Statevector& o) {
    if (o.n_ != n_) throw std::invalid_argument("Statevector +=: size mismatch");
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] += o.amp_[i];
    return *this;
}

Statevector kron(const Statevector& a, const Statevector& b) {
    Statevector s = Statevector::zeros(a.n_qubits() + b.n_qubits());
    const std::size_t nb = b.amplitudes().size();
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        if (a[i] == Amplitude{}) continue;
        for (std::size_t j = 0; j < nb; ++j) s[i * nb + j] = a[i] * b[j];
    }
    return s;
}

double max_deviation(const Statevector& a, const Statevector& b) {
    if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("max_deviation: size mismatch");
    double d = 0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

Statevector dense_simulate(const Circuit& c, const BitVector& input) {
    if (input.size() != c.width()) throw std::invalid_argument("dense_simulate: input length differs from width");
    Statevector s = Statevector::basis(input);
    s.apply(c);
    return s;
}

// ---- SparseState ----

SparseState::SparseState(const BitVector& bits) : n_(bits.size()) { terms_.emplace(bits, Amplitude{1.0, 0.0}); }

void SparseState::apply(const Gate& g) {
    check_qubit(g.a, n_);
    std::unordered_map<BitVector, Amplitude, BitVectorHash> next;
    next.reserve(terms_.size() * (g.kind == GateKind::H ? 2 : 1));
    switch (g.kind) {
        case GateKind::X:
            for (auto& [b, a] : terms_) {
                BitVector k = b;
                k.flip(g.a);
                next.emplace(std::move(k), a);
            }
            break;
        case GateKind::CNOT:
            check_qubit(g.b, n_);
            for (auto& [b, a] : terms_) {
                BitVector k = b;
                if (k.get(g.a)) k.flip(g.b);
                next.emplace(std::move(k), a);
            }
            break;
        case GateKind::H:
            for (auto& [b, a] : terms_) {
                BitVector b0 = b, b1 = b;
                b0.set(g.a, false);
                b1.set(g.a, true);
                next[b0] += a * kInvSqrt2;
                next[b1] += (b.get(g.a) ? -a : a) * kInvSqrt2;
            }
            std::erase_if(next, [](const auto& kv) { return std::abs(kv.second) < 1e-12; });
            break;
    }
    terms_ = std::move(next);
}

void SparseState::permute(const Permutation& p) {
    if (p.size() != n_) throw std::invalid_argument("permute: size mismatch");
    if (p.is_identity()) return;
    std::unordered_map<BitVector, Amplitude, BitVectorHash> next;
    for (auto& [b, a] : terms_) {
        BitVector k(n_);
        for (std::size_t q : b.support()) k.set(p(q));
        next.emplace(std::move(k), a);
    }
    terms_ = std::move(next);
}

void SparseState::apply(const Circuit& c) {
    if (c.width() != n_) throw std::invalid_argument("SparseState::apply: width mismatch");
    permute(c.initial_perm());
    for (const auto& g : c.gates()) apply(g);
}

SparseState sparse_simulate(const Circuit& c, const BitVector& input) {
    SparseState s(input);
    s.apply(c);
    return s;
}

// ---- Reference states ----

namespace {

std::vector<BitVector> band_rows(int a, int b, int m, bool with_one) {
    auto rows = quotient_generators(a, b, m).matrix.rows();
    if (with_one) rows.insert(rows.begin(), BitVector::ones(std::size_t{1} << m));
    return rows;
}

std::vector<BitVector> punct(std::vector<BitVector> rows) {
    for (auto& r : rows) r = r.punctured();
    return rows;
}

std::vector<BitVector> nonconstant(int r, int m) {
    if (r < 1) return {};
    return quotient_generators(r, 0, m).matrix.rows();
}

}  // namespace

std::vector<BitVector> message_generator(const CodeSpec& s) {
    validate(s);
    const int r = s.r, m = s.m;
    switch (s.family) {
        case Family::QRM:
        case Family::RowReducedQRM:
            return band_rows(r, m - r - 1, m, false);
        case Family::BasisQRM:
            return generator_matrix(r, m).matrix.rows();
        case Family::PQRM:
            return punct(band_rows(r, m - r - 1, m, true));
        case Family::BasisPQRM:
            return punct(generator_matrix(r, m).matrix.rows());
        case Family::StatePrepPQRM:
            return punct(band_rows(r, std::max(m - r - 1, 0), m, false));
        case Family::ZQRM:
            return band_rows(*s.rd, r, m, false);
        case Family::PZQRM:
            return punct(band_rows(*s.rd, r, m, true));
        case Family::StatePrepPZQRM:
            return punct(band_rows(*s.rd, r, m, false));
    }
    return {};
}

std::vector<BitVector> coset_generator(const CodeSpec& s) {
    validate(s);
    const int r = s.r, m = s.m;
    switch (s.family) {
        case Family::QRM:
        case Family::RowReducedQRM:
            if (m - r - 1 < 0) return {};
            return generator_matrix(m - r - 1, m).matrix.rows();
        case Family::BasisQRM:
        case Family::BasisPQRM:
            return {};
        case Family::PQRM:
        case Family::StatePrepPQRM:
            return punct(nonconstant(m - r - 1, m));
        case Family::ZQRM:
            if (r < 0) return {};
            return generator_matrix(r, m).matrix.rows();
        case Family::PZQRM:
        case Family::StatePrepPZQRM:
            return punct(nonconstant(r, m));
    }
    return {};
}

BitVector logical_word(const CodeSpec& spec, const BitVector& msg) {
    const auto rows = message_generator(spec);
    if (msg.size() != rows.size()) throw std::invalid_argument("logical_word: message length mismatch");
    BitVector w(spec.width());
    for (std::size_t i = 1; i <= msg.size(); ++i)
        if (msg.get(i)) w ^= rows[i - 1];
    return w;
}

std::vector<std::pair<BitVector, Amplitude>> reference_terms(const BitVector& w, const std::vector<BitVector>& coset) {
    std::vector<std::pair<BitVector, Amplitude>> out;
    if (coset.empty()) {
        out.emplace_back(w, Amplitude{1.0, 0.0});
        return out;
    }
    const BitMatrix basis = row_reduce(BitMatrix(coset, w.size()));
    if (basis.n_rows() > 24) throw std::invalid_argument("reference_terms: coset too large to enumerate");
    const auto span = enumerate_row_space(basis);
    const double amp = 1.0 / std::sqrt(static_cast<double>(span.size()));
    out.reserve(span.size());
    for (const auto& c : span) out.emplace_back(w ^ c, Amplitude{amp, 0.0});
    return out;
}

Statevector reference_state(const BitVector& w, const std::vector<BitVector>& coset) {
    Statevector s = Statevector::zeros(w.size());
    for (const auto& [b, a] : reference_terms(w, coset)) s[s.index_of(b)] += a;
    return s;
}

Statevector reference_codeword(const CodeSpec& spec, const BitVector& msg) {
    return reference_state(logical_word(spec, msg), coset_generator(spec));
}

double max_deviation(const SparseState& s, const std::vector<std::pair<BitVector, Amplitude>>& ref) {
    std::unordered_map<BitVector, Amplitude, BitVectorHash> diff(s.terms().begin(), s.terms().end());
    for (const auto& [b, a] : ref) diff[b] -= a;
    double d = 0;
    for (const auto& [b, a] : diff) d = std::max(d, std::abs(a));
    return d;
}

// ---- Pauli operators ----

PauliOp PauliOp::identity(std::size_t n) { return {BitVector(n), BitVector(n), false}; }
PauliOp PauliOp::x_type(const BitVector& s) { return {s, BitVector(s.size()), false}; }
PauliOp PauliOp::z_type(const BitVector& s) { return {BitVector(s.size()), s, false}; }

bool PauliOp::commutes_with(const PauliOp& o) const {
    if (o.size() != size()) throw std::invalid_argument("PauliOp: width mismatch");
    return x.dot(o.z) == z.dot(o.x);
}

std::string PauliOp::to_string() const {
    std::string s = negative ? "-" : "+";
    for (std::size_t q = 1; q <= size(); ++q) {
        const bool a = x.get(q), b = z.get(q);
        s += a && b ? 'Y' : a ? 'X' : b ? 'Z' : 'I';
    }
    return s;
}

namespace {

std::size_t and_popcount(const BitVector& a, const BitVector& b) {
    std::size_t c = 0;
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) c += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    return c;
}

// Accumulates products in the form i^k X^x Z^z.
struct PhasedPauli {
    BitVector x, z;
    unsigned k = 0;

    explicit PhasedPauli(std::size_t n) : x(n), z(n) {}
    void times(const PauliOp& p) {
        const unsigned kp = (p.negative ? 2U : 0U) + static_cast<unsigned>(and_popcount(p.x, p.z) % 4);
        k = (k + kp + 2U * static_cast<unsigned>(and_popcount(z, p.x) % 2)) % 4;
        x ^= p.x;
        z ^= p.z;
    }
    // Sign of the Hermitian operator, or nullopt when the phase is imaginary.
    std::optional<bool> negative() const {
        const unsigned h = (k + 4U - static_cast<unsigned>(and_popcount(x, z) % 4)) % 4;
        if (h == 0) return false;
        if (h == 2) return true;
        return std::nullopt;
    }
};

}  // namespace

PauliOp multiply(const PauliOp& a, const PauliOp& b) {
    if (!a.commutes_with(b)) throw std::invalid_argument("multiply: anticommuting Paulis");
    PhasedPauli acc(a.size());
    acc.times(a);
    acc.times(b);
    return {acc.x, acc.z, *acc.negative()};
}

// ---- Tableau ----

StabilizerTableau::StabilizerTableau(std::size_t n) : n_(n), xcol_(n, BitVector(2 * n)), zcol_(n, BitVector(2 * n)), sign_(2 * n) {
    for (std::size_t q = 1; q <= n; ++q) {
        xcol_[q - 1].set(q);
        zcol_[q - 1].set(n + q);
    }
}

StabilizerTableau StabilizerTableau::basis(const BitVector& bits) {
    StabilizerTableau t(bits.size());
    for (std::size_t q : bits.support()) t.x(q);
    return t;
}

StabilizerTableau StabilizerTableau::from_generators(const std::vector<PauliOp>& gens) {
    if (gens.empty()) return StabilizerTableau(0);
    const std::size_t n = gens.front().size();
    if (gens.size() != n) throw std::invalid_argument("from_generators: need exactly n generators");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!gens[i].commutes_with(gens[j])) throw std::invalid_argument("from_generators: generators anticommute");
    auto form = [](const PauliOp& a, const PauliOp& b) { return !a.commutes_with(b); };
    auto add_bits = [](PauliOp& a, const PauliOp& b) {
        a.x ^= b.x;
        a.z ^= b.z;
    };
    std::vector<PauliOp> stab = gens;
    std::vector<PauliOp> destab(n);
    std::vector<PauliOp> pool;
    for (std::size_t q = 1; q <= n; ++q) {
        pool.push_back(PauliOp::x_type(BitVector::unit(n, q)));
        pool.push_back(PauliOp::z_type(BitVector::unit(n, q)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto it = std::find_if(pool.begin(), pool.end(), [&](const PauliOp& w) { return form(stab[i], w); });
        if (it == pool.end()) throw std::invalid_argument("from_generators: generators are dependent");
        destab[i] = *it;
        destab[i].negative = false;
        pool.erase(it);
        for (std::size_t j = i + 1; j < n; ++j)
            if (form(stab[j], destab[i])) stab[j] = multiply(stab[j], stab[i]);
        for (auto& w : pool) {
            const bool with_d = form(w, destab[i]);
            const bool with_s = form(w, stab[i]);
            if (with_d) add_bits(w, stab[i]);
            if (with_s) add_bits(w, destab[i]);
        }
    }
    StabilizerTableau t;
    t.n_ = n;
    t.xcol_.assign(n, BitVector(2 * n));
    t.zcol_.assign(n, BitVector(2 * n));
    t.sign_ = BitVector(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t q = 1; q <= n; ++q) {
            if (destab[i].x.get(q)) t.xcol_[q - 1].set(i + 1);
            if (destab[i].z.get(q)) t.zcol_[q - 1].set(i + 1);
            if (stab[i].x.get(q)) t.xcol_[q - 1].set(n + i + 1);
            if (stab[i].z.get(q)) t.zcol_[q - 1].set(n + i + 1);
        }
        if (stab[i].negative) t.sign_.set(n + i + 1);
    }
    return t;
}

void StabilizerTableau::h(std::size_t q) {
    check_qubit(q, n_);
    auto& xc = xcol_[q - 1];
    auto& zc = zcol_[q - 1];
    sign_ ^= (xc & zc);
    std::swap(xc, zc);
}

void StabilizerTableau::x(std::size_t q) {
    check_qubit(q, n_);
    sign_ ^= zcol_[q - 1];
}

void StabilizerTableau::cnot(std::size_t c, std::size_t t) {
    check_qubit(c, n_);
    check_qubit(t, n_);
    if (c == t) throw std::invalid_argument("cnot: control equals target");
    auto& xc = xcol_[c - 1].words();
    auto& zc = zcol_[c - 1].words();
    auto& xt = xcol_[t - 1].words();
    auto& zt = zcol_[t - 1].words();
    auto& r = sign_.words();
    for (std::size_t w = 0; w < r.size(); ++w) {
        r[w] ^= xc[w] & zt[w] & ~(xt[w] ^ zc[w]);
        xt[w] ^= xc[w];
        zc[w] ^= zt[w];
    }
    // Padding bits past 2n stay clear because every operand has them clear.
}

void StabilizerTableau::permute(const Permutation& p) {
    if (p.size() != n_) throw std::invalid_argument("permute: size mismatch");
    if (p.is_identity()) return;
    std::vector<BitVector> nx(n_), nz(n_);
    for (std::size_t q = 1; q <= n_; ++q) {
        nx[p(q) - 1] = std::move(xcol_[q - 1]);
        nz[p(q) - 1] = std::move(zcol_[q - 1]);
    }
    xcol_ = std::move(nx);
    zcol_ = std::move(nz);
}

void StabilizerTableau::apply(const Gate& g) {
    switch (g.kind) {
        case GateKind::H: h(g.a); break;
        case GateKind::X: x(g.a); break;
        case GateKind::CNOT: cnot(g.a, g.b); break;
    }
}

void StabilizerTableau::apply(const Circuit& c) {
    if (c.width() != n_) throw std::invalid_argument("StabilizerTableau::apply: width mismatch");
    permute(c.initial_perm());
    for (const auto& g : c.gates()) apply(g);
}

PauliOp StabilizerTableau::row(std::size_t r) const {
    PauliOp p = PauliOp::identity(n_);
    for (std::size_t q = 1; q <= n_; ++q) {
        if (xcol_[q - 1].get(r)) p.x.set(q);
        if (zcol_[q - 1].get(r)) p.z.set(q);
    }
    p.negative = sign_.get(r);
    return p;
}

PauliOp StabilizerTableau::stabilizer(std::size_t i) const {
    check_qubit(i, n_);
    return row(n_ + i);
}

PauliOp StabilizerTableau::destabilizer(std::size_t i) const {
    check_qubit(i, n_);
    return row(i);
}

std::vector<PauliOp> StabilizerTableau::generators() const {
    // Transpose all columns at once; row() per generator is quadratic in bit reads.
    std::vector<PauliOp> out(n_, PauliOp::identity(n_));
    for (std::size_t q = 1; q <= n_; ++q) {
        for (std::size_t r : xcol_[q - 1].support())
            if (r > n_) out[r - n_ - 1].x.set(q);
        for (std::size_t r : zcol_[q - 1].support())
            if (r > n_) out[r - n_ - 1].z.set(q);
    }
    for (std::size_t i = 1; i <= n_; ++i) out[i - 1].negative = sign_.get(n_ + i);
    return out;
}

BitMatrix StabilizerTableau::symplectic_matrix() const {
    BitMatrix m(0, 2 * n_);
    for (const auto& g : generators()) m.append_row(BitVector::concat(g.x, g.z));
    return m;
}

std::optional<int> StabilizerTableau::sign_of(const PauliOp& p) const {
    if (p.size() != n_) throw std::invalid_argument("sign_of: width mismatch");
    // Row r of the tableau anticommutes with p iff (x_r . p.z + z_r . p.x) is odd.
    BitVector anti(2 * n_);
    for (std::size_t q : p.z.support()) anti ^= xcol_[q - 1];
    for (std::size_t q : p.x.support()) anti ^= zcol_[q - 1];
    for (std::size_t i = n_ + 1; i <= 2 * n_; ++i)
        if (anti.get(i)) return std::nullopt;
    const auto gens = generators();
    PhasedPauli acc(n_);
    for (std::size_t i = 1; i <= n_; ++i)
        if (anti.get(i)) acc.times(gens[i - 1]);
    if (acc.x != p.x || acc.z != p.z) return std::nullopt;
    auto neg = acc.negative();
    if (!neg) return std::nullopt;
    return *neg ? -1 : 1;
}

StabilizerTableau tableau_simulate(const Circuit& c, const StabilizerTableau& input) {
    StabilizerTableau t = input;
    t.apply(c);
    return t;
}

bool check_stabilized(const StabilizerTableau& t, const PauliOp& p) {
    auto s = t.sign_of(p);
    return s && *s == (p.negative ? -1 : 1);
}

std::size_t fattal_entanglement(const StabilizerTableau& t, const std::vector<std::vector<std::size_t>>& parts) {
    const std::size_t n = t.n_qubits();
    std::vector<int> owner(n + 1, -1);
    for (std::size_t j = 0; j < parts.size(); ++j)
        for (std::size_t q : parts[j]) {
            if (q == 0 || q > n) throw std::invalid_argument("fattal_entanglement: qubit out of range");
            if (owner[q] != -1) throw std::invalid_argument("fattal_entanglement: parts overlap");
            owner[q] = static_cast<int>(j);
        }
    for (std::size_t q = 1; q <= n; ++q)
        if (owner[q] == -1) throw std::invalid_argument("fattal_entanglement: parts do not cover every qubit");
    const BitMatrix m = t.symplectic_matrix();
    std::size_t local = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        std::vector<std::size_t> outside;
        for (std::size_t q = 1; q <= n; ++q)
            if (owner[q] != static_cast<int>(j)) {
                outside.push_back(q);
                outside.push_back(n + q);
            }
        // Elements supported inside part j form the kernel of the restriction to its complement.
        local += n - (outside.empty() ? 0 : rank(m.select_columns(outside)));
    }
    return n - local;
}

// ---- Degeneracy ----

std::size_t code_entanglement(const SynthResult& enc, const std::vector<std::vector<std::size_t>>& parts) {
    if (parts.empty()) throw std::invalid_argument("code_entanglement: no parts");
    const std::size_t n = enc.circuit.width(), k = enc.message_width;
    CircuitBuilder b(n + k);
    const auto targets = enc.message_qubits();
    for (std::size_t i = 1; i <= k; ++i) {
        b.h(n + i);
        b.cnot(n + i, targets[i - 1]);
    }
    b.embed(enc.circuit, 0);
    auto with_refs = parts;
    for (std::size_t i = 1; i <= k; ++i) with_refs.back().push_back(n + i);
    return fattal_entanglement(tableau_simulate(b.build(), StabilizerTableau(n + k)), with_refs);
}

std::size_t correctable_weight(int r, int m) {
    if (r > m || m - r < 0) throw std::invalid_argument("correctable_weight: r > m");
    return ((std::size_t{1} << (m - r)) - 1) / 2;
}

DegeneracyResult degeneracy_check(int r, int m, std::size_t t) {
    if (!css_condition_check(r, m)) throw std::invalid_argument("degeneracy_check: not a CSS code");
    if (m > 6) throw std::invalid_argument("degeneracy_check: enumeration limited to m <= 6");
    const std::size_t n = std::size_t{1} << m;
    const auto h = m - r - 1 >= 0 ? generator_matrix(m - r - 1, m).matrix : BitMatrix(0, n);
    auto syndrome_of = [&](const PauliOp& e) {
        // s = e J H^T: Z part checked against the X-type checks and vice versa.
        BitVector s(2 * h.n_rows());
        for (std::size_t i = 1; i <= h.n_rows(); ++i) {
            if (e.z.dot(h.row(i))) s.set(i);
            if (e.x.dot(h.row(i))) s.set(h.n_rows() + i);
        }
        return s;
    };
    DegeneracyResult res;
    std::unordered_map<BitVector, PauliOp, BitVectorHash> seen;
    PauliOp e = PauliOp::identity(n);
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) -> bool {
        ++res.errors_checked;
        auto s = syndrome_of(e);
        auto [it, fresh] = seen.emplace(s, e);
        if (!fresh) {
            res.non_degenerate = false;
            res.witness = std::make_pair(it->second, e);
            return false;
        }
        if (left == 0) return true;
        for (std::size_t q = start; q <= n; ++q)
            for (int kind = 1; kind <= 3; ++kind) {
                if (kind & 1) e.x.set(q);
                if (kind & 2) e.z.set(q);
                const bool ok = rec(q + 1, left - 1);
                e.x.set(q, false);
                e.z.set(q, false);
                if (!ok) return false;
            }
        return true;
    };
    rec(1, t);
    return res;
}

bool css_condition_check(int r, int m) {
    if (r < 0 || r > m) return false;
    if (m - r - 1 < 0) return true;
    const auto dual = generator_matrix(m - r - 1, m).matrix;
    const auto code = generator_matrix(r, m).matrix;
    for (const auto& row : dual.rows())
        if (!in_row_space(row, code)) return false;
    return true;
}

std::vector<PauliOp> css_stabilizers(const CodeSpec& spec, const BitVector& w) {
    const auto coset = coset_generator(spec);
    const std::size_t n = spec.width();
    if (w.size() != n) throw std::invalid_argument("css_stabilizers: word length mismatch");
    std::vector<PauliOp> out;
    BitMatrix c(0, n);
    for (const auto& row : coset) {
        out.push_back(PauliOp::x_type(row));
        c.append_row(row);
    }
    // Z(z) for z orthogonal to the coset; eigenvalue (-1)^{z.w}.
    const BitMatrix zs = kernel(c.n_rows() ? c.transpose() : BitMatrix::identity(n));
    if (c.n_rows() == 0) {
        for (std::size_t q = 1; q <= n; ++q) {
            PauliOp p = PauliOp::z_type(BitVector::unit(n, q));
            p.negative = w.get(q);
            out.push_back(p);
        }
        return out;
    }
    for (const auto& z : zs.rows()) {
        PauliOp p = PauliOp::z_type(z);
        p.negative = z.dot(w);
        out.push_back(p);
    }
    return out;
}

// ---- Reports ----

bool VerifyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json j;
    j["spec"] = r.spec;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
    return j;
}

namespace {

std::vector<BitVector> messages_to_try(std::size_t k, const VerifyOptions& opts) {
    std::vector<BitVector> out;
    if (k < 63 && (std::size_t{1} << k) <= opts.max_messages) {
        for (std::size_t v = 0; v < (std::size_t{1} << k); ++v) {
            BitVector msg(k);
            for (std::size_t i = 0; i < k; ++i)
                if ((v >> i) & 1U) msg.set(i + 1);
            out.push_back(std::move(msg));
        }
        return out;
    }
    out.emplace_back(k);
    for (std::size_t i = 1; i <= k; ++i) out.push_back(BitVector::unit(k, i));
    std::mt19937_64 rng(opts.seed);
    for (std::size_t s = 0; s < opts.samples; ++s) {
        BitVector msg(k);
        for (std::size_t i = 1; i <= k; ++i)
            if (rng() & 1U) msg.set(i);
        out.push_back(std::move(msg));
    }
    return out;
}

std::string fmt_double(double d) {
    std::ostringstream os;
    os << d;
    return os.str();
}

}  // namespace

VerifyReport verify_spec(const CodeSpec& spec, const VerifyOptions& opts) {
    validate(spec);
    VerifyReport rep;
    rep.spec = spec.to_string();
    const SynthResult syn = synthesize(spec);
    const std::size_t n = syn.circuit.width();

    const std::size_t got = cnot_count(syn.circuit);
    const std::size_t want = predict_cnot_count(spec);
    rep.checks.push_back({"cnot_count_matches_recurrence", got == want,
                          "circuit " + std::to_string(got) + ", recurrence " + std::to_string(want)});

    const auto coset = coset_generator(spec);
    const auto canon = message_generator(spec);
    bool rows_ok;
    std::string rows_detail;
    if (spec.family == Family::RowReducedQRM) {
        // Row-transformed generators: same code, same quotient.
        BitMatrix all(coset, n);
        const auto code = generator_matrix(spec.r, spec.m).matrix;
        rows_ok = syn.message_rows.size() == canon.size();
        for (const auto& row : syn.message_rows) {
            rows_ok = rows_ok && in_row_space(row, code);
            all.append_row(row);
        }
        rows_ok = rows_ok && rank(all) == coset.size() + canon.size();
        rows_detail = "message rows span RM(r,m) modulo the coset";
    } else {
        rows_ok = syn.message_rows == canon;
        rows_detail = rows_ok ? "message rows equal the canonical generators" : "message rows differ";
    }
    rep.checks.push_back({"message_rows", rows_ok, rows_detail});

    const auto msgs = messages_to_try(syn.message_width, opts);
    auto word_of = [&](const BitVector& msg) {
        BitVector w(n);
        for (std::size_t i = 1; i <= msg.size(); ++i)
            if (msg.get(i)) w ^= syn.message_rows[i - 1];
        return w;
    };

    if (opts.dense && n <= kDenseMaxQubits) {
        double worst = 0;
        for (const auto& msg : msgs) {
            const auto s = sparse_simulate(syn.circuit, syn.input_for(msg));
            worst = std::max(worst, max_deviation(s, reference_terms(word_of(msg), coset)));
        }
        // Cross-check the sparse sweep against the dense simulator on the zero message.
        const auto dense = dense_simulate(syn.circuit, syn.input_for(BitVector(syn.message_width)));
        const double dz = max_deviation(dense, reference_state(BitVector(n), coset));
        worst = std::max(worst, dz);
        rep.checks.push_back({"amplitude_oracle", worst < 1e-9,
                              std::to_string(msgs.size()) + " messages, max deviation " + fmt_double(worst)});
    }

    if (opts.tableau) {
        std::size_t failures = 0, checked = 0;
        const std::size_t limit = n > 256 ? 3 : std::min<std::size_t>(msgs.size(), 16);
        for (std::size_t i = 0; i < msgs.size() && i < limit; ++i) {
            const auto t = tableau_simulate(syn.circuit, StabilizerTableau::basis(syn.input_for(msgs[i])));
            for (const auto& p : css_stabilizers(spec, word_of(msgs[i]))) {
                ++checked;
                if (!check_stabilized(t, p)) ++failures;
            }
        }
        rep.checks.push_back({"stabilizer_oracle", failures == 0,
                              std::to_string(checked) + " stabilizers checked, " + std::to_string(failures) + " failed"});
    }

    if (opts.degeneracy && spec.family == Family::QRM && spec.m <= 4) {
        const auto d = degeneracy_check(spec.r, spec.m, correctable_weight(spec.r, spec.m));
        rep.checks.push_back({"non_degenerate", d.non_degenerate, std::to_string(d.errors_checked) + " errors"});
    }
    return rep;
}

}  // namespace qrm
