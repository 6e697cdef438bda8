#include "qrm/circuit.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qrm/gf2.hpp"

namespace qrm {

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size() + 1, false);
    for (std::size_t v : image_) {
        if (v == 0 || v > image_.size() || seen[v]) throw std::invalid_argument("Permutation: image is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> img(n);
    std::iota(img.begin(), img.end(), std::size_t{1});
    return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i)
        if (image_[i] != i + 1) return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i] - 1] = i + 1;
    return Permutation(std::move(inv));
}

Permutation Permutation::after(const Permutation& first) const {
    if (first.size() != size()) throw std::invalid_argument("Permutation::after: size mismatch");
    std::vector<std::size_t> img(size());
    for (std::size_t i = 0; i < size(); ++i) img[i] = image_[first.image_[i] - 1];
    Permutation p;
    p.image_ = std::move(img);
    return p;
}

Circuit::Circuit(std::size_t width) : width_(width), perm_(Permutation::identity(width)) {}

Circuit::Circuit(std::size_t width, Permutation initial_perm, std::vector<Gate> gates)
    : width_(width), perm_(std::move(initial_perm)) {
    if (perm_.size() != width_) throw std::invalid_argument("Circuit: permutation size differs from width");
    gates_.reserve(gates.size());
    for (const auto& g : gates) add(g);
}

void Circuit::check_gate(const Gate& g) const {
    if (g.a == 0 || g.a > width_) throw std::out_of_range("Circuit: gate qubit " + std::to_string(g.a) + " out of range");
    if (g.kind == GateKind::CNOT) {
        if (g.b == 0 || g.b > width_)
            throw std::out_of_range("Circuit: CNOT target " + std::to_string(g.b) + " out of range");
        if (g.a == g.b) throw std::invalid_argument("Circuit: CNOT control equals target");
    }
}

void Circuit::add(const Gate& g) {
    check_gate(g);
    gates_.push_back(g);
}

CircuitBuilder::CircuitBuilder(std::size_t width) : width_(width) {}

void CircuitBuilder::gate(const Gate& g) {
    if (g.a == 0 || g.a > width_ || (g.is_cnot() && (g.b == 0 || g.b > width_ || g.a == g.b)))
        throw std::out_of_range("CircuitBuilder: bad gate indices");
    ops_.push_back({false, g, 0});
    ++n_gates_;
}

void CircuitBuilder::permute(const Permutation& p) {
    if (p.size() != width_) throw std::invalid_argument("CircuitBuilder::permute: size mismatch");
    if (p.is_identity()) return;
    perms_.push_back(p);
    ops_.push_back({true, Gate{}, perms_.size() - 1});
}

void CircuitBuilder::embed(const Circuit& sub, std::size_t offset) {
    if (offset + sub.width() > width_) throw std::out_of_range("CircuitBuilder::embed: subcircuit does not fit");
    if (!sub.initial_perm().is_identity()) {
        auto img = Permutation::identity(width_).image();
        for (std::size_t i = 1; i <= sub.width(); ++i) img[offset + i - 1] = offset + sub.initial_perm()(i);
        permute(Permutation(std::move(img)));
    }
    for (const auto& g : sub.gates()) {
        Gate s = g;
        s.a += offset;
        if (s.is_cnot()) s.b += offset;
        gate(s);
    }
}

Circuit CircuitBuilder::build() const {
    // Walking backwards, tau is the composition of every permutation seen so
    // far; a gate followed by those permutations is relabeled through tau.
    std::vector<std::size_t> tau(width_);
    std::iota(tau.begin(), tau.end(), std::size_t{1});
    std::vector<Gate> gates;
    gates.reserve(n_gates_);
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        if (it->is_perm) {
            const auto& p = perms_[it->perm_index].image();
            std::vector<std::size_t> next(width_);
            for (std::size_t i = 0; i < width_; ++i) next[i] = tau[p[i] - 1];
            tau = std::move(next);
        } else {
            Gate g = it->g;
            g.a = tau[g.a - 1];
            if (g.is_cnot()) g.b = tau[g.b - 1];
            gates.push_back(g);
        }
    }
    std::reverse(gates.begin(), gates.end());
    return Circuit(width_, Permutation(std::move(tau)), std::move(gates));
}

std::size_t cnot_count(const Circuit& c) {
    return static_cast<std::size_t>(
        std::count_if(c.gates().begin(), c.gates().end(), [](const Gate& g) { return g.is_cnot(); }));
}

std::size_t hadamard_count(const Circuit& c) {
    return static_cast<std::size_t>(
        std::count_if(c.gates().begin(), c.gates().end(), [](const Gate& g) { return g.kind == GateKind::H; }));
}

std::size_t depth(const Circuit& c) {
    std::vector<std::size_t> level(c.width() + 1, 0);
    std::size_t d = 0;
    for (const auto& g : c.gates()) {
        std::size_t l = level[g.a];
        if (g.is_cnot()) l = std::max(l, level[g.b]);
        ++l;
        level[g.a] = l;
        if (g.is_cnot()) level[g.b] = l;
        d = std::max(d, l);
    }
    return d;
}

Rational error_prop_distance(const Circuit& c, EdConvention conv, bool include_self) {
    const std::size_t n = c.width();
    if (n == 0) return {0, 1};
    // seen_x[q] / seen_z[q]: origins whose error currently has support on q.
    std::vector<BitVector> seen_x(n), seen_z(n);
    for (std::size_t q = 0; q < n; ++q) {
        seen_x[q] = BitVector::unit(n, q + 1);
        seen_z[q] = BitVector::unit(n, q + 1);
    }
    for (const auto& g : c.gates()) {
        if (!g.is_cnot()) continue;
        const std::size_t ci = g.a - 1, ti = g.b - 1;
        switch (conv) {
            case EdConvention::XForward:
                seen_x[ti] |= seen_x[ci];
                break;
            case EdConvention::ZBackward:
                seen_z[ci] |= seen_z[ti];
                break;
            case EdConvention::Union:
                seen_x[ti] |= seen_x[ci];
                seen_z[ci] |= seen_z[ti];
                break;
            case EdConvention::Undirected: {
                BitVector u = seen_x[ci] | seen_x[ti];
                seen_x[ci] = u;
                seen_x[ti] = u;
                break;
            }
        }
    }
    std::size_t total = 0;
    for (std::size_t q = 0; q < n; ++q) {
        switch (conv) {
            case EdConvention::XForward:
            case EdConvention::Undirected:
                total += seen_x[q].weight();
                break;
            case EdConvention::ZBackward:
                total += seen_z[q].weight();
                break;
            case EdConvention::Union:
                total += (seen_x[q] | seen_z[q]).weight();
                break;
        }
        if (!include_self) --total;
    }
    return {total, n};
}

Rational error_prop_distance(const Circuit& c) { return error_prop_distance(c, EdConvention::Union, false); }

Gate conjugate_through_perm(const Gate& g, const Permutation& p) {
    const Permutation inv = p.inverse();
    Gate out = g;
    out.a = inv(g.a);
    if (g.is_cnot()) out.b = inv(g.b);
    return out;
}

Circuit inverse(const Circuit& c) {
    const Permutation inv = c.initial_perm().inverse();
    std::vector<Gate> gates;
    gates.reserve(c.gates().size());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        Gate g = *it;
        g.a = inv(g.a);
        if (g.is_cnot()) g.b = inv(g.b);
        gates.push_back(g);
    }
    return Circuit(c.width(), inv, std::move(gates));
}

Circuit compose(const Circuit& first, const Circuit& second) {
    if (first.width() != second.width()) throw std::invalid_argument("compose: width mismatch");
    CircuitBuilder b(first.width());
    b.embed(first, 0);
    b.embed(second, 0);
    return b.build();
}

std::size_t cross_partition_cnots(const Circuit& c, const std::vector<std::size_t>& part) {
    std::vector<bool> in(c.width() + 1, false);
    for (std::size_t q : part) {
        if (q == 0 || q > c.width()) throw std::out_of_range("cross_partition_cnots: qubit out of range");
        in[q] = true;
    }
    std::size_t n = 0;
    for (const auto& g : c.gates())
        if (g.is_cnot() && in[g.a] != in[g.b]) ++n;
    return n;
}

namespace {

// Transpositions (0-based positions) realizing P(p) on a register.
std::vector<std::pair<std::size_t, std::size_t>> perm_to_swaps(const Permutation& p) {
    const std::size_t n = p.size();
    std::vector<std::size_t> at(n), pos(n);  // at[position] = original qubit, pos[original] = position
    std::iota(at.begin(), at.end(), std::size_t{0});
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    const Permutation inv = p.inverse();
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t want = inv(t + 1) - 1;
        const std::size_t s = pos[want];
        if (s == t) continue;
        swaps.emplace_back(s, t);
        const std::size_t other = at[t];
        std::swap(at[s], at[t]);
        pos[want] = t;
        pos[other] = s;
    }
    return swaps;
}

std::size_t parse_qubit(const std::string& tok, std::size_t width) {
    auto l = tok.find('[');
    auto r = tok.find(']');
    if (l == std::string::npos || r == std::string::npos || r < l)
        throw std::invalid_argument("parse_qasm: bad operand '" + tok + "'");
    std::size_t q = std::stoul(tok.substr(l + 1, r - l - 1));
    if (q >= width) throw std::out_of_range("parse_qasm: qubit index out of range");
    return q + 1;
}

}  // namespace

std::string to_qasm(const Circuit& c, const QasmOptions& opts) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    if (opts.perm_as_comment && !c.initial_perm().is_identity()) {
        out << "// initial_perm:";
        for (std::size_t v : c.initial_perm().image()) out << ' ' << v;
        out << '\n';
    }
    out << "qreg q[" << c.width() << "];\n";
    if (!opts.perm_as_comment)
        for (auto [a, b] : perm_to_swaps(c.initial_perm())) out << "swap q[" << a << "],q[" << b << "];\n";
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::H:
                out << "h q[" << g.a - 1 << "];\n";
                break;
            case GateKind::X:
                out << "x q[" << g.a - 1 << "];\n";
                break;
            case GateKind::CNOT:
                out << "cx q[" << g.a - 1 << "],q[" << g.b - 1 << "];\n";
                break;
        }
    }
    return out.str();
}

Circuit parse_qasm(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t width = 0;
    bool have_reg = false;
    std::vector<std::size_t> header_perm;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> stmts;
    std::vector<std::string> raw;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first);
        if (line.rfind("// initial_perm:", 0) == 0) {
            std::istringstream ps(line.substr(16));
            std::size_t v;
            while (ps >> v) header_perm.push_back(v);
            continue;
        }
        if (line.rfind("//", 0) == 0 || line.rfind("OPENQASM", 0) == 0 || line.rfind("include", 0) == 0) continue;
        if (line.rfind("qreg", 0) == 0) {
            auto l = line.find('[');
            auto r = line.find(']');
            if (l == std::string::npos || r == std::string::npos) throw std::invalid_argument("parse_qasm: bad qreg");
            width = std::stoul(line.substr(l + 1, r - l - 1));
            have_reg = true;
            continue;
        }
        raw.push_back(line);
    }
    if (!have_reg) throw std::invalid_argument("parse_qasm: missing qreg declaration");
    CircuitBuilder b(width);
    if (!header_perm.empty()) b.permute(Permutation(header_perm));
    for (const auto& s : raw) {
        auto semi = s.find(';');
        std::string body = s.substr(0, semi);
        auto sp = body.find(' ');
        if (sp == std::string::npos) throw std::invalid_argument("parse_qasm: bad statement '" + s + "'");
        std::string op = body.substr(0, sp);
        std::string args = body.substr(sp + 1);
        std::vector<std::string> toks;
        std::string cur;
        for (char ch : args) {
            if (ch == ',') {
                toks.push_back(cur);
                cur.clear();
            } else if (ch != ' ') {
                cur += ch;
            }
        }
        if (!cur.empty()) toks.push_back(cur);
        if (op == "h" && toks.size() == 1) {
            b.h(parse_qubit(toks[0], width));
        } else if (op == "x" && toks.size() == 1) {
            b.x(parse_qubit(toks[0], width));
        } else if (op == "cx" && toks.size() == 2) {
            b.cnot(parse_qubit(toks[0], width), parse_qubit(toks[1], width));
        } else if (op == "swap" && toks.size() == 2) {
            auto img = Permutation::identity(width).image();
            std::size_t a = parse_qubit(toks[0], width), c = parse_qubit(toks[1], width);
            std::swap(img[a - 1], img[c - 1]);
            b.permute(Permutation(std::move(img)));
        } else {
            throw std::invalid_argument("parse_qasm: unsupported statement '" + s + "'");
        }
    }
    return b.build();
}

nlohmann::json to_json(const Circuit& c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::H:
                gates.push_back({{"kind", "h"}, {"qubits", {g.a}}});
                break;
            case GateKind::X:
                gates.push_back({{"kind", "x"}, {"qubits", {g.a}}});
                break;
            case GateKind::CNOT:
                gates.push_back({{"kind", "cx"}, {"qubits", {g.a, g.b}}});
                break;
        }
    }
    return {{"width", c.width()}, {"initial_perm", c.initial_perm().image()}, {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
    const std::size_t width = j.at("width").get<std::size_t>();
    Permutation p(j.at("initial_perm").get<std::vector<std::size_t>>());
    std::vector<Gate> gates;
    for (const auto& g : j.at("gates")) {
        const auto kind = g.at("kind").get<std::string>();
        const auto qs = g.at("qubits").get<std::vector<std::size_t>>();
        if (kind == "h" && qs.size() == 1)
            gates.push_back(Gate::h(qs[0]));
        else if (kind == "x" && qs.size() == 1)
            gates.push_back(Gate::x(qs[0]));
        else if (kind == "cx" && qs.size() == 2)
            gates.push_back(Gate::cnot(qs[0], qs[1]));
        else
            throw std::invalid_argument("circuit_from_json: bad gate entry");
    }
    return Circuit(width, std::move(p), std::move(gates));
}

}  // namespace qrm
