#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "qrm/circuit.hpp"
#include "qrm/extract.hpp"
#include "qrm/synth.hpp"
#include "qrm/verify.hpp"

namespace qrm::cli {

extern const std::string_view kTable1a;
extern const std::string_view kTable1b;

nlohmann::json golden_1a() { return nlohmann::json::parse(kTable1a); }
nlohmann::json golden_1b() { return nlohmann::json::parse(kTable1b); }

namespace {

struct SpecArgs {
    std::string family = "qrm";
    std::optional<int> r, m, rd, md;
    std::string prep;  // "", "zero" or "plus"
};

struct Common {
    std::string format;
    std::string out;
};

void add_spec_options(CLI::App* cmd, SpecArgs& s, bool with_prep) {
    cmd->add_option("--family", s.family, "encoder family (qrm, basis-qrm, pqrm, basis-pqrm, stateprep-pqrm, zqrm, pzqrm, "
                                          "stateprep-pzqrm, rred)");
    cmd->add_option("-r", s.r, "order r");
    cmd->add_option("-m", s.m, "number of variables m");
    cmd->add_option("--rd", s.rd, "r◇ of the zero-rate families");
    cmd->add_option("--md", s.md, "m◇ of the zero-rate families");
    if (with_prep)
        cmd->add_option("--prep", s.prep, "pzQRM state preparation of |0> or |+> (uses --rd, --md)")
            ->check(CLI::IsMember({"zero", "plus"}));
}

CodeSpec make_spec(const SpecArgs& a) {
    CodeSpec s;
    s.family = parse_family(a.family);
    if (s.zero_rate_family()) {
        if (!a.rd || !a.md) throw std::invalid_argument("zero-rate families need --rd and --md");
        s.rd = a.rd;
        s.md = a.md;
        s.r = a.r.value_or(*a.rd);
        s.m = a.m.value_or(*a.md);
    } else {
        if (!a.r || !a.m) throw std::invalid_argument("-r and -m are required");
        s.r = *a.r;
        s.m = *a.m;
    }
    validate(s);
    return s;
}

struct Built {
    std::string name;
    SynthResult result;
    std::size_t predicted = 0;
};

Built build(const SpecArgs& a) {
    if (!a.prep.empty()) {
        if (!a.rd || !a.md) throw std::invalid_argument("--prep needs --rd and --md");
        const PrepState which = a.prep == "zero" ? PrepState::Zero : PrepState::Plus;
        validate(CodeSpec::zero_rate(which == PrepState::Zero ? Family::StatePrepPZQRM : Family::PZQRM, *a.rd, *a.md,
                                     *a.rd, *a.md));
        return {"prep-" + a.prep + "(" + std::to_string(*a.rd) + "," + std::to_string(*a.md) + ")",
                stateprep_pzqrm(*a.rd, *a.md, which), predict_stateprep_pzqrm(*a.rd, *a.md, which)};
    }
    const CodeSpec s = make_spec(a);
    return {s.to_string(), synthesize(s), predict_cnot_count(s)};
}

std::string bits(const BitVector& v) {
    std::string s;
    s.reserve(v.size());
    for (std::size_t i = 1; i <= v.size(); ++i) s.push_back(v.get(i) ? '1' : '0');
    return s;
}

nlohmann::json stats_json(const Built& b) {
    const Circuit& c = b.result.circuit;
    const Rational ed = error_prop_distance(c);
    return {
        {"spec", b.name},
        {"width", c.width()},
        {"message_width", b.result.message_width},
        {"ancilla_count", b.result.ancilla_count},
        {"cnot_count", cnot_count(c)},
        {"hadamard_count", hadamard_count(c)},
        {"depth", depth(c)},
        {"e_d", ed.value()},
        {"e_d_exact", {ed.num, ed.den}},
        {"predicted_count", b.predicted},
    };
}

nlohmann::json map_json(const SynthResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [row, q] : r.index_map.entries()) rows.push_back({{"row", bits(row)}, {"qubit", q}});
    nlohmann::json msg = nlohmann::json::array();
    for (const auto& row : r.message_rows) msg.push_back(bits(row));
    return {{"index_map", rows}, {"message_rows", msg}, {"message_qubits", r.message_qubits()}};
}

std::string circuit_text(const Circuit& c) {
    std::ostringstream os;
    os << "width " << c.width() << "\n";
    if (!c.initial_perm().is_identity()) {
        os << "perm";
        for (std::size_t p : c.initial_perm().image()) os << ' ' << p;
        os << "\n";
    }
    for (const auto& g : c.gates()) {
        switch (g.kind) {
            case GateKind::H: os << "h " << g.a << "\n"; break;
            case GateKind::X: os << "x " << g.a << "\n"; break;
            case GateKind::CNOT: os << "cx " << g.a << ' ' << g.b << "\n"; break;
        }
    }
    return os.str();
}

std::string render_circuit(const Circuit& c, const std::string& format) {
    if (format == "qasm") return to_qasm(c);
    if (format == "json") return to_json(c).dump(2) + "\n";
    return circuit_text(c);
}

std::string extension(const std::string& format) {
    if (format == "qasm") return ".qasm";
    if (format == "json") return ".json";
    return ".txt";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
    if (c.out.empty())
        out << text;
    else
        write_file(c.out, text);
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol + 1e-12; }

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string table_text(const nlohmann::json& t1a, const nlohmann::json& t1b) {
    std::ostringstream os;
    if (!t1a.is_null()) {
        os << "Encoder CNOT counts and E_d (row-reduced / recursive)\n";
        os << " (r,m)   cnot red  cnot rec   E_d red        E_d rec        ok\n";
        for (const auto& row : t1a["rows"]) {
            os << " (" << row["r"].get<int>() << "," << row["m"].get<int>() << ")   " << std::setw(8)
               << row["cnot_red"].get<std::size_t>() << "  " << std::setw(8) << row["cnot_rec"].get<std::size_t>()
               << "   " << std::setw(6) << fixed(row["ed_red"].get<double>(), 3) << " (" << std::setw(5)
               << fixed(row["golden"]["ed_red"].get<double>(), 2) << ")  " << std::setw(6)
               << fixed(row["ed_rec"].get<double>(), 3) << " (" << std::setw(5)
               << fixed(row["golden"]["ed_rec"].get<double>(), 2) << ")  " << (row["match"].get<bool>() ? "yes" : "NO")
               << "\n";
        }
    }
    if (!t1b.is_null()) {
        os << "pzQRM state preparation |0>, |+>\n";
        os << " (r,m)     N   cnot      depth    ok\n";
        for (const auto& row : t1b["rows"]) {
            os << " (" << row["rd"].get<int>() << "," << row["md"].get<int>() << ")  " << std::setw(4)
               << row["n"].get<std::size_t>() << "   " << std::setw(3) << row["cnot_zero"].get<std::size_t>() << ", "
               << std::setw(3) << row["cnot_plus"].get<std::size_t>() << "   " << std::setw(2)
               << row["depth_zero"].get<std::size_t>() << ", " << std::setw(2) << row["depth_plus"].get<std::size_t>()
               << "   " << (row["match"].get<bool>() ? "yes" : "NO") << "\n";
        }
    }
    return os.str();
}

std::string extraction_text(const ExtractionReport& r) {
    auto list = [](const std::vector<std::size_t>& v) {
        std::string s = "{";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s + "}";
    };
    std::ostringstream os;
    os << "GHZ groups (Z basis): " << r.groups.size() << " (expected at least " << r.expected_min_groups << ")\n";
    for (const auto& g : r.groups) os << "  " << list(g) << "\n";
    if (!r.x_basis_groups.empty()) {
        os << "GHZ groups (X basis): " << r.x_basis_groups.size() << "\n";
        for (const auto& g : r.x_basis_groups) os << "  " << list(g) << "\n";
    }
    os << "deterministic qubits: " << list(r.deterministic_qubits) << "\n";
    if (!r.other_qubits.empty()) os << "other qubits: " << list(r.other_qubits) << "\n";
    os << "stabilizers verified: " << (r.stabilizers_verified ? "yes" : "no") << "\n";
    os << "residual entanglement: " << r.residual_entanglement << "\n";
    os << "party entanglement: " << r.party_entanglement << "\n";
    return os.str();
}

std::string verify_text(const VerifyReport& r) {
    std::ostringstream os;
    os << r.spec << "\n";
    for (const auto& c : r.checks) os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << ": " << c.details << "\n";
    return os.str();
}

}  // namespace

nlohmann::json table_1a() {
    const nlohmann::json golden = golden_1a();
    const double tol = golden.value("ed_tolerance", 0.01);
    std::vector<std::future<nlohmann::json>> jobs;
    for (const auto& g : golden["rows"]) {
        jobs.push_back(std::async(std::launch::async, [g, tol] {
            const int r = g[0], m = g[1];
            const Circuit red = row_reduced_encoder(r, m).circuit;
            const Circuit rec = recursive_qrm(r, m).circuit;
            nlohmann::json row = {
                {"r", r},
                {"m", m},
                {"cnot_red", cnot_count(red)},
                {"cnot_rec", cnot_count(rec)},
                {"ed_red", error_prop_distance(red).value()},
                {"ed_rec", error_prop_distance(rec).value()},
                {"golden", {{"cnot_red", g[2]}, {"cnot_rec", g[3]}, {"ed_red", g[4]}, {"ed_rec", g[5]}}},
            };
            row["counts_match"] = row["cnot_red"] == g[2] && row["cnot_rec"] == g[3];
            row["ed_match"] = close(row["ed_red"], g[4], tol) && close(row["ed_rec"], g[5], tol);
            row["match"] = row["counts_match"].get<bool>() && row["ed_match"].get<bool>();
            return row;
        }));
    }
    nlohmann::json t = {{"rows", nlohmann::json::array()}, {"match", true}};
    for (auto& j : jobs) {
        nlohmann::json row = j.get();
        if (!row["match"].get<bool>()) t["match"] = false;
        t["rows"].push_back(std::move(row));
    }
    return t;
}

nlohmann::json table_1b() {
    const nlohmann::json golden = golden_1b();
    std::vector<std::future<nlohmann::json>> jobs;
    for (const auto& g : golden["rows"]) {
        jobs.push_back(std::async(std::launch::async, [g] {
            const int rd = g[0], md = g[1];
            const Circuit zero = stateprep_pzqrm(rd, md, PrepState::Zero).circuit;
            const Circuit plus = stateprep_pzqrm(rd, md, PrepState::Plus).circuit;
            nlohmann::json row = {
                {"rd", rd},
                {"md", md},
                {"n", zero.width()},
                {"cnot_zero", cnot_count(zero)},
                {"cnot_plus", cnot_count(plus)},
                {"depth_zero", depth(zero)},
                {"depth_plus", depth(plus)},
                {"golden",
                 {{"n", g[2]}, {"cnot_zero", g[3]}, {"cnot_plus", g[4]}, {"depth_zero", g[5]}, {"depth_plus", g[6]}}},
            };
            row["match"] = row["n"] == g[2] && row["cnot_zero"] == g[3] && row["cnot_plus"] == g[4] &&
                           row["depth_zero"] == g[5] && row["depth_plus"] == g[6];
            return row;
        }));
    }
    nlohmann::json t = {{"rows", nlohmann::json::array()}, {"match", true}};
    for (auto& j : jobs) {
        nlohmann::json row = j.get();
        if (!row["match"].get<bool>()) t["match"] = false;
        t["rows"].push_back(std::move(row));
    }
    return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Recursive encoders for quantum Reed-Muller codes", "qrm"};
    app.require_subcommand(1);

    SpecArgs spec;
    Common common;
    unsigned seed = 1;
    bool tableau_only = false;
    bool degeneracy = false;
    std::size_t samples = 32;
    int level = 1;
    std::string which = "all";

    auto* synth = app.add_subcommand("synth", "synthesize an encoder and write circuit, index map and stats");
    add_spec_options(synth, spec, true);
    synth->add_option("--format", common.format, "circuit format")->check(CLI::IsMember({"qasm", "json", "text"}));
    synth->add_option("--out", common.out, "output prefix: writes PREFIX.{qasm,json,txt}, PREFIX.map.json, PREFIX.stats.json");

    auto* stats = app.add_subcommand("stats", "print gate statistics as JSON");
    add_spec_options(stats, spec, true);
    stats->add_option("--out", common.out, "write the JSON here instead of stdout");

    auto* exp = app.add_subcommand("export", "print the circuit in one format");
    add_spec_options(exp, spec, true);
    exp->add_option("--format", common.format, "circuit format")->check(CLI::IsMember({"qasm", "json", "text"}));
    exp->add_option("--out", common.out, "write here instead of stdout");

    auto* ver = app.add_subcommand("verify", "check an encoder against the reference states");
    add_spec_options(ver, spec, false);
    ver->add_flag("--tableau-only", tableau_only, "skip the amplitude oracle");
    ver->add_flag("--degeneracy", degeneracy, "also check that the code is non-degenerate (QRM, m <= 4)");
    ver->add_option("--samples", samples, "random messages when the message space is too large to sweep");
    ver->add_option("--seed", seed, "seed for sampled messages");
    ver->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "text"}));
    ver->add_option("--out", common.out, "write the report here instead of stdout");

    auto* table = app.add_subcommand("table", "regenerate the reference tables and diff them");
    table->add_option("--which", which, "1a, 1b or all")->check(CLI::IsMember({"1a", "1b", "all"}));
    table->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "text"}));
    table->add_option("--out", common.out, "write the report here instead of stdout");

    auto* ext = app.add_subcommand("extract", "decode Plotkin parts of QRM |0> and report GHZ groups");
    add_spec_options(ext, spec, false);
    ext->add_option("-l", level, "recursion level l");
    ext->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "text"}));
    ext->add_option("--out", common.out, "write the report here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (synth->parsed()) {
            const std::string format = common.format.empty() ? "qasm" : common.format;
            const Built b = build(spec);
            const nlohmann::json st = stats_json(b);
            if (!common.out.empty()) {
                write_file(common.out + extension(format), render_circuit(b.result.circuit, format));
                write_file(common.out + ".map.json", map_json(b.result).dump(2) + "\n");
                write_file(common.out + ".stats.json", st.dump(2) + "\n");
            }
            out << st.dump(2) << "\n";
            return kOk;
        }
        if (stats->parsed()) {
            emit(common, out, stats_json(build(spec)).dump(2) + "\n");
            return kOk;
        }
        if (exp->parsed()) {
            const Built b = build(spec);
            emit(common, out, render_circuit(b.result.circuit, common.format.empty() ? "qasm" : common.format));
            return kOk;
        }
        if (ver->parsed()) {
            const CodeSpec s = make_spec(spec);
            VerifyOptions o;
            o.dense = !tableau_only;
            o.degeneracy = degeneracy;
            o.seed = seed;
            o.samples = samples;
            const VerifyReport r = verify_spec(s, o);
            emit(common, out, common.format == "text" ? verify_text(r) : to_json(r).dump(2) + "\n");
            return r.all_pass() ? kOk : kCheckFailed;
        }
        if (table->parsed()) {
            nlohmann::json t1a, t1b;
            bool ok = true;
            if (which != "1b") {
                t1a = table_1a();
                ok = ok && t1a["match"].get<bool>();
            }
            if (which != "1a") {
                t1b = table_1b();
                ok = ok && t1b["match"].get<bool>();
            }
            if (common.format == "json") {
                nlohmann::json j;
                if (!t1a.is_null()) j["table_1a"] = t1a;
                if (!t1b.is_null()) j["table_1b"] = t1b;
                j["match"] = ok;
                emit(common, out, j.dump(2) + "\n");
            } else {
                emit(common, out, table_text(t1a, t1b) + (ok ? "all rows match\n" : "MISMATCH\n"));
            }
            return ok ? kOk : kCheckFailed;
        }
        if (ext->parsed()) {
            const CodeSpec s = make_spec(spec);
            const ExtractionPlan plan = build_extraction(s, level);
            const StabilizerTableau zero =
                tableau_simulate(recursive_qrm(s.r, s.m).circuit, StabilizerTableau(s.width()));
            const ExtractionReport r = run_extraction(plan, zero);
            emit(common, out, common.format == "json" ? to_json(r).dump(2) + "\n" : extraction_text(r));
            return r.stabilizers_verified && r.groups.size() >= r.expected_min_groups ? kOk : kCheckFailed;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kInvalidInput;
}

}  // namespace qrm::cli
