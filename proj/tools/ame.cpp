#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ame/biunimodular.hpp"
#include "ame/circuits.hpp"
#include "ame/gates.hpp"
#include "ame/linalg.hpp"
#include "ame/noise.hpp"
#include "ame/transpile.hpp"
#include "ame/verify.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

// Exit codes: 0 success, 2 usage or parse trouble, 3 a requested
// verification that came back negative.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything lands in one buffered string and is written once: either to
// stdout or atomically through a temp file sitting next to the target.
void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f.write(text.data(), std::streamsize(text.size()));
        if (!f) throw std::runtime_error("short write on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot move " + tmp + " into place");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<double> parse_gamma_grid(const std::string& spec) {
    double start = 0.0, end = 0.0, step = 0.0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &end, &step, &extra) != 3) {
        throw UsageError("gamma grid must be start:end:step, got " + spec);
    }
    if (step <= 0.0 || end < start) {
        throw UsageError("gamma grid needs step > 0 and end >= start");
    }
    std::vector<double> grid;
    for (long long k = 0;; ++k) {
        const double v = start + double(k) * step;
        if (v > end + 1e-12) break;
        grid.push_back(std::min(v, end));
    }
    return grid;
}

ame::StateVector state_from_json(const json& j) {
    ame::StateVector v;
    v.radices = j.at("radices").get<std::vector<int>>();
    for (const auto& pair : j.at("amps")) {
        v.amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return ame::StateVector(v.radices, v.amps);  // shape check
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool known_build_name(const std::string& name) {
    static const std::vector<std::string> names{"ame44_qubit", "ame44_vectorized", "ame46_mixed",
                                               "ame48_qubit", "ame44_f4"};
    for (const auto& n : names) {
        if (n == name) return true;
    }
    return false;
}

// ---------------------------------------------------------------- build ----

int cmd_build(const std::string& name, const std::string& out) {
    if (!known_build_name(name)) throw UsageError("unknown construction: " + name);
    const ame::BuiltCircuit built = ame::build_named(name);
    const ame::StateVector state = ame::simulate(built.circuit);

    const std::string circuit_json = ame::circuit_to_json(built.circuit) + "\n";

    std::string dump;
    dump.reserve(state.dim() * 32);
    char line[96];
    for (std::size_t k = 0; k < state.dim(); ++k) {
        std::snprintf(line, sizeof(line), "%zu %.17g %.17g\n", k, state.amps[k].real(),
                      state.amps[k].imag());
        dump += line;
    }

    if (out.empty()) {
        write_output(circuit_json + dump, "");
    } else {
        write_output(circuit_json, out);
        write_output(dump, out + ".amps");
        std::printf("wrote %s (%zu wires) and %s (%zu amplitudes)\n", out.c_str(),
                    built.circuit.radices.size(), (out + ".amps").c_str(), state.dim());
    }
    return kExitOk;
}

// --------------------------------------------------------------- verify ----

ame::StateVector resolve_state(const std::string& target, int n, int d) {
    if (known_build_name(target)) {
        const ame::BuiltCircuit built = ame::build_named(target);
        return ame::group_wires(ame::simulate(built.circuit), built.parties);
    }
    if (target == "ghz") {
        if (n <= 0 || d <= 0) throw UsageError("verify ghz needs party count and level count");
        return ame::ghz(n, d);
    }
    return state_from_json(json::parse(read_file(target)));
}

int cmd_verify(const std::string& target, int n, int d, bool expect_ame, double tol,
               const std::string& format, const std::string& out) {
    const ame::StateVector state = resolve_state(target, n, d);
    const ame::AmeReport report = ame::is_ame(state, tol);

    json k_table = json::array();
    for (int k = 1; k <= int(state.wire_count()) / 2; ++k) {
        k_table.push_back({{"k", k}, {"uniform", ame::is_k_uniform(state, k, tol)}});
    }

    std::string text;
    if (format == "json") {
        json doc = json::parse(ame::ame_report_to_json(report));
        doc["k_uniform"] = k_table;
        text = doc.dump(2) + "\n";
    } else if (format == "text") {
        std::ostringstream ss;
        ss << "wires " << state.wire_count() << ", ame " << (report.ame ? "yes" : "no") << "\n";
        for (const auto& row : k_table) {
            ss << "  " << row["k"].get<int>() << "-uniform: "
               << (row["uniform"].get<bool>() ? "yes" : "no") << "\n";
        }
        text = ss.str();
    } else {
        throw UsageError("verify supports --format json or text");
    }
    write_output(text, out);

    if (expect_ame && !report.ame) throw VerifyFailed("state is not absolutely maximally entangled");
    return kExitOk;
}

// ------------------------------------------------------------ invariant ----

ame::ComplexMatrix invariant_gate(const std::string& name, int d_flag, int* d_out) {
    if (name == "lambda_22" || name == "lambda_23" || name == "lambda_222" || name == "lambda_4") {
        const ame::UnimodularVector lam = ame::fixture(name);
        *d_out = lam.joint_dim();
        return ame::multiunitary_from_lambda(lam, ame::Ansatz::MixedRadix);
    }
    if (name == "gf4" || name == "gf8") {
        const int d = name == "gf4" ? 4 : 8;
        *d_out = d;
        return ame::minimal_support_unitary(ame::latin_square_gf(d, 1), ame::latin_square_gf(d, 2));
    }
    if (name == "identity") {
        if (d_flag < 2) throw UsageError("invariant identity needs --d");
        *d_out = d_flag;
        return ame::ComplexMatrix::identity(std::size_t(d_flag) * std::size_t(d_flag));
    }
    throw UsageError("unknown gate: " + name);
}

int cmd_invariant(const std::string& name, int k, int d_flag, const std::string& format,
                  const std::string& out) {
    int d = 0;
    const ame::ComplexMatrix u = invariant_gate(name, d_flag, &d);
    const ame::Cx moment = ame::lu_invariant_moment(u, d, k);

    std::string text;
    if (format == "json") {
        text = json{{"gate", name},
                    {"k", k},
                    {"d", d},
                    {"moment_re", moment.real()},
                    {"moment_im", moment.imag()}}
                   .dump(2) +
               "\n";
    } else if (format == "text") {
        text = format_double(moment.real()) + "\n";
    } else {
        throw UsageError("invariant supports --format json or text");
    }
    write_output(text, out);
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ----

ame::LabeledState sweep_member(const std::string& label, unsigned long long seed) {
    ame::LabeledState ls;
    ls.label = label;
    if (label.rfind("ame4", 0) == 0 && label.size() == 5) {
        ls.members.push_back(ame::ideal_ame_state(label[4] - '0'));
        return ls;
    }
    if (label.rfind("ghz4", 0) == 0 && label.size() == 5) {
        ls.members.push_back(ame::ghz(4, label[4] - '0'));
        return ls;
    }
    if (label.rfind("haar4", 0) == 0) {
        const auto xpos = label.find('x', 5);
        if (xpos == 6 && xpos + 1 < label.size()) {
            const int d = label[5] - '0';
            const int count = std::stoi(label.substr(xpos + 1));
            if (d >= 2 && count >= 1) {
                for (int i = 0; i < count; ++i) {
                    ls.members.push_back(
                        ame::haar_random({d, d, d, d}, seed + (unsigned long long)(i)));
                }
                return ls;
            }
        }
    }
    throw UsageError("unknown sweep label: " + label + " (want ame4<d>, ghz4<d>, haar4<d>x<count>)");
}

int cmd_sweep(const std::vector<std::string>& labels, const std::string& gamma_spec,
              unsigned long long seed, const std::string& format, const std::string& out) {
    if (format != "csv") throw UsageError("sweep emits --format csv only");
    if (labels.empty()) throw UsageError("sweep needs at least one state label");
    const std::vector<double> gammas = parse_gamma_grid(gamma_spec);
    std::vector<ame::LabeledState> states;
    for (const auto& label : labels) states.push_back(sweep_member(label, seed));
    const auto records = ame::sweep(states, gammas);
    write_output(ame::sweep_to_csv(records), out);
    return kExitOk;
}

// ------------------------------------------------------------- teleport ----

int cmd_teleport(int d, const std::string& gamma_spec, const std::string& format,
                 const std::string& out) {
    std::string text;
    if (!gamma_spec.empty()) {
        if (format != "csv") throw UsageError("teleport with --gammas emits --format csv only");
        std::string csv = "gamma,fidelity\n";
        for (double g : parse_gamma_grid(gamma_spec)) {
            csv += format_double(g) + "," + format_double(ame::teleportation_fidelity(d, g)) + "\n";
        }
        text = csv;
    } else if (format == "json") {
        text = json{{"d", d},
                    {"threshold", ame::teleportation_threshold(d)},
                    {"fidelity_at_zero", ame::teleportation_fidelity(d, 0.0)}}
                   .dump(2) +
               "\n";
    } else if (format == "text") {
        text = format_double(ame::teleportation_threshold(d)) + "\n";
    } else {
        throw UsageError("teleport supports --format json or text");
    }
    write_output(text, out);
    return kExitOk;
}

// --------------------------------------------------------------- search ----

int cmd_search(const std::vector<int>& radices, const std::string& mode, unsigned long long seed,
               long long trials, int order, double tol, const std::string& format,
               const std::string& out) {
    ame::SearchConfig cfg;
    cfg.seed = seed;
    cfg.max_trials = trials;
    cfg.group_order = order;
    cfg.tolerance = tol;

    std::optional<ame::UnimodularVector> found;
    if (mode == "random") {
        found = ame::random_discrete_search(cfg, radices);
    } else if (mode == "iterative") {
        cfg.filter_two_unitary = false;  // converged vectors are reported as-is
        found = ame::iterative_search(cfg, radices);
    } else {
        throw UsageError("search mode must be random or iterative");
    }

    std::string text;
    if (format == "json") {
        if (found) {
            json doc = json::parse(ame::lambda_to_json(*found));
            doc["found"] = true;
            text = doc.dump(2) + "\n";
        } else {
            text = json{{"found", false}}.dump(2) + "\n";
        }
    } else if (format == "text") {
        text = found ? "found\n" : "not-found\n";
    } else {
        throw UsageError("search supports --format json or text");
    }
    write_output(text, out);
    return kExitOk;
}

// ------------------------------------------------------------ transpile ----

int cmd_transpile(const std::string& target, const std::string& format, const std::string& out) {
    ame::Circuit circuit;
    if (known_build_name(target)) {
        circuit = ame::build_named(target).circuit;
    } else {
        circuit = ame::circuit_from_json(read_file(target));
    }
    const ame::QubitCircuit qc = ame::transpile_circuit(circuit);

    std::string text;
    if (format == "text") {
        text = ame::export_text(qc);
    } else if (format == "json") {
        text = ame::circuit_to_json(ame::to_circuit(qc)) + "\n";
    } else {
        throw UsageError("transpile supports --format text or json");
    }
    write_output(text, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-radix circuit toolkit: builds, checks, and transpiles the"
                 " four-party maximally entangled constructions"};
    app.require_subcommand(1);

    std::string out;
    unsigned long long seed = 0;

    // build
    auto* build = app.add_subcommand("build", "write a named circuit as JSON plus its amplitudes");
    std::string build_name;
    build->add_option("name", build_name, "construction name, e.g. ame46_mixed")->required();
    build->add_option("--out", out, "circuit JSON path; amplitudes land next to it as .amps");

    // verify
    auto* verify = app.add_subcommand("verify", "entropy/mixedness report for a state");
    std::string verify_target;
    int verify_n = 0, verify_d = 0;
    bool expect_ame = false;
    double verify_tol = ame::kUniformTol;
    std::string verify_format = "json";
    verify->add_option("target", verify_target, "construction name, 'ghz', or state JSON path")
        ->required();
    verify->add_option("n", verify_n, "party count for ghz");
    verify->add_option("d", verify_d, "levels per party for ghz");
    verify->add_flag("--expect-ame", expect_ame, "exit 3 unless the verdict is positive");
    verify->add_option("--tol", verify_tol, "mixedness tolerance")->capture_default_str();
    verify->add_option("--format", verify_format, "json or text")->capture_default_str();
    verify->add_option("--out", out, "write the report here instead of stdout");

    // invariant
    auto* invariant = app.add_subcommand("invariant", "local-unitary invariant moment of a gate");
    std::string inv_name;
    int inv_k = 2, inv_d = 0;
    std::string inv_format = "text";
    invariant->add_option("gate", inv_name, "lambda_22, lambda_23, lambda_222, lambda_4, gf4, gf8, identity")
        ->required();
    invariant->add_option("k", inv_k, "moment order (2 or 4)")->capture_default_str();
    invariant->add_option("--d", inv_d, "local dimension for the identity gate");
    invariant->add_option("--format", inv_format, "text or json")->capture_default_str();
    invariant->add_option("--out", out, "write the value here instead of stdout");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "noise sweep over a gamma grid, CSV out");
    std::vector<std::string> sweep_labels;
    std::string gamma_spec;
    std::string sweep_format = "csv";
    sweep->add_option("labels", sweep_labels, "state labels: ame4<d>, ghz4<d>, haar4<d>x<count>")
        ->required();
    sweep->add_option("--gammas", gamma_spec, "grid start:end:step, endpoints inclusive")->required();
    sweep->add_option("--seed", seed, "base seed for haar ensembles")->capture_default_str();
    sweep->add_option("--format", sweep_format, "csv")->capture_default_str();
    sweep->add_option("--out", out, "write the CSV here instead of stdout");

    // teleport
    auto* teleport = app.add_subcommand("teleport", "teleportation fidelity threshold");
    int teleport_d = 0;
    std::string teleport_format = "text";
    std::string teleport_gammas;
    teleport->add_option("d", teleport_d, "pair dimension d = local^2, e.g. 36")->required();
    teleport->add_option("--gammas", teleport_gammas, "emit gamma,fidelity rows on this grid");
    teleport->add_option("--format", teleport_format, "text, json, or csv with --gammas")->capture_default_str();
    teleport->add_option("--out", out, "write here instead of stdout");

    // search
    auto* search = app.add_subcommand("search", "look for gate-producing phase vectors");
    std::vector<int> search_radices;
    std::string search_mode = "random";
    long long search_trials = 1000000;
    int search_order = 4;
    double search_tol = 1e-8;
    std::string search_format = "json";
    search->add_option("radices", search_radices, "factor dims of one subsystem, e.g. 2 3")
        ->required();
    search->add_option("--mode", search_mode, "random or iterative")->capture_default_str();
    search->add_option("--seed", seed, "sampling seed")->capture_default_str();
    search->add_option("--trials", search_trials, "trial/restart budget")->capture_default_str();
    search->add_option("--order", search_order, "entries drawn from these roots of unity")->capture_default_str();
    search->add_option("--tol", search_tol, "convergence target (iterative)")->capture_default_str();
    search->add_option("--format", search_format, "json or text")->capture_default_str();
    search->add_option("--out", out, "write the vector here instead of stdout");

    // transpile
    auto* transpile = app.add_subcommand("transpile", "map a circuit onto qubit gates");
    std::string transpile_target;
    std::string transpile_format = "text";
    transpile->add_option("target", transpile_target, "construction name or circuit JSON path")
        ->required();
    transpile->add_option("--format", transpile_format, "text or json")->capture_default_str();
    transpile->add_option("--out", out, "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(build_name, out);
        if (verify->parsed())
            return cmd_verify(verify_target, verify_n, verify_d, expect_ame, verify_tol,
                              verify_format, out);
        if (invariant->parsed()) return cmd_invariant(inv_name, inv_k, inv_d, inv_format, out);
        if (sweep->parsed()) return cmd_sweep(sweep_labels, gamma_spec, seed, sweep_format, out);
        if (teleport->parsed()) return cmd_teleport(teleport_d, teleport_gammas, teleport_format, out);
        if (search->parsed())
            return cmd_search(search_radices, search_mode, seed, search_trials, search_order,
                              search_tol, search_format, out);
        if (transpile->parsed()) return cmd_transpile(transpile_target, transpile_format, out);
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitUsage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const VerifyFailed& e) {
        std::fprintf(stderr, "verification failed: %s\n", e.what());
        return kExitVerifyFailed;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
