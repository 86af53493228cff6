#include "ame/circuits.hpp"

#include "ame/biunimodular.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace ame {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

GateSpec gate_of(GateKind kind, int d = 2) {
    GateSpec g;
    g.kind = kind;
    g.d = d;
    return g;
}

GateSpec diagonal_gate(std::vector<Cx> phases) {
    GateSpec g;
    g.kind = GateKind::Diagonal;
    g.phases = std::move(phases);
    return g;
}

GateSpec cz_mixed_gate(std::vector<int> radices) {
    GateSpec g;
    g.kind = GateKind::CzMixed;
    g.radices = std::move(radices);
    return g;
}

GateSpec custom_gate(ComplexMatrix M) {
    GateSpec g;
    g.kind = GateKind::Custom;
    g.matrix = std::move(M);
    return g;
}

// Entangles two same-shape wire groups into a maximally entangled pair,
// factor by factor: Fourier on the first group, controlled shift across.
// For qubit factors these are the familiar H and CNOT.
void add_bell_prep(Circuit& c, const std::vector<int>& first, const std::vector<int>& second) {
    for (std::size_t f = 0; f < first.size(); ++f) {
        int r = c.radices[std::size_t(first[f])];
        c.instructions.push_back({r == 2 ? gate_of(GateKind::Hadamard) : gate_of(GateKind::Fourier, r), {first[f]}});
    }
    for (std::size_t f = 0; f < first.size(); ++f) {
        int r = c.radices[std::size_t(first[f])];
        if (r == 2) {
            c.instructions.push_back({gate_of(GateKind::Cnot), {first[f], second[f]}});
        } else {
            c.instructions.push_back({gate_of(GateKind::CxD, r), {first[f], second[f]}});
        }
    }
}

// The qubit-pair controlled phase splits into plain controlled-Z between
// matching qubits of the two groups; used for the all-qubit registers.
void add_pairwise_cz(Circuit& c, const std::vector<int>& first, const std::vector<int>& second) {
    for (std::size_t f = 0; f < first.size(); ++f)
        c.instructions.push_back({gate_of(GateKind::Cz), {first[f], second[f]}});
}

// Phase-vector gate on two mixed-radix groups, expanded into its controlled
// phase / Fourier-layer / diagonal factors (no adjoint layers in this form).
void add_mixed_gate(Circuit& c, const UnimodularVector& lambda, const std::vector<int>& group_a,
                    const std::vector<int>& group_b, bool qubit_pairs) {
    std::vector<int> both = group_a;
    both.insert(both.end(), group_b.begin(), group_b.end());

    auto add_cz = [&] {
        if (qubit_pairs) {
            add_pairwise_cz(c, group_a, group_b);
        } else {
            c.instructions.push_back({cz_mixed_gate(lambda.radices), both});
        }
    };
    auto add_fourier_layer = [&] {
        for (int w : both) {
            int r = c.radices[std::size_t(w)];
            c.instructions.push_back({r == 2 ? gate_of(GateKind::Hadamard) : gate_of(GateKind::Fourier, r), {w}});
        }
    };

    add_cz();
    add_fourier_layer();
    c.instructions.push_back({diagonal_gate(lambda.phases), both});
    add_fourier_layer();
    add_cz();
}

int gf_mul(int a, int b, int d) {
    int poly = (d == 4) ? 0b111 : 0b1011;
    int bits = (d == 4) ? 2 : 3;
    int acc = 0;
    while (b) {
        if (b & 1) acc ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1 << bits)) a ^= poly;
    }
    return acc;
}

bool is_latin(const std::vector<std::vector<int>>& L) {
    std::size_t d = L.size();
    if (d == 0) return false;
    for (const auto& row : L)
        if (row.size() != d) return false;
    for (std::size_t i = 0; i < d; ++i) {
        std::set<int> in_row, in_col;
        for (std::size_t j = 0; j < d; ++j) {
            if (L[i][j] < 0 || L[i][j] >= int(d)) return false;
            in_row.insert(L[i][j]);
            in_col.insert(L[j][i]);
        }
        if (in_row.size() != d || in_col.size() != d) return false;
    }
    return true;
}

nlohmann::json complex_list(const std::vector<Cx>& xs) {
    nlohmann::json out = nlohmann::json::array();
    for (const Cx& x : xs) out.push_back({x.real(), x.imag()});
    return out;
}

std::vector<Cx> complex_list_from(const nlohmann::json& j) {
    std::vector<Cx> out;
    for (const auto& p : j) out.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return out;
}

}  // namespace

void Circuit::validate() const {
    for (int r : radices)
        if (r < 2) throw std::invalid_argument("wire radix must be at least 2");
    for (const Instruction& ins : instructions) {
        if (ins.wires.empty()) throw std::invalid_argument("instruction without target wires");
        std::set<int> seen;
        std::size_t span = 1;
        for (int w : ins.wires) {
            if (w < 0 || w >= int(radices.size())) throw std::invalid_argument("target wire out of range");
            if (!seen.insert(w).second) throw std::invalid_argument("duplicate target wire");
            span *= std::size_t(radices[std::size_t(w)]);
        }
        if (ins.gate.dim() != span)
            throw std::invalid_argument("gate dimension does not match its wire group");
    }
}

StateVector simulate(const Circuit& c) {
    return simulate(c, StateVector::zero_state(c.radices));
}

StateVector simulate(const Circuit& c, const StateVector& initial) {
    c.validate();
    if (initial.radices != c.radices) throw std::invalid_argument("initial state shape mismatch");
    StateVector v = initial;
    for (const Instruction& ins : c.instructions) v = apply_factor(ins.gate.materialize(), v, ins.wires);
    if (std::abs(v.norm() - 1.0) > kUnitaryTol) throw std::runtime_error("simulation lost normalization");
    return v;
}

Circuit build_ame_circuit(int d, const UnimodularVector& lambda, Ansatz ansatz) {
    lambda.validate();
    if (lambda.joint_dim() != d) throw std::invalid_argument("phase vector does not match the dimension");

    Circuit c;
    c.radices = {d, d, d, d};
    c.instructions.push_back({gate_of(GateKind::Fourier, d), {0}});
    c.instructions.push_back({gate_of(GateKind::Fourier, d), {1}});
    c.instructions.push_back({gate_of(GateKind::CxD, d), {0, 2}});
    c.instructions.push_back({gate_of(GateKind::CxD, d), {1, 3}});

    GateSpec diag = diagonal_gate(lambda.phases);
    switch (ansatz) {
        case Ansatz::FourierCx: {
            GateSpec cx = gate_of(GateKind::CxD, d);
            GateSpec cxt = cx;
            cxt.dagger = true;  // the transpose: the controlled shift is real
            GateSpec f = gate_of(GateKind::Fourier, d);
            GateSpec fd = f;
            fd.dagger = true;
            c.instructions.push_back({cxt, {0, 1}});
            c.instructions.push_back({fd, {0}});
            c.instructions.push_back({diag, {0, 1}});
            c.instructions.push_back({f, {0}});
            c.instructions.push_back({cx, {0, 1}});
            break;
        }
        case Ansatz::FourierCz: {
            GateSpec cz = gate_of(GateKind::CzD, d);
            GateSpec f = gate_of(GateKind::Fourier, d);
            GateSpec fd = f;
            fd.dagger = true;
            c.instructions.push_back({cz, {0, 1}});
            c.instructions.push_back({fd, {0}});
            c.instructions.push_back({fd, {1}});
            c.instructions.push_back({diag, {0, 1}});
            c.instructions.push_back({f, {0}});
            c.instructions.push_back({f, {1}});
            c.instructions.push_back({cz, {0, 1}});
            break;
        }
        case Ansatz::MixedRadix: {
            GateSpec cz = cz_mixed_gate(lambda.radices);
            GateSpec f = custom_gate(fourier_mixed(lambda.radices));
            c.instructions.push_back({cz, {0, 1}});
            c.instructions.push_back({f, {0}});
            c.instructions.push_back({f, {1}});
            c.instructions.push_back({diag, {0, 1}});
            c.instructions.push_back({f, {0}});
            c.instructions.push_back({f, {1}});
            c.instructions.push_back({cz, {0, 1}});
            break;
        }
    }
    return c;
}

BuiltCircuit build_named(const std::string& name) {
    BuiltCircuit out;
    Circuit& c = out.circuit;

    if (name == "ame44_qubit" || name == "ame44_vectorized") {
        c.radices.assign(8, 2);
        out.parties = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
        UnimodularVector lam = fixture("lambda_22");
        add_bell_prep(c, {0, 1, 2, 3}, {4, 5, 6, 7});
        if (name == "ame44_qubit") {
            add_mixed_gate(c, lam, {0, 1}, {2, 3}, true);
        } else {
            // Vectorized form: load the diagonal's entangled image, then dress
            // both halves with the Fourier layer and the pairwise phases.
            c.instructions.push_back({diagonal_gate(lam.phases), {0, 1, 2, 3}});
            for (int w = 0; w < 8; ++w) c.instructions.push_back({gate_of(GateKind::Hadamard), {w}});
            add_pairwise_cz(c, {0, 1}, {2, 3});
            add_pairwise_cz(c, {4, 5}, {6, 7});
        }
    } else if (name == "ame46_mixed") {
        c.radices = {2, 3, 2, 3, 2, 3, 2, 3};
        out.parties = {{0, 1}, {2, 3}, {4, 5}, {6, 7}};
        UnimodularVector lam = fixture("lambda_23");
        add_bell_prep(c, {0, 1, 2, 3}, {4, 5, 6, 7});
        add_mixed_gate(c, lam, {0, 1}, {2, 3}, false);
    } else if (name == "ame48_qubit") {
        c.radices.assign(12, 2);
        out.parties = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}};
        UnimodularVector lam = fixture("lambda_222");
        add_bell_prep(c, {0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10, 11});
        add_mixed_gate(c, lam, {0, 1, 2}, {3, 4, 5}, true);
    } else if (name == "ame44_f4") {
        c.radices = {4, 4, 4, 4};
        out.parties = {{0}, {1}, {2}, {3}};
        UnimodularVector lam = fixture("lambda_4");
        add_bell_prep(c, {0, 1}, {2, 3});
        GateSpec cz = gate_of(GateKind::CzD, 4);
        GateSpec f = gate_of(GateKind::Fourier, 4);
        GateSpec fd = f;
        fd.dagger = true;
        c.instructions.push_back({cz, {0, 1}});
        c.instructions.push_back({fd, {0}});
        c.instructions.push_back({fd, {1}});
        c.instructions.push_back({diagonal_gate(lam.phases), {0, 1}});
        c.instructions.push_back({f, {0}});
        c.instructions.push_back({f, {1}});
        c.instructions.push_back({cz, {0, 1}});
    } else {
        throw std::invalid_argument("unknown circuit name: " + name);
    }
    c.validate();
    return out;
}

StateVector group_wires(const StateVector& v, const std::vector<std::vector<int>>& groups) {
    std::vector<bool> used(v.wire_count(), false);
    std::vector<int> grouped_radices;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("empty wire group");
        int prod = 1;
        for (int w : g) {
            if (w < 0 || w >= int(v.wire_count())) throw std::invalid_argument("group wire out of range");
            if (used[std::size_t(w)]) throw std::invalid_argument("wire appears in two groups");
            used[std::size_t(w)] = true;
            prod *= v.radices[std::size_t(w)];
        }
        grouped_radices.push_back(prod);
    }
    for (bool u : used)
        if (!u) throw std::invalid_argument("groups must cover every wire");

    StateVector out;
    out.radices = grouped_radices;
    out.amps.assign(v.amps.size(), Cx(0, 0));
    auto old_strides = strides_of(v.radices);
    auto new_strides = strides_of(grouped_radices);
    std::vector<int> digits;
    for (std::size_t idx = 0; idx < v.amps.size(); ++idx) {
        unflatten_index(idx, v.radices, digits);
        std::size_t to = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::size_t level = 0;
            for (int w : groups[g]) level = level * std::size_t(v.radices[std::size_t(w)]) + std::size_t(digits[std::size_t(w)]);
            to += level * new_strides[g];
        }
        out.amps[to] = v.amps[idx];
    }
    return out;
}

void Graph::validate(int d) const {
    if (nodes < 1) throw std::invalid_argument("graph needs at least one node");
    for (const Edge& e : edges) {
        if (e.a < 0 || e.b < 0 || e.a >= nodes || e.b >= nodes) throw std::invalid_argument("edge endpoint out of range");
        if (e.a >= e.b) throw std::invalid_argument("edges must satisfy a < b");
        if (e.w < 1 || e.w >= d) throw std::invalid_argument("edge weight out of range");
    }
}

StateVector graph_state(const Graph& g, int d) {
    if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
    g.validate(d);
    StateVector v;
    v.radices.assign(std::size_t(g.nodes), d);
    v.amps.assign(std::size_t(std::pow(double(d), double(g.nodes)) + 0.5),
                  Cx(std::pow(double(d), -0.5 * double(g.nodes)), 0));
    ComplexMatrix cz = cz_d(d);
    for (const Graph::Edge& e : g.edges)
        for (int rep = 0; rep < e.w; ++rep) v = apply_factor(cz, v, {e.a, e.b});
    return v;
}

std::vector<std::vector<int>> latin_square_gf(int d, int a) {
    if (d != 4 && d != 8) throw std::invalid_argument("field tables cover d = 4 and d = 8");
    if (a <= 0 || a >= d) throw std::invalid_argument("multiplier must be a nonzero field element");
    std::vector<std::vector<int>> L(std::size_t(d), std::vector<int>(std::size_t(d), 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) L[std::size_t(i)][std::size_t(j)] = gf_mul(a, i, d) ^ j;
    return L;
}

ComplexMatrix minimal_support_unitary(const std::vector<std::vector<int>>& L1,
                                      const std::vector<std::vector<int>>& L2) {
    if (!is_latin(L1) || !is_latin(L2)) throw std::invalid_argument("inputs must be Latin squares");
    if (L1.size() != L2.size()) throw std::invalid_argument("Latin squares must have equal order");
    int d = int(L1.size());
    ComplexMatrix U(std::size_t(d) * d, std::size_t(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::size_t row = std::size_t(L1[std::size_t(i)][std::size_t(j)]) * d + L2[std::size_t(i)][std::size_t(j)];
            U.at(row, std::size_t(i) * d + j) = 1.0;
        }
    return U;
}

StateVector ghz(int n, int d) {
    if (n < 2 || d < 2) throw std::invalid_argument("need at least two wires of dimension two");
    StateVector v;
    v.radices.assign(std::size_t(n), d);
    v.amps.assign(std::size_t(std::pow(double(d), double(n)) + 0.5), Cx(0, 0));
    auto strides = strides_of(v.radices);
    std::size_t diag_step = 0;
    for (auto s : strides) diag_step += s;
    const double a = 1.0 / std::sqrt(double(d));
    for (int j = 0; j < d; ++j) v.amps[std::size_t(j) * diag_step] = a;
    return v;
}

StateVector haar_random(const std::vector<int>& radices, unsigned long long seed) {
    StateVector v = StateVector::zero_state(radices);
    std::mt19937_64 rng(seed);
    for (Cx& a : v.amps) {
        // One Box-Muller pair per amplitude: radius from u1, angle from u2.
        double u1 = 1.0 - uniform01(rng);
        double u2 = uniform01(rng);
        double r = std::sqrt(-2.0 * std::log(u1));
        a = Cx(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
    }
    v.normalize();
    return v;
}

StateVector operator_state_vector(const ComplexMatrix& U, int d) {
    if (!U.square() || U.rows() != std::size_t(d) * d)
        throw std::invalid_argument("operator must act on the squared dimension");
    StateVector v;
    v.radices = {d, d, d, d};
    v.amps.resize(std::size_t(d) * d * d * d);
    for (std::size_t row = 0; row < U.rows(); ++row)
        for (std::size_t col = 0; col < U.cols(); ++col)
            v.amps[row * U.cols() + col] = U.at(row, col) / double(d);
    return v;
}

StateVector ideal_ame_state(int d) {
    if (d == 2)
        throw std::invalid_argument("four qubit subsystems admit no state with all balanced reductions maximally mixed");
    if (d == 3 || d == 5 || d == 7) {
        std::vector<std::vector<int>> L1(std::size_t(d), std::vector<int>(std::size_t(d), 0));
        std::vector<std::vector<int>> L2 = L1;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                L1[std::size_t(i)][std::size_t(j)] = (i + j) % d;
                L2[std::size_t(i)][std::size_t(j)] = (i + 2 * j) % d;
            }
        return operator_state_vector(minimal_support_unitary(L1, L2), d);
    }
    if (d == 4) return operator_state_vector(multiunitary_from_lambda(fixture("lambda_22"), Ansatz::MixedRadix), d);
    if (d == 6) return operator_state_vector(multiunitary_from_lambda(fixture("lambda_23"), Ansatz::MixedRadix), d);
    if (d == 8) return operator_state_vector(multiunitary_from_lambda(fixture("lambda_222"), Ansatz::MixedRadix), d);
    throw std::invalid_argument("no reference construction stored for this dimension");
}

std::string circuit_to_json(const Circuit& c) {
    c.validate();
    nlohmann::json j;
    j["radices"] = c.radices;
    nlohmann::json list = nlohmann::json::array();
    for (const Instruction& ins : c.instructions) {
        nlohmann::json e;
        e["gate"] = gate_kind_name(ins.gate.kind);
        e["wires"] = ins.wires;
        nlohmann::json params = nlohmann::json::object();
        switch (ins.gate.kind) {
            case GateKind::Fourier:
            case GateKind::Shift:
            case GateKind::CxD:
            case GateKind::CzD:
                params["d"] = ins.gate.d;
                break;
            case GateKind::CzMixed:
                params["radices"] = ins.gate.radices;
                break;
            case GateKind::Diagonal:
                params["phases"] = complex_list(ins.gate.phases);
                break;
            case GateKind::Rz:
                params["angle"] = ins.gate.angle;
                break;
            case GateKind::Custom: {
                params["dim"] = ins.gate.matrix.rows();
                params["matrix"] = complex_list(ins.gate.matrix.data());
                break;
            }
            default:
                break;
        }
        if (ins.gate.dagger) params["dagger"] = true;
        e["params"] = params;
        list.push_back(e);
    }
    j["instructions"] = list;
    return j.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Circuit c;
    c.radices = j.at("radices").get<std::vector<int>>();
    for (const auto& e : j.at("instructions")) {
        Instruction ins;
        ins.gate.kind = gate_kind_from_name(e.at("gate").get<std::string>());
        ins.wires = e.at("wires").get<std::vector<int>>();
        const auto& params = e.value("params", nlohmann::json::object());
        if (params.contains("d")) ins.gate.d = params.at("d").get<int>();
        if (params.contains("radices")) ins.gate.radices = params.at("radices").get<std::vector<int>>();
        if (params.contains("phases")) ins.gate.phases = complex_list_from(params.at("phases"));
        if (params.contains("angle")) ins.gate.angle = params.at("angle").get<double>();
        if (params.contains("dagger")) ins.gate.dagger = params.at("dagger").get<bool>();
        if (params.contains("matrix")) {
            std::size_t dim = params.at("dim").get<std::size_t>();
            std::vector<Cx> entries = complex_list_from(params.at("matrix"));
            if (entries.size() != dim * dim) throw std::invalid_argument("matrix payload has the wrong size");
            ComplexMatrix M(dim, dim);
            M.data() = entries;
            ins.gate.matrix = M;
        }
        c.instructions.push_back(std::move(ins));
    }
    c.validate();
    return c;
}

}  // namespace ame
