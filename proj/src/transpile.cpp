#include "ame/transpile.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ame {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleEps = 1e-14;   // rotations below this are dropped
constexpr double kGivensEps = 1e-13;  // matrix entries below this count as zero

int bit_width_of(int d) {
    int n = 0;
    while ((1 << n) < d) ++n;
    return n;
}

// 2x2 complex matrix with just the algebra the decompositions need.
struct Mat2 {
    Cx m00, m01, m10, m11;

    Mat2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
};

const Mat2 kPauliX{Cx(0.0), Cx(1.0), Cx(1.0), Cx(0.0)};

// Principal square root of a unitary 2x2 matrix via its spectral form.
Mat2 unitary_sqrt(const Mat2& u) {
    auto half = [](Cx lambda) {
        return std::polar(std::sqrt(std::abs(lambda)), 0.5 * std::arg(lambda));
    };
    if (std::abs(u.m01) < kGivensEps && std::abs(u.m10) < kGivensEps) {
        return {half(u.m00), Cx(0.0), Cx(0.0), half(u.m11)};
    }
    const Cx tr = u.m00 + u.m11;
    const Cx det = u.m00 * u.m11 - u.m01 * u.m10;
    const Cx disc = std::sqrt(tr * tr - 4.0 * det);
    const Cx l1 = 0.5 * (tr + disc);
    const Cx l2 = 0.5 * (tr - disc);
    // Eigenvector of l1; the orthogonal complement is invariant because a
    // unitary matrix is normal.
    Cx v0 = u.m01;
    Cx v1 = l1 - u.m00;
    if (std::abs(v0) + std::abs(v1) < kGivensEps) {
        v0 = l1 - u.m11;
        v1 = u.m10;
    }
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    v0 /= n;
    v1 /= n;
    const Cx w0 = -std::conj(v1);
    const Cx w1 = std::conj(v0);
    const Cx s1 = half(l1);
    const Cx s2 = half(l2);
    return {s1 * v0 * std::conj(v0) + s2 * w0 * std::conj(w0),
            s1 * v0 * std::conj(v1) + s2 * w0 * std::conj(w1),
            s1 * v1 * std::conj(v0) + s2 * w1 * std::conj(w0),
            s1 * v1 * std::conj(v1) + s2 * w1 * std::conj(w1)};
}

// Angles (delta, alpha, theta, beta) with U = exp(i delta) Rz(alpha) Ry(theta) Rz(beta).
struct Zyz {
    double delta = 0.0, alpha = 0.0, theta = 0.0, beta = 0.0;
};

Zyz zyz_of(const Mat2& u) {
    Zyz z;
    const Cx det = u.m00 * u.m11 - u.m01 * u.m10;
    z.delta = 0.5 * std::arg(det);
    const Cx ph = std::polar(1.0, -z.delta);
    const Cx a00 = ph * u.m00;
    const Cx a10 = ph * u.m10;
    z.theta = 2.0 * std::atan2(std::abs(a10), std::abs(a00));
    if (std::abs(a10) < kGivensEps) {
        z.alpha = -2.0 * std::arg(a00);
        z.beta = 0.0;
    } else if (std::abs(a00) < kGivensEps) {
        z.alpha = std::arg(a10);
        z.beta = -z.alpha;
    } else {
        const double sum = -2.0 * std::arg(a00);
        const double dif = 2.0 * std::arg(a10);
        z.alpha = 0.5 * (sum + dif);
        z.beta = 0.5 * (sum - dif);
    }
    return z;
}

// Streams gates into a QubitCircuit through a local-to-global qubit map.
class Emitter {
public:
    Emitter(QubitCircuit& out, std::vector<int> map) : out_(out), map_(std::move(map)) {}

    void push(QubitGate g, std::vector<int> local, double angle = 0.0) {
        QubitInstruction ins;
        ins.gate = g;
        ins.qubits.reserve(local.size());
        for (int q : local) ins.qubits.push_back(map_.at(std::size_t(q)));
        ins.angle = angle;
        out_.instructions.push_back(std::move(ins));
    }

    void splice(const QubitCircuit& qc) {
        for (const auto& ins : qc.instructions) {
            std::vector<int> local(ins.qubits.begin(), ins.qubits.end());
            push(ins.gate, local, ins.angle);
        }
    }

    void h(int q) { push(QubitGate::H, {q}); }
    void cnot(int c, int t) { push(QubitGate::Cnot, {c, t}); }

    void rz(int q, double a) {
        if (std::abs(a) < kAngleEps) return;
        push(QubitGate::Rz, {q}, a);
    }

    // Rz(pi/2) H Rz(theta) H Rz(-pi/2) conjugates the Z rotation into a Y one.
    void ry(int q, double theta) {
        if (std::abs(theta) < kAngleEps) return;
        rz(q, -0.5 * kPi);
        h(q);
        rz(q, theta);
        h(q);
        rz(q, 0.5 * kPi);
    }

    // Pauli X as H Rz(pi) H, a global phase -i off the exact gate.
    void x(int q) {
        h(q);
        rz(q, kPi);
        h(q);
    }

    void single(const Mat2& u, int q) {
        const Zyz z = zyz_of(u);
        rz(q, z.beta);
        ry(q, z.theta);
        rz(q, z.alpha);
    }

    void controlled_x(const std::vector<int>& controls, int t);
    void controlled_single(const std::vector<int>& controls, int t, const Mat2& u);
    void two_level(std::size_t i, std::size_t j, const Mat2& v, int m);

private:
    QubitCircuit& out_;
    std::vector<int> map_;
};

void Emitter::controlled_x(const std::vector<int>& controls, int t) {
    switch (controls.size()) {
        case 0:
            x(t);
            return;
        case 1:
            cnot(controls[0], t);
            return;
        case 2:
            h(t);
            push(QubitGate::Ccz, {controls[0], controls[1], t});
            h(t);
            return;
        default:
            controlled_single(controls, t, kPauliX);
            return;
    }
}

void Emitter::controlled_single(const std::vector<int>& controls, int t, const Mat2& u) {
    if (controls.empty()) {
        single(u, t);
        return;
    }
    if (controls.size() == 1) {
        // A X B X C with A B C = I; the determinant phase rides on the control.
        const int c = controls[0];
        const Zyz z = zyz_of(u);
        rz(t, 0.5 * (z.beta - z.alpha));
        cnot(c, t);
        rz(t, -0.5 * (z.alpha + z.beta));
        ry(t, -0.5 * z.theta);
        cnot(c, t);
        ry(t, 0.5 * z.theta);
        rz(t, z.alpha);
        rz(c, z.delta);
        return;
    }
    const Mat2 v = unitary_sqrt(u);
    std::vector<int> rest(controls.begin(), controls.end() - 1);
    const int last = controls.back();
    controlled_single({last}, t, v);
    controlled_x(rest, last);
    controlled_single({last}, t, v.adjoint());
    controlled_x(rest, last);
    controlled_single(rest, t, v);
}

// Rotation between basis states i and j of an m-qubit register, i listed
// first in the 2x2 block. Gray-codes j next to i, applies the controlled
// rotation on the one differing bit, then unwinds the routing.
void Emitter::two_level(std::size_t i, std::size_t j, const Mat2& v, int m) {
    if (i == j) return;
    const auto qubit_of_bit = [m](int p) { return m - 1 - p; };

    std::vector<int> diff_bits;
    for (int p = 0; p < m; ++p) {
        if (((i ^ j) >> p) & 1U) diff_bits.push_back(p);
    }
    const int axis = diff_bits[0];

    // A routing step flips one bit of the pattern `from` under full control of
    // every other bit; 0-valued controls are X-conjugated.
    const auto route = [&](std::size_t from, int p) {
        std::vector<int> ctrls, zeros;
        for (int b = 0; b < m; ++b) {
            if (b == p) continue;
            ctrls.push_back(qubit_of_bit(b));
            if (((from >> b) & 1U) == 0) zeros.push_back(qubit_of_bit(b));
        }
        for (int q : zeros) x(q);
        controlled_x(ctrls, qubit_of_bit(p));
        for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) x(*it);
    };

    std::vector<std::pair<std::size_t, int>> steps;
    std::size_t cur = j;
    for (std::size_t k = 1; k < diff_bits.size(); ++k) {
        const int p = diff_bits[k];
        steps.emplace_back(cur, p);
        route(cur, p);
        cur ^= std::size_t(1) << p;
    }

    // cur now differs from i exactly at `axis`.
    std::vector<int> ctrls, zeros;
    for (int b = 0; b < m; ++b) {
        if (b == axis) continue;
        ctrls.push_back(qubit_of_bit(b));
        if (((i >> b) & 1U) == 0) zeros.push_back(qubit_of_bit(b));
    }
    const bool i_low = ((i >> axis) & 1U) == 0;
    const Mat2 w = i_low ? v : Mat2{v.m11, v.m10, v.m01, v.m00};
    for (int q : zeros) x(q);
    controlled_single(ctrls, qubit_of_bit(axis), w);
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) x(*it);

    for (auto it = steps.rbegin(); it != steps.rend(); ++it) route(it->first, it->second);
}

// Two-level reduction of a unitary confined to the embedded levels: returns
// the rotations G with G_k ... G_1 A = D and the final diagonal.
struct TwoLevelPlan {
    struct Rotation {
        std::size_t i = 0, j = 0;
        Mat2 w;
    };
    std::vector<Rotation> rotations;
    std::vector<Cx> diagonal;
};

TwoLevelPlan reduce_to_diagonal(ComplexMatrix a) {
    const std::size_t n = a.rows();
    TwoLevelPlan plan;
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = c + 1; r < n; ++r) {
            const Cx lo = a.at(r, c);
            if (std::abs(lo) <= kGivensEps) continue;
            const Cx hi = a.at(c, c);
            const double s = std::sqrt(std::norm(hi) + std::norm(lo));
            const Mat2 w{std::conj(hi) / s, std::conj(lo) / s, -lo / s, hi / s};
            for (std::size_t k = 0; k < n; ++k) {
                const Cx top = a.at(c, k);
                const Cx bot = a.at(r, k);
                a.at(c, k) = w.m00 * top + w.m01 * bot;
                a.at(r, k) = w.m10 * top + w.m11 * bot;
            }
            plan.rotations.push_back({c, r, w});
        }
    }
    plan.diagonal.resize(n);
    double off = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        plan.diagonal[r] = a.at(r, r);
        for (std::size_t k = 0; k < n; ++k) {
            if (k != r) off = std::max(off, std::abs(a.at(r, k)));
        }
    }
    if (off > 1e-9) throw std::runtime_error("two-level reduction left a non-diagonal remainder");
    return plan;
}

std::vector<EmbeddingMap> maps_for(const std::vector<int>& radices) {
    std::vector<EmbeddingMap> maps;
    maps.reserve(radices.size());
    for (int r : radices) maps.push_back(embed(r, qubits_for(r)));
    return maps;
}

// Joint level of a wire group -> concatenated bit pattern.
std::size_t embedded_bits(std::size_t level, const std::vector<int>& radices) {
    std::vector<int> digits(radices.size(), 0);
    unflatten_index(level, radices, digits);
    std::size_t bits = 0;
    for (std::size_t i = 0; i < radices.size(); ++i) {
        const int w = bit_width_of(radices[i]);
        bits = (bits << w) | std::size_t(digits[i]);
    }
    return bits;
}

ComplexMatrix embed_unitary(const ComplexMatrix& m, const std::vector<int>& radices) {
    int total = 0;
    for (int r : radices) total += bit_width_of(r);
    const std::size_t dim = std::size_t(1) << total;
    ComplexMatrix a = ComplexMatrix::identity(dim);
    const std::size_t levels = m.rows();
    std::vector<std::size_t> bits(levels);
    for (std::size_t l = 0; l < levels; ++l) bits[l] = embedded_bits(l, radices);
    for (std::size_t rr = 0; rr < levels; ++rr) {
        for (std::size_t cc = 0; cc < levels; ++cc) {
            a.at(bits[rr], bits[cc]) = m.at(rr, cc);
        }
    }
    return a;
}

std::vector<Cx> diagonal_entries(const ComplexMatrix& m) {
    std::vector<Cx> d(m.rows());
    for (std::size_t k = 0; k < m.rows(); ++k) d[k] = m.at(k, k);
    return d;
}

bool is_diagonal_kind(GateKind k) {
    return k == GateKind::Diagonal || k == GateKind::CzD || k == GateKind::CzMixed;
}

struct WireLayout {
    std::vector<int> width;
    std::vector<int> offset;
    int total = 0;
};

WireLayout layout_of(const std::vector<int>& radices) {
    WireLayout l;
    for (int r : radices) {
        l.width.push_back(bit_width_of(r));
        l.offset.push_back(l.total);
        l.total += l.width.back();
    }
    return l;
}

void transpile_instruction(const Instruction& ins, const Circuit& c, const WireLayout& layout,
                           QubitCircuit& out);

// CX on a qudit pair is the Fourier conjugate of CZ on the target wire, which
// turns the one non-diagonal two-qudit primitive into Walsh-friendly pieces.
void transpile_cx_rewrite(const Instruction& ins, const Circuit& c, const WireLayout& layout,
                          QubitCircuit& out) {
    GateSpec f;
    f.kind = GateKind::Fourier;
    f.d = ins.gate.d;
    GateSpec fd = f;
    fd.dagger = true;
    GateSpec cz;
    cz.kind = GateKind::CzD;
    cz.d = ins.gate.d;
    cz.dagger = ins.gate.dagger;
    transpile_instruction({f, {ins.wires[1]}}, c, layout, out);
    transpile_instruction({cz, ins.wires}, c, layout, out);
    transpile_instruction({fd, {ins.wires[1]}}, c, layout, out);
}

void transpile_instruction(const Instruction& ins, const Circuit& c, const WireLayout& layout,
                           QubitCircuit& out) {
    std::vector<int> radices;
    std::vector<int> qubits;
    bool all_qubit_wires = true;
    for (int w : ins.wires) {
        const int r = c.radices[std::size_t(w)];
        radices.push_back(r);
        all_qubit_wires = all_qubit_wires && r == 2;
        for (int b = 0; b < layout.width[std::size_t(w)]; ++b) {
            qubits.push_back(layout.offset[std::size_t(w)] + b);
        }
    }
    Emitter em(out, qubits);
    const GateSpec& g = ins.gate;

    if (all_qubit_wires) {
        switch (g.kind) {
            case GateKind::Hadamard:
            case GateKind::Fourier:  // F at d = 2 is H, self-adjoint
                em.push(QubitGate::H, {0});
                return;
            case GateKind::Shift:  // X up to phase
                em.x(0);
                return;
            case GateKind::PhaseS:
                if (g.dagger) {
                    em.rz(0, -0.5 * kPi);
                } else {
                    em.push(QubitGate::S, {0});
                }
                return;
            case GateKind::Rz:
                em.rz(0, g.dagger ? -g.angle : g.angle);
                return;
            case GateKind::Cnot:
            case GateKind::CxD:
                em.push(QubitGate::Cnot, {0, 1});
                return;
            case GateKind::Cz:
            case GateKind::CzD:
                em.push(QubitGate::Cz, {0, 1});
                return;
            case GateKind::Cs:
                if (!g.dagger) {
                    em.push(QubitGate::Cs, {0, 1});
                    return;
                }
                break;  // the adjoint is synthesized as a diagonal
            case GateKind::Ccz:
                em.push(QubitGate::Ccz, {0, 1, 2});
                return;
            default:
                break;
        }
    }

    if (g.kind == GateKind::CxD) {
        transpile_cx_rewrite(ins, c, layout, out);
        return;
    }

    if (is_diagonal_kind(g.kind) || (g.kind == GateKind::Cs && g.dagger)) {
        const auto phases = diagonal_entries(g.materialize());
        em.splice(synthesize_diagonal(embed_diagonal(phases, maps_for(radices))));
        return;
    }

    // Everything else goes through the generic two-level path on the embedded
    // subspace: A = G_1 ... G_k D, emitted diagonal-first.
    const int m = int(qubits.size());
    const TwoLevelPlan plan = reduce_to_diagonal(embed_unitary(g.materialize(), radices));
    em.splice(synthesize_diagonal(plan.diagonal));
    for (auto it = plan.rotations.rbegin(); it != plan.rotations.rend(); ++it) {
        em.two_level(it->i, it->j, it->w.adjoint(), m);
    }
}

const char* gate_text_name(QubitGate g) {
    switch (g) {
        case QubitGate::H: return "h";
        case QubitGate::S: return "s";
        case QubitGate::Cnot: return "cnot";
        case QubitGate::Cz: return "cz";
        case QubitGate::Cs: return "cs";
        case QubitGate::Ccz: return "ccz";
        case QubitGate::Rz: return "rz";
    }
    throw std::invalid_argument("unknown qubit gate");
}

std::size_t expected_arity(QubitGate g) {
    switch (g) {
        case QubitGate::H:
        case QubitGate::S:
        case QubitGate::Rz: return 1;
        case QubitGate::Cnot:
        case QubitGate::Cz:
        case QubitGate::Cs: return 2;
        case QubitGate::Ccz: return 3;
    }
    throw std::invalid_argument("unknown qubit gate");
}

// k*pi/m with the smallest m <= 64 that fits exactly, decimal otherwise.
std::string format_angle(double a) {
    if (std::abs(a) < 1e-12) return "0";
    for (int m = 1; m <= 64; ++m) {
        const double scaled = a * double(m) / kPi;
        const long long k = std::llround(scaled);
        if (k == 0) continue;
        if (std::abs(a - double(k) * kPi / double(m)) >= 1e-12) continue;
        std::string head;
        if (k == -1) {
            head = "-pi";
        } else if (k == 1) {
            head = "pi";
        } else {
            head = std::to_string(k) + "*pi";
        }
        if (m == 1) return head;
        return head + "/" + std::to_string(m);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", a);
    return buf;
}

double parse_angle(const std::string& s) {
    if (s == "0") return 0.0;
    const auto pip = s.find("pi");
    if (pip == std::string::npos) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad rz angle: " + s);
        return v;
    }
    double k = 1.0;
    const std::string head = s.substr(0, pip);
    if (head == "-") {
        k = -1.0;
    } else if (!head.empty()) {
        if (head.back() != '*') throw std::invalid_argument("bad rz angle: " + s);
        k = std::stod(head.substr(0, head.size() - 1));
    }
    double m = 1.0;
    std::string tail = s.substr(pip + 2);
    if (!tail.empty()) {
        if (tail.front() != '/') throw std::invalid_argument("bad rz angle: " + s);
        m = std::stod(tail.substr(1));
        if (m <= 0) throw std::invalid_argument("bad rz angle: " + s);
    }
    return k * kPi / m;
}

}  // namespace

int qubits_for(int d) {
    if (d < 1) throw std::invalid_argument("qubits_for needs a positive dimension");
    return bit_width_of(d);
}

EmbeddingMap embed(int d, int n_qubits) {
    if (d < 1) throw std::invalid_argument("embed needs a positive dimension");
    if (n_qubits < qubits_for(d)) throw std::invalid_argument("embed: too few qubits for the level count");
    EmbeddingMap e;
    e.d = d;
    e.n_qubits = n_qubits;
    const int total = 1 << n_qubits;
    for (int j = 0; j < d; ++j) e.level_to_bits.push_back(j);
    for (int j = d; j < total; ++j) e.unused.push_back(j);
    return e;
}

QubitCircuit synthesize_diagonal(const std::vector<Cx>& phases) {
    const std::size_t n = phases.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("synthesize_diagonal needs a power-of-two entry count");
    }
    for (const Cx& p : phases) {
        if (std::abs(std::abs(p) - 1.0) > kUnitaryTol) {
            throw std::invalid_argument("synthesize_diagonal needs unimodular entries");
        }
    }
    int nq = 0;
    while ((std::size_t(1) << nq) < n) ++nq;

    QubitCircuit qc;
    qc.qubit_count = nq;
    if (nq == 0) return qc;

    std::vector<double> w(n);
    for (std::size_t x = 0; x < n; ++x) w[x] = std::arg(phases[x]);
    // In-place Walsh-Hadamard: w[S] = sum_x theta(x) (-1)^<S,x>.
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t i = 0; i < n; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const double u = w[j], v = w[j + len];
                w[j] = u + v;
                w[j + len] = u - v;
            }
        }
    }

    Emitter em(qc, [nq] {
        std::vector<int> ident;
        for (int q = 0; q < nq; ++q) ident.push_back(q);
        return ident;
    }());
    for (std::size_t mask = 1; mask < n; ++mask) {
        const double angle = -2.0 * w[mask] / double(n);
        if (std::abs(angle) < kAngleEps) continue;
        std::vector<int> qs;
        for (int b = nq - 1; b >= 0; --b) {
            if ((mask >> b) & 1U) qs.push_back(nq - 1 - b);
        }
        const int target = qs.back();
        for (std::size_t k = 0; k + 1 < qs.size(); ++k) em.cnot(qs[k], target);
        em.rz(target, angle);
        for (std::size_t k = qs.size() - 1; k-- > 0;) em.cnot(qs[k], target);
    }
    return qc;
}

std::vector<Cx> embed_diagonal(const std::vector<Cx>& phases, const std::vector<EmbeddingMap>& factors) {
    std::size_t source_dim = 1;
    int total_bits = 0;
    for (const EmbeddingMap& f : factors) {
        source_dim *= std::size_t(f.d);
        total_bits += f.n_qubits;
    }
    if (phases.size() != source_dim) {
        throw std::invalid_argument("embed_diagonal: phase count does not match the factor dimensions");
    }
    std::vector<Cx> out(std::size_t(1) << total_bits, Cx(1.0));
    for (std::size_t t = 0; t < out.size(); ++t) {
        std::size_t src = 0;
        int shift = total_bits;
        bool used = true;
        for (const EmbeddingMap& f : factors) {
            shift -= f.n_qubits;
            const std::size_t chunk = (t >> shift) & ((std::size_t(1) << f.n_qubits) - 1);
            if (chunk >= std::size_t(f.d)) {
                used = false;
                break;
            }
            src = src * std::size_t(f.d) + chunk;
        }
        if (used) out[t] = phases[src];
    }
    return out;
}

QubitCircuit transpile_circuit(const Circuit& c) {
    c.validate();
    for (int r : c.radices) {
        if (r > 8) throw std::invalid_argument("transpile_circuit handles radices up to 8");
    }
    const WireLayout layout = layout_of(c.radices);
    QubitCircuit qc;
    qc.qubit_count = layout.total;
    for (const Instruction& ins : c.instructions) {
        transpile_instruction(ins, c, layout, qc);
    }
    return qc;
}

Circuit to_circuit(const QubitCircuit& qc) {
    Circuit c;
    c.radices.assign(std::size_t(qc.qubit_count), 2);
    for (const QubitInstruction& ins : qc.instructions) {
        GateSpec g;
        switch (ins.gate) {
            case QubitGate::H: g.kind = GateKind::Hadamard; break;
            case QubitGate::S: g.kind = GateKind::PhaseS; break;
            case QubitGate::Cnot: g.kind = GateKind::Cnot; break;
            case QubitGate::Cz: g.kind = GateKind::Cz; break;
            case QubitGate::Cs: g.kind = GateKind::Cs; break;
            case QubitGate::Ccz: g.kind = GateKind::Ccz; break;
            case QubitGate::Rz:
                g.kind = GateKind::Rz;
                g.angle = ins.angle;
                break;
        }
        c.instructions.push_back({g, ins.qubits});
    }
    return c;
}

std::string export_text(const QubitCircuit& qc) {
    std::string out;
    for (const QubitInstruction& ins : qc.instructions) {
        if (ins.qubits.size() != expected_arity(ins.gate)) {
            throw std::invalid_argument("export_text: wrong qubit count for a gate");
        }
        out += gate_text_name(ins.gate);
        if (ins.gate == QubitGate::Rz) {
            out += "(" + format_angle(ins.angle) + ")";
        }
        out += " ";
        for (std::size_t k = 0; k < ins.qubits.size(); ++k) {
            if (k) out += ",";
            out += "q[" + std::to_string(ins.qubits[k]) + "]";
        }
        out += ";\n";
    }
    return out;
}

QubitCircuit parse_text(const std::string& text) {
    QubitCircuit qc;
    int max_qubit = -1;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(' ');
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line.back() != ';') throw std::invalid_argument("parse_text: missing semicolon: " + line);
        line.pop_back();

        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos) throw std::invalid_argument("parse_text: missing qubit list: " + line);
        std::string head = line.substr(0, sp);
        std::string tail = line.substr(sp + 1);

        QubitInstruction ins;
        const std::size_t paren = head.find('(');
        if (paren != std::string::npos) {
            if (head.substr(0, paren) != "rz" || head.back() != ')') {
                throw std::invalid_argument("parse_text: bad gate head: " + head);
            }
            ins.gate = QubitGate::Rz;
            ins.angle = parse_angle(head.substr(paren + 1, head.size() - paren - 2));
        } else if (head == "h") {
            ins.gate = QubitGate::H;
        } else if (head == "s") {
            ins.gate = QubitGate::S;
        } else if (head == "cnot") {
            ins.gate = QubitGate::Cnot;
        } else if (head == "cz") {
            ins.gate = QubitGate::Cz;
        } else if (head == "cs") {
            ins.gate = QubitGate::Cs;
        } else if (head == "ccz") {
            ins.gate = QubitGate::Ccz;
        } else {
            throw std::invalid_argument("parse_text: unknown gate: " + head);
        }

        std::size_t pos = 0;
        while (pos < tail.size()) {
            if (tail.compare(pos, 2, "q[") != 0) throw std::invalid_argument("parse_text: bad qubit ref: " + tail);
            const std::size_t close = tail.find(']', pos);
            if (close == std::string::npos) throw std::invalid_argument("parse_text: bad qubit ref: " + tail);
            const int q = std::stoi(tail.substr(pos + 2, close - pos - 2));
            ins.qubits.push_back(q);
            max_qubit = std::max(max_qubit, q);
            pos = close + 1;
            if (pos < tail.size()) {
                if (tail[pos] != ',') throw std::invalid_argument("parse_text: bad qubit list: " + tail);
                ++pos;
            }
        }
        if (ins.qubits.size() != expected_arity(ins.gate)) {
            throw std::invalid_argument("parse_text: wrong qubit count for " + head);
        }
        qc.instructions.push_back(std::move(ins));
    }
    qc.qubit_count = max_qubit + 1;
    return qc;
}

}  // namespace ame
