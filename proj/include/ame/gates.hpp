#pragma once

#include "ame/biunimodular.hpp"
#include "ame/linalg.hpp"

#include <string>
#include <vector>

namespace ame {

// Discrete Fourier transform: F[k,l] = omega^(k l) / sqrt(d), omega = exp(2 pi i / d).
ComplexMatrix fourier(int d);

// Cyclic shift: X|j> = |j+1 mod d>.
ComplexMatrix shift_x(int d);

// Two-qudit controlled phase: CZ|l,m> = omega^(l m)|l,m>.
ComplexMatrix cz_d(int d);

// Two-qudit controlled shift: CX = sum_j |j><j| x X^j.
ComplexMatrix cx_d(int d);

// Factor-wise Fourier transform of one mixed-radix subsystem,
// e.g. [2,3] -> F2 x F3.
ComplexMatrix fourier_mixed(const std::vector<int>& radices);

// Controlled-phase gate on a pair of mixed-radix subsystems: diagonal on
// dimension d^2 (d = prod radices) with entry at (k,l) equal to sqrt(d) times
// the (l,k) entry of the factor-wise Fourier transform. For a single radix
// this reduces to cz_d.
ComplexMatrix cz_mixed(const std::vector<int>& radices);

// diag(lambda) on the joint two-subsystem space.
ComplexMatrix diag_from_lambda(const UnimodularVector& lambda);

// Splits a two-qudit diagonal phase pattern (d^2 angles, row-major in the
// control level) into d commuting controlled-phase factors: factor l applies
// phases exp(i angles[l*d + m]) to the target exactly when the control is |l>.
// Their product is the full diagonal.
std::vector<ComplexMatrix> controlled_phase_ladder(const std::vector<double>& angles, int d);

// Two-qudit gate families built from a phase vector. FourierCx conjugates the
// diagonal with (F x I) and controlled-shift gates, FourierCz with (F x F) and
// controlled-phase gates, MixedRadix with factor-wise Fourier layers and
// cz_mixed on both sides (no adjoint in the sandwich). The result is always
// unitary; whether its rearrangements are unitary too depends on the vector
// and is checked separately.
enum class Ansatz { FourierCx, FourierCz, MixedRadix };

ComplexMatrix multiunitary_from_lambda(const UnimodularVector& lambda, Ansatz ansatz);

// Instruction-level gate description, materializable to a dense matrix.
enum class GateKind {
    Fourier,   // d-level Fourier transform (1 wire)
    Shift,     // d-level cyclic shift (1 wire)
    CxD,       // controlled shift on a qudit pair (2 wires)
    CzD,       // controlled phase on a qudit pair (2 wires)
    CzMixed,   // controlled phase on two mixed-radix groups (2k wires)
    Diagonal,  // explicit diagonal phases (any wire group)
    Hadamard,  // qubit H
    PhaseS,    // qubit diag(1, i)
    Cnot,      // qubit controlled-not
    Cz,        // qubit controlled-Z
    Ccz,       // qubit doubly controlled-Z
    Cs,        // qubit controlled-S
    Rz,        // qubit diag(exp(-i a/2), exp(i a/2))
    Custom,    // explicit matrix payload
};

struct GateSpec {
    GateKind kind = GateKind::Custom;
    int d = 2;                 // local dimension for the qudit families
    std::vector<int> radices;  // factor dims for CzMixed (one subsystem's worth)
    std::vector<Cx> phases;    // Diagonal entries
    double angle = 0.0;        // Rz angle in radians
    ComplexMatrix matrix;      // Custom payload
    bool dagger = false;       // materialize the adjoint instead

    std::size_t dim() const;
    ComplexMatrix materialize() const;
};

// Stable names used by the circuit JSON schema.
std::string gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

}  // namespace ame
