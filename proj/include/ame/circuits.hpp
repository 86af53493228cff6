#pragma once

#include "ame/gates.hpp"
#include "ame/linalg.hpp"

#include <string>
#include <vector>

namespace ame {

struct Instruction {
    GateSpec gate;
    std::vector<int> wires;  // tensor order: first wire is the gate's most significant digit
};

struct Circuit {
    std::vector<int> radices;
    std::vector<Instruction> instructions;

    // Throws std::invalid_argument on out-of-range wires, duplicate targets,
    // or a gate whose dimension does not match its wire group.
    void validate() const;
};

// Applies the instruction list to |0...0> (or the supplied start state).
StateVector simulate(const Circuit& c);
StateVector simulate(const Circuit& c, const StateVector& initial);

// Four same-dimension subsystems: entangle (1,3) and (2,4) into maximally
// entangled pairs, then run the two-subsystem gate built from the phase
// vector on (1,2), expanded into primitive instructions.
Circuit build_ame_circuit(int d, const UnimodularVector& lambda, Ansatz ansatz);

struct BuiltCircuit {
    Circuit circuit;
    std::vector<std::vector<int>> parties;  // wire group per subsystem, for verification
};

// Ready-made constructions: ame44_qubit, ame46_mixed, ame48_qubit, ame44_f4,
// ame44_vectorized.
BuiltCircuit build_named(const std::string& name);

// Coarse-grains wires into one wire per group (radix = product of members).
// Groups must partition the register; member order fixes digit significance.
StateVector group_wires(const StateVector& v, const std::vector<std::vector<int>>& groups);

struct Graph {
    struct Edge {
        int a = 0, b = 0, w = 1;
    };
    int nodes = 0;
    std::vector<Edge> edges;

    // Requires a < b, no self-loops, weights in 1..d-1.
    void validate(int d) const;
};

// Fourier-basis start on every node, then w applications of the controlled
// phase per weighted edge.
StateVector graph_state(const Graph& g, int d);

// Multiplication-shift Latin square over GF(d) for d in {4, 8}:
// L[i][j] = (a * i) + j in field arithmetic, a nonzero.
std::vector<std::vector<int>> latin_square_gf(int d, int a);

// Permutation gate |i,j> -> |L1(i,j), L2(i,j)>. Both tables must be Latin
// squares; whether the result survives the rearrangement checks depends on
// their orthogonality and is not assumed here.
ComplexMatrix minimal_support_unitary(const std::vector<std::vector<int>>& L1,
                                      const std::vector<std::vector<int>>& L2);

// (1/sqrt(d)) sum_j |j...j> on n wires.
StateVector ghz(int n, int d);

// Normalized vector of seeded standard complex Gaussians.
StateVector haar_random(const std::vector<int>& radices, unsigned long long seed);

// Four-subsystem state carrying the entries of U: amplitude at (a,b,c,e) is
// U[(a b),(c e)] / d.
StateVector operator_state_vector(const ComplexMatrix& U, int d);

// Reference four-party state with every balanced reduction maximally mixed.
// Odd d uses an orthogonal Latin-square permutation, d in {4,6,8} the stored
// phase-vector gates. d = 2 is rejected: no such four-party qubit state exists.
StateVector ideal_ame_state(int d);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

}  // namespace ame
