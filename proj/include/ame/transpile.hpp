#pragma once

#include "ame/circuits.hpp"

#include <string>
#include <vector>

namespace ame {

// Binary-counting embedding of d levels into n qubits, level j -> the n-bit
// pattern of j, remaining patterns listed as unused.
struct EmbeddingMap {
    int d = 0;
    int n_qubits = 0;
    std::vector<int> level_to_bits;
    std::vector<int> unused;
};

EmbeddingMap embed(int d, int n_qubits);

// Smallest qubit count holding d levels.
int qubits_for(int d);

enum class QubitGate { H, S, Cnot, Cz, Cs, Ccz, Rz };

struct QubitInstruction {
    QubitGate gate = QubitGate::H;
    std::vector<int> qubits;
    double angle = 0.0;  // rotation gates only
};

struct QubitCircuit {
    int qubit_count = 0;
    std::vector<QubitInstruction> instructions;
};

// Phase-polynomial synthesis: CNOT parity ladders with one Z-rotation per
// nonzero Walsh coefficient of the phase angles. Reproduces diag(phases) up
// to one global phase; at most 2^n - 1 rotations for 2^n entries.
QubitCircuit synthesize_diagonal(const std::vector<Cx>& phases);

// Spreads a mixed-radix diagonal over the embedded bitstrings, identity on
// every unused pattern.
std::vector<Cx> embed_diagonal(const std::vector<Cx>& phases, const std::vector<EmbeddingMap>& factors);

// Wire-by-wire embedding of a mixed-radix circuit into qubits. Native qubit
// gates pass through, diagonal gates go through Walsh synthesis, everything
// else is decomposed into two-level rotations confined to the embedded
// levels. The result matches the source unitary on the embedded subspace up
// to a global phase. Radices are capped at 8.
QubitCircuit transpile_circuit(const Circuit& c);

// View as a radix-2 Circuit for simulation or JSON export.
Circuit to_circuit(const QubitCircuit& qc);

// One instruction per line, angles as exact multiples k*pi/m (m <= 64) when
// they are one, decimal otherwise. Byte-stable for equal circuits.
std::string export_text(const QubitCircuit& qc);

QubitCircuit parse_text(const std::string& text);

}  // namespace ame
