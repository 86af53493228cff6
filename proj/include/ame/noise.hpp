#pragma once

#include "ame/linalg.hpp"

#include <string>
#include <vector>

namespace ame {

struct NoiseParams {
    double gamma = 0.0;

    // Throws std::invalid_argument outside [0, 1].
    void validate() const;
};

struct SweepRecord {
    std::string label;
    double gamma = 0.0;
    double negativity_sum = 0.0;
    double fidelity = 0.0;
    double teleport_fidelity = 0.0;
    double negativity_std = 0.0;  // sample spread over an ensemble, 0 for single states
};

// A curve in the sweep: one state, or an ensemble averaged per grid point.
struct LabeledState {
    std::string label;
    std::vector<StateVector> members;
};

// Sum of |negative eigenvalues| of the partial transpose over the cut's
// complement. Dense eigendecomposition; the analytic route below is the fast
// path and this the cross-check.
double negativity(const ComplexMatrix& rho, const std::vector<int>& radices, const Bipartition& cut);

// Negativity of (1-gamma)|v><v| + gamma I/D summed over the three balanced
// bipartitions of four equal parties. Works from Schmidt spectra: the pure
// partial transpose has eigenvalues {l_i^2} and {+-l_i l_j}, uniform mixing
// shifts each to (1-gamma) mu + gamma/D, and only the paired negatives can
// stay below zero. No D x D matrix is ever formed.
double negativity_sum_noisy(const StateVector& v, double gamma);

// Noise level at which the decaying negativity sum of v reaches `level`,
// found by bisection on [0, 1]; 0 if already below at gamma = 0, 1 if still
// above at full mixing.
double robustness_crossing(const StateVector& v, double level);

// One record per (state, grid point), ordered by (label, gamma). Ensembles
// report the member mean and sample standard deviation of the negativity sum.
std::vector<SweepRecord> sweep(const std::vector<LabeledState>& states, const std::vector<double>& gammas);

// Header `label,gamma,negativity_sum,fidelity,teleport_fidelity`, values with
// 12 significant digits, rows in the order sweep produced them.
std::string sweep_to_csv(const std::vector<SweepRecord>& rows);

// Fidelity of one-qudit teleportation through a depolarized resource pair of
// local dimension d_pair (16 or 36 when two four-level or six-level parties
// are grouped into one port).
double teleportation_fidelity(int d_pair, double gamma);

// Noise level where teleportation drops to the classical bound 2/3; bisection
// to 1e-12. Closed form d/(3(d-1)), kept as the test oracle only.
double teleportation_threshold(int d_pair);

// Total budget split evenly across gates, noise assumed additive.
double gate_noise_budget(double total_gamma, int gate_count);

}  // namespace ame
