#pragma once

#include "ame/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ame {

// Entries of stored phase vectors must sit on the unit circle this tightly.
constexpr double kUnimodularTol = 1e-12;

// Phase vector over a product index group. `radices` lists the factor
// dimensions of one subsystem (e.g. [2,3] for a qubit-qutrit pair) and
// `phases` holds (prod radices)^2 unit-modulus entries, stored row-major:
// phases[i * d + j] pairs row index i with column index j, both running
// over the joint dimension d.
struct UnimodularVector {
    std::vector<int> radices;
    std::vector<Cx> phases;

    int joint_dim() const;
    // Throws std::invalid_argument on shape mismatch or off-circle entries.
    void validate() const;
};

struct BiunimodularCheck {
    bool ok = false;
    double residual = 0.0;  // max | |(F lambda)_k| - 1 |
};

// True when F maps the phase vector to another phase vector.
BiunimodularCheck is_biunimodular(const UnimodularVector& lambda, const ComplexMatrix& fourier,
                                  double tol = kUnitaryTol);

// Max modulus over nonzero shifts (s,t) of
//   sum_{i,j} lambda[i,j] conj(lambda[i+s, j+t]),
// with both indices shifted componentwise in the product group of the radices.
// Zero for every nonzero shift is what makes the derived two-qudit gate
// unitary after reshuffling.
double autocorrelation_residual(const UnimodularVector& lambda);

// Single-radix twisted correlation: max modulus over nonzero shifts (s,t) of
//   sum_{k,l} omega^(k t - l s) lambda[k,l] conj(lambda[k+s, l+t]),
// omega = exp(2 pi i / d). Zero everywhere is equivalent to the derived
// gate staying unitary under partial transposition.
double gamma_residual(const UnimodularVector& lambda);

struct SearchConfig {
    unsigned long long seed = 0;
    long long max_trials = 1000000;    // sample budget (random) / restart budget (iterative)
    long long max_iterations = 20000;  // projection steps per restart
    double tolerance = 1e-8;           // convergence target for iterative search
    int group_order = 4;               // entries drawn from the group_order-th roots of unity
    bool filter_two_unitary = true;    // accept only vectors whose assembled gate passes all
                                       // three rearrangement checks
    std::vector<Cx> initial;           // optional warm start for iterative_search; empty = random

    void validate() const;
};

// Seeded uniform sampling of discrete phase vectors. Candidates are prescreened
// by their autocorrelation before the (much costlier) gate assembly and full
// rearrangement check. Returns the first acceptable vector, or nullopt once the
// trial budget is spent.
std::optional<UnimodularVector> random_discrete_search(const SearchConfig& cfg,
                                                       const std::vector<int>& radices);

// Alternating phase projection: lambda <- phase(F^dag phase(F lambda)), keeping
// the best iterate seen. Converged when the biunimodularity residual drops under
// cfg.tolerance; converged vectors are then filtered per cfg, restarting from a
// fresh random start on rejection.
std::optional<UnimodularVector> iterative_search(const SearchConfig& cfg,
                                                 const std::vector<int>& radices);

// Named built-in vectors: lambda_22, lambda_23, lambda_222, lambda_4.
// Each is checked at load time by assembling its gate and requiring all three
// rearrangement residuals to vanish; a corrupted table reports which
// rearrangement broke instead of returning silently.
UnimodularVector fixture(const std::string& name);

// The Fourier operator under which the fixtures (and search candidates) are
// biunimodular: two copies of the factor-wise Fourier transform.
ComplexMatrix biunimodular_fourier(const std::vector<int>& radices);

std::string lambda_to_json(const UnimodularVector& lambda);
UnimodularVector lambda_from_json(const std::string& text);

}  // namespace ame
