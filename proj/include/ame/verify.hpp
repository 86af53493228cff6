#pragma once

#include "ame/linalg.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ame {

// Frobenius tolerance for "this reduction is maximally mixed".
inline constexpr double kUniformTol = 1e-9;

// Moments closer than this are treated as equal when telling gates apart.
inline constexpr double kMomentTol = 1e-6;

struct AmeReport {
    bool ame = false;
    double tolerance = kUniformTol;
    std::vector<std::vector<int>> cuts;  // every wire subset of size floor(n/2)
    std::vector<double> entropies;       // entanglement entropy per cut, base d
    std::vector<double> distances;       // Frobenius distance of the reduction from I/d^k
};

// True iff every k-wire reduction equals I/d^k within tol. Requires equal
// local dimensions; group mixed-radix wires into parties first.
bool is_k_uniform(const StateVector& v, int k, double tol = kUniformTol);

// Checks floor(n/2)-uniformity cut by cut and keeps the per-cut numbers.
AmeReport is_ame(const StateVector& v, double tol = kUniformTol);

std::string ame_report_to_json(const AmeReport& r);

struct TwoUnitaryCheck {
    bool ok = false;
    double unitary_residual = 0.0;
    double reshuffle_residual = 0.0;
    double transpose_residual = 0.0;
};

// A two-subsystem gate stays unitary under reshuffling and partial
// transposition iff its pair state has every balanced reduction maximally
// mixed; the three residuals say which rearrangement fails.
TwoUnitaryCheck is_2unitary(const ComplexMatrix& U, int d, double tol = kUnitaryTol);

// Trace of the k-th power of the local-unitary invariant operator built from
// U, evaluated without storing the d^4-dimensional operator. k is 2 or 4.
// The result is real up to roundoff for the gates handled here; the imaginary
// part is returned for inspection.
Cx lu_invariant_moment(const ComplexMatrix& U, int d, int k);

enum class LuVerdict { Distinct, Inconclusive };

// Distinct when some computed moment separates the two gates. Matching
// moments prove nothing, so the weak verdict is inconclusive, never "equal".
LuVerdict lu_distinguish(const ComplexMatrix& U1, const ComplexMatrix& U2, int d);

// Largest fidelity reachable by states with the given per-party Schmidt rank
// caps: for each assignment of caps to parties, sum the largest cap squared
// Schmidt coefficients of each party's one-versus-rest cut, take the worst
// party, then the best assignment.
double f_max_bounded_pattern(const StateVector& v, const std::vector<int>& pattern);

// Fidelity above which a four-party state of local dimension d certifies
// genuine multipartite entanglement: (d-1)/d, evaluated through
// f_max_bounded_pattern on the reference state with pattern (d,d,d,d-1).
// d = 2 is rejected along with the missing reference state.
double gme_fidelity_threshold(int d);

struct FidelityReport {
    double f_exp = 0.0;
    double f_max = 0.0;
    bool certified = false;
};

FidelityReport certify_gme(const ComplexMatrix& rho, const StateVector& ideal, int d);
FidelityReport certify_gme(double f_exp, int d);

std::string fidelity_report_to_json(const FidelityReport& r);

}  // namespace ame
