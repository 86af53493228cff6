#include "ame/verify.hpp"

#include "ame/circuits.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ame {

namespace {

int equal_local_dim(const StateVector& v) {
    if (v.wire_count() < 2) throw std::invalid_argument("need at least two wires");
    int d = v.radices[0];
    for (int r : v.radices)
        if (r != d) throw std::invalid_argument("wires have unequal dimensions; group them into parties first");
    return d;
}

// Lexicographic k-subsets of {0..n-1}.
std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> pick(std::size_t(k), 0);
    for (int i = 0; i < k; ++i) pick[std::size_t(i)] = i;
    while (true) {
        out.push_back(pick);
        int i = k - 1;
        while (i >= 0 && pick[std::size_t(i)] == n - k + i) --i;
        if (i < 0) break;
        ++pick[std::size_t(i)];
        for (int j = i + 1; j < k; ++j) pick[std::size_t(j)] = pick[std::size_t(j - 1)] + 1;
    }
    return out;
}

double mixedness_distance(const ComplexMatrix& rho) {
    ComplexMatrix flat = ComplexMatrix::identity(rho.rows());
    flat.scale(Cx(1.0 / double(rho.rows()), 0));
    return rho.distance(flat);
}

double entropy_of_reduction(const ComplexMatrix& rho, int base) {
    std::vector<double> p = hermitian_eigenvalues(rho);
    double acc = 0.0;
    for (double x : p)
        if (x > 1e-15) acc -= x * std::log(x);
    return acc / std::log(double(base));
}

// Nonzero entries of each row, so permutation-like factors multiply in
// quadratic rather than cubic time.
struct SparseRows {
    int n = 0;
    std::vector<std::vector<std::pair<int, Cx>>> rows;
};

SparseRows sparse_rows(const ComplexMatrix& A) {
    SparseRows s;
    s.n = int(A.rows());
    s.rows.resize(A.rows());
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < A.cols(); ++c)
            if (std::norm(A.at(r, c)) > 0.0) s.rows[r].emplace_back(int(c), A.at(r, c));
    return s;
}

// C = A * V.
void left_multiply(const SparseRows& A, const ComplexMatrix& V, ComplexMatrix& C) {
    const std::size_t n = V.cols();
    for (int i = 0; i < A.n; ++i) {
        Cx* out = C.row(std::size_t(i));
        std::fill(out, out + n, Cx(0, 0));
        for (const auto& [k, w] : A.rows[std::size_t(i)]) {
            const Cx* src = V.row(std::size_t(k));
            for (std::size_t j = 0; j < n; ++j) out[j] += w * src[j];
        }
    }
}

// C = V * W^T, reading W row by row so both factors stream contiguously.
void right_multiply_t(const ComplexMatrix& V, const SparseRows& W, ComplexMatrix& C) {
    const std::size_t n = V.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const Cx* vi = V.row(i);
        Cx* out = C.row(i);
        for (int j = 0; j < W.n; ++j) {
            Cx acc(0, 0);
            for (const auto& [k, w] : W.rows[std::size_t(j)]) acc += vi[k] * w;
            out[std::size_t(j)] = acc;
        }
    }
}

// Swaps the low digit of the row group with the low digit of the column
// group: dst[(a e),(c b)] = src[(a b),(c e)]. Pairing the two low digits is
// the convention that reproduces the reference moment table.
void swap_low_digits(const ComplexMatrix& src, int d, ComplexMatrix& dst) {
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const Cx* in = src.row(std::size_t(a) * d + b);
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e)
                    dst.at(std::size_t(a) * d + e, std::size_t(c) * d + b) = in[c * d + e];
        }
}

void require_pair_shape(const ComplexMatrix& U, int d) {
    if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
    if (!U.square() || U.rows() != std::size_t(d) * std::size_t(d))
        throw std::invalid_argument("gate must act on a pair of d-level subsystems");
}

}  // namespace

bool is_k_uniform(const StateVector& v, int k, double tol) {
    equal_local_dim(v);
    int n = int(v.wire_count());
    if (k < 0 || k > n) throw std::invalid_argument("subset size out of range");
    if (k == 0) return true;
    for (const auto& cut : subsets_of_size(n, k)) {
        ComplexMatrix rho = partial_trace(v, Bipartition{cut});
        if (mixedness_distance(rho) >= tol) return false;
    }
    return true;
}

AmeReport is_ame(const StateVector& v, double tol) {
    int d = equal_local_dim(v);
    int n = int(v.wire_count());
    int k = n / 2;
    AmeReport report;
    report.tolerance = tol;
    report.ame = true;
    for (const auto& cut : subsets_of_size(n, k)) {
        ComplexMatrix rho = partial_trace(v, Bipartition{cut});
        double dist = mixedness_distance(rho);
        report.cuts.push_back(cut);
        report.distances.push_back(dist);
        report.entropies.push_back(entropy_of_reduction(rho, d));
        if (dist >= tol) report.ame = false;
    }
    return report;
}

std::string ame_report_to_json(const AmeReport& r) {
    nlohmann::json j;
    j["ame"] = r.ame;
    j["tolerance"] = r.tolerance;
    j["cuts"] = r.cuts;
    j["entropies"] = r.entropies;
    j["distances"] = r.distances;
    return j.dump(2);
}

TwoUnitaryCheck is_2unitary(const ComplexMatrix& U, int d, double tol) {
    require_pair_shape(U, d);
    TwoUnitaryCheck c;
    c.unitary_residual = U.unitarity_residual();
    c.reshuffle_residual = reshuffle(U, d).unitarity_residual();
    c.transpose_residual = partial_transpose(U, {d, d}, Bipartition{{0}}).unitarity_residual();
    c.ok = c.unitary_residual < tol && c.reshuffle_residual < tol && c.transpose_residual < tol;
    return c;
}

Cx lu_invariant_moment(const ComplexMatrix& U, int d, int k) {
    require_pair_shape(U, d);
    if (k != 2 && k != 4) throw std::invalid_argument("supported moments are k = 2 and k = 4");

    const std::size_t D = std::size_t(d) * std::size_t(d);
    SparseRows su = sparse_rows(U);
    SparseRows sud = sparse_rows(U.adjoint());

    ComplexMatrix V(D, D), A(D, D), B(D, D);
    Cx trace(0, 0);
    for (std::size_t r = 0; r < D; ++r) {
        for (std::size_t s = 0; s < D; ++s) {
            // Basis start: U E_rs U^T is the outer product of columns r and s.
            for (std::size_t x = 0; x < D; ++x) {
                Cx ur = U.at(x, r);
                Cx* row = A.row(x);
                if (std::norm(ur) == 0.0) {
                    std::fill(row, row + D, Cx(0, 0));
                    continue;
                }
                for (std::size_t y = 0; y < D; ++y) row[y] = ur * U.at(y, s);
            }
            swap_low_digits(A, d, B);
            left_multiply(sud, B, A);
            right_multiply_t(A, sud, B);
            swap_low_digits(B, d, V);

            for (int rep = 1; rep < k; ++rep) {
                left_multiply(su, V, A);
                right_multiply_t(A, su, B);
                swap_low_digits(B, d, A);
                left_multiply(sud, A, B);
                right_multiply_t(B, sud, A);
                swap_low_digits(A, d, V);
            }
            trace += V.at(r, s);
        }
    }
    return trace;
}

LuVerdict lu_distinguish(const ComplexMatrix& U1, const ComplexMatrix& U2, int d) {
    require_pair_shape(U1, d);
    require_pair_shape(U2, d);
    for (int k : {2, 4}) {
        Cx m1 = lu_invariant_moment(U1, d, k);
        Cx m2 = lu_invariant_moment(U2, d, k);
        if (std::abs(m1 - m2) > kMomentTol) return LuVerdict::Distinct;
    }
    return LuVerdict::Inconclusive;
}

double f_max_bounded_pattern(const StateVector& v, const std::vector<int>& pattern) {
    const std::size_t n = v.wire_count();
    if (n < 2) throw std::invalid_argument("need at least two parties");
    if (pattern.size() != n) throw std::invalid_argument("one rank cap per party required");
    for (int cap : pattern)
        if (cap < 1) throw std::invalid_argument("rank caps must be at least 1");

    // Partial sums of the squared Schmidt coefficients of each one-versus-rest
    // cut, largest first; prefix[p][c] is the best weight rank c can capture.
    std::vector<std::vector<double>> prefix(n);
    for (std::size_t p = 0; p < n; ++p) {
        SchmidtSpectrum s = schmidt_spectrum(v, Bipartition{{int(p)}});
        std::vector<double> sq;
        sq.reserve(s.coefficients.size());
        for (double c : s.coefficients) sq.push_back(c * c);
        std::sort(sq.rbegin(), sq.rend());
        prefix[p].push_back(0.0);
        double acc = 0.0;
        for (double x : sq) prefix[p].push_back(acc += x);
    }

    std::vector<int> caps = pattern;
    std::sort(caps.begin(), caps.end());
    double best = 0.0;
    do {
        double worst = 1.0;
        for (std::size_t p = 0; p < n; ++p) {
            std::size_t c = std::min(std::size_t(caps[p]), prefix[p].size() - 1);
            worst = std::min(worst, prefix[p][c]);
        }
        best = std::max(best, worst);
    } while (std::next_permutation(caps.begin(), caps.end()));
    return best;
}

double gme_fidelity_threshold(int d) {
    if (d < 3)
        throw std::invalid_argument(
            "threshold defined for local dimension 3 and up; no reference state exists below that");
    StateVector v = ideal_ame_state(d);
    return f_max_bounded_pattern(v, {d, d, d, d - 1});
}

FidelityReport certify_gme(const ComplexMatrix& rho, const StateVector& ideal, int d) {
    if (!rho.square() || rho.rows() != ideal.amps.size())
        throw std::invalid_argument("density matrix and reference state dimensions differ");
    FidelityReport rep;
    rep.f_exp = fidelity_with_pure(rho, ideal);
    rep.f_max = gme_fidelity_threshold(d);
    rep.certified = rep.f_exp > rep.f_max;
    return rep;
}

FidelityReport certify_gme(double f_exp, int d) {
    FidelityReport rep;
    rep.f_exp = f_exp;
    rep.f_max = gme_fidelity_threshold(d);
    rep.certified = rep.f_exp > rep.f_max;
    return rep;
}

std::string fidelity_report_to_json(const FidelityReport& r) {
    nlohmann::json j;
    j["f_exp"] = r.f_exp;
    j["f_max"] = r.f_max;
    j["certified"] = r.certified;
    return j.dump(2);
}

}  // namespace ame
