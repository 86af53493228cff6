#include "doctest.h"

#include "ame/linalg.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace ame;

namespace {

const Cx I1(0.0, 1.0);

ComplexMatrix fourier2() {
    ComplexMatrix F(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    F.at(0, 0) = s;
    F.at(0, 1) = s;
    F.at(1, 0) = s;
    F.at(1, 1) = -s;
    return F;
}

ComplexMatrix shift3() {
    ComplexMatrix X(3, 3);
    X.at(1, 0) = 1.0;
    X.at(2, 1) = 1.0;
    X.at(0, 2) = 1.0;
    return X;
}

StateVector bell_pair(int d) {
    StateVector v = StateVector::zero_state({d, d});
    const double a = 1.0 / std::sqrt(double(d));
    for (int j = 0; j < d; ++j) v.amps[std::size_t(j) * d + j] = a;
    return v;
}

}  // namespace

TEST_CASE("matrix basics and factories") {
    ComplexMatrix id = ComplexMatrix::identity(3);
    CHECK(id.trace() == Cx(3.0, 0.0));
    CHECK(id.unitarity_residual() == doctest::Approx(0.0));

    ComplexMatrix D = ComplexMatrix::diagonal({Cx(1, 0), Cx(0, 1)});
    CHECK(D.at(1, 1) == I1);
    CHECK(D.at(0, 1) == Cx(0, 0));
    CHECK(D.is_unitary());

    ComplexMatrix A(2, 2);
    A.at(0, 1) = Cx(2, -3);
    ComplexMatrix Ad = A.adjoint();
    CHECK(Ad.at(1, 0) == Cx(2, 3));
    CHECK(A.transpose().at(1, 0) == Cx(2, -3));
    CHECK(A.conjugate().at(0, 1) == Cx(2, 3));
}

TEST_CASE("matrix product and residuals") {
    ComplexMatrix F = fourier2();
    CHECK(F.is_unitary());
    CHECK(F.unitarity_residual() < 1e-15);

    ComplexMatrix FF = F * F;
    CHECK(FF.distance(ComplexMatrix::identity(2)) < 1e-15);

    ComplexMatrix H(2, 2);
    H.at(0, 0) = 1.0;
    H.at(0, 1) = Cx(0, 1);
    H.at(1, 0) = Cx(0, -1);
    H.at(1, 1) = -2.0;
    CHECK(H.hermiticity_residual() < 1e-15);
    H.at(0, 1) = Cx(0, 1.5);
    CHECK(H.hermiticity_residual() > 0.1);
}

TEST_CASE("kron matches hand-computed blocks") {
    ComplexMatrix id2 = ComplexMatrix::identity(2);
    CHECK(kron(id2, id2).distance(ComplexMatrix::identity(4)) == doctest::Approx(0.0));

    // CZ x CZ is diagonal with the pattern (1,1,1,-1) repeated blockwise.
    ComplexMatrix cz = ComplexMatrix::diagonal({1.0, 1.0, 1.0, -1.0});
    ComplexMatrix K = kron(cz, cz);
    std::vector<double> expect = {1, 1, 1, -1, 1, 1, 1, -1, 1, 1, 1, -1, -1, -1, -1, 1};
    for (int i = 0; i < 16; ++i) CHECK(K.at(i, i).real() == doctest::Approx(expect[i]));

    // Mixed product rule: (A x B)(A^dag x B^dag) = (A A^dag) x (B B^dag).
    ComplexMatrix A = fourier2();
    ComplexMatrix B = shift3();
    ComplexMatrix lhs = kron(A, B) * kron(A.adjoint(), B.adjoint());
    ComplexMatrix rhs = kron(A * A.adjoint(), B * B.adjoint());
    CHECK(lhs.distance(rhs) < 1e-14);
}

TEST_CASE("mixed-radix index arithmetic") {
    std::vector<int> radices = {2, 3, 2};
    auto strides = strides_of(radices);
    CHECK(strides == std::vector<std::size_t>{6, 2, 1});

    CHECK(flatten_digits({1, 2, 0}, strides) == 10);
    std::vector<int> digits;
    unflatten_index(10, radices, digits);
    CHECK(digits == std::vector<int>{1, 2, 0});
    unflatten_index(0, radices, digits);
    CHECK(digits == std::vector<int>{0, 0, 0});
}

TEST_CASE("state vector shape and norm") {
    StateVector v = StateVector::zero_state({2, 3});
    CHECK(v.dim() == 6);
    CHECK(v.wire_count() == 2);
    CHECK(v.amps[0] == Cx(1, 0));
    CHECK(v.norm() == doctest::Approx(1.0));

    v.amps[0] = Cx(3, 0);
    v.normalize();
    CHECK(v.norm() == doctest::Approx(1.0));
}

TEST_CASE("apply_factor on single wires") {
    // F2 on wire 0 of |00> gives (|00> + |10>)/sqrt(2).
    StateVector v = StateVector::zero_state({2, 2});
    StateVector w = apply_factor(fourier2(), v, {0});
    CHECK(w.amps[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(w.amps[2].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(w.amps[1]) < 1e-15);
    CHECK(std::abs(w.amps[3]) < 1e-15);

    // Cyclic shift on wire 1 of |0,2> lands in |0,0>.
    StateVector u = StateVector::zero_state({3, 3});
    u.amps[0] = 0.0;
    u.amps[2] = 1.0;
    StateVector x = apply_factor(shift3(), u, {1});
    CHECK(x.amps[0].real() == doctest::Approx(1.0));
}

TEST_CASE("apply_factor on wire pairs respects target order") {
    // CNOT with control wire 0, target wire 1.
    ComplexMatrix cnot(4, 4);
    cnot.at(0, 0) = 1;
    cnot.at(1, 1) = 1;
    cnot.at(2, 3) = 1;
    cnot.at(3, 2) = 1;

    StateVector v = StateVector::zero_state({2, 2});
    v.amps[0] = 0.0;
    v.amps[2] = 1.0;  // |10>
    StateVector w = apply_factor(cnot, v, {0, 1});
    CHECK(w.amps[3].real() == doctest::Approx(1.0));  // |11>

    // Reversing the target list swaps control and target roles.
    StateVector y = apply_factor(cnot, v, {1, 0});
    CHECK(y.amps[2].real() == doctest::Approx(1.0));  // unchanged |10>

    // Non-adjacent targets on a 3-wire register.
    StateVector z = StateVector::zero_state({2, 2, 2});
    z.amps[0] = 0.0;
    z.amps[4] = 1.0;  // |100>
    StateVector t = apply_factor(cnot, z, {0, 2});
    CHECK(t.amps[5].real() == doctest::Approx(1.0));  // |101>

    // Norm is preserved by any unitary factor.
    CHECK(t.norm() == doctest::Approx(1.0));
}

TEST_CASE("partial trace of pure states") {
    // Maximally entangled pair at d=3: either side reduces to I/3.
    StateVector phi = bell_pair(3);
    ComplexMatrix r0 = partial_trace(phi, Bipartition({0}));
    ComplexMatrix expect = ComplexMatrix::identity(3);
    expect.scale(Cx(1.0 / 3.0, 0));
    CHECK(r0.distance(expect) < 1e-14);

    // Product state reduces to a pure projector.
    StateVector prod = StateVector::zero_state({2, 2});
    ComplexMatrix r1 = partial_trace(prod, Bipartition({1}));
    CHECK(r1.at(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(r1.at(1, 1)) < 1e-15);

    // Density-matrix overload agrees with the state overload.
    ComplexMatrix rho(9, 9);
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) rho.at(a, b) = phi.amps[a] * std::conj(phi.amps[b]);
    ComplexMatrix r2 = partial_trace(rho, {3, 3}, Bipartition({0}));
    CHECK(r2.distance(r0) < 1e-14);
}

TEST_CASE("reshuffle") {
    // The identity on C^d x C^d reshuffles to d P_phi (rank one).
    int d = 2;
    ComplexMatrix id4 = ComplexMatrix::identity(4);
    ComplexMatrix R = reshuffle(id4, d);
    StateVector phi = bell_pair(d);
    ComplexMatrix target(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) target.at(a, b) = 2.0 * phi.amps[a] * std::conj(phi.amps[b]);
    CHECK(R.distance(target) < 1e-14);

    // Reshuffling twice is the identity map.
    ComplexMatrix M(9, 9);
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) M.at(a, b) = Cx(a * 0.3 - b, 0.1 * a * b);
    CHECK(reshuffle(reshuffle(M, 3), 3).distance(M) == doctest::Approx(0.0));
}

TEST_CASE("partial transpose") {
    // Bell projector at d=2: eigenvalues of the partial transpose are (1/2,1/2,1/2,-1/2).
    StateVector phi = bell_pair(2);
    ComplexMatrix rho(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho.at(a, b) = phi.amps[a] * std::conj(phi.amps[b]);
    ComplexMatrix pt = partial_transpose(rho, {2, 2}, Bipartition({0}));
    auto ev = hermitian_eigenvalues(pt);
    REQUIRE(ev.size() == 4);
    CHECK(ev[0] == doctest::Approx(0.5));
    CHECK(ev[1] == doctest::Approx(0.5));
    CHECK(ev[2] == doctest::Approx(0.5));
    CHECK(ev[3] == doctest::Approx(-0.5));

    // Applying the same partial transpose twice restores the matrix.
    ComplexMatrix M(6, 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) M.at(a, b) = Cx(0.2 * a + b, a - 0.7 * b);
    ComplexMatrix twice = partial_transpose(partial_transpose(M, {2, 3}, Bipartition({0})), {2, 3}, Bipartition({0}));
    CHECK(twice.distance(M) == doctest::Approx(0.0));
}

TEST_CASE("hermitian eigenvalues via Jacobi iteration") {
    // Diagonal input comes back sorted descending.
    ComplexMatrix D = ComplexMatrix::diagonal({3.0, 1.0, 2.0});
    auto ev = hermitian_eigenvalues(D);
    CHECK(ev[0] == doctest::Approx(3.0));
    CHECK(ev[1] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(1.0));

    // Dense Hermitian matrix: eigenvalue sum equals the trace.
    int n = 12;
    ComplexMatrix H(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            double re = std::cos(0.31 * a * b + 0.2 * a);
            double im = (a == b) ? 0.0 : 0.5 * std::sin(0.17 * (a - b));
            H.at(a, b) = Cx(re, (a < b) ? im : -im);
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) H.at(b, a) = std::conj(H.at(a, b));
    auto evh = hermitian_eigenvalues(H);
    double sum = 0;
    for (double x : evh) sum += x;
    CHECK(sum == doctest::Approx(H.trace().real()).epsilon(1e-10));

    // Full eigensystem reconstructs H = V diag(w) V^dag.
    HermitianEigensystem es = hermitian_eig(H);
    ComplexMatrix W = ComplexMatrix::diagonal(std::vector<Cx>(es.values.begin(), es.values.end()));
    ComplexMatrix rebuilt = es.vectors * W * es.vectors.adjoint();
    CHECK(rebuilt.distance(H) < 1e-9);
    CHECK(es.vectors.is_unitary());

    // Non-Hermitian input is rejected.
    ComplexMatrix bad(2, 2);
    bad.at(0, 1) = 1.0;
    CHECK_THROWS_AS((void)hermitian_eigenvalues(bad), std::invalid_argument);
}

TEST_CASE("schmidt spectrum and entropy") {
    StateVector phi = bell_pair(3);
    SchmidtSpectrum s = schmidt_spectrum(phi, Bipartition({0}));
    REQUIRE(s.coefficients.size() == 3);
    for (double c : s.coefficients) CHECK(c == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(von_neumann_entropy(s, 3) == doctest::Approx(1.0));

    // Product state: single Schmidt coefficient, zero entropy.
    StateVector prod = StateVector::zero_state({2, 2});
    SchmidtSpectrum sp = schmidt_spectrum(prod, Bipartition({0}));
    CHECK(sp.coefficients[0] == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(sp, 2) == doctest::Approx(0.0));

    // Unbalanced cut of a 3-wire register diagonalizes the small side.
    StateVector ghz = StateVector::zero_state({2, 2, 2});
    ghz.amps[0] = 1.0 / std::sqrt(2.0);
    ghz.amps[7] = 1.0 / std::sqrt(2.0);
    SchmidtSpectrum sg = schmidt_spectrum(ghz, Bipartition({1}));
    REQUIRE(sg.coefficients.size() == 2);
    CHECK(von_neumann_entropy(sg, 2) == doctest::Approx(1.0));
}

TEST_CASE("fidelity with a pure state") {
    StateVector phi = bell_pair(2);
    ComplexMatrix rho(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho.at(a, b) = phi.amps[a] * std::conj(phi.amps[b]);
    CHECK(fidelity_with_pure(rho, phi) == doctest::Approx(1.0));

    // Maximally mixed state against any pure state gives 1/dim.
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed.scale(Cx(0.25, 0));
    CHECK(fidelity_with_pure(mixed, phi) == doctest::Approx(0.25));
}
