#include "doctest.h"

#include "ame/biunimodular.hpp"
#include "ame/gates.hpp"
#include "ame/linalg.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace ame;

namespace {

// Rearrangement residual triple used throughout: plain, reshuffled, partially
// transposed.
struct Residuals {
    double u, r, g;
};

Residuals rearrangement_residuals(const ComplexMatrix& U, int d) {
    return {U.unitarity_residual(), reshuffle(U, d).unitarity_residual(),
            partial_transpose(U, {d, d}, Bipartition({0})).unitarity_residual()};
}

UnimodularVector all_ones(std::vector<int> radices) {
    UnimodularVector v{std::move(radices), {}};
    int d = v.joint_dim();
    v.phases.assign(std::size_t(d) * d, Cx(1, 0));
    return v;
}

}  // namespace

TEST_CASE("fourier transforms are unitary and reduce to H at d=2") {
    for (int d = 2; d <= 8; ++d) {
        ComplexMatrix F = fourier(d);
        CHECK(F.unitarity_residual() < kGateTol);
        // Top row is flat.
        for (int l = 0; l < d; ++l) CHECK(std::abs(F.at(0, l) - Cx(1.0 / std::sqrt(double(d)), 0)) < 1e-14);
    }
    ComplexMatrix H = fourier(2);
    CHECK(H.at(1, 1).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("cyclic shift acts as addition by one") {
    for (int d = 2; d <= 6; ++d) {
        ComplexMatrix X = shift_x(d);
        CHECK(X.unitarity_residual() < kGateTol);
        ComplexMatrix P = ComplexMatrix::identity(d);
        for (int k = 0; k < d; ++k) P = X * P;
        CHECK(P.distance(ComplexMatrix::identity(d)) < 1e-12);
    }
}

TEST_CASE("controlled phase and controlled shift relate through the Fourier transform") {
    for (int d = 2; d <= 6; ++d) {
        ComplexMatrix CZ = cz_d(d);
        ComplexMatrix CX = cx_d(d);
        CHECK(CZ.unitarity_residual() < kGateTol);
        CHECK(CX.unitarity_residual() < kGateTol);

        ComplexMatrix IF = kron(ComplexMatrix::identity(d), fourier(d));
        ComplexMatrix relation = IF.adjoint() * CZ * IF;
        CHECK(relation.distance(CX) < 1e-12);
    }
}

TEST_CASE("transpose of the controlled shift is its adjoint") {
    for (int d = 2; d <= 8; ++d) {
        ComplexMatrix CX = cx_d(d);
        CHECK(CX.transpose().distance(CX.adjoint()) < 1e-14);
    }
}

TEST_CASE("mixed-radix controlled phase") {
    // Single factor reduces to the plain controlled phase.
    for (int d : {2, 3, 4}) CHECK(cz_mixed({d}).distance(cz_d(d)) < 1e-13);

    // Entries stay on the unit circle.
    for (const auto& radices : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {2, 2, 2}}) {
        ComplexMatrix CZ = cz_mixed(radices);
        CHECK(CZ.unitarity_residual() < kGateTol);
        for (std::size_t i = 0; i < CZ.rows(); ++i) CHECK(std::abs(std::abs(CZ.at(i, i)) - 1.0) < 1e-14);
    }

    // On two qubit pairs the gate splits into plain controlled-Z gates between
    // matching qubits: entry at (k,l) is (-1)^(k.l bitwise).
    ComplexMatrix CZ22 = cz_mixed({2, 2});
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            int bits = (k & l & 1) + ((k >> 1) & (l >> 1) & 1);
            double expect = (bits % 2 == 0) ? 1.0 : -1.0;
            CHECK(CZ22.at(std::size_t(k) * 4 + l, std::size_t(k) * 4 + l).real() == doctest::Approx(expect));
        }
}

TEST_CASE("diagonal gates from phase vectors") {
    UnimodularVector lam = fixture("lambda_22");
    ComplexMatrix D = diag_from_lambda(lam);
    CHECK(D.unitarity_residual() < kGateTol);
    CHECK(D.at(2, 2) == lam.phases[2]);
}

TEST_CASE("controlled phase ladder multiplies back to the diagonal") {
    // Zero angles: every factor is the identity.
    auto trivial = controlled_phase_ladder(std::vector<double>(4, 0.0), 2);
    REQUIRE(trivial.size() == 2);
    for (const auto& C : trivial) CHECK(C.distance(ComplexMatrix::identity(4)) < 1e-15);

    // Generic angles at d=3: the ladder factors commute and compose to the
    // full diagonal.
    std::vector<double> angles(9);
    for (int i = 0; i < 9; ++i) angles[i] = 0.37 * i - 1.1;
    auto ladder = controlled_phase_ladder(angles, 3);
    REQUIRE(ladder.size() == 3);
    ComplexMatrix P = ComplexMatrix::identity(9);
    for (const auto& C : ladder) P = C * P;
    std::vector<Cx> diag(9);
    for (int i = 0; i < 9; ++i) diag[i] = Cx(std::cos(angles[i]), std::sin(angles[i]));
    CHECK(P.distance(ComplexMatrix::diagonal(diag)) < 1e-12);

    // The ladder reproduces the d=4 fixture diagonal from its phase angles.
    UnimodularVector lam = fixture("lambda_4");
    std::vector<double> fixture_angles(16);
    for (int i = 0; i < 16; ++i) fixture_angles[i] = std::arg(lam.phases[i]);
    auto factors = controlled_phase_ladder(fixture_angles, 4);
    ComplexMatrix Q = ComplexMatrix::identity(16);
    for (const auto& C : factors) Q = C * Q;
    CHECK(Q.distance(diag_from_lambda(lam)) < 1e-12);
}

TEST_CASE("gates assembled from the built-in phase vectors survive every rearrangement") {
    struct Case {
        const char* name;
        Ansatz ansatz;
    };
    for (const Case& c : {Case{"lambda_22", Ansatz::MixedRadix}, Case{"lambda_23", Ansatz::MixedRadix},
                          Case{"lambda_4", Ansatz::FourierCx}, Case{"lambda_4", Ansatz::FourierCz}}) {
        UnimodularVector lam = fixture(c.name);
        ComplexMatrix U = multiunitary_from_lambda(lam, c.ansatz);
        Residuals r = rearrangement_residuals(U, lam.joint_dim());
        CAPTURE(c.name);
        CHECK(r.u < kUnitaryTol);
        CHECK(r.r < kUnitaryTol);
        CHECK(r.g < kUnitaryTol);
    }
}

TEST_CASE("flat phase vector gives a unitary whose reshuffle is singular") {
    UnimodularVector ones = all_ones({2, 2});
    ComplexMatrix U = multiunitary_from_lambda(ones, Ansatz::MixedRadix);
    Residuals r = rearrangement_residuals(U, 4);
    CHECK(r.u < kUnitaryTol);
    CHECK((r.r >= kUnitaryTol || r.g >= kUnitaryTol));
}

TEST_CASE("gate specs materialize correctly") {
    auto spec = [](GateKind kind, int d = 2) {
        GateSpec g;
        g.kind = kind;
        g.d = d;
        return g;
    };

    // Every built-in kind is unitary well under gate tolerance.
    std::vector<GateSpec> specs = {spec(GateKind::Fourier, 5), spec(GateKind::Shift, 3),  spec(GateKind::CxD, 4),
                                   spec(GateKind::CzD, 6),     spec(GateKind::Hadamard),  spec(GateKind::PhaseS),
                                   spec(GateKind::Cnot),       spec(GateKind::Cz),        spec(GateKind::Ccz),
                                   spec(GateKind::Cs)};
    GateSpec mixed = spec(GateKind::CzMixed);
    mixed.radices = {2, 3};
    specs.push_back(mixed);
    GateSpec rotation = spec(GateKind::Rz);
    rotation.angle = 0.7;
    specs.push_back(rotation);
    for (const GateSpec& g : specs) {
        ComplexMatrix M = g.materialize();
        CHECK(M.rows() == g.dim());
        CHECK(M.unitarity_residual() < kGateTol);
    }

    // The dagger flag materializes the adjoint.
    GateSpec f = spec(GateKind::Fourier, 3);
    GateSpec fd = f;
    fd.dagger = true;
    CHECK((f.materialize() * fd.materialize()).distance(ComplexMatrix::identity(3)) < 1e-14);

    // Rz is diag(exp(-ia/2), exp(ia/2)).
    GateSpec rz = spec(GateKind::Rz);
    rz.angle = std::numbers::pi / 2;
    ComplexMatrix R = rz.materialize();
    CHECK(std::abs(R.at(0, 0) - std::polar(1.0, -std::numbers::pi / 4)) < 1e-15);
    CHECK(std::abs(R.at(1, 1) - std::polar(1.0, std::numbers::pi / 4)) < 1e-15);

    // Diagonal kind validates its entries.
    GateSpec diag = spec(GateKind::Diagonal);
    diag.phases = {Cx(1, 0), Cx(0.5, 0)};
    CHECK_THROWS_AS((void)diag.materialize(), std::invalid_argument);
}

TEST_CASE("gate kind names round-trip") {
    for (GateKind k : {GateKind::Fourier, GateKind::Shift, GateKind::CxD, GateKind::CzD, GateKind::CzMixed,
                       GateKind::Diagonal, GateKind::Hadamard, GateKind::PhaseS, GateKind::Cnot, GateKind::Cz,
                       GateKind::Ccz, GateKind::Cs, GateKind::Rz, GateKind::Custom}) {
        CHECK(gate_kind_from_name(gate_kind_name(k)) == k);
    }
    CHECK_THROWS_AS((void)gate_kind_from_name("nosuch"), std::invalid_argument);
}
