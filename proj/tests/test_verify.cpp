#include "doctest.h"

#include "ame/biunimodular.hpp"
#include "ame/circuits.hpp"
#include "ame/gates.hpp"
#include "ame/linalg.hpp"
#include "ame/verify.hpp"

#include "json.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace ame;

namespace {

ComplexMatrix swap_gate(int d) {
    ComplexMatrix S(std::size_t(d) * d, std::size_t(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S.at(std::size_t(i) * d + j, std::size_t(j) * d + i) = 1.0;
    return S;
}

// Local unitary of the form diag * fourier * diag * shift^a, enough variety
// to probe invariance without a full Haar sampler.
ComplexMatrix random_local_unitary(int d, std::mt19937_64& rng) {
    auto random_diag = [&] {
        std::vector<Cx> ph;
        for (int i = 0; i < d; ++i) {
            double t = 2.0 * 3.14159265358979323846 * (double(rng() >> 11) * 0x1.0p-53);
            ph.emplace_back(std::cos(t), std::sin(t));
        }
        return ComplexMatrix::diagonal(ph);
    };
    ComplexMatrix u = random_diag() * fourier(d) * random_diag();
    int a = int(rng() % (unsigned long long)(d));
    ComplexMatrix s = ComplexMatrix::identity(std::size_t(d));
    for (int i = 0; i < a; ++i) s = s * shift_x(d);
    return u * s;
}

ComplexMatrix density_of(const StateVector& v) {
    ComplexMatrix rho(v.amps.size(), v.amps.size());
    for (std::size_t i = 0; i < v.amps.size(); ++i)
        for (std::size_t j = 0; j < v.amps.size(); ++j) rho.at(i, j) = v.amps[i] * std::conj(v.amps[j]);
    return rho;
}

ComplexMatrix depolarize(const ComplexMatrix& rho, double gamma) {
    ComplexMatrix out = rho;
    double mix = gamma / double(rho.rows());
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j) {
            out.at(i, j) = (1.0 - gamma) * rho.at(i, j);
            if (i == j) out.at(i, j) += mix;
        }
    return out;
}

UnimodularVector random_lambda(int d, unsigned seed) {
    UnimodularVector lam;
    lam.radices = {d};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < d * d; ++i) {
        double t = 2.0 * 3.14159265358979323846 * (double(rng() >> 11) * 0x1.0p-53);
        lam.phases.emplace_back(std::cos(t), std::sin(t));
    }
    return lam;
}

}  // namespace

TEST_CASE("uniformity checks recognize the standard examples") {
    StateVector zero = StateVector::zero_state({2, 2, 2, 2});
    CHECK(is_k_uniform(zero, 0));
    CHECK_FALSE(is_k_uniform(zero, 1));
    CHECK_FALSE(is_ame(zero).ame);

    StateVector g = ghz(4, 6);
    CHECK(is_k_uniform(g, 1));
    CHECK_FALSE(is_k_uniform(g, 2));
    CHECK_FALSE(is_ame(g).ame);

    StateVector bell = ghz(2, 2);
    CHECK(is_ame(bell).ame);

    AmeReport r = is_ame(ideal_ame_state(3));
    CHECK(r.ame);
    CHECK(r.cuts.size() == 6);
    CHECK(r.tolerance == doctest::Approx(1e-9));
    for (double e : r.entropies) CHECK(e == doctest::Approx(2.0).epsilon(1e-9));
    for (double dist : r.distances) CHECK(dist < 1e-9);

    StateVector mixed = StateVector::zero_state({2, 3});
    CHECK_THROWS_AS(is_k_uniform(mixed, 1), std::invalid_argument);
    CHECK_THROWS_AS(is_ame(mixed), std::invalid_argument);
    CHECK_THROWS_AS(is_k_uniform(zero, 5), std::invalid_argument);
    CHECK_THROWS_AS(is_k_uniform(zero, -1), std::invalid_argument);
}

TEST_CASE("ame reports serialize to json") {
    AmeReport r = is_ame(ghz(4, 2));
    nlohmann::json j = nlohmann::json::parse(ame_report_to_json(r));
    CHECK(j.at("ame").get<bool>() == false);
    CHECK(j.at("cuts").size() == 6);
    CHECK(j.at("entropies").size() == 6);
    CHECK(j.at("distances").size() == 6);
    CHECK(j.at("tolerance").get<double>() == doctest::Approx(1e-9));
}

TEST_CASE("rearrangement residuals separate gates that only look unitary") {
    ComplexMatrix good = multiunitary_from_lambda(fixture("lambda_23"), Ansatz::MixedRadix);
    TwoUnitaryCheck c = is_2unitary(good, 6);
    CHECK(c.ok);
    CHECK(c.unitary_residual < 1e-9);
    CHECK(c.reshuffle_residual < 1e-9);
    CHECK(c.transpose_residual < 1e-9);

    TwoUnitaryCheck s = is_2unitary(swap_gate(2), 2);
    CHECK_FALSE(s.ok);
    CHECK(s.unitary_residual < 1e-12);
    CHECK(std::max(s.reshuffle_residual, s.transpose_residual) > 0.5);

    TwoUnitaryCheck i = is_2unitary(ComplexMatrix::identity(4), 2);
    CHECK_FALSE(i.ok);
    CHECK(i.unitary_residual < 1e-12);
    CHECK(i.reshuffle_residual > 0.5);

    CHECK_THROWS_AS(is_2unitary(ComplexMatrix::identity(4), 3), std::invalid_argument);
}

TEST_CASE("invariant moments reproduce the reference values") {
    Cx calib = lu_invariant_moment(ComplexMatrix::identity(16), 4, 2);
    CHECK(calib.real() == doctest::Approx(256.0).epsilon(1e-9));
    CHECK(std::abs(calib.imag()) < 1e-6);

    ComplexMatrix u22 = multiunitary_from_lambda(fixture("lambda_22"), Ansatz::MixedRadix);
    Cx m22 = lu_invariant_moment(u22, 4, 2);
    CHECK(m22.real() == doctest::Approx(64.0).epsilon(1e-6));
    CHECK(std::abs(m22.imag()) < 1e-6);

    ComplexMatrix gf4 = minimal_support_unitary(latin_square_gf(4, 1), latin_square_gf(4, 2));
    Cx mgf = lu_invariant_moment(gf4, 4, 2);
    CHECK(mgf.real() == doctest::Approx(256.0).epsilon(1e-6));
    CHECK(std::abs(mgf.imag()) < 1e-6);

    ComplexMatrix u23 = multiunitary_from_lambda(fixture("lambda_23"), Ansatz::MixedRadix);
    Cx m23 = lu_invariant_moment(u23, 6, 2);
    CHECK(m23.real() == doctest::Approx(171.0).epsilon(1e-6));
    CHECK(std::abs(m23.imag()) < 1e-6);

    CHECK_THROWS_AS(lu_invariant_moment(u22, 4, 3), std::invalid_argument);
    CHECK_THROWS_AS(lu_invariant_moment(u22, 3, 2), std::invalid_argument);
}

TEST_CASE("moments are unchanged under local unitary dressing") {
    std::mt19937_64 rng(5);
    for (int d : {3, 4}) {
        UnimodularVector lam = random_lambda(d, unsigned(90 + d));
        ComplexMatrix U = multiunitary_from_lambda(lam, Ansatz::FourierCx);
        Cx base = lu_invariant_moment(U, d, 2);
        int draws = (d == 3) ? 25 : 10;
        for (int t = 0; t < draws; ++t) {
            ComplexMatrix dressed = kron(random_local_unitary(d, rng), random_local_unitary(d, rng)) * U *
                                    kron(random_local_unitary(d, rng), random_local_unitary(d, rng));
            Cx m = lu_invariant_moment(dressed, d, 2);
            CHECK(std::abs(m - base) < 1e-8);
        }
    }
}

TEST_CASE("gates with different moments are declared distinct") {
    ComplexMatrix u22 = multiunitary_from_lambda(fixture("lambda_22"), Ansatz::MixedRadix);
    ComplexMatrix gf4 = minimal_support_unitary(latin_square_gf(4, 1), latin_square_gf(4, 2));
    CHECK(lu_distinguish(u22, gf4, 4) == LuVerdict::Distinct);
    CHECK(lu_distinguish(u22, u22, 4) == LuVerdict::Inconclusive);

    std::mt19937_64 rng(17);
    ComplexMatrix U = multiunitary_from_lambda(random_lambda(3, 7), Ansatz::FourierCz);
    ComplexMatrix dressed = kron(random_local_unitary(3, rng), random_local_unitary(3, rng)) * U *
                            kron(random_local_unitary(3, rng), random_local_unitary(3, rng));
    CHECK(lu_distinguish(U, dressed, 3) == LuVerdict::Inconclusive);

    CHECK_THROWS_AS(lu_distinguish(u22, ComplexMatrix::identity(9), 4), std::invalid_argument);
}

TEST_CASE("pair states pass the ame check exactly when the gate passes rearrangements") {
    auto agree = [](const ComplexMatrix& U, int d) {
        bool gate_ok = is_2unitary(U, d).ok;
        bool state_ok = is_ame(operator_state_vector(U, d)).ame;
        CHECK(gate_ok == state_ok);
        return gate_ok;
    };

    CHECK(agree(multiunitary_from_lambda(fixture("lambda_22"), Ansatz::MixedRadix), 4));
    CHECK(agree(minimal_support_unitary(latin_square_gf(4, 1), latin_square_gf(4, 2)), 4));
    CHECK_FALSE(agree(ComplexMatrix::identity(4), 2));
    CHECK_FALSE(agree(swap_gate(3), 3));
    CHECK_FALSE(agree(multiunitary_from_lambda(random_lambda(2, 3), Ansatz::FourierCx), 2));
    CHECK_FALSE(agree(multiunitary_from_lambda(random_lambda(3, 4), Ansatz::FourierCx), 3));
    CHECK_FALSE(agree(multiunitary_from_lambda(random_lambda(4, 5), Ansatz::FourierCz), 4));

    StateVector three = ideal_ame_state(3);
    ComplexMatrix U3(9, 9);
    for (std::size_t row = 0; row < 9; ++row)
        for (std::size_t col = 0; col < 9; ++col) U3.at(row, col) = three.amps[row * 9 + col] * 3.0;
    CHECK(agree(U3, 3));
}

TEST_CASE("bounded-rank fidelity caps behave per the bound") {
    StateVector v4 = ideal_ame_state(4);
    CHECK(f_max_bounded_pattern(v4, {4, 4, 4, 4}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f_max_bounded_pattern(v4, {4, 4, 4, 3}) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(f_max_bounded_pattern(v4, {3, 4, 4, 4}) == doctest::Approx(0.75).epsilon(1e-9));

    // Monotone in every cap.
    StateVector w = haar_random({3, 3, 3, 3}, 21);
    double prev = 0.0;
    for (int cap = 1; cap <= 3; ++cap) {
        double f = f_max_bounded_pattern(w, {3, 3, cap, 3});
        CHECK(f >= prev - 1e-12);
        prev = f;
    }
    CHECK(f_max_bounded_pattern(w, {3, 3, 3, 3}) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(f_max_bounded_pattern(v4, {4, 4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(f_max_bounded_pattern(v4, {4, 4, 4, 0}), std::invalid_argument);
}

TEST_CASE("certification thresholds come out of the machinery") {
    CHECK(gme_fidelity_threshold(3) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(gme_fidelity_threshold(4) == doctest::Approx(3.0 / 4.0).epsilon(1e-9));
    CHECK(gme_fidelity_threshold(5) == doctest::Approx(4.0 / 5.0).epsilon(1e-9));
    CHECK(gme_fidelity_threshold(6) == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
    CHECK(gme_fidelity_threshold(7) == doctest::Approx(6.0 / 7.0).epsilon(1e-9));
    CHECK(gme_fidelity_threshold(8) == doctest::Approx(7.0 / 8.0).epsilon(1e-9));
    CHECK_THROWS_AS(gme_fidelity_threshold(2), std::invalid_argument);
}

TEST_CASE("certification compares fidelity against the threshold strictly") {
    FidelityReport low = certify_gme(0.80, 6);
    CHECK_FALSE(low.certified);
    CHECK(low.f_max == doctest::Approx(5.0 / 6.0));
    FidelityReport high = certify_gme(0.90, 6);
    CHECK(high.certified);

    StateVector ideal = ideal_ame_state(4);
    ComplexMatrix pure = density_of(ideal);
    FidelityReport perfect = certify_gme(pure, ideal, 4);
    CHECK(perfect.certified);
    CHECK(perfect.f_exp == doctest::Approx(1.0).epsilon(1e-9));

    // Uniform noise of weight g drops the fidelity to (1-g) + g/D; the level
    // where that meets (d-1)/d is g = (1/d)/(1 - d^-4), certification being
    // strict above the line.
    double boundary = (1.0 / 4.0) / (1.0 - std::pow(4.0, -4.0));
    FidelityReport at = certify_gme(depolarize(pure, boundary), ideal, 4);
    CHECK(at.f_exp == doctest::Approx(0.75).epsilon(1e-9));
    FidelityReport above = certify_gme(depolarize(pure, boundary + 0.01), ideal, 4);
    CHECK_FALSE(above.certified);
    FidelityReport below = certify_gme(depolarize(pure, boundary - 0.01), ideal, 4);
    CHECK(below.certified);

    nlohmann::json j = nlohmann::json::parse(fidelity_report_to_json(above));
    CHECK(j.at("certified").get<bool>() == false);
    CHECK(j.at("f_max").get<double>() == doctest::Approx(0.75));
    CHECK(j.at("f_exp").get<double>() < 0.75);

    CHECK_THROWS_AS(certify_gme(ComplexMatrix::identity(9), ideal, 4), std::invalid_argument);
}
