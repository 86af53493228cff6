#include "ame/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ame {

namespace {

// Schmidt coefficients of each balanced cut, largest first.
std::vector<std::vector<double>> balanced_cut_spectra(const StateVector& v) {
    if (v.wire_count() != 4) throw std::invalid_argument("expected four parties; group wires first");
    int d = v.radices[0];
    for (int r : v.radices)
        if (r != d) throw std::invalid_argument("parties must share one dimension; group wires first");
    std::vector<std::vector<double>> out;
    for (std::vector<int> cut : {std::vector<int>{0, 1}, {0, 2}, {0, 3}}) {
        SchmidtSpectrum s = schmidt_spectrum(v, Bipartition{std::move(cut)});
        std::vector<double> coeff = s.coefficients;
        std::sort(coeff.rbegin(), coeff.rend());
        out.push_back(std::move(coeff));
    }
    return out;
}

double noisy_sum_from_spectra(const std::vector<std::vector<double>>& spectra, double gamma,
                              double dim) {
    double total = 0.0;
    const double mix = gamma / dim;
    for (const auto& coeff : spectra)
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            if (coeff[i] <= 0.0) break;  // sorted, the rest contribute nothing
            for (std::size_t j = i + 1; j < coeff.size(); ++j) {
                double value = (1.0 - gamma) * coeff[i] * coeff[j] - mix;
                if (value > 0.0) total += value;
            }
        }
    return total;
}

}  // namespace

void NoiseParams::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("noise level must lie in [0, 1]");
}

double negativity(const ComplexMatrix& rho, const std::vector<int>& radices, const Bipartition& cut) {
    if (rho.hermiticity_residual() > kHermitianTol) throw std::invalid_argument("density matrix must be Hermitian");
    ComplexMatrix pt = partial_transpose(rho, radices, cut);
    double total = 0.0;
    for (double x : hermitian_eigenvalues(pt))
        if (x < 0.0) total -= x;
    return total;
}

double negativity_sum_noisy(const StateVector& v, double gamma) {
    NoiseParams{gamma}.validate();
    double dim = double(v.amps.size());
    return noisy_sum_from_spectra(balanced_cut_spectra(v), gamma, dim);
}

double robustness_crossing(const StateVector& v, double level) {
    auto spectra = balanced_cut_spectra(v);
    double dim = double(v.amps.size());
    auto excess = [&](double g) { return noisy_sum_from_spectra(spectra, g, dim) - level; };
    if (excess(0.0) <= 0.0) return 0.0;
    // Strictly positive at gamma = 1 means the level is never reached. An
    // excess of exactly zero there still bisects, so a level of 0 returns the
    // point where the sum first vanishes rather than the interval end.
    if (excess(1.0) > 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<SweepRecord> sweep(const std::vector<LabeledState>& states, const std::vector<double>& gammas) {
    for (double g : gammas) NoiseParams{g}.validate();

    std::vector<SweepRecord> rows;
    for (const LabeledState& state : states) {
        if (state.members.empty()) throw std::invalid_argument("labeled state without members");
        std::vector<std::vector<std::vector<double>>> spectra;
        for (const StateVector& m : state.members) {
            if (m.radices != state.members.front().radices)
                throw std::invalid_argument("ensemble members must share one shape");
            spectra.push_back(balanced_cut_spectra(m));
        }
        const double dim = double(state.members.front().amps.size());
        const int d_pair = state.members.front().radices[0] * state.members.front().radices[0];

        for (double g : gammas) {
            SweepRecord rec;
            rec.label = state.label;
            rec.gamma = g;
            std::vector<double> sums;
            for (const auto& sp : spectra) sums.push_back(noisy_sum_from_spectra(sp, g, dim));
            double mean = 0.0;
            for (double s : sums) mean += s;
            mean /= double(sums.size());
            rec.negativity_sum = mean;
            if (sums.size() > 1) {
                double var = 0.0;
                for (double s : sums) var += (s - mean) * (s - mean);
                rec.negativity_std = std::sqrt(var / double(sums.size() - 1));
            }
            rec.fidelity = (1.0 - g) + g / dim;
            rec.teleport_fidelity = teleportation_fidelity(d_pair, g);
            rows.push_back(std::move(rec));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.label != b.label) return a.label < b.label;
        return a.gamma < b.gamma;
    });
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRecord>& rows) {
    std::string out = "label,gamma,negativity_sum,fidelity,teleport_fidelity\n";
    char buf[160];
    for (const SweepRecord& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%.12g,%.12g\n", r.label.c_str(), r.gamma,
                      r.negativity_sum, r.fidelity, r.teleport_fidelity);
        out += buf;
    }
    return out;
}

double teleportation_fidelity(int d_pair, double gamma) {
    if (d_pair < 2) throw std::invalid_argument("teleported system needs dimension at least 2");
    NoiseParams{gamma}.validate();
    const double d = double(d_pair);
    return (2.0 / (d + 1.0)) * (1.0 - ((d - 1.0) / (2.0 * d)) * gamma) +
           ((d - 1.0) / (d + 1.0)) * (1.0 - gamma);
}

double teleportation_threshold(int d_pair) {
    if (d_pair < 2) throw std::invalid_argument("teleported system needs dimension at least 2");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (teleportation_fidelity(d_pair, mid) > 2.0 / 3.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double gate_noise_budget(double total_gamma, int gate_count) {
    if (!(total_gamma > 0.0)) throw std::invalid_argument("total noise must be positive");
    if (gate_count < 1) throw std::invalid_argument("need at least one gate");
    return total_gamma / double(gate_count);
}

}  // namespace ame
