#include "ame/biunimodular.hpp"

#include "ame/gates.hpp"
#include "ame/verify.hpp"

#include "json.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ame {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform double in [0,1) from the top 53 bits, keeping the stream
// identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

Cx phase_of(Cx z) {
    double m = std::abs(z);
    if (m < 1e-300) return Cx(1, 0);
    return z / m;
}

// Matrix-vector product for the Fourier conditioning steps.
std::vector<Cx> matvec(const ComplexMatrix& M, const std::vector<Cx>& x) {
    std::vector<Cx> y(M.rows(), Cx(0, 0));
    for (std::size_t r = 0; r < M.rows(); ++r) {
        const Cx* row = M.row(r);
        Cx acc(0, 0);
        for (std::size_t c = 0; c < M.cols(); ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

double unimodularity_residual(const std::vector<Cx>& x) {
    double worst = 0.0;
    for (const Cx& v : x) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
    return worst;
}

// Componentwise addition in the product group Z_{r_0} x ... x Z_{r_k}.
// Indices are flattened most-significant-factor first.
struct GroupIndex {
    std::vector<int> radices;
    std::vector<std::size_t> strides;
    int dim = 1;

    explicit GroupIndex(const std::vector<int>& r) : radices(r), strides(strides_of(r)) {
        for (int x : r) dim *= x;
    }

    int add(int a, int b) const {
        std::size_t out = 0;
        for (std::size_t f = 0; f < radices.size(); ++f) {
            int da = int(std::size_t(a) / strides[f]) % radices[f];
            int db = int(std::size_t(b) / strides[f]) % radices[f];
            out += std::size_t((da + db) % radices[f]) * strides[f];
        }
        return int(out);
    }
};

// Shared core of the correlation residuals. `twist(k, l, s, t)` supplies the
// extra phase factor; identity for the plain autocorrelation.
template <typename Twist>
double correlation_residual(const UnimodularVector& lambda, Twist&& twist) {
    const GroupIndex g(lambda.radices);
    const int d = g.dim;
    double worst = 0.0;
    for (int s = 0; s < d; ++s) {
        for (int t = 0; t < d; ++t) {
            if (s == 0 && t == 0) continue;
            Cx acc(0, 0);
            for (int k = 0; k < d; ++k) {
                int ks = g.add(k, s);
                for (int l = 0; l < d; ++l) {
                    int lt = g.add(l, t);
                    Cx term = lambda.phases[std::size_t(k) * d + l] *
                              std::conj(lambda.phases[std::size_t(ks) * d + lt]);
                    acc += twist(k, l, s, t) * term;
                }
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

// All three rearrangement residuals of the gate assembled from a candidate.
bool gate_is_two_unitary(const UnimodularVector& lambda, double tol, double* residuals = nullptr) {
    ComplexMatrix U = multiunitary_from_lambda(lambda, Ansatz::MixedRadix);
    TwoUnitaryCheck c = is_2unitary(U, lambda.joint_dim(), tol);
    if (residuals) {
        residuals[0] = c.unitary_residual;
        residuals[1] = c.reshuffle_residual;
        residuals[2] = c.transpose_residual;
    }
    return c.ok;
}

UnimodularVector make_vector(std::vector<int> radices, std::vector<Cx> phases) {
    UnimodularVector v{std::move(radices), std::move(phases)};
    v.validate();
    return v;
}

}  // namespace

int UnimodularVector::joint_dim() const {
    int p = 1;
    for (int r : radices) {
        if (r < 2) throw std::invalid_argument("radix must be at least 2");
        p *= r;
    }
    return p;
}

void UnimodularVector::validate() const {
    if (radices.empty()) throw std::invalid_argument("phase vector needs at least one radix");
    int d = joint_dim();
    if (phases.size() != std::size_t(d) * d)
        throw std::invalid_argument("phase vector length must be the squared joint dimension");
    for (const Cx& p : phases)
        if (std::abs(std::abs(p) - 1.0) > kUnimodularTol)
            throw std::invalid_argument("phase vector entries must have unit modulus");
}

BiunimodularCheck is_biunimodular(const UnimodularVector& lambda, const ComplexMatrix& fourier, double tol) {
    if (!fourier.square() || fourier.rows() != lambda.phases.size())
        throw std::invalid_argument("is_biunimodular: operator size must match the vector");
    // The input is judged too, not assumed: a vector that is not phase-valued
    // itself can never be biunimodular no matter what F does to it.
    std::vector<Cx> image = matvec(fourier, lambda.phases);
    BiunimodularCheck out;
    out.residual = std::max(unimodularity_residual(lambda.phases), unimodularity_residual(image));
    out.ok = out.residual < tol;
    return out;
}

double autocorrelation_residual(const UnimodularVector& lambda) {
    lambda.validate();
    return correlation_residual(lambda, [](int, int, int, int) { return Cx(1, 0); });
}

double gamma_residual(const UnimodularVector& lambda) {
    lambda.validate();
    if (lambda.radices.size() != 1)
        throw std::invalid_argument("gamma_residual is defined for a single radix");
    const int d = lambda.radices[0];
    return correlation_residual(lambda, [d](int k, int l, int s, int t) {
        int e = ((k * t - l * s) % d + d) % d;
        double phi = kTwoPi * double(e) / double(d);
        return Cx(std::cos(phi), std::sin(phi));
    });
}

void SearchConfig::validate() const {
    if (max_trials <= 0 || max_iterations <= 0) throw std::invalid_argument("search budgets must be positive");
    if (tolerance <= 0) throw std::invalid_argument("search tolerance must be positive");
    if (group_order < 0 || group_order == 1) throw std::invalid_argument("group order must be 0 (continuous) or >= 2");
}

std::optional<UnimodularVector> random_discrete_search(const SearchConfig& cfg, const std::vector<int>& radices) {
    cfg.validate();
    if (cfg.group_order < 2) throw std::invalid_argument("random_discrete_search needs a discrete group");
    UnimodularVector probe{radices, {}};
    const int d = probe.joint_dim();
    const std::size_t n = std::size_t(d) * d;

    std::vector<Cx> roots(cfg.group_order);
    for (int k = 0; k < cfg.group_order; ++k) {
        double phi = kTwoPi * double(k) / double(cfg.group_order);
        roots[k] = Cx(std::cos(phi), std::sin(phi));
    }

    // Prescreen: the correlation sums must vanish for discrete solutions, so
    // anything visibly nonzero is rejected before the gate assembly.
    const double prescreen = 1e-6;

    std::mt19937_64 rng(cfg.seed);
    probe.phases.resize(n);
    for (long long trial = 0; trial < cfg.max_trials; ++trial) {
        for (std::size_t i = 0; i < n; ++i)
            probe.phases[i] = roots[std::size_t(rng()) % std::size_t(cfg.group_order)];
        if (autocorrelation_residual(probe) > prescreen) continue;
        if (!cfg.filter_two_unitary) return probe;
        if (gate_is_two_unitary(probe, kUnitaryTol)) return probe;
    }
    return std::nullopt;
}

std::optional<UnimodularVector> iterative_search(const SearchConfig& cfg, const std::vector<int>& radices) {
    cfg.validate();
    UnimodularVector probe{radices, {}};
    const int d = probe.joint_dim();
    const std::size_t n = std::size_t(d) * d;
    const ComplexMatrix F = biunimodular_fourier(radices);
    const ComplexMatrix Fd = F.adjoint();

    if (!cfg.initial.empty() && cfg.initial.size() != n)
        throw std::invalid_argument("iterative_search: warm start has the wrong length");

    std::mt19937_64 rng(cfg.seed);
    for (long long restart = 0; restart < cfg.max_trials; ++restart) {
        std::vector<Cx> x(n);
        if (restart == 0 && !cfg.initial.empty()) {
            for (std::size_t i = 0; i < n; ++i) x[i] = phase_of(cfg.initial[i]);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double phi = kTwoPi * uniform01(rng);
                x[i] = Cx(std::cos(phi), std::sin(phi));
            }
        }

        // Keep the best iterate seen in this restart; the accepted sequence is
        // nonincreasing in residual by construction, so a transient uptick of
        // the raw iteration cannot discard progress.
        std::vector<Cx> best = x;
        double best_residual = std::numeric_limits<double>::infinity();
        bool converged = false;
        for (long long it = 0; it < cfg.max_iterations; ++it) {
            std::vector<Cx> y = matvec(F, x);
            double r = unimodularity_residual(y);
            if (r < best_residual) {
                best_residual = r;
                best = x;
            }
            if (best_residual < cfg.tolerance) {
                converged = true;
                break;
            }
            for (Cx& v : y) v = phase_of(v);
            std::vector<Cx> z = matvec(Fd, y);
            for (std::size_t i = 0; i < n; ++i) x[i] = phase_of(z[i]);
        }
        if (!converged) continue;

        UnimodularVector candidate = make_vector(radices, best);
        if (!cfg.filter_two_unitary) return candidate;
        if (gate_is_two_unitary(candidate, kUnitaryTol)) return candidate;
    }
    return std::nullopt;
}

ComplexMatrix biunimodular_fourier(const std::vector<int>& radices) {
    if (radices.empty()) throw std::invalid_argument("radix list is empty");
    ComplexMatrix F = fourier(radices[0]);
    for (std::size_t i = 1; i < radices.size(); ++i) F = kron(F, fourier(radices[i]));
    return kron(F, F);
}

UnimodularVector fixture(const std::string& name) {
    const Cx one(1, 0), mone(-1, 0), im(0, 1), mim(0, -1);
    const Cx w3(std::cos(kTwoPi / 3.0), std::sin(kTwoPi / 3.0));
    const Cx wb = std::conj(w3);

    UnimodularVector out;
    Ansatz ansatz = Ansatz::MixedRadix;
    if (name == "lambda_22") {
        out.radices = {2, 2};
        out.phases = {one, one, mim, im, im, im, one, mone, im, mone, one, im, im, mone, mone, mim};
    } else if (name == "lambda_4") {
        out.radices = {4};
        out.phases = {one, one, one, mone, one, mone, mone, mone, one, one, one, mone, mone, one, one, one};
        ansatz = Ansatz::FourierCx;
    } else if (name == "lambda_23") {
        out.radices = {2, 3};
        out.phases = {one, wb, wb, wb, wb, one, one, one, w3, one, w3, one,
                      one, w3, one, w3, one, one, one, w3, one, wb, w3, wb,
                      wb,  w3, w3, wb, one, one, w3, w3, wb, one, one, wb};
    } else if (name == "lambda_222") {
        out.radices = {2, 2, 2};
        out.phases = {one, one, im,  one, mim, mone, im,  one, mim, mone, mone, mone, im,  mim, one, mone,
                      im,  im,  mim, mim, one, mim,  mim, im,  mim, one,  mone, im,   mone, one, im,  mone,
                      mone, one, mone, im, mone, one, im,  mim, one, one,  mim, mone, mone, one, im,  mim,
                      mone, mone, mone, mone, mone, one, mim, one, mone, mone, mone, mone, im,  im,  mim, mone};
    } else {
        throw std::invalid_argument("unknown fixture: " + name);
    }
    out.validate();

    // Guard against table corruption: the whole point of these vectors is the
    // gate they generate, so check every rearrangement now and say which one
    // broke if any did.
    ComplexMatrix U = multiunitary_from_lambda(out, ansatz);
    const int d = out.joint_dim();
    double ru = U.unitarity_residual();
    double rr = reshuffle(U, d).unitarity_residual();
    double rg = partial_transpose(U, {d, d}, Bipartition({0})).unitarity_residual();
    if (ru >= kUnitaryTol)
        throw std::runtime_error("fixture " + name + ": gate is not unitary, residual " + std::to_string(ru));
    if (rr >= kUnitaryTol)
        throw std::runtime_error("fixture " + name + ": reshuffled gate is not unitary, residual " + std::to_string(rr));
    if (rg >= kUnitaryTol)
        throw std::runtime_error("fixture " + name + ": partially transposed gate is not unitary, residual " +
                                 std::to_string(rg));
    return out;
}

std::string lambda_to_json(const UnimodularVector& lambda) {
    lambda.validate();
    nlohmann::json j;
    j["radices"] = lambda.radices;
    nlohmann::json phases = nlohmann::json::array();
    for (const Cx& p : lambda.phases) phases.push_back({p.real(), p.imag()});
    j["phases"] = phases;
    return j.dump(2);
}

UnimodularVector lambda_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    UnimodularVector out;
    out.radices = j.at("radices").get<std::vector<int>>();
    for (const auto& p : j.at("phases")) out.phases.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    out.validate();
    return out;
}

}  // namespace ame
