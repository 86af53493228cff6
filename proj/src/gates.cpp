#include "ame/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ame {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_dim(int d) {
    if (d < 2) throw std::invalid_argument("local dimension must be at least 2");
}

int product_of(const std::vector<int>& radices) {
    if (radices.empty()) throw std::invalid_argument("radix list is empty");
    int p = 1;
    for (int r : radices) {
        if (r < 2) throw std::invalid_argument("radix must be at least 2");
        p *= r;
    }
    return p;
}

ComplexMatrix qubit_diagonal(std::initializer_list<Cx> entries) {
    return ComplexMatrix::diagonal(std::vector<Cx>(entries));
}

}  // namespace

ComplexMatrix fourier(int d) {
    require_dim(d);
    ComplexMatrix F(d, d);
    const double s = 1.0 / std::sqrt(double(d));
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            double phi = kTwoPi * double((k * l) % d) / double(d);
            F.at(k, l) = Cx(s * std::cos(phi), s * std::sin(phi));
        }
    return F;
}

ComplexMatrix shift_x(int d) {
    require_dim(d);
    ComplexMatrix X(d, d);
    for (int j = 0; j < d; ++j) X.at((j + 1) % d, j) = 1.0;
    return X;
}

ComplexMatrix cz_d(int d) {
    require_dim(d);
    std::vector<Cx> diag(std::size_t(d) * d);
    for (int l = 0; l < d; ++l)
        for (int m = 0; m < d; ++m) {
            double phi = kTwoPi * double((l * m) % d) / double(d);
            diag[std::size_t(l) * d + m] = Cx(std::cos(phi), std::sin(phi));
        }
    return ComplexMatrix::diagonal(diag);
}

ComplexMatrix cx_d(int d) {
    require_dim(d);
    ComplexMatrix CX(std::size_t(d) * d, std::size_t(d) * d);
    for (int j = 0; j < d; ++j)
        for (int m = 0; m < d; ++m) CX.at(std::size_t(j) * d + (m + j) % d, std::size_t(j) * d + m) = 1.0;
    return CX;
}

ComplexMatrix fourier_mixed(const std::vector<int>& radices) {
    product_of(radices);
    ComplexMatrix F = fourier(radices[0]);
    for (std::size_t i = 1; i < radices.size(); ++i) F = kron(F, fourier(radices[i]));
    return F;
}

ComplexMatrix cz_mixed(const std::vector<int>& radices) {
    int d = product_of(radices);
    ComplexMatrix F = fourier_mixed(radices);
    const double s = std::sqrt(double(d));
    std::vector<Cx> diag(std::size_t(d) * d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) diag[std::size_t(k) * d + l] = s * F.at(l, k);
    return ComplexMatrix::diagonal(diag);
}

ComplexMatrix diag_from_lambda(const UnimodularVector& lambda) {
    lambda.validate();
    return ComplexMatrix::diagonal(lambda.phases);
}

std::vector<ComplexMatrix> controlled_phase_ladder(const std::vector<double>& angles, int d) {
    require_dim(d);
    if (angles.size() != std::size_t(d) * d)
        throw std::invalid_argument("controlled_phase_ladder: need d^2 angles");
    std::vector<ComplexMatrix> factors;
    factors.reserve(d);
    for (int l = 0; l < d; ++l) {
        std::vector<Cx> diag(std::size_t(d) * d, Cx(1, 0));
        for (int m = 0; m < d; ++m) {
            double a = angles[std::size_t(l) * d + m];
            diag[std::size_t(l) * d + m] = Cx(std::cos(a), std::sin(a));
        }
        factors.push_back(ComplexMatrix::diagonal(diag));
    }
    return factors;
}

ComplexMatrix multiunitary_from_lambda(const UnimodularVector& lambda, Ansatz ansatz) {
    lambda.validate();
    const int d = lambda.joint_dim();
    ComplexMatrix D = ComplexMatrix::diagonal(lambda.phases);
    switch (ansatz) {
        case Ansatz::FourierCx: {
            ComplexMatrix F = fourier(d);
            ComplexMatrix FI = kron(F, ComplexMatrix::identity(d));
            ComplexMatrix CX = cx_d(d);
            return CX * FI * D * FI.adjoint() * CX.transpose();
        }
        case Ansatz::FourierCz: {
            ComplexMatrix F = fourier(d);
            ComplexMatrix FF = kron(F, F);
            ComplexMatrix CZ = cz_d(d);
            return CZ * FF * D * FF.adjoint() * CZ;
        }
        case Ansatz::MixedRadix: {
            ComplexMatrix Fp = fourier_mixed(lambda.radices);
            ComplexMatrix FF = kron(Fp, Fp);
            ComplexMatrix CZ = cz_mixed(lambda.radices);
            return CZ * FF * D * FF * CZ;
        }
    }
    throw std::invalid_argument("unknown ansatz");
}

std::size_t GateSpec::dim() const {
    switch (kind) {
        case GateKind::Fourier:
        case GateKind::Shift:
            return std::size_t(d);
        case GateKind::CxD:
        case GateKind::CzD:
            return std::size_t(d) * d;
        case GateKind::CzMixed: {
            std::size_t p = 1;
            for (int r : radices) p *= std::size_t(r);
            return p * p;
        }
        case GateKind::Diagonal:
            return phases.size();
        case GateKind::Hadamard:
        case GateKind::PhaseS:
        case GateKind::Rz:
            return 2;
        case GateKind::Cnot:
        case GateKind::Cz:
        case GateKind::Cs:
            return 4;
        case GateKind::Ccz:
            return 8;
        case GateKind::Custom:
            return matrix.rows();
    }
    return 0;
}

ComplexMatrix GateSpec::materialize() const {
    ComplexMatrix M;
    switch (kind) {
        case GateKind::Fourier:
            M = fourier(d);
            break;
        case GateKind::Shift:
            M = shift_x(d);
            break;
        case GateKind::CxD:
            M = cx_d(d);
            break;
        case GateKind::CzD:
            M = cz_d(d);
            break;
        case GateKind::CzMixed:
            M = cz_mixed(radices);
            break;
        case GateKind::Diagonal: {
            if (phases.empty()) throw std::invalid_argument("diagonal gate without phases");
            for (const Cx& p : phases)
                if (std::abs(std::abs(p) - 1.0) > kUnimodularTol)
                    throw std::invalid_argument("diagonal gate entries must be unimodular");
            M = ComplexMatrix::diagonal(phases);
            break;
        }
        case GateKind::Hadamard:
            M = fourier(2);
            break;
        case GateKind::PhaseS:
            M = qubit_diagonal({Cx(1, 0), Cx(0, 1)});
            break;
        case GateKind::Cnot: {
            M = ComplexMatrix(4, 4);
            M.at(0, 0) = 1;
            M.at(1, 1) = 1;
            M.at(2, 3) = 1;
            M.at(3, 2) = 1;
            break;
        }
        case GateKind::Cz:
            M = qubit_diagonal({1.0, 1.0, 1.0, -1.0});
            break;
        case GateKind::Ccz:
            M = qubit_diagonal({1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0});
            break;
        case GateKind::Cs:
            M = qubit_diagonal({Cx(1, 0), Cx(1, 0), Cx(1, 0), Cx(0, 1)});
            break;
        case GateKind::Rz: {
            double h = angle / 2.0;
            M = qubit_diagonal({Cx(std::cos(h), -std::sin(h)), Cx(std::cos(h), std::sin(h))});
            break;
        }
        case GateKind::Custom: {
            if (!matrix.square() || matrix.rows() == 0)
                throw std::invalid_argument("custom gate needs a square matrix");
            M = matrix;
            break;
        }
    }
    if (dagger) return M.adjoint();
    return M;
}

std::string gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::Fourier: return "fourier";
        case GateKind::Shift: return "shift";
        case GateKind::CxD: return "cx_d";
        case GateKind::CzD: return "cz_d";
        case GateKind::CzMixed: return "cz_mixed";
        case GateKind::Diagonal: return "diagonal";
        case GateKind::Hadamard: return "h";
        case GateKind::PhaseS: return "s";
        case GateKind::Cnot: return "cnot";
        case GateKind::Cz: return "cz";
        case GateKind::Ccz: return "ccz";
        case GateKind::Cs: return "cs";
        case GateKind::Rz: return "rz";
        case GateKind::Custom: return "custom";
    }
    throw std::invalid_argument("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name) {
    if (name == "fourier") return GateKind::Fourier;
    if (name == "shift") return GateKind::Shift;
    if (name == "cx_d") return GateKind::CxD;
    if (name == "cz_d") return GateKind::CzD;
    if (name == "cz_mixed") return GateKind::CzMixed;
    if (name == "diagonal") return GateKind::Diagonal;
    if (name == "h") return GateKind::Hadamard;
    if (name == "s") return GateKind::PhaseS;
    if (name == "cnot") return GateKind::Cnot;
    if (name == "cz") return GateKind::Cz;
    if (name == "ccz") return GateKind::Ccz;
    if (name == "cs") return GateKind::Cs;
    if (name == "rz") return GateKind::Rz;
    if (name == "custom") return GateKind::Custom;
    throw std::invalid_argument("unknown gate name: " + name);
}

}  // namespace ame
