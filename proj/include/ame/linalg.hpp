#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace ame {

using Cx = std::complex<double>;

// Numerical tolerances used across the library.
constexpr double kUnitaryTol = 1e-9;    // unitarity / maximal-mixedness acceptance
constexpr double kHermitianTol = 1e-8;  // Hermiticity validation of inputs
constexpr double kGateTol = 1e-12;      // built-in gate constructions must be this exact
constexpr double kJacobiRelTol = 1e-12; // eigensolver off-diagonal target, relative to ||M||_F

// Dense row-major complex matrix. Sized for registers of a few thousand
// amplitudes at most; everything here is O(n^3)-friendly at that scale.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<Cx>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Cx& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Cx& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    Cx* row(std::size_t r) { return a_.data() + r * cols_; }
    const Cx* row(std::size_t r) const { return a_.data() + r * cols_; }
    std::vector<Cx>& data() { return a_; }
    const std::vector<Cx>& data() const { return a_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Cx trace() const;
    double frobenius_norm() const;

    // ||this - other||_F, used for closeness checks throughout.
    double distance(const ComplexMatrix& other) const;
    // ||M M^dag - I||_F
    double unitarity_residual() const;
    bool is_unitary(double tol = kUnitaryTol) const;
    // ||M - M^dag||_F
    double hermiticity_residual() const;

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix& scale(Cx factor);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Cx> a_;
};

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

// Pure state of a mixed-radix register. Wire 0 is the most significant digit:
// index(a_0..a_{n-1}) = a_0 * (r_1 ... r_{n-1}) + ... + a_{n-1}.
struct StateVector {
    std::vector<int> radices;
    std::vector<Cx> amps;

    StateVector() = default;
    StateVector(std::vector<int> r, std::vector<Cx> a);

    // |0...0> on the given register shape.
    static StateVector zero_state(std::vector<int> radices);

    std::size_t dim() const;
    std::size_t wire_count() const { return radices.size(); }
    double norm() const;
    void normalize();
};

// Mixed-radix index arithmetic for a radix list (most significant wire first).
std::vector<std::size_t> strides_of(const std::vector<int>& radices);
std::size_t flatten_digits(const std::vector<int>& digits, const std::vector<std::size_t>& strides);
void unflatten_index(std::size_t index, const std::vector<int>& radices, std::vector<int>& digits_out);

// A subset of wires ("keep" side). Wires are stored sorted ascending.
struct Bipartition {
    std::vector<int> keep;

    explicit Bipartition(std::vector<int> wires);
    void validate(std::size_t wire_count) const;
    bool contains(int wire) const;
};

// Nonincreasing Schmidt coefficients of a pure state across a cut; squares sum to 1.
struct SchmidtSpectrum {
    std::vector<double> coefficients;
};

// Applies gate M to the listed target wires of v (matrix-free Kronecker action).
// Targets are in tensor order: the first target is the most significant digit of
// M's row index. Targets need not be contiguous or sorted.
StateVector apply_factor(const ComplexMatrix& M, const StateVector& v, const std::vector<int>& targets);

// Reduced density matrix on the kept wires.
ComplexMatrix partial_trace(const StateVector& v, const Bipartition& keep);
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& radices, const Bipartition& keep);

// Reshuffling of a d^2 x d^2 matrix: <k,l|M^R|i,j> = <k,i|M|l,j>.
ComplexMatrix reshuffle(const ComplexMatrix& M, int d);

// Partial transpose over the complement of `cut` (the second factor of the split):
// entries with the complement's row/column digits exchanged.
ComplexMatrix partial_transpose(const ComplexMatrix& M, const std::vector<int>& radices, const Bipartition& cut);

// Eigenvalues of a Hermitian matrix, sorted descending (cyclic Jacobi iteration).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& M);

// Full eigensystem: values descending, columns of `vectors` are the eigenvectors.
struct HermitianEigensystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};
HermitianEigensystem hermitian_eig(const ComplexMatrix& M);

SchmidtSpectrum schmidt_spectrum(const StateVector& v, const Bipartition& cut);

// S = -sum lambda_i^2 log_base(lambda_i^2), with 0 log 0 = 0.
double von_neumann_entropy(const SchmidtSpectrum& s, int base);

// Tr(rho |psi><psi|), returned as a real number.
double fidelity_with_pure(const ComplexMatrix& rho, const StateVector& psi);

}  // namespace ame
