#include "ame/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ame {

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Cx>& entries) {
    ComplexMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = entries[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = std::conj(a_[i]);
    return m;
}

Cx ComplexMatrix::trace() const {
    if (!square()) throw std::invalid_argument("trace: matrix not square");
    Cx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Cx& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::distance(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("distance: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) s += std::norm(a_[i] - other.a_[i]);
    return std::sqrt(s);
}

double ComplexMatrix::unitarity_residual() const {
    if (!square()) throw std::invalid_argument("unitarity_residual: matrix not square");
    // ||M M^dag - I||_F accumulated row by row; avoids materializing the product.
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < rows_; ++c) {
            Cx dot = 0.0;
            const Cx* pr = row(r);
            const Cx* pc = row(c);
            for (std::size_t k = 0; k < cols_; ++k) dot += pr[k] * std::conj(pc[k]);
            if (r == c) dot -= 1.0;
            s += std::norm(dot);
        }
    }
    return std::sqrt(s);
}

bool ComplexMatrix::is_unitary(double tol) const { return unitarity_residual() < tol; }

double ComplexMatrix::hermiticity_residual() const {
    if (!square()) throw std::invalid_argument("hermiticity_residual: matrix not square");
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) s += std::norm(at(r, c) - std::conj(at(c, r)));
    return std::sqrt(s);
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix multiply: shape mismatch");
    ComplexMatrix out(rows_, rhs.cols_);
    // i-k-j loop order keeps both streamed rows contiguous.
    for (std::size_t i = 0; i < rows_; ++i) {
        Cx* dst = out.row(i);
        const Cx* src = row(i);
        for (std::size_t k = 0; k < cols_; ++k) {
            const Cx a = src[k];
            if (a == Cx{}) continue;
            const Cx* rk = rhs.row(k);
            for (std::size_t j = 0; j < rhs.cols_; ++j) dst[j] += a * rk[j];
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix add: shape mismatch");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix subtract: shape mismatch");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
    return out;
}

ComplexMatrix& ComplexMatrix::scale(Cx factor) {
    for (Cx& z : a_) z *= factor;
    return *this;
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (std::size_t ra = 0; ra < A.rows(); ++ra)
        for (std::size_t ca = 0; ca < A.cols(); ++ca) {
            const Cx a = A.at(ra, ca);
            if (a == Cx{}) continue;
            for (std::size_t rb = 0; rb < B.rows(); ++rb)
                for (std::size_t cb = 0; cb < B.cols(); ++cb)
                    out.at(ra * B.rows() + rb, ca * B.cols() + cb) = a * B.at(rb, cb);
        }
    return out;
}

// ---------------------------------------------------------------------------
// StateVector and index arithmetic
// ---------------------------------------------------------------------------

static void check_radices(const std::vector<int>& radices) {
    if (radices.empty()) throw std::invalid_argument("register needs at least one wire");
    for (int r : radices)
        if (r < 2) throw std::invalid_argument("wire radix must be at least 2");
}

StateVector::StateVector(std::vector<int> r, std::vector<Cx> a)
    : radices(std::move(r)), amps(std::move(a)) {
    check_radices(radices);
    if (amps.size() != dim()) throw std::invalid_argument("state amplitude count does not match register");
}

StateVector StateVector::zero_state(std::vector<int> radices) {
    check_radices(radices);
    std::size_t d = 1;
    for (int r : radices) d *= static_cast<std::size_t>(r);
    std::vector<Cx> a(d);
    a[0] = 1.0;
    return StateVector(std::move(radices), std::move(a));
}

std::size_t StateVector::dim() const {
    std::size_t d = 1;
    for (int r : radices) d *= static_cast<std::size_t>(r);
    return d;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const Cx& z : amps) s += std::norm(z);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    for (Cx& z : amps) z /= n;
}

std::vector<std::size_t> strides_of(const std::vector<int>& radices) {
    std::vector<std::size_t> s(radices.size(), 1);
    for (int i = static_cast<int>(radices.size()) - 2; i >= 0; --i)
        s[i] = s[i + 1] * static_cast<std::size_t>(radices[i + 1]);
    return s;
}

std::size_t flatten_digits(const std::vector<int>& digits, const std::vector<std::size_t>& strides) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) idx += static_cast<std::size_t>(digits[i]) * strides[i];
    return idx;
}

void unflatten_index(std::size_t index, const std::vector<int>& radices, std::vector<int>& digits_out) {
    digits_out.resize(radices.size());
    for (int i = static_cast<int>(radices.size()) - 1; i >= 0; --i) {
        digits_out[i] = static_cast<int>(index % static_cast<std::size_t>(radices[i]));
        index /= static_cast<std::size_t>(radices[i]);
    }
}

Bipartition::Bipartition(std::vector<int> wires) : keep(std::move(wires)) {
    std::sort(keep.begin(), keep.end());
    if (keep.empty()) throw std::invalid_argument("bipartition: kept side must be nonempty");
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw std::invalid_argument("bipartition: duplicate wire");
}

void Bipartition::validate(std::size_t wire_count) const {
    if (keep.front() < 0 || keep.back() >= static_cast<int>(wire_count))
        throw std::invalid_argument("bipartition: wire index out of range");
    if (keep.size() >= wire_count)
        throw std::invalid_argument("bipartition: kept side must be a proper subset");
}

bool Bipartition::contains(int wire) const {
    return std::binary_search(keep.begin(), keep.end(), wire);
}

// ---------------------------------------------------------------------------
// apply_factor
// ---------------------------------------------------------------------------

StateVector apply_factor(const ComplexMatrix& M, const StateVector& v, const std::vector<int>& targets) {
    const std::size_t n = v.wire_count();
    if (targets.empty()) throw std::invalid_argument("apply_factor: no target wires");
    std::vector<char> seen(n, 0);
    std::size_t gate_dim = 1;
    for (int t : targets) {
        if (t < 0 || t >= static_cast<int>(n)) throw std::invalid_argument("apply_factor: wire out of range");
        if (seen[t]) throw std::invalid_argument("apply_factor: repeated target wire");
        seen[t] = 1;
        gate_dim *= static_cast<std::size_t>(v.radices[t]);
    }
    if (!M.square() || M.rows() != gate_dim)
        throw std::invalid_argument("apply_factor: gate dimension does not match target radices");

    const std::vector<std::size_t> strides = strides_of(v.radices);

    // Offsets of each gate-basis index within the full register (targets only),
    // with the first target as the most significant digit of the gate index.
    std::vector<std::size_t> target_offset(gate_dim, 0);
    for (std::size_t g = 0; g < gate_dim; ++g) {
        std::size_t rem = g, off = 0;
        for (int i = static_cast<int>(targets.size()) - 1; i >= 0; --i) {
            const std::size_t r = static_cast<std::size_t>(v.radices[targets[i]]);
            off += (rem % r) * strides[targets[i]];
            rem /= r;
        }
        target_offset[g] = off;
    }

    // Base offsets: every assignment of the non-target wires.
    std::vector<int> rest;
    for (std::size_t w = 0; w < n; ++w)
        if (!seen[w]) rest.push_back(static_cast<int>(w));
    std::size_t rest_dim = v.dim() / gate_dim;

    StateVector out = v;
    std::vector<Cx> in_slice(gate_dim), out_slice(gate_dim);
    for (std::size_t b = 0; b < rest_dim; ++b) {
        std::size_t rem = b, base = 0;
        for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
            const std::size_t r = static_cast<std::size_t>(v.radices[rest[i]]);
            base += (rem % r) * strides[rest[i]];
            rem /= r;
        }
        for (std::size_t g = 0; g < gate_dim; ++g) in_slice[g] = v.amps[base + target_offset[g]];
        for (std::size_t r = 0; r < gate_dim; ++r) {
            Cx acc = 0.0;
            const Cx* mr = M.row(r);
            for (std::size_t c = 0; c < gate_dim; ++c) acc += mr[c] * in_slice[c];
            out_slice[r] = acc;
        }
        for (std::size_t g = 0; g < gate_dim; ++g) out.amps[base + target_offset[g]] = out_slice[g];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reductions and rearrangements
// ---------------------------------------------------------------------------

namespace {

// Enumerates offsets for a wire subset: offsets[j] = flat offset of the j-th
// assignment of the subset's digits (subset in ascending wire order).
std::vector<std::size_t> subset_offsets(const std::vector<int>& wires,
                                        const std::vector<int>& radices,
                                        const std::vector<std::size_t>& strides) {
    std::size_t dim = 1;
    for (int w : wires) dim *= static_cast<std::size_t>(radices[w]);
    std::vector<std::size_t> offsets(dim, 0);
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t rem = x, off = 0;
        for (int i = static_cast<int>(wires.size()) - 1; i >= 0; --i) {
            const std::size_t r = static_cast<std::size_t>(radices[wires[i]]);
            off += (rem % r) * strides[wires[i]];
            rem /= r;
        }
        offsets[x] = off;
    }
    return offsets;
}

std::vector<int> complement_wires(const Bipartition& keep, std::size_t n) {
    std::vector<int> rest;
    for (std::size_t w = 0; w < n; ++w)
        if (!keep.contains(static_cast<int>(w))) rest.push_back(static_cast<int>(w));
    return rest;
}

}  // namespace

ComplexMatrix partial_trace(const StateVector& v, const Bipartition& keep) {
    keep.validate(v.wire_count());
    const std::vector<std::size_t> strides = strides_of(v.radices);
    const std::vector<int> rest = complement_wires(keep, v.wire_count());
    const std::vector<std::size_t> koff = subset_offsets(keep.keep, v.radices, strides);
    const std::vector<std::size_t> roff = subset_offsets(rest, v.radices, strides);

    const std::size_t dk = koff.size();
    ComplexMatrix rho(dk, dk);
    for (std::size_t b = 0; b < roff.size(); ++b) {
        for (std::size_t i = 0; i < dk; ++i) {
            const Cx ai = v.amps[koff[i] + roff[b]];
            if (ai == Cx{}) continue;
            for (std::size_t j = 0; j < dk; ++j)
                rho.at(i, j) += ai * std::conj(v.amps[koff[j] + roff[b]]);
        }
    }
    return rho;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& radices, const Bipartition& keep) {
    check_radices(radices);
    std::size_t full = 1;
    for (int r : radices) full *= static_cast<std::size_t>(r);
    if (!rho.square() || rho.rows() != full)
        throw std::invalid_argument("partial_trace: density matrix does not match radices");
    keep.validate(radices.size());

    const std::vector<std::size_t> strides = strides_of(radices);
    const std::vector<int> rest = complement_wires(keep, radices.size());
    const std::vector<std::size_t> koff = subset_offsets(keep.keep, radices, strides);
    const std::vector<std::size_t> roff = subset_offsets(rest, radices, strides);

    const std::size_t dk = koff.size();
    ComplexMatrix out(dk, dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
            Cx acc = 0.0;
            for (std::size_t b = 0; b < roff.size(); ++b)
                acc += rho.at(koff[i] + roff[b], koff[j] + roff[b]);
            out.at(i, j) = acc;
        }
    return out;
}

ComplexMatrix reshuffle(const ComplexMatrix& M, int d) {
    const std::size_t dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    if (!M.square() || M.rows() != dd)
        throw std::invalid_argument("reshuffle: matrix must be d^2 x d^2");
    ComplexMatrix out(dd, dd);
    const std::size_t ud = static_cast<std::size_t>(d);
    for (std::size_t k = 0; k < ud; ++k)
        for (std::size_t l = 0; l < ud; ++l)
            for (std::size_t i = 0; i < ud; ++i)
                for (std::size_t j = 0; j < ud; ++j)
                    out.at(k * ud + l, i * ud + j) = M.at(k * ud + i, l * ud + j);
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& M, const std::vector<int>& radices, const Bipartition& cut) {
    check_radices(radices);
    std::size_t full = 1;
    for (int r : radices) full *= static_cast<std::size_t>(r);
    if (!M.square() || M.rows() != full)
        throw std::invalid_argument("partial_transpose: matrix does not match radices");
    cut.validate(radices.size());

    const std::vector<std::size_t> strides = strides_of(radices);
    const std::vector<int> rest = complement_wires(cut, radices.size());
    const std::vector<std::size_t> koff = subset_offsets(cut.keep, radices, strides);
    const std::vector<std::size_t> roff = subset_offsets(rest, radices, strides);

    ComplexMatrix out(full, full);
    for (std::size_t ia = 0; ia < koff.size(); ++ia)
        for (std::size_t ib = 0; ib < roff.size(); ++ib)
            for (std::size_t ja = 0; ja < koff.size(); ++ja)
                for (std::size_t jb = 0; jb < roff.size(); ++jb)
                    out.at(koff[ia] + roff[ib], koff[ja] + roff[jb]) =
                        M.at(koff[ia] + roff[jb], koff[ja] + roff[ib]);
    return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic Jacobi with complex rotations)
// ---------------------------------------------------------------------------

namespace {

double offdiagonal_norm(const ComplexMatrix& A) {
    double s = 0.0;
    for (std::size_t r = 0; r < A.rows(); ++r)
        for (std::size_t c = 0; c < A.cols(); ++c)
            if (r != c) s += std::norm(A.at(r, c));
    return std::sqrt(s);
}

HermitianEigensystem jacobi_eig(const ComplexMatrix& M, bool want_vectors) {
    if (!M.square()) throw std::invalid_argument("hermitian eigensolver: matrix not square");
    if (M.hermiticity_residual() > kHermitianTol)
        throw std::invalid_argument("hermitian eigensolver: input is not Hermitian");

    const std::size_t n = M.rows();
    ComplexMatrix A = M;
    // Symmetrize exactly so rounding in the input cannot drift the iteration.
    for (std::size_t r = 0; r < n; ++r) {
        A.at(r, r) = Cx(A.at(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c) {
            const Cx m = 0.5 * (A.at(r, c) + std::conj(A.at(c, r)));
            A.at(r, c) = m;
            A.at(c, r) = std::conj(m);
        }
    }

    ComplexMatrix V = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();
    const double target = kJacobiRelTol * std::max(A.frobenius_norm(), 1e-300);
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiagonal_norm(A) < target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Cx apq = A.at(p, q);
                if (std::abs(apq) < target / (static_cast<double>(n))) continue;

                // 2x2 unitary annihilating A[p][q]: a phase that makes the
                // off-diagonal real, then a real Jacobi rotation.
                const double app = A.at(p, p).real();
                const double aqq = A.at(q, q).real();
                const double absapq = std::abs(apq);
                const Cx phase = apq / absapq;
                const double theta = 0.5 * std::atan2(2.0 * absapq, app - aqq);
                const double c = std::cos(theta);
                const Cx s = std::sin(theta) * phase;

                // Columns: [p] <- c*col_p + conj(s)*col_q ; [q] <- -s*col_p + c*col_q
                for (std::size_t r = 0; r < n; ++r) {
                    const Cx arp = A.at(r, p), arq = A.at(r, q);
                    A.at(r, p) = c * arp + std::conj(s) * arq;
                    A.at(r, q) = -s * arp + c * arq;
                }
                // Rows (apply the adjoint on the left).
                for (std::size_t col = 0; col < n; ++col) {
                    const Cx apc = A.at(p, col), aqc = A.at(q, col);
                    A.at(p, col) = c * apc + s * aqc;
                    A.at(q, col) = -std::conj(s) * apc + c * aqc;
                }
                if (want_vectors) {
                    for (std::size_t r = 0; r < n; ++r) {
                        const Cx vrp = V.at(r, p), vrq = V.at(r, q);
                        V.at(r, p) = c * vrp + std::conj(s) * vrq;
                        V.at(r, q) = -s * vrp + c * vrq;
                    }
                }
            }
        }
    }

    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {A.at(i, i).real(), i};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    HermitianEigensystem out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = order[i].first;
    if (want_vectors) {
        out.vectors = ComplexMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t r = 0; r < n; ++r) out.vectors.at(r, i) = V.at(r, order[i].second);
    }
    return out;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& M) {
    return jacobi_eig(M, false).values;
}

HermitianEigensystem hermitian_eig(const ComplexMatrix& M) { return jacobi_eig(M, true); }

// ---------------------------------------------------------------------------
// Schmidt machinery
// ---------------------------------------------------------------------------

SchmidtSpectrum schmidt_spectrum(const StateVector& v, const Bipartition& cut) {
    // Diagonalize the smaller reduced state; both sides share the nonzero spectrum.
    cut.validate(v.wire_count());
    std::size_t dk = 1;
    for (int w : cut.keep) dk *= static_cast<std::size_t>(v.radices[w]);
    Bipartition side = cut;
    if (dk * dk > v.dim()) side = Bipartition(complement_wires(cut, v.wire_count()));

    const ComplexMatrix rho = partial_trace(v, side);
    std::vector<double> ev = hermitian_eigenvalues(rho);
    SchmidtSpectrum s;
    s.coefficients.reserve(ev.size());
    for (double e : ev) {
        if (e < -kUnitaryTol) throw std::runtime_error("schmidt_spectrum: reduced state has a negative eigenvalue");
        s.coefficients.push_back(std::sqrt(std::max(e, 0.0)));
    }
    return s;
}

double von_neumann_entropy(const SchmidtSpectrum& s, int base) {
    if (base < 2) throw std::invalid_argument("von_neumann_entropy: base must be at least 2");
    double S = 0.0;
    for (double c : s.coefficients) {
        const double p = c * c;
        if (p > 0.0) S -= p * std::log(p);
    }
    return S / std::log(static_cast<double>(base));
}

double fidelity_with_pure(const ComplexMatrix& rho, const StateVector& psi) {
    if (!rho.square() || rho.rows() != psi.dim())
        throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
    if (rho.hermiticity_residual() > kHermitianTol)
        throw std::invalid_argument("fidelity_with_pure: density matrix is not Hermitian");
    Cx acc = 0.0;
    for (std::size_t r = 0; r < rho.rows(); ++r) {
        Cx rowdot = 0.0;
        for (std::size_t c = 0; c < rho.cols(); ++c) rowdot += rho.at(r, c) * psi.amps[c];
        acc += std::conj(psi.amps[r]) * rowdot;
    }
    return acc.real();
}

}  // namespace ame
