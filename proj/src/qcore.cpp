#include "vqt/qcore.hpp"

#include "vqt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vqt::qcore {

const NumericPolicy& default_policy() {
    static const NumericPolicy policy{};
    return policy;
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : Matrix(rows.size()) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw ContractViolation("Matrix: rows must form a square matrix");
        }
        std::size_t c = 0;
        for (const auto& value : row) {
            (*this)(r, c++) = value;
        }
        ++r;
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
    Matrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex Matrix::trace() const {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        sum += (*this)(i, i);
    }
    return sum;
}

bool Matrix::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = r; c < dim_; ++c) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

double Matrix::max_abs_diff(const Matrix& other) const {
    if (other.dim_ != dim_) {
        throw ContractViolation("Matrix::max_abs_diff: dimension mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    }
    return worst;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rhs.dim_ != dim_) {
        throw ContractViolation("Matrix +: dimension mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += rhs.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rhs.dim_ != dim_) {
        throw ContractViolation("Matrix -: dimension mismatch");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= rhs.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(Complex scale) {
    for (auto& v : data_) {
        v *= scale;
    }
    return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw ContractViolation("Matrix *: dimension mismatch");
    }
    const std::size_t n = lhs.dim();
    Matrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(r, k);
            if (a == Complex{0.0, 0.0}) {
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += a * rhs(k, c);
            }
        }
    }
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    Matrix out(na * nb);
    for (std::size_t ra = 0; ra < na; ++ra) {
        for (std::size_t ca = 0; ca < na; ++ca) {
            for (std::size_t rb = 0; rb < nb; ++rb) {
                for (std::size_t cb = 0; cb < nb; ++cb) {
                    out(ra * nb + rb, ca * nb + cb) = a(ra, ca) * b(rb, cb);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amplitudes, const NumericPolicy& policy)
    : amplitudes_(std::move(amplitudes)) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ContractViolation("StateVector: non-finite amplitude");
        }
        norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > policy.norm_tol) {
        std::ostringstream msg;
        msg << "StateVector: squared norm " << norm2 << " differs from 1";
        throw ContractViolation(msg.str());
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw ContractViolation("StateVector::basis: index out of range");
    }
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

Complex inner(const StateVector& bra, const StateVector& ket) {
    if (bra.dim() != ket.dim()) {
        throw ContractViolation("inner: dimension mismatch");
    }
    Complex sum = 0.0;
    for (std::size_t i = 0; i < bra.dim(); ++i) {
        sum += std::conj(bra[i]) * ket[i];
    }
    return sum;
}

StateVector apply(const Matrix& unitary, const StateVector& state) {
    if (unitary.dim() != state.dim()) {
        throw ContractViolation("apply: dimension mismatch");
    }
    std::vector<Complex> out(state.dim(), Complex{0.0, 0.0});
    for (std::size_t r = 0; r < state.dim(); ++r) {
        for (std::size_t c = 0; c < state.dim(); ++c) {
            out[r] += unitary(r, c) * state[c];
        }
    }
    return StateVector(std::move(out));
}

Matrix projector(const StateVector& state) {
    Matrix out(state.dim());
    for (std::size_t r = 0; r < state.dim(); ++r) {
        for (std::size_t c = 0; c < state.dim(); ++c) {
            out(r, c) = state[r] * std::conj(state[c]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validated wrappers

namespace {

void require_finite(const Matrix& m, const char* what) {
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) {
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
                throw ContractViolation(std::string(what) + ": non-finite entry");
            }
        }
    }
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries, const NumericPolicy& policy)
    : entries_(std::move(entries)) {
    require_finite(entries_, "HermitianOperator");
    if (!entries_.is_hermitian(policy.hermitian_tol)) {
        throw ContractViolation("HermitianOperator: matrix is not Hermitian");
    }
}

DensityMatrix::DensityMatrix(Matrix entries, const NumericPolicy& policy)
    : entries_(std::move(entries)) {
    require_finite(entries_, "DensityMatrix");
    if (!entries_.is_hermitian(policy.hermitian_tol)) {
        throw InvalidStateError("DensityMatrix: matrix is not Hermitian");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > policy.trace_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: trace " << tr.real() << " differs from 1";
        throw InvalidStateError(msg.str());
    }
    const EigenSystem eig = hermitian_eig(HermitianOperator(entries_, policy), policy);
    if (eig.eigenvalues.front() < -policy.negative_eigenvalue_tol) {
        std::ostringstream msg;
        msg << "DensityMatrix: negative eigenvalue " << eig.eigenvalues.front();
        throw InvalidStateError(msg.str());
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& state) { return DensityMatrix(projector(state)); }

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return DensityMatrix(Matrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

// ---------------------------------------------------------------------------
// Spectral routines

Matrix EigenSystem::reconstruct() const {
    return apply_spectral_function(*this, [](double x) { return x; });
}

EigenSystem hermitian_eig(const HermitianOperator& op, const NumericPolicy& policy) {
    const std::size_t n = op.dim();
    Matrix a = op.matrix();
    Matrix v = Matrix::identity(n);

    double scale = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            scale += std::norm(a(r, c));
        }
    }
    const double threshold = policy.jacobi_off_diagonal_tol * std::sqrt(scale);

    for (int sweep = 0; sweep < policy.jacobi_max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= threshold || off == 0.0) {
            break;
        }

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) {
                    continue;
                }
                const Complex phase = a(p, q) / mag;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G restricted to (p,q): columns (c, -s e^{-i phi}) and (s, c e^{-i phi}).
                const Complex g_pp = c;
                const Complex g_qp = -s * std::conj(phase);
                const Complex g_pq = s;
                const Complex g_qq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * g_pp + akq * g_qp;
                    a(k, q) = akp * g_pq + akq * g_qq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * g_pp + vkq * g_qp;
                    v(k, q) = vkp * g_pq + vkq * g_qq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
                    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem out;
    out.eigenvalues.reserve(n);
    out.eigenvectors.reserve(n);
    for (std::size_t idx : order) {
        out.eigenvalues.push_back(a(idx, idx).real());
        std::vector<Complex> column(n);
        double norm2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            column[k] = v(k, idx);
            norm2 += std::norm(column[k]);
        }
        // Rotations are unitary; this only removes accumulated rounding.
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : column) {
            x *= inv;
        }
        out.eigenvectors.emplace_back(std::move(column));
    }
    return out;
}

Matrix apply_spectral_function(const EigenSystem& eig, const std::function<double(double)>& f) {
    const std::size_t n = eig.eigenvalues.size();
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = f(eig.eigenvalues[i]);
        const auto& vec = eig.eigenvectors[i];
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += fi * vec[r] * std::conj(vec[c]);
            }
        }
    }
    return out;
}

HermitianOperator matrix_exp_hermitian(const HermitianOperator& op, double scale) {
    if (!std::isfinite(scale)) {
        throw ContractViolation("matrix_exp_hermitian: scale must be finite");
    }
    const EigenSystem eig = hermitian_eig(op);
    Matrix m = apply_spectral_function(eig, [scale](double x) { return std::exp(scale * x); });
    // Re-symmetrize so the result passes the strict Hermitian check.
    Matrix sym = (m + m.adjoint()) * Complex(0.5);
    return HermitianOperator(std::move(sym));
}

double von_neumann_entropy(const DensityMatrix& rho, const NumericPolicy& policy) {
    const EigenSystem eig = hermitian_eig(HermitianOperator(rho.matrix()), policy);
    double s = 0.0;
    for (double lambda : eig.eigenvalues) {
        if (lambda < -policy.negative_eigenvalue_tol) {
            throw InvalidStateError("von_neumann_entropy: negative eigenvalue");
        }
        if (lambda > 0.0) {
            s -= lambda * std::log(lambda);
        }
    }
    return std::max(0.0, s);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    const EigenSystem eig_a = hermitian_eig(HermitianOperator(a.matrix()));
    const Matrix sqrt_a =
        apply_spectral_function(eig_a, [](double x) { return std::sqrt(std::max(0.0, x)); });
    Matrix inner_m = sqrt_a * b.matrix() * sqrt_a;
    inner_m = (inner_m + inner_m.adjoint()) * Complex(0.5);
    const EigenSystem eig_m = hermitian_eig(HermitianOperator(std::move(inner_m)));
    double f = 0.0;
    for (double lambda : eig_m.eigenvalues) {
        f += std::sqrt(std::max(0.0, lambda));
    }
    return std::clamp(f, 0.0, 1.0);
}

double expectation(const HermitianOperator& op, const DensityMatrix& rho, const NumericPolicy& policy) {
    if (op.dim() != rho.dim()) {
        throw ContractViolation("expectation: dimension mismatch");
    }
    const Complex value = (rho.matrix() * op.matrix()).trace();
    if (std::abs(value.imag()) > policy.imaginary_residue_tol) {
        std::ostringstream msg;
        msg << "expectation: imaginary residue " << value.imag() << " exceeds tolerance";
        throw NumericConsistencyError(msg.str());
    }
    return value.real();
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const EigenSystem eig_sigma = hermitian_eig(HermitianOperator(sigma.matrix()));
    if (eig_sigma.eigenvalues.front() <= 0.0) {
        throw InvalidStateError("relative_entropy: sigma must be full rank");
    }
    const Matrix log_sigma =
        apply_spectral_function(eig_sigma, [](double x) { return std::log(x); });
    const Complex cross = (rho.matrix() * log_sigma).trace();
    return -von_neumann_entropy(rho) - cross.real();
}

}  // namespace vqt::qcore
