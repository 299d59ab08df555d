#pragma once

// Dense complex linear algebra for few-qubit systems. Everything is written
// for n x n, but only n = 4 (two qubits) is exercised by the rest of the code.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace vqt::qcore {

using Complex = std::complex<double>;

/// Tolerances used by validation and by the eigensolver.
struct NumericPolicy {
    double hermitian_tol = 1e-12;
    double trace_tol = 1e-12;
    double norm_tol = 1e-12;
    double negative_eigenvalue_tol = 1e-10;
    double imaginary_residue_tol = 1e-10;
    double jacobi_off_diagonal_tol = 1e-15;
    int jacobi_max_sweeps = 100;
};

const NumericPolicy& default_policy();

/// Square complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t dim);
    static Matrix diagonal(std::span<const double> entries);

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    Matrix adjoint() const;
    Complex trace() const;
    bool is_hermitian(double tol) const;
    double max_abs_diff(const Matrix& other) const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(Complex scale);

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix lhs, Complex scale) { return lhs *= scale; }
    friend Matrix operator*(Complex scale, Matrix rhs) { return rhs *= scale; }
    friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Tensor product a (x) b; a acts on the more significant qubit.
Matrix kron(const Matrix& a, const Matrix& b);

/// Normalized pure state. Index i encodes the computational basis state with
/// qubit 0 as the most significant bit: |00>, |01>, |10>, |11>.
class StateVector {
public:
    explicit StateVector(std::vector<Complex> amplitudes,
                         const NumericPolicy& policy = default_policy());

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }

private:
    std::vector<Complex> amplitudes_;
};

Complex inner(const StateVector& bra, const StateVector& ket);
StateVector apply(const Matrix& unitary, const StateVector& state);
Matrix projector(const StateVector& state);

/// Hermitian matrix (energies in Kelvin with k_B = 1 where it is a Hamiltonian).
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries, const NumericPolicy& policy = default_policy());

    std::size_t dim() const { return entries_.dim(); }
    const Matrix& matrix() const { return entries_; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

private:
    Matrix entries_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries, const NumericPolicy& policy = default_policy());

    static DensityMatrix pure(const StateVector& state);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const { return entries_.dim(); }
    const Matrix& matrix() const { return entries_; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

private:
    Matrix entries_;
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    std::vector<StateVector> eigenvectors;

    Matrix reconstruct() const;
};

/// Cyclic complex Jacobi diagonalization.
EigenSystem hermitian_eig(const HermitianOperator& op, const NumericPolicy& policy = default_policy());

/// f(A) = sum_i f(lambda_i) |v_i><v_i|.
Matrix apply_spectral_function(const EigenSystem& eig, const std::function<double(double)>& f);

/// exp(scale * op).
HermitianOperator matrix_exp_hermitian(const HermitianOperator& op, double scale);

/// -tr(rho ln rho) in nats.
double von_neumann_entropy(const DensityMatrix& rho, const NumericPolicy& policy = default_policy());

/// Root (amplitude) Uhlmann fidelity tr sqrt(sqrt(a) b sqrt(a)); |<psi|phi>| on pure states.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// tr(rho op). Throws NumericConsistencyError if the imaginary residue is too large.
double expectation(const HermitianOperator& op, const DensityMatrix& rho,
                   const NumericPolicy& policy = default_policy());

/// Quantum relative entropy tr(rho ln rho) - tr(rho ln sigma). Requires sigma full rank.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace vqt::qcore
