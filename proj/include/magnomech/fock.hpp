#pragma once

#include <complex>
#include <initializer_list>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "magnomech/errors.hpp"

namespace magnomech {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex imag_unit{0.0, 1.0};

/// Truncated multimode Fock-space layout. Mode order is fixed as
/// (photon a, magnon m, phonon b) for the three-mode configurations used
/// throughout; two-mode configurations are (photon a, phonon b).
struct FockConfig {
    std::vector<int> dims;

    FockConfig() = default;
    FockConfig(std::initializer_list<int> d) : dims(d) { check(); }
    explicit FockConfig(std::vector<int> d) : dims(std::move(d)) { check(); }

    static FockConfig three_mode(int da, int dm, int db) { return FockConfig{da, dm, db}; }
    static FockConfig two_mode(int da, int db) { return FockConfig{da, db}; }

    int n_modes() const { return static_cast<int>(dims.size()); }

    int total_dim() const {
        return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
    }

    /// Flat basis index of the occupation tuple; mode 0 is the slowest index.
    int index_of(const std::vector<int>& occ) const {
        if (static_cast<int>(occ.size()) != n_modes())
            throw InvalidDimensionError("occupation tuple rank does not match mode count");
        int idx = 0;
        for (int m = 0; m < n_modes(); ++m) {
            if (occ[m] < 0 || occ[m] >= dims[m])
                throw IndexError("occupation exceeds mode truncation");
            idx = idx * dims[m] + occ[m];
        }
        return idx;
    }

private:
    void check() const {
        if (dims.empty()) throw InvalidDimensionError("configuration needs at least one mode");
        for (int d : dims)
            if (d < 2) throw InvalidDimensionError("every mode dimension must be at least 2");
    }
};

/// Dense complex operator on a truncated Fock space. `hermitian_hint` records
/// that the producer guarantees Hermiticity to 1e-12 absolute.
struct OperatorMatrix {
    Matrix entries;
    bool hermitian_hint = false;

    OperatorMatrix() = default;
    explicit OperatorMatrix(Matrix m, bool hint = false) : entries(std::move(m)), hermitian_hint(hint) {
        if (entries.rows() != entries.cols())
            throw InvalidDimensionError("operator matrix must be square");
    }

    int dim() const { return static_cast<int>(entries.rows()); }

    double hermiticity_defect() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }

    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

    void require_hermitian(double tol = 1e-12) const {
        if (!hermitian_hint || !is_hermitian(tol))
            throw ContractViolationError("operator is not Hermitian within tolerance");
    }
};

/// Normalized state on a truncated Fock space.
struct StateVector {
    Vector amplitudes;

    StateVector() = default;
    explicit StateVector(Vector v) : amplitudes(std::move(v)) { normalize(); }

    int dim() const { return static_cast<int>(amplitudes.size()); }

    StateVector& normalize() {
        const double n = amplitudes.norm();
        if (n <= 0.0) throw InvalidArgumentError("cannot normalize the zero vector");
        amplitudes /= n;
        return *this;
    }

    static StateVector basis(const FockConfig& config, const std::vector<int>& occ) {
        Vector v = Vector::Zero(config.total_dim());
        v(config.index_of(occ)) = 1.0;
        return StateVector(std::move(v));
    }
};

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // orthonormal columns
};

/// Bosonic annihilation operator truncated to `dim` levels:
/// entries (n, n+1) = sqrt(n+1).
inline OperatorMatrix annihilation(int dim) {
    if (dim < 2) throw InvalidDimensionError("annihilation operator needs dim >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
    return OperatorMatrix(std::move(a));
}

inline OperatorMatrix identity_operator(int dim) {
    if (dim < 1) throw InvalidDimensionError("identity needs dim >= 1");
    return OperatorMatrix(Matrix::Identity(dim, dim), true);
}

/// Number operator a†a = diag(0, 1, ..., dim-1).
inline OperatorMatrix number_operator(int dim) {
    if (dim < 2) throw InvalidDimensionError("number operator needs dim >= 2");
    Matrix n = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) n(i, i) = double(i);
    return OperatorMatrix(std::move(n), true);
}

/// Kronecker embedding I ⊗ ... ⊗ op ⊗ ... ⊗ I with `op` at `mode_index`.
inline OperatorMatrix embed(const OperatorMatrix& op, int mode_index, const FockConfig& config) {
    if (mode_index < 0 || mode_index >= config.n_modes())
        throw IndexError("mode index out of range");
    if (op.dim() != config.dims[mode_index])
        throw InvalidDimensionError("operator dimension does not match mode truncation");

    int pre = 1, post = 1;
    for (int m = 0; m < mode_index; ++m) pre *= config.dims[m];
    for (int m = mode_index + 1; m < config.n_modes(); ++m) post *= config.dims[m];
    const int d = op.dim();

    Matrix out = Matrix::Zero(config.total_dim(), config.total_dim());
    for (int p = 0; p < pre; ++p)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Complex v = op.entries(i, j);
                if (v == Complex(0.0, 0.0)) continue;
                const int row0 = (p * d + i) * post;
                const int col0 = (p * d + j) * post;
                for (int s = 0; s < post; ++s) out(row0 + s, col0 + s) = v;
            }
    return OperatorMatrix(std::move(out), op.hermitian_hint);
}

/// Eigendecomposition of a Hermitian operator; eigenvalues ascending,
/// eigenvector columns orthonormal.
inline EigenSystem hermitian_eigs(const OperatorMatrix& op) {
    if (!op.is_hermitian(1e-12))
        throw ContractViolationError("hermitian_eigs requires a Hermitian operator");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries);
    if (solver.info() != Eigen::Success)
        throw Error("eigendecomposition failed to converge");
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

/// Unitary propagator exp(-i H t) for a Hermitian H, via eigendecomposition.
inline Matrix propagator(const OperatorMatrix& hamiltonian, double t) {
    const EigenSystem es = hermitian_eigs(hamiltonian);
    Vector phases(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        phases(i) = std::exp(Complex(0.0, -es.values(i) * t));
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

} // namespace magnomech
