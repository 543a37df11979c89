#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "magnomech/fock.hpp"

namespace magnomech {

/// Open-system state: Hermitian, unit trace, positive semidefinite
/// (within the stated tolerances).
struct DensityMatrix {
    Matrix entries;

    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m) : entries(std::move(m)) {
        if (entries.rows() != entries.cols())
            throw InvalidDimensionError("density matrix must be square");
    }

    static DensityMatrix pure(const StateVector& psi) {
        return DensityMatrix(psi.amplitudes * psi.amplitudes.adjoint());
    }

    static DensityMatrix maximally_mixed(int dim) {
        if (dim < 1) throw InvalidDimensionError("dimension must be positive");
        return DensityMatrix(Matrix::Identity(dim, dim) / double(dim));
    }

    int dim() const { return static_cast<int>(entries.rows()); }

    double trace_real() const { return entries.trace().real(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(
            Matrix(0.5 * (entries + entries.adjoint())), Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }

    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                  double eig_floor = -1e-8) const {
        if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
            throw ContractViolationError("density matrix is not Hermitian within tolerance");
        if (std::abs(entries.trace() - Complex(1.0, 0.0)) > trace_tol)
            throw ContractViolationError("density matrix trace deviates from 1");
        if (min_eigenvalue() < eig_floor)
            throw ContractViolationError("density matrix has a negative eigenvalue beyond tolerance");
    }
};

/// Relaxation rates for the cavity, magnon and phonon channels.
struct DecayRates {
    double kappa_a = 0.0;
    double kappa_m = 0.0;
    double gamma_b = 0.0;

    void validate() const {
        if (kappa_a < 0.0 || kappa_m < 0.0 || gamma_b < 0.0)
            throw InvalidArgumentError("decay rates must be nonnegative");
    }
};

/// Lindblad superoperator L[O]ρ = (2 O ρ O† − O†O ρ − ρ O†O) / 2.
inline Matrix dissipator(const OperatorMatrix& op, const DensityMatrix& rho) {
    if (op.dim() != rho.dim())
        throw InvalidDimensionError("dissipator operator and state dimensions differ");
    const Matrix& o = op.entries;
    const Matrix q = o.adjoint() * o;
    return o * rho.entries * o.adjoint() - 0.5 * (q * rho.entries + rho.entries * q);
}

struct CollapseChannel {
    OperatorMatrix op;
    double rate = 0.0;
};

struct MasterOptions {
    double dt = 1e-2;               // fixed integration step, units 1/omega_b
    double trace_drift_limit = 1e-6;
    bool validate_samples = true;
};

/// Fixed-step fourth-order propagation of
///   ρ̇ = −i[H, ρ] + Σ κ_i L[O_i] ρ
/// sampled at the requested times. Throws StepSizeError when the trace
/// drifts beyond the limit (reduce dt).
inline std::vector<DensityMatrix> evolve_master(const OperatorMatrix& hamiltonian,
                                                const std::vector<CollapseChannel>& collapse,
                                                const DensityMatrix& rho0,
                                                const std::vector<double>& t_samples,
                                                const MasterOptions& opts = {}) {
    const int dim = hamiltonian.dim();
    if (rho0.dim() != dim)
        throw InvalidDimensionError("initial state dimension does not match the Hamiltonian");
    for (const auto& c : collapse) {
        if (c.op.dim() != dim)
            throw InvalidDimensionError("collapse operator dimension does not match the Hamiltonian");
        if (c.rate < 0.0) throw InvalidArgumentError("collapse rates must be nonnegative");
    }
    if (opts.dt <= 0.0) throw InvalidArgumentError("integration step must be positive");
    for (size_t i = 0; i < t_samples.size(); ++i) {
        if (t_samples[i] < 0.0 || (i > 0 && t_samples[i] < t_samples[i - 1]))
            throw InvalidArgumentError("sample times must be ascending and nonnegative");
    }
    rho0.validate();

    // Collapse operators are typically embedded ladder operators, hence very
    // sparse; keep them in sparse form so each dissipator costs O(dim^2).
    using Sparse = Eigen::SparseMatrix<Complex>;
    struct Channel { Sparse o, oadj, q; double rate; };
    std::vector<Channel> active;
    for (const auto& c : collapse)
        if (c.rate > 0.0) {
            Sparse o = c.op.entries.sparseView(1.0, 0.0);
            Sparse oadj = Sparse(o.adjoint());
            Sparse q = Sparse(oadj * o);
            active.push_back({std::move(o), std::move(oadj), std::move(q), c.rate});
        }

    const Matrix& h = hamiltonian.entries;
    Matrix jump(dim, dim);
    auto liouville = [&](const Matrix& rho, Matrix& out) {
        out.noalias() = Complex(0.0, -1.0) * (h * rho - rho * h);
        for (const auto& ch : active) {
            jump.noalias() = ch.o * rho;
            out.noalias() += ch.rate * (jump * ch.oadj);
            out.noalias() -= (0.5 * ch.rate) * (ch.q * rho);
            out.noalias() -= (0.5 * ch.rate) * (rho * ch.q);
        }
    };

    std::vector<DensityMatrix> samples;
    samples.reserve(t_samples.size());

    Matrix rho = rho0.entries;
    Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);
    double t = 0.0;

    auto rk4_step = [&](double step) {
        liouville(rho, k1);
        stage = rho + (0.5 * step) * k1;
        liouville(stage, k2);
        stage = rho + (0.5 * step) * k2;
        liouville(stage, k3);
        stage = rho + step * k3;
        liouville(stage, k4);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += step;
        const double drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        if (!(drift <= opts.trace_drift_limit))
            throw StepSizeError("trace drift exceeded limit; reduce the integration step");
    };

    for (double target : t_samples) {
        while (t + opts.dt <= target + 1e-12 * std::max(1.0, target)) rk4_step(opts.dt);
        const double rem = target - t;
        if (rem > 1e-12) rk4_step(rem);
        DensityMatrix out(rho);
        if (opts.validate_samples) out.validate();
        samples.push_back(std::move(out));
    }
    return samples;
}

/// State fidelity F_s = sqrt(<φ|ρ|φ>).
inline double state_fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (rho.dim() != target.dim())
        throw InvalidDimensionError("state and density-matrix dimensions differ");
    const Complex v = target.amplitudes.dot(rho.entries * target.amplitudes);
    return std::sqrt(std::max(0.0, v.real()));
}

} // namespace magnomech
