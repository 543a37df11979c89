#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "magnomech/environments.hpp"
#include "magnomech/errors.hpp"

namespace magnomech {

/// Time-sampled 2x2 Green's-function matrix U(t) of the photon-phonon pair,
/// rows and columns ordered (photon a, phonon b), plus the kernels and
/// coupling that produced it.
struct GreenTrajectory {
    TimeGrid grid;
    std::vector<Eigen::Matrix2cd> U;  // grid.n_samples() entries, U[0] = I
    CorrelationKernel kernel_a;
    CorrelationKernel kernel_b;
    double gtilde = 0.0;

    void validate(double bound_tol = 1e-6) const {
        if (U.empty() || !U.front().isIdentity(0.0))
            throw ContractViolationError("trajectory must start from the identity");
        for (const auto& u : U)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    if (std::abs(u(r, c)) > 1.0 + bound_tol)
                        throw ContractViolationError("Green's-function entry exceeds unit bound");
    }
};

struct DysonOptions {
    double divergence_limit = 1.05;  // any |U_ij| beyond this aborts the solve
};

namespace detail {

/// Per-channel kernel view on the solver grid: either sampled values with an
/// integer stride, or a local damping rate.
struct ChannelKernel {
    bool markovian = false;
    bool zero = false;
    double kappa = 0.0;          // energy decay rate of the Markovian channel
    std::vector<double> re, im;  // f at lags 0..steps on the solver grid

    static ChannelKernel prepare(const CorrelationKernel& kernel, const TimeGrid& grid) {
        ChannelKernel ck;
        if (kernel.is_markovian()) {
            ck.markovian = true;
            ck.kappa = kernel.markov_kappa();
            ck.zero = ck.kappa == 0.0;
            return ck;
        }
        const double ratio = grid.dt / kernel.grid.dt;
        const int stride = static_cast<int>(std::lround(ratio));
        if (stride < 1 || std::abs(ratio - stride) > 1e-9 * std::max(1.0, std::abs(ratio)))
            throw GridError("kernel grid must be at least as fine as the solver grid");
        if (kernel.grid.t_end() < grid.t_end() - 1e-9 * grid.dt)
            throw GridError("kernel grid does not cover the solver span");
        const auto& v = kernel.samples();
        ck.re.resize(grid.steps + 1);
        ck.im.resize(grid.steps + 1);
        bool all_zero = true;
        for (int l = 0; l <= grid.steps; ++l) {
            const Complex f = v[static_cast<size_t>(l) * stride];
            ck.re[l] = f.real();
            ck.im[l] = f.imag();
            all_zero = all_zero && f == Complex(0.0, 0.0);
        }
        ck.zero = all_zero;
        return ck;
    }
};

/// acc_c += sum_{j=j0}^{i-1} f[i-j] * x_c[j] for two component streams
/// sharing one kernel.
inline void convolve_pair(const std::vector<double>& fre, const std::vector<double>& fim,
                          const std::vector<double>& x0re, const std::vector<double>& x0im,
                          const std::vector<double>& x1re, const std::vector<double>& x1im,
                          int i, int j0, Complex& acc0, Complex& acc1) {
    double a0r = 0.0, a0i = 0.0, a1r = 0.0, a1i = 0.0;
    const double* fr = fre.data();
    const double* fi = fim.data();
    const double* p0r = x0re.data();
    const double* p0i = x0im.data();
    const double* p1r = x1re.data();
    const double* p1i = x1im.data();
    for (int j = j0; j < i; ++j) {
        const double cr = fr[i - j];
        const double ci = fi[i - j];
        a0r += cr * p0r[j] - ci * p0i[j];
        a0i += cr * p0i[j] + ci * p0r[j];
        a1r += cr * p1r[j] - ci * p1i[j];
        a1i += cr * p1i[j] + ci * p1r[j];
    }
    acc0 += Complex(a0r, a0i);
    acc1 += Complex(a1r, a1i);
}

inline void convolve_one(const std::vector<double>& fre, const std::vector<double>& fim,
                         const std::vector<double>& xre, const std::vector<double>& xim,
                         int i, int j0, Complex& acc) {
    double ar = 0.0, ai = 0.0;
    const double* fr = fre.data();
    const double* fi = fim.data();
    const double* pr = xre.data();
    const double* pi_ = xim.data();
    for (int j = j0; j < i; ++j) {
        const double cr = fr[i - j];
        const double ci = fi[i - j];
        ar += cr * pr[j] - ci * pi_[j];
        ai += cr * pi_[j] + ci * pr[j];
    }
    acc += Complex(ar, ai);
}

} // namespace detail

/// Solve the Dyson equations
///   U̇(t) = −i M U(t) − ∫₀ᵗ F̄(t − τ) U(τ) dτ,   U(0) = I,
/// with M = [[0, G̃], [G̃, 0]] and F̄ = diag(f_a, f_b), by trapezoidal
/// convolution quadrature with an explicit predictor and one corrector pass.
/// Markovian channels replace their memory integral by the local damping
/// term −(κ/2) U on that row.
inline GreenTrajectory solve_dyson(double gtilde, const CorrelationKernel& kernel_a,
                                   const CorrelationKernel& kernel_b, const TimeGrid& grid,
                                   const DysonOptions& opts = {}) {
    const int n = grid.steps;
    const double dt = grid.dt;

    const auto ka = detail::ChannelKernel::prepare(kernel_a, grid);
    const auto kb = detail::ChannelKernel::prepare(kernel_b, grid);

    // Component order: 0 = U11, 1 = U12 (photon row); 2 = U21, 3 = U22.
    std::array<std::vector<double>, 4> ure, uim;
    for (auto& v : ure) v.assign(n + 1, 0.0);
    for (auto& v : uim) v.assign(n + 1, 0.0);
    ure[0][0] = 1.0;
    ure[3][0] = 1.0;

    // RHS applied to a trial value X at the current step, given the
    // history-only part P of the memory integral for each component.
    struct State { Complex c[4]; };
    auto rhs_from = [&](const State& x, const State& p) {
        State r;
        const Complex mi(0.0, -gtilde);
        r.c[0] = mi * x.c[2];
        r.c[1] = mi * x.c[3];
        r.c[2] = mi * x.c[0];
        r.c[3] = mi * x.c[1];
        if (ka.markovian) {
            r.c[0] -= 0.5 * ka.kappa * x.c[0];
            r.c[1] -= 0.5 * ka.kappa * x.c[1];
        } else if (!ka.zero) {
            const Complex f0(ka.re[0], ka.im[0]);
            r.c[0] -= p.c[0] + 0.5 * dt * f0 * x.c[0];
            r.c[1] -= p.c[1] + 0.5 * dt * f0 * x.c[1];
        }
        if (kb.markovian) {
            r.c[2] -= 0.5 * kb.kappa * x.c[2];
            r.c[3] -= 0.5 * kb.kappa * x.c[3];
        } else if (!kb.zero) {
            const Complex f0(kb.re[0], kb.im[0]);
            r.c[2] -= p.c[2] + 0.5 * dt * f0 * x.c[2];
            r.c[3] -= p.c[3] + 0.5 * dt * f0 * x.c[3];
        }
        return r;
    };

    auto state_at = [&](int i) {
        State s;
        for (int c = 0; c < 4; ++c) s.c[c] = Complex(ure[c][i], uim[c][i]);
        return s;
    };

    State prev_rhs = rhs_from(state_at(0), State{});  // memory integral vanishes at t = 0

    for (int i = 1; i <= n; ++i) {
        // History part of the trapezoidal memory integral at t_i:
        //   P = dt (f_i U_0 / 2 + sum_{j=1}^{i-1} f_{i-j} U_j).
        State p{};
        if (!ka.markovian && !ka.zero) {
            const Complex fi(ka.re[i], ka.im[i]);
            p.c[0] = 0.5 * fi * Complex(ure[0][0], uim[0][0]);
            p.c[1] = 0.5 * fi * Complex(ure[1][0], uim[1][0]);
            detail::convolve_pair(ka.re, ka.im, ure[0], uim[0], ure[1], uim[1], i, 1, p.c[0], p.c[1]);
            p.c[0] *= dt;
            p.c[1] *= dt;
        }
        if (!kb.markovian && !kb.zero) {
            const Complex fi(kb.re[i], kb.im[i]);
            p.c[2] = 0.5 * fi * Complex(ure[2][0], uim[2][0]);
            p.c[3] = 0.5 * fi * Complex(ure[3][0], uim[3][0]);
            detail::convolve_pair(kb.re, kb.im, ure[2], uim[2], ure[3], uim[3], i, 1, p.c[2], p.c[3]);
            p.c[2] *= dt;
            p.c[3] *= dt;
        }

        const State u_prev = state_at(i - 1);
        State pred;
        for (int c = 0; c < 4; ++c) pred.c[c] = u_prev.c[c] + dt * prev_rhs.c[c];
        const State rhs_pred = rhs_from(pred, p);

        State u_new;
        double max_abs = 0.0;
        for (int c = 0; c < 4; ++c) {
            u_new.c[c] = u_prev.c[c] + 0.5 * dt * (prev_rhs.c[c] + rhs_pred.c[c]);
            ure[c][i] = u_new.c[c].real();
            uim[c][i] = u_new.c[c].imag();
            max_abs = std::max(max_abs, std::abs(u_new.c[c]));
        }
        if (!(max_abs <= opts.divergence_limit))
            throw DivergenceError("Green's function left the unit ball; reduce the step size");

        prev_rhs = rhs_from(u_new, p);
    }

    GreenTrajectory traj;
    traj.grid = grid;
    traj.kernel_a = kernel_a;
    traj.kernel_b = kernel_b;
    traj.gtilde = gtilde;
    traj.U.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        Eigen::Matrix2cd u;
        u(0, 0) = Complex(ure[0][i], uim[0][i]);
        u(0, 1) = Complex(ure[1][i], uim[1][i]);
        u(1, 0) = Complex(ure[2][i], uim[2][i]);
        u(1, 1) = Complex(ure[3][i], uim[3][i]);
        traj.U[i] = u;
    }
    traj.U[0] = Eigen::Matrix2cd::Identity();
    return traj;
}

/// Transfer fidelity samples F(t) = |U21(t)|.
inline std::vector<double> transfer_fidelity(const GreenTrajectory& traj) {
    std::vector<double> f(traj.U.size());
    for (size_t i = 0; i < traj.U.size(); ++i) f[i] = std::abs(traj.U[i](1, 0));
    return f;
}

/// Commutator, occupation and sum-rule diagnostics of the phonon noise
/// channel V2.
struct NoiseChannelStats {
    std::vector<double> commutator;         // [V2, V2†](t)
    std::vector<double> occupation;         // <V2† V2>(t)
    std::vector<double> sum_rule_residual;  // |U21|² + |U22|² + [V2,V2†] − 1
};

namespace detail {

/// Growing-square evaluation of
///   Q(t_i) = ∫₀ᵗ∫₀ᵗ ψ(σ) f(σ' − σ) ψ*(σ') dσ dσ'
/// on the trajectory grid, using f(−x) = conj(f(x)). The square is summed
/// with trapezoidal weights in both directions, maintained incrementally:
/// each new sample adds its cross terms and promotes the previous endpoint
/// from half to full weight (its cross sum was cached the step before).
class ChannelCommutator {
public:
    ChannelCommutator(const ChannelKernel& kernel, double dt) : k_(kernel), dt_(dt) {}

    void push(Complex psi, std::vector<double>& q_out) {
        psire_.push_back(psi.real());
        psiim_.push_back(psi.imag());
        const int i = static_cast<int>(psire_.size()) - 1;
        if (k_.zero) {
            q_out.push_back(q_);
            return;
        }
        if (k_.markovian) {
            if (i > 0) {
                const double prev = psire_[i - 1] * psire_[i - 1] + psiim_[i - 1] * psiim_[i - 1];
                const double cur = std::norm(psi);
                q_ += k_.kappa * dt_ * 0.5 * (prev + cur);
            }
            q_out.push_back(q_);
            return;
        }
        if (i == 0) {
            q_out.push_back(0.0);
            prev_psi_ = psi;
            prev_cross_ = Complex(0.0, 0.0);
            return;
        }
        // Cross sum of the new endpoint against the weighted history
        // (weight 1/2 at j = 0, 1 elsewhere).
        Complex x{0.0, 0.0};
        convolve_one(k_.re, k_.im, psire_, psiim_, i, 0, x);
        x -= 0.5 * Complex(k_.re[i], k_.im[i]) * Complex(psire_[0], psiim_[0]);

        const double k0 = k_.re[0];
        double dq = (std::conj(psi) * x).real() + 0.25 * std::norm(psi) * k0;
        if (i == 1)
            dq += 0.25 * std::norm(prev_psi_) * k0;
        else
            dq += (std::conj(prev_psi_) * prev_cross_).real() + 0.75 * std::norm(prev_psi_) * k0;
        q_ += dt_ * dt_ * dq;
        q_out.push_back(q_);
        prev_psi_ = psi;
        prev_cross_ = x;
    }

private:
    const ChannelKernel& k_;
    double dt_ = 0.0;
    double q_ = 0.0;
    Complex prev_psi_{0.0, 0.0};
    Complex prev_cross_{0.0, 0.0};
    std::vector<double> psire_, psiim_;
};

} // namespace detail

/// Noise-channel statistics under vacuum photon input and a flat phonon
/// occupation nbar_b over the band. The commutator is evaluated in the time
/// domain from the same kernels that drove the solve, which keeps the
/// sum rule exact up to quadrature error.
inline NoiseChannelStats noise_stats(const GreenTrajectory& traj, const SpectralDensity& j_a,
                                     const SpectralDensity& j_b, double nbar_b) {
    if (nbar_b < 0.0) throw InvalidArgumentError("phonon occupation must be >= 0");
    if (variant_name(j_a) != variant_name(traj.kernel_a.source) ||
        variant_name(j_b) != variant_name(traj.kernel_b.source))
        throw InvalidArgumentError("spectral models do not match the trajectory's kernels");

    const auto ka = detail::ChannelKernel::prepare(traj.kernel_a, traj.grid);
    const auto kb = detail::ChannelKernel::prepare(traj.kernel_b, traj.grid);

    const size_t n = traj.U.size();
    NoiseChannelStats stats;
    stats.commutator.reserve(n);
    stats.occupation.reserve(n);
    stats.sum_rule_residual.reserve(n);

    std::vector<double> qa, qb;
    qa.reserve(n);
    qb.reserve(n);
    detail::ChannelCommutator ca(ka, traj.grid.dt), cb(kb, traj.grid.dt);
    for (size_t i = 0; i < n; ++i) {
        ca.push(traj.U[i](1, 0), qa);
        cb.push(traj.U[i](1, 1), qb);
    }
    for (size_t i = 0; i < n; ++i) {
        const double comm = qa[i] + qb[i];
        stats.commutator.push_back(comm);
        stats.occupation.push_back(nbar_b * qb[i]);
        const double row = std::norm(traj.U[i](1, 0)) + std::norm(traj.U[i](1, 1));
        stats.sum_rule_residual.push_back(row + comm - 1.0);
    }
    return stats;
}

/// Phonon-number expectation
///   <b†b>(t) = |U21|² n_a0 + |U22|² n_b0 + <V2†V2>(t).
inline std::vector<double> phonon_number(const GreenTrajectory& traj, double n_a0, double n_b0,
                                         const NoiseChannelStats& stats) {
    if (n_a0 < 0.0 || n_b0 < 0.0) throw InvalidArgumentError("initial occupations must be >= 0");
    if (stats.occupation.size() != traj.U.size())
        throw GridError("noise statistics were computed on a different grid");
    std::vector<double> nb(traj.U.size());
    for (size_t i = 0; i < traj.U.size(); ++i)
        nb[i] = std::norm(traj.U[i](1, 0)) * n_a0 + std::norm(traj.U[i](1, 1)) * n_b0 +
                stats.occupation[i];
    return nb;
}

} // namespace magnomech
