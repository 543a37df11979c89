#pragma once

#include <cmath>

#include "magnomech/fock.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

namespace detail {

inline void require_three_modes(const FockConfig& config) {
    if (config.n_modes() != 3)
        throw InvalidDimensionError("this builder needs a three-mode (photon, magnon, phonon) configuration");
}

} // namespace detail

/// Rotating-frame Hamiltonian of the driven system:
///   Δ_a a†a + Δ_m m†m + ω_b b†b + g_mb m†m (b + b†) + g_ma (a m† + a† m)
///   + iΩ_d (m† − m).
inline OperatorMatrix build_rotating(const SystemParams& params, const FockConfig& config) {
    detail::require_three_modes(config);
    params.validate();

    const Matrix a = embed(annihilation(config.dims[0]), 0, config).entries;
    const Matrix m = embed(annihilation(config.dims[1]), 1, config).entries;
    const Matrix b = embed(annihilation(config.dims[2]), 2, config).entries;
    const Matrix nm = m.adjoint() * m;

    Matrix h = params.delta_a() * (a.adjoint() * a) + params.delta_m() * nm +
               params.omega_b * (b.adjoint() * b) +
               params.g_mb * (nm * (b + b.adjoint())) +
               params.g_ma * (a * m.adjoint() + a.adjoint() * m) +
               imag_unit * params.Omega_d * (m.adjoint() - m);
    return OperatorMatrix(std::move(h), true);
}

/// Linearized Hamiltonian H0 + V with the drive absorbed into M:
///   H0 = Δ_a a†a + Δ_m m†m + ω_b b†b,
///   V  = G (m† + m)(b + b†) + g (a m† + a† m),  G = M g_mb.
/// Linear displacement terms are dropped; no steady-state solver is involved.
inline OperatorMatrix build_linearized(const SystemParams& params, const FockConfig& config) {
    detail::require_three_modes(config);
    params.validate();

    const Matrix a = embed(annihilation(config.dims[0]), 0, config).entries;
    const Matrix m = embed(annihilation(config.dims[1]), 1, config).entries;
    const Matrix b = embed(annihilation(config.dims[2]), 2, config).entries;

    Matrix h = params.delta_a() * (a.adjoint() * a) + params.delta_m() * (m.adjoint() * m) +
               params.omega_b * (b.adjoint() * b) +
               params.G() * ((m.adjoint() + m) * (b + b.adjoint())) +
               params.g() * (a * m.adjoint() + a.adjoint() * m);
    return OperatorMatrix(std::move(h), true);
}

/// Effective photon-phonon exchange G̃ (a b† + b a†) on a two-mode
/// (photon, phonon) space. Commutes with the total excitation number.
inline OperatorMatrix build_effective(double gtilde, const FockConfig& config_ab) {
    if (config_ab.n_modes() != 2)
        throw InvalidDimensionError("the effective model lives on a two-mode (photon, phonon) space");

    const Matrix a = embed(annihilation(config_ab.dims[0]), 0, config_ab).entries;
    const Matrix b = embed(annihilation(config_ab.dims[1]), 1, config_ab).entries;

    Matrix h = gtilde * (a * b.adjoint() + b * a.adjoint());
    return OperatorMatrix(std::move(h), true);
}

/// N-exciton block of the effective exchange on the basis
/// {|N00>, |(N-1)01>, ..., |00N>}: an (N+1)x(N+1) tridiagonal matrix with
/// off-diagonals G̃ sqrt(n(N+1-n)), n = 1..N. Equal to 2 G̃ S_x for a
/// fictitious spin S = N/2.
inline OperatorMatrix effective_block(int n_excitons, double gtilde) {
    if (n_excitons < 1) throw InvalidArgumentError("exciton number must be >= 1");
    const int dim = n_excitons + 1;
    Matrix h = Matrix::Zero(dim, dim);
    for (int n = 1; n <= n_excitons; ++n) {
        const double ln = std::sqrt(double(n) * double(n_excitons + 1 - n));
        h(n - 1, n) = gtilde * ln;
        h(n, n - 1) = gtilde * ln;
    }
    return OperatorMatrix(std::move(h), true);
}

/// Open-end XY chain with site-dependent couplings whose single-excitation
/// sector reproduces effective_block(N). The chain has N+1 sites indexed to
/// match {|N00>, ..., |00N>}; bond n carries (G̃ L_n / 2)(σx σx + σy σy)
/// with L_n = sqrt(n(N+1-n)).
inline OperatorMatrix spin_chain(int n_excitons, double gtilde, int dense_cap = 1 << 12) {
    if (n_excitons < 1) throw InvalidArgumentError("exciton number must be >= 1");
    const int sites = n_excitons + 1;
    const long dim = 1L << sites;
    if (dim > dense_cap)
        throw CapacityError("spin chain exceeds the dense storage cap");

    FockConfig chain(std::vector<int>(sites, 2));
    Matrix sx(2, 2), sy(2, 2);
    sx << 0, 1, 1, 0;
    sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    const OperatorMatrix ox(sx, true), oy(sy, true);

    Matrix h = Matrix::Zero(dim, dim);
    for (int n = 1; n <= n_excitons; ++n) {
        const double ln = std::sqrt(double(n) * double(n_excitons + 1 - n));
        const Matrix xn = embed(ox, n - 1, chain).entries;
        const Matrix xn1 = embed(ox, n, chain).entries;
        const Matrix yn = embed(oy, n - 1, chain).entries;
        const Matrix yn1 = embed(oy, n, chain).entries;
        h += (gtilde * ln / 2.0) * (xn * xn1 + yn * yn1);
    }
    return OperatorMatrix(std::move(h), true);
}

/// Kerr-modified magnon detuning: Δ̃_m = Δ_m + 2 K <m†m>. Downstream
/// perturbative formulas accept the modified detuning unchanged.
inline double kerr_detuning(const SystemParams& params, double magnon_occupation) {
    if (magnon_occupation < 0.0)
        throw InvalidArgumentError("magnon occupation must be >= 0");
    return params.delta_m() + 2.0 * params.K * magnon_occupation;
}

} // namespace magnomech
