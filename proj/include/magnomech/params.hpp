#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "magnomech/errors.hpp"

namespace magnomech {

/// Physical parameters of the driven cavity-magnomechanical system. All
/// energies, rates and couplings are expressed in units of the phonon
/// frequency omega_b (set omega_b = 1 for desk-scale work).
///
/// The linearization amplitude M = |<m>| is a direct input; the effective
/// magnomechanical coupling is G = M * g_mb.
struct SystemParams {
    double omega_a = 1.0;   // photon frequency (or detuning when omega_d = 0)
    double omega_m = 1.7;   // magnon frequency
    double omega_b = 1.0;   // phonon frequency
    double omega_d = 0.0;   // drive frequency
    double g_ma = 0.1;      // photon-magnon coupling
    double g_mb = 0.1;      // bare magnomechanical coupling
    double Omega_d = 0.0;   // drive amplitude
    double M = 1.0;         // linearization amplitude |<m>|, >= 0
    double K = 0.0;         // Kerr coefficient

    double delta_a() const { return omega_a - omega_d; }
    double delta_m() const { return omega_m - omega_d; }
    double g() const { return g_ma; }
    double G() const { return M * g_mb; }

    /// Parameters specified directly by rotating-frame detunings and the
    /// two quadratic couplings.
    static SystemParams from_detunings(double delta_a, double delta_m, double g, double G,
                                       double omega_b = 1.0) {
        SystemParams p;
        p.omega_a = delta_a;
        p.omega_m = delta_m;
        p.omega_b = omega_b;
        p.omega_d = 0.0;
        p.g_ma = g;
        p.g_mb = G;
        p.M = 1.0;
        return p;
    }

    SystemParams with_delta_a(double delta_a) const {
        SystemParams p = *this;
        p.omega_a = delta_a + p.omega_d;
        return p;
    }

    /// Second-order treatment is trusted for g, G <= 0.15 omega_b with the
    /// magnon detuning well separated from the phonon frequency.
    bool perturbative_regime() const {
        const double cmax = std::max(std::abs(g()), std::abs(G()));
        return cmax <= 0.15 * omega_b + 1e-15 &&
               std::abs(omega_b - delta_m()) >= 3.0 * cmax;
    }

    void validate() const {
        if (omega_b <= 0.0) throw InvalidArgumentError("omega_b must be positive");
        if (M < 0.0) throw InvalidArgumentError("linearization amplitude M must be >= 0");
        if (std::abs(omega_b - delta_m()) <= 0.0)
            throw DegenerateDetuningError("omega_b - delta_m vanishes");
    }
};

/// A fixed-excitation conversion subspace. The basis is ordered by
/// descending photon number, {|N00>, |(N-1)01>, ..., |00N>}; the magnon
/// label is 0 for the standard conversion subspaces.
struct SubspaceSpec {
    enum class Kind { SingleExciton, DoubleExciton, NExciton };

    Kind kind = Kind::SingleExciton;
    int excitons = 1;
    std::vector<std::array<int, 3>> basis;  // (n, l, k) Fock labels

    static SubspaceSpec n_exciton(int n) {
        if (n < 1) throw InvalidArgumentError("exciton number must be >= 1");
        SubspaceSpec s;
        s.kind = n == 1 ? Kind::SingleExciton : (n == 2 ? Kind::DoubleExciton : Kind::NExciton);
        s.excitons = n;
        for (int j = 0; j <= n; ++j) s.basis.push_back({n - j, 0, j});
        return s;
    }

    static SubspaceSpec single_exciton() { return n_exciton(1); }
    static SubspaceSpec double_exciton() { return n_exciton(2); }

    void validate() const {
        if (basis.empty()) throw InvalidArgumentError("subspace basis is empty");
        const int total = basis.front()[0] + basis.front()[2];
        for (const auto& s : basis)
            if (s[0] + s[2] != total)
                throw InvalidArgumentError("subspace states must share the photon+phonon excitation number");
    }
};

} // namespace magnomech
