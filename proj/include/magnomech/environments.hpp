#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "magnomech/errors.hpp"
#include "magnomech/fock.hpp"
#include "magnomech/quadrature.hpp"

namespace magnomech {

/// Ohmic-family spectral density J(ω) = η ω (ω/ω0)^(s-1) e^(-ω/ω0):
/// sub-Ohmic for s < 1, Ohmic for s = 1, super-Ohmic for s > 1.
struct Ohmic {
    double eta = 1e-4;    // coupling strength, units omega_b
    double omega0 = 5.0;  // high-frequency cutoff, units omega_b
    double s = 1.0;       // exponent, > 0
};

/// Band-limited power law J(ω) = C ω^k on [omega_min, omega_max], zero outside.
struct BandPowerLaw {
    double C = 1e-4;  // coupling coefficient, units omega_b^(1-k)
    double k = -1.0;  // exponent, near -1
    double omega_min = 0.1;
    double omega_max = 2.0;
};

/// Structure-free channel characterized by an energy decay rate; consumed as
/// a local damping term, never as a sampled kernel.
struct Markovian {
    double kappa = 0.0;
};

using SpectralDensity = std::variant<Ohmic, BandPowerLaw, Markovian>;

inline std::string variant_name(const SpectralDensity& model) {
    if (std::holds_alternative<Ohmic>(model)) return "ohmic";
    if (std::holds_alternative<BandPowerLaw>(model)) return "band_power_law";
    return "markovian";
}

/// J(ω) for ω >= 0. The Markovian variant carries no spectral shape.
inline double spectral_density(const SpectralDensity& model, double omega) {
    if (omega < 0.0) throw DomainError("spectral density is defined for omega >= 0");
    if (const auto* o = std::get_if<Ohmic>(&model)) {
        if (omega == 0.0) return 0.0;
        return o->eta * omega * std::pow(omega / o->omega0, o->s - 1.0) *
               std::exp(-omega / o->omega0);
    }
    if (const auto* b = std::get_if<BandPowerLaw>(&model)) {
        if (omega < b->omega_min || omega > b->omega_max) return 0.0;
        return b->C * std::pow(omega, b->k);
    }
    throw VariantError("the Markovian variant has no spectral density samples");
}

enum class RateConvention {
    HalfJ,  // κ = J(ω)/2
    PiJ,    // κ = π J(ω)
};

/// Markovian decay rate at the resonance frequency. For a Markovian variant
/// the stored rate is returned unchanged.
inline double markov_rate(const SpectralDensity& model, double omega_res,
                          RateConvention convention = RateConvention::HalfJ) {
    if (const auto* m = std::get_if<Markovian>(&model)) return m->kappa;
    if (omega_res <= 0.0) throw DomainError("resonance frequency must be positive");
    const double j = spectral_density(model, omega_res);
    return convention == RateConvention::HalfJ ? 0.5 * j : M_PI * j;
}

/// Bose-Einstein occupation 1/(e^(ω/T) − 1) in units with ħ = k_B = 1;
/// zero temperature gives zero.
inline double thermal_occupation(double omega, double temperature) {
    if (omega <= 0.0) throw DomainError("thermal occupation needs omega > 0");
    if (temperature < 0.0) throw DomainError("temperature must be nonnegative");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

/// Uniform time grid t_i = i dt, i = 0..steps.
struct TimeGrid {
    double dt = 5e-3;
    int steps = 0;

    TimeGrid() = default;
    TimeGrid(double step, int n) : dt(step), steps(n) {
        if (!(dt > 0.0) || steps < 1) throw GridError("time grid needs dt > 0 and at least one step");
    }

    static TimeGrid spanning(double t_end, double step) {
        if (!(t_end > 0.0) || !(step > 0.0)) throw GridError("time span and step must be positive");
        return TimeGrid(step, static_cast<int>(std::ceil(t_end / step - 1e-9)));
    }

    int n_samples() const { return steps + 1; }
    double t_end() const { return dt * steps; }
    double time(int i) const { return dt * i; }
};

/// Sampled memory kernel f(t) = ∫ dω J(ω) e^{-iωt} on a uniform grid, with
/// f(-t) = conj(f(t)) by convention. A Markovian source keeps no samples.
struct CorrelationKernel {
    SpectralDensity source;
    TimeGrid grid;
    std::vector<Complex> values;   // empty for the Markovian variant
    double shift_omega = 0.0;      // e^{-iωt} -> e^{-i(ω-ω_ref)t} when nonzero

    bool is_markovian() const { return std::holds_alternative<Markovian>(source); }

    double markov_kappa() const {
        if (const auto* m = std::get_if<Markovian>(&source)) return m->kappa;
        throw VariantError("kernel is not a Markovian channel");
    }

    const std::vector<Complex>& samples() const {
        if (is_markovian())
            throw VariantError("a Markovian channel has no sampled kernel");
        return values;
    }

    bool is_zero() const {
        if (is_markovian()) return markov_kappa() == 0.0;
        for (const auto& v : values)
            if (v != Complex(0.0, 0.0)) return false;
        return true;
    }
};

struct KernelOptions {
    int band_nodes = 2000;     // composite Gauss-Legendre nodes over a band
    double shift_omega = 0.0;  // optional rotating reference frequency
};

/// Build the time-domain kernel for a spectral model. The Ohmic family uses
/// the closed form f(t) = η Γ(s+1) ω0² (1 + i ω0 t)^{-(s+1)}; band-limited
/// power laws use composite Gauss-Legendre quadrature over the band.
inline CorrelationKernel correlation_kernel(const SpectralDensity& model, const TimeGrid& grid,
                                            const KernelOptions& opts = {}) {
    CorrelationKernel kernel;
    kernel.source = model;
    kernel.grid = grid;
    kernel.shift_omega = opts.shift_omega;
    if (std::holds_alternative<Markovian>(model)) return kernel;

    const int n = grid.n_samples();
    kernel.values.resize(n);

    if (const auto* o = std::get_if<Ohmic>(&model)) {
        if (o->s <= 0.0) throw InvalidArgumentError("Ohmic exponent must be positive");
        const double amp = o->eta * std::tgamma(o->s + 1.0) * o->omega0 * o->omega0;
        for (int i = 0; i < n; ++i) {
            const double t = grid.time(i);
            const Complex base(1.0, o->omega0 * t);
            Complex v = amp * std::pow(base, -(o->s + 1.0));
            if (opts.shift_omega != 0.0) v *= std::exp(imag_unit * (opts.shift_omega * t));
            kernel.values[i] = v;
        }
        return kernel;
    }

    const auto& b = std::get<BandPowerLaw>(model);
    if (b.omega_min <= 0.0 || b.omega_max <= b.omega_min)
        throw InvalidArgumentError("band edges must satisfy 0 < omega_min < omega_max");

    std::vector<double> x, w;
    quadrature::nodes_weights(b.omega_min, b.omega_max,
                              quadrature::panels_for_nodes(opts.band_nodes), x, w);
    const size_t nq = x.size();
    std::vector<double> jw(nq);
    for (size_t q = 0; q < nq; ++q) jw[q] = w[q] * b.C * std::pow(x[q], b.k);

    // Phase recurrence per node, renormalized periodically against drift.
    std::vector<Complex> phase(nq, Complex(1.0, 0.0)), step(nq);
    for (size_t q = 0; q < nq; ++q)
        step[q] = std::exp(Complex(0.0, -(x[q] - opts.shift_omega) * grid.dt));
    for (int i = 0; i < n; ++i) {
        Complex acc{0.0, 0.0};
        for (size_t q = 0; q < nq; ++q) acc += jw[q] * phase[q];
        kernel.values[i] = acc;
        for (size_t q = 0; q < nq; ++q) phase[q] *= step[q];
        if ((i & 0xfff) == 0xfff) {
            const double t_next = grid.time(i + 1);
            for (size_t q = 0; q < nq; ++q)
                phase[q] = std::exp(Complex(0.0, -(x[q] - opts.shift_omega) * t_next));
        }
    }
    return kernel;
}

} // namespace magnomech
