#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "magnomech/fock.hpp"
#include "magnomech/hamiltonians.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

namespace detail {

inline double checked_denominator(double value, const char* name) {
    if (std::abs(value) < 1e-9)
        throw DegenerateDetuningError(std::string("perturbative denominator vanishes: ") + name);
    return value;
}

} // namespace detail

struct EnergyShifts {
    double eps1 = 0.0;  // shift of |nlk>
    double eps2 = 0.0;  // shift of |(n-1)l(k+1)>
};

/// Second-order energy shifts of the near-degenerate pair
/// |nlk> and |(n-1)l(k+1)>:
///   ε1 = (n-l) g²/(Δa-Δm) + (k-l) G²/(ωb-Δm) - (l+k+1) G²/(Δm+ωb)
///   ε2 = (n-l-1) g²/(Δa-Δm) + (k-l+1) G²/(ωb-Δm) - (k+l+2) G²/(Δm+ωb)
inline EnergyShifts energy_shifts(const SystemParams& params, int n, int l, int k) {
    const double g2 = params.g() * params.g();
    const double G2 = params.G() * params.G();
    const double dam = detail::checked_denominator(params.delta_a() - params.delta_m(), "delta_a - delta_m");
    const double dbm = detail::checked_denominator(params.omega_b - params.delta_m(), "omega_b - delta_m");
    const double dbp = detail::checked_denominator(params.omega_b + params.delta_m(), "omega_b + delta_m");

    EnergyShifts s;
    s.eps1 = (n - l) * g2 / dam + (k - l) * G2 / dbm - (l + k + 1) * G2 / dbp;
    s.eps2 = (n - l - 1) * g2 / dam + (k - l + 1) * G2 / dbm - (k + l + 2) * G2 / dbp;
    return s;
}

/// Fock-state-independent offset of the avoided-crossing point from
/// Δa = ωb:  δ = (G²-g²)/(ωb-Δm) - G²/(ωb+Δm).
inline double crossing_shift(const SystemParams& params) {
    const double g2 = params.g() * params.g();
    const double G2 = params.G() * params.G();
    const double dbm = detail::checked_denominator(params.omega_b - params.delta_m(), "omega_b - delta_m");
    const double dbp = detail::checked_denominator(params.omega_b + params.delta_m(), "omega_b + delta_m");
    return (G2 - g2) / dbm - G2 / dbp;
}

/// Fock-state-independent effective photon-phonon coupling
/// G̃ = G g / (ωb - Δm).
inline double effective_coupling(const SystemParams& params) {
    const double dbm = detail::checked_denominator(params.omega_b - params.delta_m(), "omega_b - delta_m");
    return params.G() * params.g() / dbm;
}

/// Pair coupling for |nlk> <-> |(n-1)l(k+1)>: g_eff = sqrt(n(k+1)) G̃.
inline double effective_coupling(const SystemParams& params, int n, int k) {
    if (n < 1 || k < 0) throw InvalidArgumentError("pair coupling needs n >= 1, k >= 0");
    return std::sqrt(double(n) * double(k + 1)) * effective_coupling(params);
}

/// End-to-end conversion amplitude <00N| exp(-i H_block t) |N00> for the
/// N-exciton block: A(t) = [-i sin(G̃ t)]^N.
inline Complex transfer_amplitude(int n_excitons, double gtilde, double t) {
    if (n_excitons < 1) throw InvalidArgumentError("exciton number must be >= 1");
    Complex a(1.0, 0.0);
    const Complex factor = -imag_unit * std::sin(gtilde * t);
    for (int j = 0; j < n_excitons; ++j) a *= factor;
    return a;
}

/// Result of a numerical avoided-crossing scan.
struct CrossingResult {
    double delta_num = 0.0;   // crossing offset Δa* - ωb, units ωb
    double gtilde_num = 0.0;  // half the minimal gap of the tracked branches
    std::array<int, 2> branch_indices{0, 0};

    void validate(double sane_offset = 0.5) const {
        if (!(gtilde_num > 0.0)) throw ContractViolationError("crossing gap must be positive");
        if (!(std::abs(delta_num) < sane_offset))
            throw ContractViolationError("crossing offset outside the sane window");
    }
};

struct ScanOptions {
    double overlap_threshold = 0.5;  // squared-overlap floor for identification
    double refine_tol = 1e-6;        // golden-section tolerance on Δa, units ωb
};

namespace detail {

struct TrackedPoint {
    Eigen::VectorXd values;
    Matrix vectors;
    std::array<int, 2> branches{0, 0};
};

/// Assign two distinct eigenbranches that maximize overlap with the two
/// reference vectors; checks the better of the two pairings.
inline std::array<int, 2> assign_branches(const Matrix& vectors, const Vector& ref0,
                                          const Vector& ref1, double floor_sq,
                                          const char* stage) {
    const int dim = static_cast<int>(vectors.cols());
    int best0 = 0, best1 = 0;
    double w0 = -1.0, w1 = -1.0;
    for (int i = 0; i < dim; ++i) {
        const double o0 = std::norm(ref0.dot(vectors.col(i)));
        const double o1 = std::norm(ref1.dot(vectors.col(i)));
        if (o0 > w0) { w0 = o0; best0 = i; }
        if (o1 > w1) { w1 = o1; best1 = i; }
    }
    if (best0 == best1) {
        // Tie inside the crossing window; hand the weaker claim its runner-up.
        int runner0 = -1, runner1 = -1;
        double r0 = -1.0, r1 = -1.0;
        for (int i = 0; i < dim; ++i) {
            if (i == best0) continue;
            const double o0 = std::norm(ref0.dot(vectors.col(i)));
            const double o1 = std::norm(ref1.dot(vectors.col(i)));
            if (o0 > r0) { r0 = o0; runner0 = i; }
            if (o1 > r1) { r1 = o1; runner1 = i; }
        }
        if (w0 * r1 >= w1 * r0) { best1 = runner1; w1 = r1; }
        else { best0 = runner0; w0 = r0; }
    }
    if (std::min(w0, w1) < floor_sq)
        throw IdentificationError(std::string("branch-tracking overlap fell below threshold during ") + stage);
    return {best0, best1};
}

} // namespace detail

/// Locate the avoided crossing of the full linearized Hamiltonian as Δa
/// sweeps across the grid. The first and last basis states of the subspace
/// are tracked adiabatically (initial assignment by bare-state overlap,
/// continuation by previous-eigenvector overlap); the gap minimum is refined
/// by golden-section search.
inline CrossingResult scan_crossing(const SystemParams& params,
                                    const std::vector<double>& delta_a_grid,
                                    const SubspaceSpec& subspace, const FockConfig& config,
                                    const ScanOptions& opts = {}) {
    if (delta_a_grid.size() < 3) throw BracketError("scan grid needs at least three points");
    for (size_t i = 1; i < delta_a_grid.size(); ++i)
        if (delta_a_grid[i] <= delta_a_grid[i - 1])
            throw InvalidArgumentError("scan grid must be strictly ascending");
    subspace.validate();
    detail::require_three_modes(config);

    const auto& first = subspace.basis.front();
    const auto& last = subspace.basis.back();
    const Vector bare0 = StateVector::basis(config, {first[0], first[1], first[2]}).amplitudes;
    const Vector bare1 = StateVector::basis(config, {last[0], last[1], last[2]}).amplitudes;

    auto eig_at = [&](double x) {
        return hermitian_eigs(build_linearized(params.with_delta_a(x), config));
    };

    const size_t npts = delta_a_grid.size();
    std::vector<double> gap(npts);
    std::vector<Vector> tracked0(npts), tracked1(npts);

    for (size_t p = 0; p < npts; ++p) {
        const EigenSystem es = eig_at(delta_a_grid[p]);
        const auto branches =
            p == 0 ? detail::assign_branches(es.vectors, bare0, bare1,
                                             opts.overlap_threshold, "initial identification")
                   : detail::assign_branches(es.vectors, tracked0[p - 1], tracked1[p - 1],
                                             opts.overlap_threshold, "continuation");
        tracked0[p] = es.vectors.col(branches[0]);
        tracked1[p] = es.vectors.col(branches[1]);
        gap[p] = std::abs(es.values(branches[0]) - es.values(branches[1]));
    }

    const size_t m = static_cast<size_t>(
        std::min_element(gap.begin(), gap.end()) - gap.begin());
    if (m == 0 || m + 1 == npts)
        throw BracketError("gap minimum sits on the grid boundary; widen the scan");

    // References for identifying the pair inside the refinement bracket.
    const Vector ref0 = tracked0[m];
    const Vector ref1 = tracked1[m];

    std::array<int, 2> final_branches{0, 0};
    auto gap_at = [&](double x) {
        const EigenSystem es = eig_at(x);
        const auto idx = detail::assign_branches(es.vectors, ref0, ref1, 0.0, "refinement");
        final_branches = idx;
        return std::abs(es.values(idx[0]) - es.values(idx[1]));
    };

    // Golden-section minimization on [grid[m-1], grid[m+1]].
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = delta_a_grid[m - 1], b = delta_a_grid[m + 1];
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = gap_at(c), fd = gap_at(d);
    while (b - a > opts.refine_tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = gap_at(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = gap_at(d);
        }
    }
    const double x_star = 0.5 * (a + b);
    const double min_gap = gap_at(x_star);

    CrossingResult result;
    result.delta_num = x_star - params.omega_b;
    result.gtilde_num = 0.5 * min_gap;
    result.branch_indices = final_branches;
    result.validate();
    return result;
}

} // namespace magnomech
