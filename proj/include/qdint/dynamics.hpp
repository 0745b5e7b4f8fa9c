#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdint/numerics.hpp"
#include "qdint/operators.hpp"

namespace qdint {

// Physical state over a level basis. Construction validates Hermiticity,
// unit trace and positivity at the documented tolerances.
struct DensityMatrix {
    ComplexMatrix matrix;
    std::vector<std::string> basis_labels;

    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kPositivityTol = 1e-10;

    DensityMatrix() = default;
    DensityMatrix(ComplexMatrix m, std::vector<std::string> labels);

    static DensityMatrix pure(const ComplexVector& amplitudes,
                              std::vector<std::string> labels);
    static DensityMatrix level(const LevelScheme& s, const std::string& name);

    cplx operator()(std::size_t i, std::size_t j) const { return matrix(i, j); }
    std::size_t dim() const { return matrix.rows(); }

    double min_eigenvalue() const;
    void validate() const;
};

// Vectorized master-equation generator: d vec(rho)/dt = generator * vec(rho).
struct Liouvillian {
    ComplexMatrix generator; // d^2 x d^2
    std::vector<std::string> basis_labels;

    std::size_t dim() const { return basis_labels.size(); }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<DissipatorTerm>& terms,
                              std::vector<std::string> basis_labels);

// Convenience: Hamiltonian and dissipator straight from a scheme.
Liouvillian build_liouvillian(const LevelScheme& s, const DriveField& d,
                              const CouplingCoefficients& c, Frame frame);

// Propagate through the caller-supplied time grid (ascending, t >= 0) by
// per-step matrix exponentials; exact for a time-independent generator.
Trajectory evolve(const Liouvillian& l, const DensityMatrix& rho0,
                  const std::vector<double>& times);

// Stationary state. A one-dimensional kernel needs no initial state; a
// degenerate kernel is resolved by spectrally projecting rho0 onto it
// (the t -> infinity limit of exp(Lt) rho0).
DensityMatrix steady_state(const Liouvillian& l,
                           const std::optional<DensityMatrix>& rho0 = std::nullopt);

std::size_t steady_state_degeneracy(const Liouvillian& l);

// V-scheme conserved combination rho11 + rho33 - rho13 - rho31, one value
// per trajectory sample.
std::vector<double> constant_of_motion_alpha(const Trajectory& traj);

// Populations and coherence of the symmetric/antisymmetric superpositions
// (|1> +- |3>)/sqrt(2) of the V-scheme upper levels.
struct SuperpositionSample {
    double ss;
    double aa;
    double sa_re;
    double sa_im;
};
std::vector<SuperpositionSample> superposition_populations(const Trajectory& traj);

// Steady-state upper-level population of the coherently driven Lambda
// system with equal Rabi frequencies; the drive couples to the decay-rate
// weighted ground superposition. Returns 0 (to numerical precision) exactly
// at the coherent-coupling zero when p < 1.
struct CptResult {
    double rho33;
    double delta_c;          // residual coherent s-a coupling
    bool degenerate_kernel;  // p = 1 and delta_c = 0
};
CptResult cpt_upper_population(double gamma1, double gamma2, double rabi, double delta,
                               double delta12, double p, double delta_l = 0.0,
                               const std::optional<DensityMatrix>& rho0 = std::nullopt);

} // namespace qdint
