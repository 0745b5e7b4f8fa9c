#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdint/operators.hpp"

namespace qdint {

// One period of the dressed ladder: eigenstates of atom + drive for a single
// manifold, with coefficients over the stated bare basis |i, N-n>. The
// manifold index N is symbolic; coefficients and energies repeat from one
// manifold to the next in the strong-field regime treated here.
struct DressedState {
    std::string label;          // e.g. "+,N"
    ComplexVector coefficients; // over basis_labels
    double energy;              // offset from N * omega_L, rate units
};

struct DressedManifold {
    std::vector<DressedState> states; // sorted by descending energy
    std::vector<std::string> basis_labels;
    double alpha = 0.0;
    double beta = 0.0;
};

// Dipole moment and decay-weighted rate of one inter-manifold transition.
struct TransitionEntry {
    std::string from;
    std::string to;
    Vec3 moment;
    double rate;
};

struct TransitionTable {
    std::vector<TransitionEntry> entries;
};

// Superpositions induced by a resonant microwave coupling of the two upper
// levels: dipole moments (mu12 +- mu32)/sqrt(2) to the shared ground state.
std::pair<Vec3, Vec3> microwave_superposition(const Vec3& mu12, const Vec3& mu32);

// Strong drive on one leg of a Lambda system turns it into a V system with
// parallel dipole moments sin(phi) mu13 and cos(phi) mu13, split by the
// generalized Rabi frequency.
struct LambdaDressing {
    Vec3 mu_a1;
    Vec3 mu_b1;
    double splitting; // sqrt(rabi0^2 + deltaL^2)
    double cos2_phi;
};
LambdaDressing lambda_to_v_dressing(double rabi0, double delta_l, const Vec3& mu13);

// Two-level atom under a strong resonant field plus a weaker field detuned by
// the Rabi frequency: the strong field alone yields four transition moments
// +-mu/2; at zeroth order the second field builds doubly-dressed states whose
// moments at the bare frequency cancel exactly.
struct BichromaticDressed {
    double singly_dressed[2][2];   // factors of mu for mu_{ij,N}
    double doubly_omega0_plus;     // same-branch moment, zero
    double doubly_omega0_minus;    // same-branch moment, zero
    double degenerate_correlation; // <sigma_ii+ sigma_jj->, i != j: zero
};
BichromaticDressed bichromatic_dressed();

// V system driven from an auxiliary level, tuned midway between the uppers.
DressedManifold aux_level_manifold(double rabi, double delta);
TransitionTable aux_level_transition_moments(const DressedManifold& m, const Vec3& mu12,
                                             const Vec3& mu32, double gamma1 = 1.0,
                                             double gamma2 = 1.0);

// V system with the drive on one transition only. At delta = rabi/2 the
// degenerate dressed pair is re-expressed in the decay-diagonalizing
// symmetric/antisymmetric basis.
DressedManifold single_drive_manifold(double rabi, double delta, double gamma1, double gamma2);
TransitionTable single_drive_transition_moments(const DressedManifold& m, const Vec3& mu12,
                                                const Vec3& mu32, double gamma1 = 1.0,
                                                double gamma2 = 1.0);

// V system with both transitions driven by one field tuned midway.
DressedManifold both_drive_manifold(double rabi, double delta);
// Moments touching |0,N>, for |mu13| = |mu23| = mu at mutual angle theta.
TransitionTable both_drive_transition_moments(const DressedManifold& m, double mu, double theta,
                                              double gamma = 1.0);

// Driven Lambda system; returns the manifold plus the moments touching
// |0,N> (all inbound vanish, outbound go as +-alpha mu).
struct LambdaManifoldResult {
    DressedManifold manifold;
    TransitionTable table;
};
LambdaManifoldResult lambda_manifold(double rabi, double delta, double gamma1 = 1.0,
                                     double gamma2 = 1.0, double mu = 1.0);

enum class StateClass { Dark, Trapping, Decoupled, Ordinary };

const char* state_class_name(StateClass c);

// Classify each state appearing in the table:
//   trapping:  inbound moments present and nonzero, all outbound zero
//   decoupled: inbound and outbound present but all zero
//   dark:      all outbound zero, no inbound information in the table
//   ordinary:  anything else
// Zero means below 1e-10 of the largest moment in the table, which makes the
// labels invariant under a global rescaling of the dipoles.
std::vector<std::pair<std::string, StateClass>> classify_states(const TransitionTable& t);

} // namespace qdint
