#pragma once

#include <array>
#include <string>
#include <vector>

#include "qdint/matrix.hpp"

namespace qdint {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);
Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);

enum class SchemeKind { TwoLevel, SingleAtomV, SingleAtomLambda, TwoAtom };

struct Level {
    std::string name;
    double energy; // angular frequency units
};

// One dipole-allowed decay channel |upper> -> |lower>.
struct Transition {
    std::string upper;
    std::string lower;
    Vec3 dipole{1.0, 0.0, 0.0};
    double gamma = 1.0; // spontaneous decay rate
};

// The bare system: named levels plus its decaying transitions. For the
// TwoAtom kind the levels are the per-atom levels (g1,e1,g2,e2) and the
// Hilbert space is their product, ordered |g1g2>,|g1e2>,|e1g2>,|e1e2>.
struct LevelScheme {
    SchemeKind kind = SchemeKind::TwoLevel;
    std::vector<Level> levels;
    std::vector<Transition> transitions;
    bool has_auxiliary = false; // V scheme with a non-decaying drive level |b>

    std::size_t dim() const;
    std::size_t level_index(const std::string& name) const;
    double level_energy(const std::string& name) const;
    double transition_frequency(std::size_t t) const;

    // S_t^- over the scheme's Hilbert space.
    ComplexMatrix lowering_operator(std::size_t t) const;

    std::vector<std::string> basis_labels() const;

    void validate() const;
};

// omega0 is the optical carrier; only detunings enter the dynamics, so its
// value is immaterial as long as it dwarfs the splittings.
LevelScheme make_two_level(double gamma, double omega0 = 1000.0);
// V system: upper |1>,|3>, ground |2>; delta = omega1 - omega2 between the
// two transition frequencies.
LevelScheme make_v_scheme(double gamma1, double gamma2, double delta, Vec3 mu12 = {1, 0, 0},
                          Vec3 mu32 = {1, 0, 0}, double omega0 = 1000.0);
// Lambda system: grounds |1>,|2>, upper |3>; delta = omega1 - omega2.
LevelScheme make_lambda_scheme(double gamma1, double gamma2, double delta, Vec3 mu31 = {1, 0, 0},
                               Vec3 mu32 = {1, 0, 0}, double omega0 = 1000.0);
// V system driven from an auxiliary level |b> below the uppers.
LevelScheme make_aux_v_scheme(double gamma1, double gamma2, double delta, double omega0 = 1000.0,
                              double omega_b = 500.0);
LevelScheme make_two_atom(double gamma1, double gamma2, double omega0 = 1000.0);

// Dissipative and coherent vacuum couplings between the two transitions.
struct CouplingCoefficients {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double gamma12 = 0.0;       // cross-damping
    double delta12_minus = 0.0; // S+S- channel shift
    double delta12_plus = 0.0;  // S-S+ channel shift
    double omega12 = 0.0;       // dipole-dipole interaction (two atoms)

    // interference parameter p = Gamma12 / sqrt(Gamma1 Gamma2)
    double p() const;
    void validate() const;

    static CouplingCoefficients independent(double gamma1, double gamma2);
    static CouplingCoefficients explicit_coupling(double gamma1, double gamma2, double gamma12,
                                                  double d12_minus = 0.0, double d12_plus = 0.0,
                                                  double omega12 = 0.0);
};

struct DriveField {
    enum class Target { None, Transition1, Transition2, Both, AuxiliaryLevel };

    std::vector<double> rabi; // one entry per driven transition
    double frequency = 0.0;   // omega_L
    double phase = 0.0;
    Target target = Target::None;

    static DriveField none();
    static DriveField single(Target which, double rabi, double frequency, double phase = 0.0);
    static DriveField both(double rabi1, double rabi2, double frequency, double phase = 0.0);
};

struct TwoAtomGeometry {
    Vec3 separation{1.0, 0.0, 0.0};   // r12, length units
    double wavenumber = 1.0;          // k0 = omega0 / c
    Vec3 dipole_direction{0.0, 0.0, 1.0};

    void validate() const;
};

enum class Frame { Lab, RotatingAtLaser };

// sqrt(G1 G2) cos(theta) for two transitions sharing an atom.
double cross_damping_single_atom(const Transition& t1, const Transition& t2);

// sqrt(G1 G2) cos(theta1) cos(theta2) against a preselected polarization axis.
double cross_damping_preselected(const Transition& t1, const Transition& t2,
                                 const Vec3& polarization_axis);

// Two-atom collective damping rate as a function of k0*r12 and the dipole
// orientation. The conventional prefactor is exposed; default 3/4.
double collective_damping(const TwoAtomGeometry& g, double gamma1, double gamma2,
                          double prefactor = 0.75);

// Retarded dipole-dipole interaction; diverges as k0*r12 -> 0.
double dipole_dipole_shift(const TwoAtomGeometry& g, double gamma1, double gamma2,
                           double prefactor = 0.75);

CouplingCoefficients couplings_from_geometry(const TwoAtomGeometry& g, double gamma1,
                                             double gamma2, double prefactor = 0.75);

// Decay rates of the symmetric/antisymmetric dipole superpositions
//   S_s = u S1 + v S2, S_a = v S1 - u S2, u,v = sqrt(G_i / (G1+G2)).
struct SuperpositionRates {
    double ss;
    double aa;
    double sa; // = as
};
SuperpositionRates superposition_rates(double gamma1, double gamma2, double gamma12);

// System + drive + vacuum-shift Hamiltonian over the scheme basis. In the
// rotating frame the diagonal carries the detunings and the generator is
// time independent; the lab frame is only supported without a drive.
ComplexMatrix build_hamiltonian(const LevelScheme& s, const DriveField& d,
                                const CouplingCoefficients& c, Frame frame);

// One term of the double-sum damping structure
//   sum_ij Gij/2 (2 Sj- rho Si+ - Si+ Sj- rho - rho Si+ Sj-).
struct DissipatorTerm {
    std::size_t i;
    std::size_t j;
    double gamma_ij;
    ComplexMatrix op_i_plus;
    ComplexMatrix op_j_minus;
};
std::vector<DissipatorTerm> build_dissipator_coefficients(const LevelScheme& s,
                                                          const CouplingCoefficients& c);

// Second-order transition probability |g> -> |f> through two intermediate
// states in an anisotropic vacuum described by the tensor C.
double anisotropic_transition_probability(const std::array<Vec3, 2>& final_dipoles,
                                          const std::array<double, 2>& rabis,
                                          const std::array<double, 2>& detunings,
                                          const std::array<std::array<double, 3>, 3>& c_tensor);

} // namespace qdint
