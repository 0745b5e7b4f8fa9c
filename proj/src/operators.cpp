#include "qdint/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qdint {

double dot(const Vec3& a, const Vec3& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3& a)
{
    return std::sqrt(dot(a, a));
}

Vec3 normalized(const Vec3& a)
{
    const double n = norm(a);
    if (n == 0.0)
        throw ValidationError("cannot normalize a zero vector");
    return {a[0] / n, a[1] / n, a[2] / n};
}

Vec3 operator+(const Vec3& a, const Vec3& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Vec3 operator-(const Vec3& a, const Vec3& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 operator*(double s, const Vec3& a)
{
    return {s * a[0], s * a[1], s * a[2]};
}

std::size_t LevelScheme::dim() const
{
    return kind == SchemeKind::TwoAtom ? 4 : levels.size();
}

std::size_t LevelScheme::level_index(const std::string& name) const
{
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i].name == name)
            return i;
    throw ValidationError("unknown level name: " + name);
}

double LevelScheme::level_energy(const std::string& name) const
{
    return levels[level_index(name)].energy;
}

double LevelScheme::transition_frequency(std::size_t t) const
{
    const Transition& tr = transitions.at(t);
    return level_energy(tr.upper) - level_energy(tr.lower);
}

ComplexMatrix LevelScheme::lowering_operator(std::size_t t) const
{
    const Transition& tr = transitions.at(t);
    if (kind == SchemeKind::TwoAtom) {
        // product basis |g1g2>,|g1e2>,|e1g2>,|e1e2>
        ComplexMatrix s(4, 4);
        if (t == 0) {
            s(0, 2) = 1.0;
            s(1, 3) = 1.0;
        } else {
            s(0, 1) = 1.0;
            s(2, 3) = 1.0;
        }
        return s;
    }
    ComplexMatrix s(dim(), dim());
    s(level_index(tr.lower), level_index(tr.upper)) = 1.0;
    return s;
}

std::vector<std::string> LevelScheme::basis_labels() const
{
    if (kind == SchemeKind::TwoAtom)
        return {"g1g2", "g1e2", "e1g2", "e1e2"};
    std::vector<std::string> out;
    out.reserve(levels.size());
    for (const Level& l : levels)
        out.push_back(l.name);
    return out;
}

void LevelScheme::validate() const
{
    std::set<std::string> names;
    for (const Level& l : levels)
        if (!names.insert(l.name).second)
            throw ValidationError("duplicate level name: " + l.name);
    for (std::size_t t = 0; t < transitions.size(); ++t) {
        const Transition& tr = transitions[t];
        level_index(tr.upper);
        level_index(tr.lower);
        if (!(transition_frequency(t) > 0.0))
            throw ValidationError("transition frequency must be positive: " + tr.upper + "->" +
                                  tr.lower);
        if (tr.gamma < 0.0)
            throw ValidationError("negative decay rate on " + tr.upper + "->" + tr.lower);
        if (!std::isfinite(tr.dipole[0]) || !std::isfinite(tr.dipole[1]) ||
            !std::isfinite(tr.dipole[2]))
            throw ValidationError("non-finite dipole vector on " + tr.upper + "->" + tr.lower);
    }
}

LevelScheme make_two_level(double gamma, double omega0)
{
    LevelScheme s;
    s.kind = SchemeKind::TwoLevel;
    s.levels = {{"g", 0.0}, {"e", omega0}};
    s.transitions = {{"e", "g", {1, 0, 0}, gamma}};
    s.validate();
    return s;
}

LevelScheme make_v_scheme(double gamma1, double gamma2, double delta, Vec3 mu12, Vec3 mu32,
                          double omega0)
{
    LevelScheme s;
    s.kind = SchemeKind::SingleAtomV;
    s.levels = {{"1", omega0 + 0.5 * delta}, {"2", 0.0}, {"3", omega0 - 0.5 * delta}};
    s.transitions = {{"1", "2", mu12, gamma1}, {"3", "2", mu32, gamma2}};
    s.validate();
    return s;
}

LevelScheme make_lambda_scheme(double gamma1, double gamma2, double delta, Vec3 mu31, Vec3 mu32,
                               double omega0)
{
    LevelScheme s;
    s.kind = SchemeKind::SingleAtomLambda;
    // omega1 = E3 - E1, omega2 = E3 - E2, delta = omega1 - omega2
    s.levels = {{"1", -0.5 * delta}, {"2", 0.5 * delta}, {"3", omega0}};
    s.transitions = {{"3", "1", mu31, gamma1}, {"3", "2", mu32, gamma2}};
    s.validate();
    return s;
}

LevelScheme make_aux_v_scheme(double gamma1, double gamma2, double delta, double omega0,
                              double omega_b)
{
    // delta = omega_3b - omega_1b: a drive tuned midway between the uppers
    // sees |1> at -delta/2 and |3> at +delta/2
    LevelScheme s;
    s.kind = SchemeKind::SingleAtomV;
    s.has_auxiliary = true;
    s.levels = {{"1", omega0 - 0.5 * delta},
                {"2", 0.0},
                {"3", omega0 + 0.5 * delta},
                {"b", omega_b}};
    s.transitions = {{"1", "2", {1, 0, 0}, gamma1}, {"3", "2", {1, 0, 0}, gamma2}};
    s.validate();
    return s;
}

LevelScheme make_two_atom(double gamma1, double gamma2, double omega0)
{
    LevelScheme s;
    s.kind = SchemeKind::TwoAtom;
    s.levels = {{"g1", 0.0}, {"e1", omega0}, {"g2", 0.0}, {"e2", omega0}};
    s.transitions = {{"e1", "g1", {0, 0, 1}, gamma1}, {"e2", "g2", {0, 0, 1}, gamma2}};
    s.validate();
    return s;
}

double CouplingCoefficients::p() const
{
    const double denom = std::sqrt(gamma1 * gamma2);
    if (denom == 0.0)
        throw ValidationError("interference parameter undefined for a vanishing decay rate");
    return gamma12 / denom;
}

void CouplingCoefficients::validate() const
{
    if (gamma1 < 0.0 || gamma2 < 0.0)
        throw ValidationError("negative decay rate in coupling coefficients");
    const double bound = std::sqrt(gamma1 * gamma2);
    if (std::abs(gamma12) > bound * (1.0 + 1e-12) + 1e-300)
        throw ValidationError("cross-damping exceeds sqrt(Gamma1 Gamma2)");
}

CouplingCoefficients CouplingCoefficients::independent(double gamma1, double gamma2)
{
    CouplingCoefficients c;
    c.gamma1 = gamma1;
    c.gamma2 = gamma2;
    c.validate();
    return c;
}

CouplingCoefficients CouplingCoefficients::explicit_coupling(double gamma1, double gamma2,
                                                             double gamma12, double d12_minus,
                                                             double d12_plus, double omega12)
{
    CouplingCoefficients c;
    c.gamma1 = gamma1;
    c.gamma2 = gamma2;
    c.gamma12 = gamma12;
    c.delta12_minus = d12_minus;
    c.delta12_plus = d12_plus;
    c.omega12 = omega12;
    c.validate();
    return c;
}

DriveField DriveField::none()
{
    return DriveField{};
}

DriveField DriveField::single(Target which, double rabi, double frequency, double phase)
{
    DriveField d;
    d.target = which;
    d.rabi = {rabi};
    d.frequency = frequency;
    d.phase = phase;
    return d;
}

DriveField DriveField::both(double rabi1, double rabi2, double frequency, double phase)
{
    DriveField d;
    d.target = Target::Both;
    d.rabi = {rabi1, rabi2};
    d.frequency = frequency;
    d.phase = phase;
    return d;
}

void TwoAtomGeometry::validate() const
{
    if (!(norm(separation) > 0.0))
        throw ValidationError("two-atom separation must be positive");
    if (std::abs(norm(dipole_direction) - 1.0) > 1e-9)
        throw ValidationError("dipole direction must be a unit vector");
    if (!(wavenumber > 0.0))
        throw ValidationError("wavenumber must be positive");
}

double cross_damping_single_atom(const Transition& t1, const Transition& t2)
{
    const double n1 = norm(t1.dipole), n2 = norm(t2.dipole);
    if (n1 == 0.0 || n2 == 0.0)
        throw ValidationError("cross-damping undefined for a zero-length dipole");
    const double cos_theta = dot(t1.dipole, t2.dipole) / (n1 * n2);
    return std::sqrt(t1.gamma * t2.gamma) * cos_theta;
}

double cross_damping_preselected(const Transition& t1, const Transition& t2,
                                 const Vec3& polarization_axis)
{
    const double n1 = norm(t1.dipole), n2 = norm(t2.dipole), na = norm(polarization_axis);
    if (n1 == 0.0 || n2 == 0.0 || na == 0.0)
        throw ValidationError("cross-damping undefined for a zero-length input vector");
    const double c1 = dot(t1.dipole, polarization_axis) / (n1 * na);
    const double c2 = dot(t2.dipole, polarization_axis) / (n2 * na);
    return std::sqrt(t1.gamma * t2.gamma) * c1 * c2;
}

namespace {

// Shared angular structure of the two-atom vacuum couplings.
struct GeometryTerms {
    double x;        // k0 * r12
    double perp;     // 1 - (mu.r)^2
    double longit;   // 1 - 3 (mu.r)^2
};

GeometryTerms geometry_terms(const TwoAtomGeometry& g)
{
    g.validate();
    const double x = g.wavenumber * norm(g.separation);
    const double c = dot(normalized(g.separation), normalized(g.dipole_direction));
    return {x, 1.0 - c * c, 1.0 - 3.0 * c * c};
}

} // namespace

double collective_damping(const TwoAtomGeometry& g, double gamma1, double gamma2,
                          double prefactor)
{
    const GeometryTerms t = geometry_terms(g);
    const double x = t.x;
    const double far = std::sin(x) / x;
    const double near = std::cos(x) / (x * x) - std::sin(x) / (x * x * x);
    return prefactor * std::sqrt(gamma1 * gamma2) * (t.perp * far + t.longit * near);
}

double dipole_dipole_shift(const TwoAtomGeometry& g, double gamma1, double gamma2,
                           double prefactor)
{
    const GeometryTerms t = geometry_terms(g);
    const double x = t.x;
    if (x == 0.0)
        throw ValidationError("dipole-dipole shift diverges at zero separation");
    const double far = -std::cos(x) / x;
    const double near = std::sin(x) / (x * x) + std::cos(x) / (x * x * x);
    return prefactor * std::sqrt(gamma1 * gamma2) * (t.perp * far + t.longit * near);
}

CouplingCoefficients couplings_from_geometry(const TwoAtomGeometry& g, double gamma1,
                                             double gamma2, double prefactor)
{
    CouplingCoefficients c;
    c.gamma1 = gamma1;
    c.gamma2 = gamma2;
    c.gamma12 = collective_damping(g, gamma1, gamma2, prefactor);
    c.omega12 = dipole_dipole_shift(g, gamma1, gamma2, prefactor);
    // the printed 3/4 prefactor caps |Gamma12| at sqrt(G1 G2)/2, so the
    // Cauchy-Schwarz bound holds with margin
    c.validate();
    return c;
}

SuperpositionRates superposition_rates(double gamma1, double gamma2, double gamma12)
{
    const double sum = gamma1 + gamma2;
    if (sum <= 0.0)
        throw ValidationError("superposition rates undefined for Gamma1 + Gamma2 = 0");
    const double root = std::sqrt(gamma1 * gamma2);
    if (std::abs(gamma12) > root * (1.0 + 1e-12))
        throw ValidationError("cross-damping exceeds sqrt(Gamma1 Gamma2)");
    SuperpositionRates r{};
    r.ss = 0.5 * (gamma1 * gamma1 + gamma2 * gamma2 + 2.0 * gamma12 * root) / sum;
    r.aa = (root - gamma12) * root / sum;
    r.sa = 0.5 * (gamma1 - gamma2) * (root - gamma12) / sum;
    return r;
}

namespace {

void add_drive_term(ComplexMatrix& h, const ComplexMatrix& raise, double rabi, double phase)
{
    const cplx amp = -0.5 * rabi * std::exp(cplx(0.0, -phase));
    ComplexMatrix term = amp * raise;
    h += term + term.adjoint();
}

// Vacuum-induced coherent coupling between the two transitions; products that
// vanish for a given topology drop out automatically.
void add_vacuum_shift(ComplexMatrix& h, const LevelScheme& s, const CouplingCoefficients& c)
{
    if (s.transitions.size() < 2)
        return;
    if (c.delta12_minus == 0.0 && c.delta12_plus == 0.0)
        return;
    const ComplexMatrix s1m = s.lowering_operator(0);
    const ComplexMatrix s2m = s.lowering_operator(1);
    const ComplexMatrix s1p = s1m.adjoint();
    const ComplexMatrix s2p = s2m.adjoint();
    h += cplx(c.delta12_minus, 0.0) * (s1p * s2m + s2p * s1m);
    h += cplx(c.delta12_plus, 0.0) * (s1m * s2p + s2m * s1p);
}

} // namespace

ComplexMatrix build_hamiltonian(const LevelScheme& s, const DriveField& d,
                                const CouplingCoefficients& c, Frame frame)
{
    s.validate();
    c.validate();
    const std::size_t n = s.dim();
    ComplexMatrix h(n, n);

    if (frame == Frame::Lab) {
        if (d.target != DriveField::Target::None)
            throw ValidationError("lab-frame evolution is only supported without a drive");
        // interaction picture at the optical carrier: splittings survive,
        // the carrier itself drops out
        if (s.kind == SchemeKind::TwoAtom) {
            const double w1 = s.transition_frequency(0), w2 = s.transition_frequency(1);
            const double w0 = 0.5 * (w1 + w2);
            ComplexMatrix n1 = s.lowering_operator(0).adjoint() * s.lowering_operator(0);
            ComplexMatrix n2 = s.lowering_operator(1).adjoint() * s.lowering_operator(1);
            h += cplx(w1 - w0, 0.0) * n1 + cplx(w2 - w0, 0.0) * n2;
            const ComplexMatrix s1p = s.lowering_operator(0).adjoint();
            const ComplexMatrix s2m = s.lowering_operator(1);
            const ComplexMatrix cross = s1p * s2m;
            h += cplx(c.omega12, 0.0) * (cross + cross.adjoint());
        } else {
            // measure energies from the level the transition pair shares, so
            // every coherence carries exactly its physical frequency
            const char* ref = (s.kind == SchemeKind::SingleAtomLambda) ? "3" : "2";
            const double e0 = (s.kind == SchemeKind::TwoLevel) ? s.level_energy("g")
                                                               : s.level_energy(ref);
            for (std::size_t i = 0; i < s.levels.size(); ++i)
                h(i, i) = s.levels[i].energy - e0;
        }
        add_vacuum_shift(h, s, c);
        return h;
    }

    // rotating frame: diagonal carries detunings relative to the drive
    const double wl = d.frequency;
    switch (s.kind) {
    case SchemeKind::TwoLevel: {
        if (d.target == DriveField::Target::None)
            throw ValidationError("rotating frame requires a drive");
        const double det = s.transition_frequency(0) - wl; // omega_a - omega_L
        h(s.level_index("e"), s.level_index("e")) = det;
        add_drive_term(h, s.lowering_operator(0).adjoint(), d.rabi.at(0), d.phase);
        break;
    }
    case SchemeKind::SingleAtomV: {
        if (s.has_auxiliary) {
            if (d.target != DriveField::Target::AuxiliaryLevel)
                throw ValidationError("auxiliary V scheme must be driven from the auxiliary level");
            const double eb = s.level_energy("b");
            h(s.level_index("1"), s.level_index("1")) = s.level_energy("1") - eb - wl;
            h(s.level_index("3"), s.level_index("3")) = s.level_energy("3") - eb - wl;
            // |2> and |b> stay at zero in this frame
            ComplexMatrix s1b(n, n), s3b(n, n);
            s1b(s.level_index("1"), s.level_index("b")) = 1.0;
            s3b(s.level_index("3"), s.level_index("b")) = 1.0;
            add_drive_term(h, s1b, d.rabi.at(0), d.phase);
            add_drive_term(h, s3b, d.rabi.size() > 1 ? d.rabi.at(1) : d.rabi.at(0), d.phase);
        } else {
            if (d.target == DriveField::Target::None || d.target == DriveField::Target::AuxiliaryLevel)
                throw ValidationError("V scheme drive must target its transitions");
            h(s.level_index("1"), s.level_index("1")) = s.transition_frequency(0) - wl;
            h(s.level_index("3"), s.level_index("3")) = s.transition_frequency(1) - wl;
            if (d.target == DriveField::Target::Transition1 ||
                d.target == DriveField::Target::Both)
                add_drive_term(h, s.lowering_operator(0).adjoint(), d.rabi.at(0), d.phase);
            if (d.target == DriveField::Target::Transition2 ||
                d.target == DriveField::Target::Both)
                add_drive_term(h, s.lowering_operator(1).adjoint(),
                               d.target == DriveField::Target::Both ? d.rabi.at(1) : d.rabi.at(0),
                               d.phase);
        }
        break;
    }
    case SchemeKind::SingleAtomLambda: {
        if (d.target == DriveField::Target::None || d.target == DriveField::Target::AuxiliaryLevel)
            throw ValidationError("Lambda scheme drive must target its transitions");
        // ground energies in the frame where the printed superposition-basis
        // form is reproduced: |1> at delta/2 - deltaL, |2> at -delta/2 - deltaL
        const double w1 = s.transition_frequency(0);
        const double w2 = s.transition_frequency(1);
        const double delta_l = wl - 0.5 * (w1 + w2);
        const double delta = w1 - w2;
        h(s.level_index("1"), s.level_index("1")) = 0.5 * delta - delta_l;
        h(s.level_index("2"), s.level_index("2")) = -0.5 * delta - delta_l;
        if (d.target == DriveField::Target::Transition1 || d.target == DriveField::Target::Both)
            add_drive_term(h, s.lowering_operator(0).adjoint(), d.rabi.at(0), d.phase);
        if (d.target == DriveField::Target::Transition2 || d.target == DriveField::Target::Both)
            add_drive_term(h, s.lowering_operator(1).adjoint(),
                           d.target == DriveField::Target::Both ? d.rabi.at(1) : d.rabi.at(0),
                           d.phase);
        break;
    }
    case SchemeKind::TwoAtom: {
        if (d.target != DriveField::Target::Both)
            throw ValidationError("two-atom drive illuminates both atoms");
        const double w0 = 0.5 * (s.transition_frequency(0) + s.transition_frequency(1));
        const double det = w0 - wl; // deltaL = omega0 - omegaL
        const ComplexMatrix s1m = s.lowering_operator(0);
        const ComplexMatrix s2m = s.lowering_operator(1);
        h += cplx(det + s.transition_frequency(0) - w0, 0.0) * (s1m.adjoint() * s1m);
        h += cplx(det + s.transition_frequency(1) - w0, 0.0) * (s2m.adjoint() * s2m);
        const ComplexMatrix cross = s1m.adjoint() * s2m;
        h += cplx(c.omega12, 0.0) * (cross + cross.adjoint());
        // perpendicular incidence: both atoms see the same phase
        add_drive_term(h, s1m.adjoint(), d.rabi.at(0), d.phase);
        add_drive_term(h, s2m.adjoint(), d.rabi.size() > 1 ? d.rabi.at(1) : d.rabi.at(0),
                       d.phase);
        break;
    }
    }
    add_vacuum_shift(h, s, c);

    if (!h.is_hermitian(1e-12))
        throw NumericsError("built Hamiltonian is not Hermitian");
    return h;
}

std::vector<DissipatorTerm> build_dissipator_coefficients(const LevelScheme& s,
                                                          const CouplingCoefficients& c)
{
    s.validate();
    c.validate();
    const std::size_t nt = s.transitions.size();
    if (nt >= 1 && std::abs(c.gamma1 - s.transitions[0].gamma) > 1e-9 * std::max(1.0, c.gamma1))
        throw ValidationError("coupling Gamma1 disagrees with the scheme's first transition");
    if (nt >= 2 && std::abs(c.gamma2 - s.transitions[1].gamma) > 1e-9 * std::max(1.0, c.gamma2))
        throw ValidationError("coupling Gamma2 disagrees with the scheme's second transition");

    std::vector<DissipatorTerm> terms;
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            double g = 0.0;
            if (i == j)
                g = (i == 0) ? c.gamma1 : c.gamma2;
            else
                g = c.gamma12;
            if (g == 0.0)
                continue;
            terms.push_back({i, j, g, s.lowering_operator(i).adjoint(), s.lowering_operator(j)});
        }
    }
    return terms;
}

double anisotropic_transition_probability(const std::array<Vec3, 2>& final_dipoles,
                                          const std::array<double, 2>& rabis,
                                          const std::array<double, 2>& detunings,
                                          const std::array<std::array<double, 3>, 3>& c_tensor)
{
    if (detunings[0] == 0.0 || detunings[1] == 0.0)
        throw ValidationError("transition probability undefined at zero detuning");
    double total = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            // mu_fb . C . mu_fa
            double quad = 0.0;
            for (int r = 0; r < 3; ++r)
                for (int col = 0; col < 3; ++col)
                    quad += final_dipoles[b][r] * c_tensor[r][col] * final_dipoles[a][col];
            total += rabis[a] * rabis[b] * quad / (detunings[a] * detunings[b]);
        }
    }
    return total;
}

} // namespace qdint
