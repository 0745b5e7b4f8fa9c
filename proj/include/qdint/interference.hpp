#pragma once

#include <functional>
#include <vector>

#include "qdint/dynamics.hpp"
#include "qdint/operators.hpp"

namespace qdint {

// Two point sources (slits or atoms) feeding a far-field detector.
struct SlitGeometry {
    Vec3 r1{0.0, 0.0, 0.0};
    Vec3 r2{1.0, 0.0, 0.0};
    cplx u1 = 1.0; // geometry constants of the two apertures
    cplx u2 = 1.0;
    double k0 = 2.0 * pi; // mean wavenumber

    Vec3 separation() const { return r2 - r1; } // r21
    void validate() const;
};

struct FieldPair {
    double intensity1 = 1.0;
    double intensity2 = 1.0;
    double omega1 = 1.0;
    double omega2 = 1.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    cplx g1 = 1.0; // degree of first-order coherence, |g1| <= 1

    void validate() const;
};

// Populations and coherence over the collective two-atom basis
// {|g>, |s>, |a>, |e>}.
struct CollectiveState {
    double gg = 0.0;
    double ss = 0.0;
    double aa = 0.0;
    double ee = 0.0;
    cplx sa = 0.0;

    void validate() const;
};

// Fringe visibility 2 sqrt(I1 I2)/(I1 + I2) |g1|.
double visibility_first_order(const FieldPair& f);

// Which-way/visibility tradeoff D^2 + V^2 <= 1.
bool duality_check(double distinguishability, double visibility);

// Young screen intensity for equal mean intensities I0 = (I1+I2)/2 in the
// far field, including the frequency-difference and phase-difference
// modulation. The modulated part scales with |g1|.
double young_intensity(const SlitGeometry& geom, const FieldPair& f, const Vec3& direction,
                       double screen_distance);

// Second moments of classical intensities for the intensity correlation.
struct IntensityMoments {
    double i1_sq;
    double i2_sq;
    double i1_i2;
};

// Classical two-detector intensity correlation of independent sources.
double classical_g2(const FieldPair& f, const IntensityMoments& moments,
                    const SlitGeometry& geom, const Vec3& dir1, const Vec3& dir2);

// Photon-number (Fock) state intensity correlation for n and m photons in
// the two modes; prefactor (h_bar omega / 2 eps0 V)^2 defaults to one.
double fock_g2(long n, long m, const SlitGeometry& geom, const Vec3& dir1, const Vec3& dir2,
               double prefactor = 1.0);

// Collective-basis observables of a two-atom density matrix given in the
// product basis |g1g2>,|g1e2>,|e1g2>,|e1e2>.
CollectiveState dicke_observables(const DensityMatrix& rho);

// Far-field first-order correlation of the two-atom field; the radiative
// prefactor Gamma*u(R) is normalized to gamma_u.
double two_atom_g1(const CollectiveState& c, const SlitGeometry& geom, const Vec3& direction,
                   double gamma_u = 1.0);

// Two-detector second-order correlation; only the doubly excited population
// enters, with full-contrast fringes in the detector separation.
double two_atom_g2(const CollectiveState& c, const SlitGeometry& geom, const Vec3& dir1,
                   const Vec3& dir2, double gamma_u = 1.0);

// (max - min)/(max + min) over a uniform 1024-point sweep of the scalar
// argument handed to `pattern`.
double sweep_visibility(const std::function<double(double)>& pattern, double arg_min,
                        double arg_max, std::size_t points = 1024);

} // namespace qdint
