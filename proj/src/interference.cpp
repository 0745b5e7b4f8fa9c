#include "qdint/interference.hpp"

#include <algorithm>
#include <cmath>

namespace qdint {

void SlitGeometry::validate() const
{
    if (norm(separation()) == 0.0)
        throw ValidationError("slit geometry needs two distinct source positions");
    if (!(k0 > 0.0))
        throw ValidationError("mean wavenumber must be positive");
}

void FieldPair::validate() const
{
    if (intensity1 < 0.0 || intensity2 < 0.0)
        throw ValidationError("negative field intensity");
    if (std::abs(g1) > 1.0 + 1e-12)
        throw ValidationError("degree of coherence must satisfy |g1| <= 1");
}

void CollectiveState::validate() const
{
    if (gg < -1e-12 || ss < -1e-12 || aa < -1e-12 || ee < -1e-12)
        throw ValidationError("negative collective population");
    if (std::abs(gg + ss + aa + ee - 1.0) > 1e-9)
        throw ValidationError("collective populations must sum to one");
    if (std::abs(sa) > std::sqrt(std::max(ss * aa, 0.0)) + 1e-9)
        throw ValidationError("collective coherence exceeds its population bound");
}

double visibility_first_order(const FieldPair& f)
{
    f.validate();
    const double total = f.intensity1 + f.intensity2;
    if (!(total > 0.0))
        throw ValidationError("visibility undefined for two dark fields");
    return 2.0 * std::sqrt(f.intensity1 * f.intensity2) / total * std::abs(f.g1);
}

bool duality_check(double distinguishability, double visibility)
{
    if (distinguishability < 0.0 || distinguishability > 1.0 || visibility < 0.0 ||
        visibility > 1.0)
        throw ValidationError("duality check expects D, V in [0, 1]");
    return distinguishability * distinguishability + visibility * visibility <= 1.0 + 1e-12;
}

double young_intensity(const SlitGeometry& geom, const FieldPair& f, const Vec3& direction,
                       double screen_distance)
{
    geom.validate();
    f.validate();
    const Vec3 rhat = normalized(direction);
    const double i0 = 0.5 * (f.intensity1 + f.intensity2);

    const double a = geom.k0 * dot(rhat, geom.separation());
    const double omega0 = 0.5 * (f.omega1 + f.omega2);
    const double delta = f.omega1 - f.omega2;
    // retarded midpoint distance R~ = R + (r1 + r2).Rhat / 2
    const double r_tilde = screen_distance + 0.5 * dot(rhat, geom.r1 + geom.r2);
    const double b = geom.k0 * r_tilde * (delta / omega0) + (f.phi1 - f.phi2);

    return 2.0 * i0 * (1.0 + std::abs(f.g1) * (std::cos(a) * std::cos(b) -
                                               std::sin(a) * std::sin(b)));
}

double classical_g2(const FieldPair& f, const IntensityMoments& moments,
                    const SlitGeometry& geom, const Vec3& dir1, const Vec3& dir2)
{
    geom.validate();
    f.validate();
    const Vec3 diff = normalized(dir1) - normalized(dir2);
    const double arg = geom.k0 * dot(geom.separation(), diff);
    return moments.i1_sq + moments.i2_sq + 2.0 * moments.i1_i2 * (1.0 + std::cos(arg));
}

double fock_g2(long n, long m, const SlitGeometry& geom, const Vec3& dir1, const Vec3& dir2,
               double prefactor)
{
    if (n < 0 || m < 0)
        throw ValidationError("photon numbers must be nonnegative");
    geom.validate();
    const Vec3 diff = normalized(dir1) - normalized(dir2);
    const double arg = geom.k0 * dot(geom.separation(), diff);
    const double nd = double(n), md = double(m);
    return prefactor * prefactor *
           (nd * (nd - 1.0) + md * (md - 1.0) + 2.0 * nd * md * (1.0 + std::cos(arg)));
}

CollectiveState dicke_observables(const DensityMatrix& rho)
{
    if (rho.dim() != 4)
        throw ValidationError("dicke_observables expects the 4-dimensional two-atom basis");
    // product order |g1g2>, |g1e2>, |e1g2>, |e1e2>;
    // |s> = (|g1e2> + |e1g2>)/sqrt2, |a> = (|g1e2> - |e1g2>)/sqrt2
    CollectiveState c;
    c.gg = rho(0, 0).real();
    c.ee = rho(3, 3).real();
    c.ss = 0.5 * (rho(1, 1) + rho(2, 2) + rho(1, 2) + rho(2, 1)).real();
    c.aa = 0.5 * (rho(1, 1) + rho(2, 2) - rho(1, 2) - rho(2, 1)).real();
    c.sa = 0.5 * (rho(1, 1) - rho(2, 2) - rho(1, 2) + rho(2, 1));
    c.validate();
    return c;
}

double two_atom_g1(const CollectiveState& c, const SlitGeometry& geom, const Vec3& direction,
                   double gamma_u)
{
    c.validate();
    geom.validate();
    const double arg = geom.k0 * dot(normalized(direction), geom.separation());
    // i (rho_sa - rho_as) = -2 Im(rho_sa)
    return gamma_u * (2.0 * c.ee + c.ss * (1.0 + std::cos(arg)) + c.aa * (1.0 - std::cos(arg)) -
                      2.0 * c.sa.imag() * std::sin(arg));
}

double two_atom_g2(const CollectiveState& c, const SlitGeometry& geom, const Vec3& dir1,
                   const Vec3& dir2, double gamma_u)
{
    c.validate();
    geom.validate();
    const Vec3 diff = normalized(dir1) - normalized(dir2);
    const double arg = geom.k0 * dot(diff, geom.separation());
    return 4.0 * gamma_u * gamma_u * c.ee * (1.0 + std::cos(arg));
}

double sweep_visibility(const std::function<double(double)>& pattern, double arg_min,
                        double arg_max, std::size_t points)
{
    if (points < 2)
        throw ValidationError("sweep needs at least two points");
    double lo = pattern(arg_min), hi = lo;
    for (std::size_t i = 1; i < points; ++i) {
        const double x = arg_min + (arg_max - arg_min) * double(i) / double(points - 1);
        const double v = pattern(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi + lo == 0.0)
        return 0.0;
    return (hi - lo) / (hi + lo);
}

} // namespace qdint
