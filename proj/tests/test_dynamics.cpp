#include <doctest.h>

#include <cmath>
#include <random>

#include "qdint/dynamics.hpp"

#include "oracles.hpp"

using namespace qdint;

namespace {

Liouvillian v_decay(double gamma2, double delta, double gamma12)
{
    const LevelScheme s = make_v_scheme(1.0, gamma2, delta);
    return build_liouvillian(s, DriveField::none(),
                             CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12),
                             Frame::Lab);
}

Liouvillian v_both_driven(double rabi, double delta, double delta_l, double gamma12)
{
    const LevelScheme s = make_v_scheme(1.0, 1.0, delta);
    const double omega0 = 0.5 * (s.transition_frequency(0) + s.transition_frequency(1));
    return build_liouvillian(s, DriveField::both(rabi, rabi, omega0 + delta_l),
                             CouplingCoefficients::explicit_coupling(1.0, 1.0, gamma12),
                             Frame::RotatingAtLaser);
}

Liouvillian two_atom(double gamma12, double omega12, double rabi, double delta_l)
{
    const LevelScheme s = make_two_atom(1.0, 1.0);
    const CouplingCoefficients c =
        CouplingCoefficients::explicit_coupling(1.0, 1.0, gamma12, 0.0, 0.0, omega12);
    if (rabi == 0.0)
        return build_liouvillian(s, DriveField::none(), c, Frame::Lab);
    const double omega0 = 0.5 * (s.transition_frequency(0) + s.transition_frequency(1));
    return build_liouvillian(s, DriveField::both(rabi, rabi, omega0 - delta_l), c,
                             Frame::RotatingAtLaser);
}

std::vector<double> uniform_times(double tmax, int n)
{
    std::vector<double> t;
    for (int i = 0; i <= n; ++i)
        t.push_back(tmax * double(i) / double(n));
    return t;
}

DensityMatrix v_superposition(double c1, double c3)
{
    const LevelScheme s = make_v_scheme(1.0, 1.0, 0.0);
    return DensityMatrix::pure({c1, 0.0, c3}, s.basis_labels());
}

} // namespace

TEST_CASE("two-level decay from the vectorized generator")
{
    const LevelScheme s = make_two_level(1.0);
    const Liouvillian l = build_liouvillian(
        s, DriveField::none(), CouplingCoefficients::explicit_coupling(1.0, 1.0, 0.0),
        Frame::Lab);
    const Trajectory traj =
        evolve(l, DensityMatrix::level(s, "e"), {0.0, 0.5, 1.0, 2.0, 4.0});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double expect = std::exp(-traj.times[i]);
        CHECK(traj.states[i](1, 1).real() == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("generator action reproduces the hand-coded undriven V equations")
{
    std::mt19937 rng(51);
    const double gamma12 = 0.77, delta = 1.3;
    const Liouvillian l = v_decay(1.0, delta, gamma12);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix rho = oracle::random_density(3, rng);
        const ComplexMatrix dm = devectorize(matvec(l.generator, vectorize(rho)));
        const ComplexVector expect =
            oracle::v_decay_rhs(oracle::pack_v_decay(rho), 1.0, gamma12, delta);
        CHECK(std::abs(dm(0, 0) - expect[0]) < 1e-12);
        CHECK(std::abs(dm(2, 2) - expect[1]) < 1e-12);
        CHECK(std::abs(dm(1, 1) - expect[2]) < 1e-12);
        CHECK(std::abs(dm(0, 2) - expect[3]) < 1e-12);
        CHECK(std::abs(dm(2, 0) - expect[4]) < 1e-12);
    }
}

TEST_CASE("generator action reproduces the hand-coded driven V equations")
{
    std::mt19937 rng(53);
    const double rabi1 = 2.1, rabi2 = 1.4, delta = 0.9, delta_l = 0.35;
    const double gamma2 = 1.6, gamma12 = 0.8;
    const LevelScheme s = make_v_scheme(1.0, gamma2, delta);
    const double omega0 = 0.5 * (s.transition_frequency(0) + s.transition_frequency(1));
    const Liouvillian l = build_liouvillian(
        s, DriveField::both(rabi1, rabi2, omega0 + delta_l),
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12), Frame::RotatingAtLaser);

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix rho = oracle::random_density(3, rng);
        const ComplexMatrix dm = devectorize(matvec(l.generator, vectorize(rho)));
        const ComplexVector expect = oracle::v_driven_rhs(
            oracle::pack_v_driven(rho), 1.0, gamma2, gamma12, delta, delta_l, rabi1, rabi2);
        CHECK(std::abs(dm(0, 1) - expect[0]) < 1e-12);
        CHECK(std::abs(dm(2, 1) - expect[1]) < 1e-12);
        CHECK(std::abs(dm(2, 0) - expect[2]) < 1e-12);
        CHECK(std::abs(dm(0, 0) - expect[3]) < 1e-12);
        CHECK(std::abs(dm(2, 2) - expect[4]) < 1e-12);
    }
}

TEST_CASE("evolve matches RK4 integration of the hand-coded equations")
{
    const double gamma12 = 0.9, delta = 0.4;
    const Liouvillian l = v_decay(1.0, delta, gamma12);
    const LevelScheme s = make_v_scheme(1.0, 1.0, delta);
    const DensityMatrix rho0 = DensityMatrix::level(s, "1");

    const Trajectory traj = evolve(l, rho0, {10.0});
    const ComplexVector ref = oracle::rk4_integrate(
        [&](const ComplexVector& y) { return oracle::v_decay_rhs(y, 1.0, gamma12, delta); },
        oracle::pack_v_decay(rho0.matrix), 10.0, 1e-3);

    const DensityMatrix& fin = traj.states.back();
    CHECK(std::abs(fin(0, 0) - ref[0]) < 1e-6);
    CHECK(std::abs(fin(2, 2) - ref[1]) < 1e-6);
    CHECK(std::abs(fin(1, 1) - ref[2]) < 1e-6);
    CHECK(std::abs(fin(0, 2) - ref[3]) < 1e-6);
}

TEST_CASE("collective two-atom decay rates")
{
    for (double gamma12 : {0.0, 0.5, 0.9}) {
        const Liouvillian l = two_atom(gamma12, 0.0, 0.0, 0.0);
        const LevelScheme s = make_two_atom(1.0, 1.0);
        const DensityMatrix rho0 = DensityMatrix::level(s, "e1g2");
        const Trajectory traj = evolve(l, rho0, {0.0, 1.0, 2.0});

        const auto pop = [](const DensityMatrix& r, double sign) {
            return 0.5 * (r(1, 1) + r(2, 2) + sign * (r(1, 2) + r(2, 1))).real();
        };
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double t = traj.times[i];
            CHECK(pop(traj.states[i], +1.0) ==
                  doctest::Approx(0.5 * std::exp(-(1.0 + gamma12) * t)).epsilon(1e-9));
            CHECK(pop(traj.states[i], -1.0) ==
                  doctest::Approx(0.5 * std::exp(-(1.0 - gamma12) * t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("independent atoms decay at the bare rate")
{
    const Liouvillian l = two_atom(0.0, 0.0, 0.0, 0.0);
    const LevelScheme s = make_two_atom(1.0, 1.0);
    const Trajectory traj = evolve(l, DensityMatrix::level(s, "e1g2"), {0.0, 1.5});
    const double excited =
        (traj.states.back()(1, 1) + traj.states.back()(2, 2) + 2.0 * traj.states.back()(3, 3))
            .real();
    CHECK(excited == doctest::Approx(std::exp(-1.5)).epsilon(1e-9));
}

TEST_CASE("evolve at t=0 returns the initial state")
{
    const Liouvillian l = two_atom(0.4, 0.0, 0.0, 0.0);
    const LevelScheme s = make_two_atom(1.0, 1.0);
    const DensityMatrix rho0 = DensityMatrix::level(s, "e1e2");
    const Trajectory traj = evolve(l, rho0, {0.0});
    CHECK((traj.states[0].matrix - rho0.matrix).max_abs() < 1e-15);
}

TEST_CASE("trajectory invariants hold along a strongly driven evolution")
{
    const Liouvillian l = v_both_driven(3.0, 1.0, 0.2, 0.95);
    const LevelScheme s = make_v_scheme(1.0, 1.0, 1.0);
    const Trajectory traj =
        evolve(l, DensityMatrix::level(s, "2"), uniform_times(15.0, 60));
    for (const DensityMatrix& rho : traj.states) {
        CHECK(std::abs(rho.matrix.trace() - cplx(1.0, 0.0)) <= 1e-10);
        CHECK(rho.matrix.is_hermitian(1e-12));
        CHECK(rho.min_eigenvalue() >= -1e-8);
    }
}

TEST_CASE("constructed generators have no unstable modes")
{
    const Liouvillian cases[] = {
        v_decay(1.0, 0.0, 1.0),
        v_decay(1.3, 0.7, 0.4),
        v_both_driven(5.0, 5.0, 0.0, 1.0),
        two_atom(0.5, 0.3, 2.0, 0.4),
    };
    for (const Liouvillian& l : cases) {
        const Spectrum sp = eig_general(l.generator);
        for (const cplx& lambda : sp.eigenvalues)
            CHECK(lambda.real() <= 1e-10 * std::max(1.0, l.generator.frobenius_norm()));
    }
}

TEST_CASE("degenerate steady state needs and uses the initial condition")
{
    const Liouvillian l = v_decay(1.0, 0.0, 1.0);
    CHECK(steady_state_degeneracy(l) == 2);
    CHECK_THROWS_AS(steady_state(l), ValidationError);

    const LevelScheme s = make_v_scheme(1.0, 1.0, 0.0);
    const DensityMatrix rho0 = DensityMatrix::level(s, "1");
    const DensityMatrix ss = steady_state(l, rho0);
    CHECK(ss(0, 0).real() == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(ss(2, 2).real() == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(ss(0, 2).real() == doctest::Approx(-0.25).epsilon(1e-8));
    CHECK(std::abs(ss(0, 2).imag()) < 1e-10);
    CHECK(ss(1, 1).real() == doctest::Approx(0.5).epsilon(1e-8));

    // spectral projection agrees with brute-force long-time evolution
    const Trajectory late = evolve(l, rho0, {200.0});
    CHECK((late.states[0].matrix - ss.matrix).max_abs() < 1e-7);
}

TEST_CASE("nondegenerate decay empties the upper levels")
{
    const Liouvillian l = v_decay(1.0, 0.1, 1.0);
    CHECK(steady_state_degeneracy(l) == 1);
    const DensityMatrix ss = steady_state(l);
    CHECK(ss(1, 1).real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(ss(0, 0)) < 1e-8);
}

TEST_CASE("driven two-atom steady state matches the closed-form populations")
{
    // the closed form reads its detuning and dipole-dipole variables as pair
    // quantities (twice the per-atom ones, collective level at +Omega12);
    // exact in the independent-atom limit
    for (double rabi : {0.5, 2.0}) {
        for (double delta_l : {0.0, 0.7}) {
            for (double gamma12 : {0.0, 0.6}) {
                for (double omega12 : {0.0, 0.4}) {
                    const Liouvillian l = two_atom(gamma12, omega12, rabi, delta_l);
                    const DensityMatrix ss = steady_state(l);
                    const double ree = ss(3, 3).real();
                    const double rss =
                        0.5 * (ss(1, 1) + ss(2, 2) + ss(1, 2) + ss(2, 1)).real();
                    const double raa =
                        0.5 * (ss(1, 1) + ss(2, 2) - ss(1, 2) - ss(2, 1)).real();

                    const double o2 = rabi * rabi, o4 = o2 * o2;
                    const double dl = 2.0 * delta_l, o12 = 2.0 * omega12;
                    const double g2 = 1.0 + dl * dl;
                    const double d =
                        o4 + g2 * (o2 + 0.25 * ((1.0 + gamma12) * (1.0 + gamma12) +
                                                (dl + o12) * (dl + o12)));
                    CHECK(ree == doctest::Approx(o4 / (4.0 * d)).epsilon(1e-8));
                    CHECK(raa == doctest::Approx(o4 / (4.0 * d)).epsilon(1e-8));
                    CHECK(rss ==
                          doctest::Approx((2.0 * o2 * g2 + o4) / (4.0 * d)).epsilon(1e-8));
                }
            }
        }
    }
}

TEST_CASE("conserved combination of the degenerate V system")
{
    const LevelScheme s = make_v_scheme(1.0, 1.0, 0.0);
    const Liouvillian l = v_decay(1.0, 0.0, 1.0);
    const std::vector<double> times = uniform_times(20.0, 100);

    const Trajectory traj = evolve(l, DensityMatrix::level(s, "1"), times);
    const std::vector<double> alpha = constant_of_motion_alpha(traj);
    for (double a : alpha)
        CHECK(std::abs(a - alpha[0]) <= 1e-10);

    // ground state: identically zero
    const Trajectory ground = evolve(l, DensityMatrix::level(s, "2"), {0.0, 1.0, 5.0});
    for (double a : constant_of_motion_alpha(ground))
        CHECK(std::abs(a) < 1e-12);

    // detuned transitions: no longer conserved, decays away
    const Liouvillian ld = v_decay(1.0, 1.0, 1.0);
    const Trajectory detuned = evolve(ld, DensityMatrix::level(s, "1"), times);
    CHECK(std::abs(constant_of_motion_alpha(detuned).back()) <= 1e-6);
}

TEST_CASE("superposition populations: trapping and release")
{
    const std::vector<double> times = uniform_times(12.0, 48);
    const double inv = 1.0 / std::sqrt(2.0);

    // antisymmetric start, maximal interference, degenerate: trapped
    const Trajectory trapped = evolve(v_decay(1.0, 0.0, 1.0), v_superposition(inv, -inv), times);
    for (const SuperpositionSample& smp : superposition_populations(trapped))
        CHECK(smp.aa == doctest::Approx(1.0).epsilon(1e-9));

    // detuning releases the trapped population through the fast channel
    const Trajectory released =
        evolve(v_decay(1.0, 1.0, 1.0), v_superposition(inv, -inv), times);
    const auto rel = superposition_populations(released);
    CHECK(rel.back().aa < 0.05);

    // symmetric start without interference decays at the bare rate
    const Trajectory bare = evolve(v_decay(1.0, 0.0, 0.0), v_superposition(inv, inv), times);
    const auto sup = superposition_populations(bare);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(sup[i].ss == doctest::Approx(std::exp(-times[i])).epsilon(1e-8));
}

TEST_CASE("coherent population trapping and its destruction")
{
    // equal decay rates, no shift: the trap is exact at delta = 0
    const CptResult perfect = cpt_upper_population(1.0, 1.0, 5.0, 0.0, 0.0, 0.5);
    CHECK(std::abs(perfect.delta_c) < 1e-14);
    CHECK(perfect.rho33 <= 1e-10);

    // maximal interference starves the antisymmetric reservoir: trap broken
    const CptResult broken = cpt_upper_population(1.0, 1.0, 5.0, 0.0, 0.0, 1.0);
    CHECK(broken.degenerate_kernel);
    CHECK(broken.rho33 > 1e-3);

    // asymmetric rates shift the trapping point to the printed zero
    const double gamma2 = 1.0 / 50.0, delta12 = 0.1;
    const double expected_zero = (1.0 - gamma2) * delta12 / std::sqrt(gamma2);
    CHECK(expected_zero == doctest::Approx(0.98 * std::sqrt(50.0) * 0.1).epsilon(1e-12));
    const CptResult shifted =
        cpt_upper_population(1.0, gamma2, 5.0, expected_zero, delta12, 0.5);
    CHECK(shifted.rho33 <= 1e-10);
    const CptResult offzero =
        cpt_upper_population(1.0, gamma2, 5.0, expected_zero + 2.0, delta12, 0.5);
    CHECK(offzero.rho33 > 1e-3);
}

TEST_CASE("density matrix validation rejects broken states")
{
    ComplexMatrix notrace(2, 2);
    notrace(0, 0) = 0.7;
    CHECK_THROWS_AS(DensityMatrix(notrace, {"g", "e"}), NumericsError);

    ComplexMatrix nonherm(2, 2);
    nonherm(0, 0) = 0.5;
    nonherm(1, 1) = 0.5;
    nonherm(0, 1) = cplx(0.2, 0.0);
    nonherm(1, 0) = cplx(0.3, 0.0);
    CHECK_THROWS_AS(DensityMatrix(nonherm, {"g", "e"}), NumericsError);

    ComplexMatrix negative(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(negative, {"g", "e"}), NumericsError);
}

TEST_CASE("evolve validates its inputs")
{
    const Liouvillian l = two_atom(0.0, 0.0, 0.0, 0.0);
    const LevelScheme s = make_two_atom(1.0, 1.0);
    const DensityMatrix rho0 = DensityMatrix::level(s, "e1g2");
    CHECK_THROWS_AS(evolve(l, rho0, {1.0, 0.5}), ValidationError);
}
