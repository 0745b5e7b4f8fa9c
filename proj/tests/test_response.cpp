#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qdint/response.hpp"

#include "oracles.hpp"

using namespace qdint;

namespace {

CoherenceBlock aux_block(double rabi, double delta, double gamma12)
{
    const LevelScheme scheme = make_aux_v_scheme(1.0, 1.0, delta);
    // drive tuned midway between the upper levels
    const double mid =
        0.5 * (scheme.level_energy("1") + scheme.level_energy("3")) - scheme.level_energy("b");
    DriveField drive = DriveField::both(rabi, rabi, mid);
    drive.target = DriveField::Target::AuxiliaryLevel;
    return coherence_block(scheme, drive,
                           CouplingCoefficients::explicit_coupling(1.0, 1.0, gamma12));
}

struct Driven {
    LevelScheme scheme;
    Liouvillian liou;
};

Driven v_both_driven(double rabi, double delta, double delta_l, double gamma2, double gamma12)
{
    Driven out{make_v_scheme(1.0, gamma2, delta), {}};
    const double omega0 =
        0.5 * (out.scheme.transition_frequency(0) + out.scheme.transition_frequency(1));
    out.liou = build_liouvillian(
        out.scheme, DriveField::both(rabi, rabi, omega0 + delta_l),
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12), Frame::RotatingAtLaser);
    return out;
}

// drive resonant with |1>-|2> only; |3> sits `delta` above |1>
Driven v_single_driven(double rabi, double delta, double gamma2, double p)
{
    Driven out{make_v_scheme(1.0, gamma2, -delta), {}};
    const double gamma12 = p * std::sqrt(gamma2);
    out.liou = build_liouvillian(
        out.scheme,
        DriveField::single(DriveField::Target::Transition1, rabi,
                           out.scheme.transition_frequency(0)),
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12), Frame::RotatingAtLaser);
    return out;
}

Driven two_level_driven(double rabi, double detuning)
{
    Driven out{make_two_level(1.0), {}};
    out.liou = build_liouvillian(
        out.scheme,
        DriveField::single(DriveField::Target::Transition1, rabi,
                           out.scheme.transition_frequency(0) - detuning),
        CouplingCoefficients::explicit_coupling(1.0, 1.0, 0.0), Frame::RotatingAtLaser);
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return g;
}

SpectrumTrace v_fluorescence(const Driven& sys, double gamma2, double gamma12,
                             const std::vector<double>& grid)
{
    const DensityMatrix ss = steady_state(sys.liou);
    return fluorescence_spectrum(
        sys.liou, ss, {sys.scheme.lowering_operator(0), sys.scheme.lowering_operator(1)},
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12), grid);
}

} // namespace

TEST_CASE("coherence block entries and the undriven limit")
{
    const double delta = 0.8, gamma12 = 0.4, rabi = 1.7;
    const CoherenceBlock b = aux_block(rabi, delta, gamma12);
    REQUIRE(b.matrix.rows() == 3);
    CHECK(std::abs(b.matrix(0, 0) - cplx(-0.5, 0.5 * delta)) < 1e-12);
    CHECK(std::abs(b.matrix(1, 1) - cplx(-0.5, -0.5 * delta)) < 1e-12);
    CHECK(std::abs(b.matrix(0, 1) - cplx(-0.5 * gamma12, 0.0)) < 1e-12);
    CHECK(std::abs(b.matrix(0, 2) - cplx(0.0, 0.5 * rabi)) < 1e-12);
    CHECK(std::abs(b.matrix(2, 2)) < 1e-15);

    // no drive, no interference, degenerate: two damped coherences plus the
    // inert auxiliary one
    const Spectrum s = eig_general(aux_block(0.0, 0.0, 0.0).matrix);
    CHECK(std::abs(s.eigenvalues[0]) < 1e-12);
    CHECK(std::abs(s.eigenvalues[1] + 0.5) < 1e-12);
    CHECK(std::abs(s.eigenvalues[2] + 0.5) < 1e-12);
}

TEST_CASE("coherence block eigenvalues in the strong-field limits")
{
    const double rabi = 50.0;
    const double omega_prime = 0.5 * std::sqrt(2.0 * rabi * rabi);

    // parallel dipoles: zero mode plus a conjugate pair at -Gamma/2
    const Spectrum par = eig_general(aux_block(rabi, 0.0, 1.0).matrix);
    bool saw_zero = false;
    for (const cplx& l : par.eigenvalues) {
        if (std::abs(l) < 1e-9) {
            saw_zero = true;
            continue;
        }
        CHECK(std::abs(l.real() + 0.5) <= 0.02);
        CHECK(std::abs(std::abs(l.imag()) - omega_prime) <= 0.02 * omega_prime);
    }
    CHECK(saw_zero);

    // perpendicular dipoles: central line at -Gamma/2, sidebands at -Gamma/4
    const Spectrum perp = eig_general(aux_block(rabi, 0.0, 0.0).matrix);
    for (const cplx& l : perp.eigenvalues) {
        if (std::abs(l.imag()) < 1.0)
            CHECK(std::abs(l.real() + 0.5) <= 0.02);
        else
            CHECK(std::abs(l.real() + 0.25) <= 0.02);
    }
}

TEST_CASE("coherence block eigenvalues satisfy the characteristic cubic")
{
    for (double gamma12 : {0.0, 0.5, 1.0}) {
        for (double delta : {0.0, 2.0}) {
            const double rabi = 3.0;
            const CoherenceBlock b = aux_block(rabi, delta, gamma12);
            const Spectrum s = eig_general(b.matrix);
            for (const cplx& l : s.eigenvalues) {
                const cplx cubic =
                    l * (l * l + l + 0.25 * delta * delta + 0.25 * (1.0 - gamma12 * gamma12)) +
                    0.5 * rabi * rabi * (l + 0.5 * (1.0 - gamma12));
                CHECK(std::abs(cubic) <= 1e-9 * std::pow(std::max(rabi, 1.0), 3));
            }
        }
    }
}

TEST_CASE("spectral line structure maps eigenvalues to lines")
{
    const double rabi = 50.0;
    const double omega_prime = 0.5 * std::sqrt(2.0 * rabi * rabi);

    const auto lines_par = spectral_line_structure(aux_block(rabi, 0.0, 1.0));
    std::size_t coherent = 0, sidebands = 0;
    for (const LineComponent& lc : lines_par) {
        if (lc.is_coherent) {
            ++coherent;
            continue;
        }
        CHECK(std::abs(std::abs(lc.position) - omega_prime) < 0.05 * omega_prime);
        CHECK(std::abs(lc.halfwidth - 0.5) < 0.02);
        ++sidebands;
    }
    CHECK(coherent == 1);
    CHECK(sidebands == 2);

    const auto lines_perp = spectral_line_structure(aux_block(rabi, 0.0, 0.0));
    for (const LineComponent& lc : lines_perp) {
        CHECK(!lc.is_coherent);
        if (std::abs(lc.position) < 1.0)
            CHECK(std::abs(lc.halfwidth - 0.5) < 0.02);
        else
            CHECK(std::abs(lc.halfwidth - 0.25) < 0.02);
    }

    // purely damped block: every line sits at zero detuning
    CoherenceBlock damped{ComplexMatrix::diagonal({-0.5, -1.0, -2.0}), {"a", "b", "c"}};
    for (const LineComponent& lc : spectral_line_structure(damped)) {
        CHECK(lc.position == 0.0);
        CHECK(!lc.is_coherent);
    }
}

TEST_CASE("two-time correlation basics")
{
    const Driven sys = two_level_driven(2.0, 0.0);
    const DensityMatrix ss = steady_state(sys.liou);
    const ComplexMatrix sm = sys.scheme.lowering_operator(0);
    const ComplexMatrix sp = sm.adjoint();

    // zero delay reduces to a single-time expectation
    const std::vector<cplx> c0 = two_time_correlation(sys.liou, ss, sp, sm, {0.0});
    CHECK(std::abs(c0[0] - (sp * sm * ss.matrix).trace()) < 1e-12);

    // identity operators: trace preservation gives 1 for all delays
    const ComplexMatrix ident = ComplexMatrix::identity(2);
    for (const cplx& c : two_time_correlation(sys.liou, ss, ident, ident, {0.0, 1.0, 3.0}))
        CHECK(std::abs(c - 1.0) < 1e-10);

    // a non-stationary state is rejected
    const DensityMatrix excited = DensityMatrix::level(sys.scheme, "e");
    CHECK_THROWS_AS(two_time_correlation(sys.liou, excited, sp, sm, {0.0}), ValidationError);
}

TEST_CASE("strongly driven correlation oscillates at the Rabi frequency")
{
    const double rabi = 6.0;
    const Driven sys = two_level_driven(rabi, 0.0);
    const DensityMatrix ss = steady_state(sys.liou);
    const ComplexMatrix sm = sys.scheme.lowering_operator(0);
    const ComplexMatrix sp = sm.adjoint();

    std::vector<double> taus;
    for (int i = 0; i <= 200; ++i)
        taus.push_back(0.01 * i);
    const std::vector<cplx> corr = two_time_correlation(sys.liou, ss, sp, sm, taus);

    // cross-check against direct RK4 integration of the regression vector
    ComplexVector chi = vectorize(sm * ss.matrix);
    const auto rhs = [&](const ComplexVector& v) { return matvec(sys.liou.generator, v); };
    double worst = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const ComplexMatrix chim = devectorize(chi);
        cplx direct = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t q = 0; q < 2; ++q)
                direct += sp(r, q) * chim(q, r);
        worst = std::max(worst, std::abs(direct - corr[i]));
        if (i + 1 < taus.size())
            chi = oracle::rk4_integrate(rhs, chi, 0.01, 0.01);
    }
    CHECK(worst < 1e-6); // oracle-limited: fixed-step RK4 at dtau = 0.01

    // the fluctuation part changes sign within the first Rabi half-period
    const cplx mean = corr.back();
    bool flipped = false;
    double first = (corr[0] - mean).real();
    for (std::size_t i = 1; i < taus.size(); ++i)
        if ((corr[i] - mean).real() * first < 0.0)
            flipped = true;
    CHECK(flipped);
}

TEST_CASE("fluorescence spectrum peak structure across the splitting")
{
    // moderate splitting: three lines
    const Driven small = v_both_driven(5.0, 1.0, 0.0, 1.0, 0.0);
    const SpectrumTrace t3 = v_fluorescence(small, 1.0, 0.0, linear_grid(-16.0, 16.0, 2401));
    CHECK(find_peaks(t3).size() == 3);

    // large splitting: five resolved lines
    const Driven big = v_both_driven(5.0, 5.0, 0.0, 1.0, 0.0);
    const SpectrumTrace t5 = v_fluorescence(big, 1.0, 0.0, linear_grid(-16.0, 16.0, 2401));
    CHECK(find_peaks(t5).size() == 5);
}

TEST_CASE("fluorescence quenches completely for parallel dipoles")
{
    const std::vector<double> grid = linear_grid(-16.0, 16.0, 801);
    const Driven open = v_both_driven(5.0, 5.0, 0.0, 1.0, 0.0);
    const Driven quenched = v_both_driven(5.0, 5.0, 0.0, 1.0, 1.0);
    const double ref = integrate_trace(v_fluorescence(open, 1.0, 0.0, grid));
    const double off = integrate_trace(v_fluorescence(quenched, 1.0, 1.0, grid));
    CHECK(ref > 1e-3);
    CHECK(std::abs(off) <= 1e-6 * ref);
}

TEST_CASE("spectrum is symmetric for a symmetric configuration")
{
    const Driven sys = v_both_driven(4.0, 2.0, 0.0, 1.0, 0.0);
    const std::vector<double> grid = linear_grid(-12.0, 12.0, 481);
    const SpectrumTrace t = v_fluorescence(sys, 1.0, 0.0, grid);
    const double scale = *std::max_element(t.values.begin(), t.values.end());
    for (std::size_t i = 0; i < t.values.size(); ++i)
        CHECK(std::abs(t.values[i] - t.values[t.values.size() - 1 - i]) <= 1e-10 * scale);
}

TEST_CASE("resolvent spectrum agrees with time-domain quadrature")
{
    const double gamma2 = 1.0, gamma12 = 0.5;
    const Driven sys = v_both_driven(1.0, 0.5, 0.0, gamma2, gamma12);
    const DensityMatrix ss = steady_state(sys.liou);
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(1.0, gamma2, gamma12);
    const std::vector<ComplexMatrix> ops = {sys.scheme.lowering_operator(0),
                                            sys.scheme.lowering_operator(1)};

    const std::vector<double> grid = {-1.5, -0.8, -0.3, 0.0, 0.4, 0.9, 1.6};
    const SpectrumTrace res = fluorescence_spectrum(sys.liou, ss, ops, coup, grid);
    double scale = 0.0;
    for (double v : res.values)
        scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double quad =
            oracle::quadrature_spectrum(sys.liou, ss, ops, coup, grid[i], 50.0, 0.01);
        CHECK(std::abs(res.values[i] - quad) <= 1e-4 * scale);
    }
}

TEST_CASE("weak-probe response of an undriven atom is an absorption line")
{
    const Driven sys = two_level_driven(0.0, 0.0);
    ComplexMatrix probe(2, 2);
    probe(1, 0) = 1.0; // |e><g|
    const std::vector<double> grid = linear_grid(-4.0, 4.0, 161);
    const SpectrumTrace w = probe_absorption(sys.liou, probe, {1, 0}, 0.1, grid);

    double peak = -1e9;
    double at_peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(w.values[i] >= -1e-12); // pure absorber, never gain
        if (w.values[i] > peak) {
            peak = w.values[i];
            at_peak = grid[i];
        }
    }
    CHECK(at_peak == doctest::Approx(0.0).epsilon(1e-12));
    // Lorentzian of halfwidth Gamma/2; the response is normalized per unit
    // probe Rabi frequency, so W(0) = omega_p * (1/2)/(Gamma/2) = omega_p
    CHECK(peak == doctest::Approx(0.1).epsilon(1e-6));
    // halfwidth check: half height at delta = +-Gamma/2
    const SpectrumTrace half = probe_absorption(sys.liou, probe, {1, 0}, 0.1, {0.5});
    CHECK(half.values[0] == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("probe response is linear in the probe Rabi frequency")
{
    const Driven sys = v_single_driven(30.0, 15.0, 1.0, 0.95);
    ComplexMatrix probe(3, 3);
    probe(sys.scheme.level_index("1"), sys.scheme.level_index("2")) = 1.0;
    const std::pair<std::size_t, std::size_t> target{sys.scheme.level_index("1"),
                                                     sys.scheme.level_index("2")};
    const std::vector<double> grid = linear_grid(-35.0, 35.0, 141);
    const SpectrumTrace w1 = probe_absorption(sys.liou, probe, target, 0.25, grid);
    const SpectrumTrace w2 = probe_absorption(sys.liou, probe, target, 0.5, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(w2.values[i] - 2.0 * w1.values[i]) <=
              1e-10 * std::max(1.0, std::abs(w2.values[i])));
}

TEST_CASE("probe on the driven transition: balanced gain and absorption")
{
    const double rabi = 30.0, delta = 15.0;
    const Driven sys = v_single_driven(rabi, delta, 1.0, 0.95);
    ComplexMatrix probe(3, 3);
    probe(sys.scheme.level_index("1"), sys.scheme.level_index("2")) = 1.0;
    const std::pair<std::size_t, std::size_t> target{sys.scheme.level_index("1"),
                                                     sys.scheme.level_index("2")};

    const auto w_at = [&](double d) {
        return probe_absorption(sys.liou, probe, target, 0.5, {d}).values[0];
    };
    const double w_plus = w_at(rabi);
    const double w_minus = w_at(-rabi);
    const double w_zero = w_at(0.0);

    CHECK(w_plus < 0.0);  // amplified at +Omega
    CHECK(w_minus > 0.0); // absorbed at -Omega
    CHECK(std::abs(std::abs(w_plus) - std::abs(w_minus)) <= 0.02 * std::abs(w_minus));
    CHECK(std::abs(w_zero) <= 1e-3 * std::abs(w_minus));
}

TEST_CASE("probe on the undriven transition: gain threshold in the decay ratio")
{
    const double rabi = 30.0, delta = 15.0, p = 0.99;
    const auto w23_zero = [&](double r) {
        const double gamma2 = 1.0 / r; // r = Gamma1/Gamma2 with Gamma1 = 1
        const Driven sys = v_single_driven(rabi, delta, gamma2, p);
        ComplexMatrix probe(3, 3);
        probe(sys.scheme.level_index("3"), sys.scheme.level_index("2")) = 1.0;
        const std::pair<std::size_t, std::size_t> target{sys.scheme.level_index("3"),
                                                         sys.scheme.level_index("2")};
        return probe_absorption(sys.liou, probe, target, 0.5, {0.0}, 2.0).values[0];
    };
    CHECK(w23_zero(1.0) > 0.0);
    CHECK(w23_zero(5.0) < 0.0);

    // emissive feature at +Omega for every ratio
    for (double r : {1.0, 2.0, 5.0}) {
        const double gamma2 = 1.0 / r;
        const Driven sys = v_single_driven(rabi, delta, gamma2, p);
        ComplexMatrix probe(3, 3);
        probe(sys.scheme.level_index("3"), sys.scheme.level_index("2")) = 1.0;
        const std::pair<std::size_t, std::size_t> target{sys.scheme.level_index("3"),
                                                         sys.scheme.level_index("2")};
        double most_negative = 1e9;
        for (double d : linear_grid(rabi - 2.0, rabi + 2.0, 81))
            most_negative = std::min(
                most_negative,
                probe_absorption(sys.liou, probe, target, 0.5, {d}, 2.0).values[0]);
        CHECK(most_negative < 0.0);
    }
}

TEST_CASE("peak finding and trace integration")
{
    SpectrumTrace t;
    for (int i = 0; i <= 400; ++i) {
        const double x = -10.0 + 0.05 * i;
        t.detunings.push_back(x);
        // two big Lorentzians plus one sub-prominence ripple
        const double v = 1.0 / (1.0 + (x - 5.0) * (x - 5.0)) +
                         1.0 / (1.0 + (x + 5.0) * (x + 5.0)) +
                         0.005 / (1.0 + 100.0 * x * x);
        t.values.push_back(v);
    }
    const std::vector<Peak> peaks = find_peaks(t);
    CHECK(peaks.size() == 2);

    // all-noise trace: no peaks
    SpectrumTrace flat;
    for (int i = 0; i < 50; ++i) {
        flat.detunings.push_back(i);
        flat.values.push_back(1e-15 * ((i % 3) - 1));
    }
    CHECK(find_peaks(flat).empty());

    SpectrumTrace box;
    box.detunings = {0.0, 1.0, 2.0};
    box.values = {1.0, 1.0, 1.0};
    CHECK(integrate_trace(box) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("coherence block rejects unsupported schemes")
{
    const LevelScheme plain = make_v_scheme(1.0, 1.0, 0.5);
    const double omega0 = 0.5 * (plain.transition_frequency(0) + plain.transition_frequency(1));
    CHECK_THROWS_AS(coherence_block(plain, DriveField::both(1.0, 1.0, omega0),
                                    CouplingCoefficients::independent(1.0, 1.0)),
                    ValidationError);
}

TEST_CASE("incoherent spectra stay nonnegative up to numerics")
{
    for (double gamma12 : {0.0, 0.7}) {
        const Driven sys = v_both_driven(4.0, 2.0, 0.3, 1.0, gamma12);
        const SpectrumTrace t =
            v_fluorescence(sys, 1.0, gamma12, linear_grid(-14.0, 14.0, 801));
        for (double v : t.values) {
            CHECK(std::isfinite(v));
            CHECK(v >= -1e-8);
        }
    }
}

TEST_CASE("the coherence block is an invariant sector of the full generator")
{
    // The optical coherences (rho12, rho32, rhob2) of the auxiliary-level
    // scheme must evolve autonomously under the full master equation, and
    // their closed 3x3 evolution must be exactly the coherence block.
    const double rabi = 1.9, delta = 0.7, gamma12 = 0.6;
    const LevelScheme scheme = make_aux_v_scheme(1.0, 1.0, delta);
    const double mid =
        0.5 * (scheme.level_energy("1") + scheme.level_energy("3")) - scheme.level_energy("b");
    DriveField drive = DriveField::both(rabi, rabi, mid);
    drive.target = DriveField::Target::AuxiliaryLevel;
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(1.0, 1.0, gamma12);

    const Liouvillian liou = build_liouvillian(scheme, drive, coup, Frame::RotatingAtLaser);
    const CoherenceBlock block = coherence_block(scheme, drive, coup);

    // vectorized indices of rho(0,1)=rho12, rho(2,1)=rho32, rho(3,1)=rhob2
    const std::size_t n = 4;
    const std::size_t sector[3] = {1 * n + 0, 1 * n + 2, 1 * n + 3};
    for (int r = 0; r < 3; ++r) {
        for (std::size_t col = 0; col < n * n; ++col) {
            const cplx entry = liou.generator(sector[r], col);
            bool inside = false;
            cplx expected = 0.0;
            for (int c = 0; c < 3; ++c) {
                if (col == sector[c]) {
                    inside = true;
                    expected = block.matrix(std::size_t(r), std::size_t(c));
                }
            }
            if (inside)
                CHECK(std::abs(entry - expected) < 1e-12);
            else
                CHECK(std::abs(entry) < 1e-14); // sector is closed
        }
    }

    // consequence: every block eigenvalue appears in the generator spectrum
    const Spectrum bs = eig_general(block.matrix);
    const Spectrum ls = eig_general(liou.generator);
    for (const cplx& lb : bs.eigenvalues) {
        double best = 1e300;
        for (const cplx& ll : ls.eigenvalues)
            best = std::min(best, std::abs(lb - ll));
        CHECK(best < 1e-10);
    }
}
