#include "qdint/response.hpp"

#include <algorithm>
#include <cmath>

namespace qdint {

namespace {

void require_ascending(const std::vector<double>& xs, const char* what)
{
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] < xs[i - 1])
            throw ValidationError(std::string(what) + ": grid must be ascending");
}

void require_stationary(const Liouvillian& l, const DensityMatrix& rho_ss)
{
    const ComplexVector resid = matvec(l.generator, vectorize(rho_ss.matrix));
    const double scale = std::max(1.0, l.generator.frobenius_norm());
    if (vector_norm(resid) > 1e-8 * scale)
        throw ValidationError("supplied state is not stationary under the generator");
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t += a(i, j) * b(j, i);
    return t;
}

// Solve (L + i delta) z = rhs with the stationary direction deflated. At a
// pole of the resolvent the solve is retried with the detuning shifted by
// +1e-12 i, and any kernel component picked up along the way is removed by
// the trace projection (the physical solution is traceless).
ComplexVector resolvent_solve(const Liouvillian& l, double delta, const ComplexVector& rhs,
                              const ComplexVector& stationary_vec)
{
    const std::size_t nn = rhs.size();
    ComplexMatrix a = l.generator;
    for (std::size_t k = 0; k < nn; ++k)
        a(k, k) += cplx(0.0, delta);
    ComplexVector z;
    try {
        z = solve_linear(a, rhs);
    } catch (const SingularMatrixError&) {
        for (std::size_t k = 0; k < nn; ++k)
            a(k, k) += cplx(-1e-12, 0.0);
        z = solve_linear(a, rhs);
    }
    const cplx tr = devectorize(z).trace();
    for (std::size_t k = 0; k < nn; ++k)
        z[k] -= tr * stationary_vec[k];
    return z;
}

} // namespace

CoherenceBlock coherence_block(const LevelScheme& s, const DriveField& d,
                               const CouplingCoefficients& c)
{
    if (s.kind != SchemeKind::SingleAtomV || !s.has_auxiliary)
        throw ValidationError("coherence block is defined for the auxiliary-level V scheme");
    if (d.target != DriveField::Target::AuxiliaryLevel)
        throw ValidationError("coherence block needs the drive on the auxiliary transitions");
    c.validate();

    const double eb = s.level_energy("b");
    const double delta1 = s.level_energy("1") - eb - d.frequency;
    const double delta2 = s.level_energy("3") - eb - d.frequency;
    const double omega1 = d.rabi.at(0);
    const double omega2 = d.rabi.size() > 1 ? d.rabi.at(1) : d.rabi.at(0);
    const cplx I(0.0, 1.0);

    ComplexMatrix m(3, 3);
    m(0, 0) = -(0.5 * c.gamma1 + I * delta1);
    m(0, 1) = -0.5 * c.gamma12;
    m(0, 2) = 0.5 * I * omega1;
    m(1, 0) = -0.5 * c.gamma12;
    m(1, 1) = -(0.5 * c.gamma2 + I * delta2);
    m(1, 2) = 0.5 * I * omega2;
    m(2, 0) = 0.5 * I * omega1;
    m(2, 1) = 0.5 * I * omega2;
    m(2, 2) = 0.0;
    return CoherenceBlock{std::move(m), {"rho12", "rho32", "rhob2"}};
}

std::vector<LineComponent> spectral_line_structure(const CoherenceBlock& block)
{
    const Spectrum s = eig_general(block.matrix);
    const double scale = std::max(block.matrix.frobenius_norm(), 1e-300);
    std::vector<LineComponent> lines;
    lines.reserve(s.eigenvalues.size());
    for (const cplx& l : s.eigenvalues) {
        LineComponent lc{};
        lc.is_coherent = std::abs(l) <= 1e-9 * scale;
        lc.position = lc.is_coherent ? 0.0 : l.imag();
        lc.halfwidth = lc.is_coherent ? 0.0 : -l.real();
        lines.push_back(lc);
    }
    return lines;
}

std::vector<cplx> two_time_correlation(const Liouvillian& l, const DensityMatrix& rho_ss,
                                       const ComplexMatrix& op_a, const ComplexMatrix& op_b,
                                       const std::vector<double>& taus)
{
    if (op_a.rows() != l.dim() || op_b.rows() != l.dim())
        throw ValidationError("two_time_correlation: operator dimension mismatch");
    require_ascending(taus, "two_time_correlation");
    require_stationary(l, rho_ss);

    ComplexVector chi = vectorize(op_b * rho_ss.matrix);
    std::vector<cplx> out;
    out.reserve(taus.size());
    double t_prev = 0.0;
    ComplexMatrix step;
    double cached_dt = -1.0;
    for (double tau : taus) {
        if (tau < 0.0)
            throw ValidationError("two_time_correlation: delays must be nonnegative");
        const double dt = tau - t_prev;
        if (dt > 0.0) {
            if (std::abs(dt - cached_dt) > 1e-15 * std::max(1.0, dt)) {
                step = expm(cplx(dt, 0.0) * l.generator);
                cached_dt = dt;
            }
            chi = matvec(step, chi);
        }
        t_prev = tau;
        out.push_back(trace_of_product(op_a, devectorize(chi)));
    }
    return out;
}

SpectrumTrace fluorescence_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                    const std::vector<ComplexMatrix>& lowering_ops,
                                    const CouplingCoefficients& c,
                                    const std::vector<double>& grid)
{
    if (lowering_ops.size() != 2)
        throw ValidationError("fluorescence_spectrum expects the two transition operators");
    require_ascending(grid, "fluorescence_spectrum");
    require_stationary(l, rho_ss);

    const double gij[2][2] = {{c.gamma1, c.gamma12}, {c.gamma12, c.gamma2}};
    const ComplexVector stationary_vec = vectorize(rho_ss.matrix);

    // fluctuation sources X_i = rho Si+ - <Si+> rho  (traceless)
    std::vector<ComplexVector> sources;
    for (const ComplexMatrix& sm : lowering_ops) {
        const ComplexMatrix sp = sm.adjoint();
        ComplexMatrix x = rho_ss.matrix * sp;
        const cplx mean = x.trace();
        x -= mean * rho_ss.matrix;
        ComplexVector xv = vectorize(x);
        // scrub the residual trace so the resolvent never sees the kernel
        const cplx tr = x.trace();
        const ComplexVector sv = stationary_vec;
        for (std::size_t k = 0; k < xv.size(); ++k)
            xv[k] -= tr * sv[k];
        sources.push_back(std::move(xv));
    }

    SpectrumTrace trace;
    trace.detunings = grid;
    trace.values.reserve(grid.size());
    ComplexVector rhs(sources[0].size());
    for (double delta : grid) {
        cplx val = 0.0;
        for (int i = 0; i < 2; ++i) {
            for (std::size_t k = 0; k < rhs.size(); ++k)
                rhs[k] = -sources[std::size_t(i)][k];
            const ComplexVector z = resolvent_solve(l, delta, rhs, stationary_vec);
            const ComplexMatrix zm = devectorize(z);
            for (int j = 0; j < 2; ++j)
                val += gij[i][j] * trace_of_product(lowering_ops[std::size_t(j)], zm);
        }
        trace.values.push_back(val.real());
    }
    return trace;
}

SpectrumTrace probe_absorption(const Liouvillian& l0, const ComplexMatrix& probe_raising,
                               std::pair<std::size_t, std::size_t> target, double omega_p,
                               const std::vector<double>& grid, double factor)
{
    if (probe_raising.rows() != l0.dim())
        throw ValidationError("probe operator does not act on the scheme");
    require_ascending(grid, "probe_absorption");
    if (steady_state_degeneracy(l0) != 1)
        throw ValidationError("probe_absorption needs a unique unperturbed stationary state");
    const DensityMatrix rho0 = steady_state(l0);
    const ComplexVector stationary_vec = vectorize(rho0.matrix);

    // -(i/2) [Sp+, rho0], per unit probe Rabi frequency
    ComplexMatrix comm = probe_raising * rho0.matrix - rho0.matrix * probe_raising;
    comm *= cplx(0.0, -0.5);
    const ComplexVector rhs = vectorize(comm);

    SpectrumTrace trace;
    trace.detunings = grid;
    trace.values.reserve(grid.size());
    for (double delta : grid) {
        const ComplexVector z = resolvent_solve(l0, delta, rhs, stationary_vec);
        const ComplexMatrix rho1 = devectorize(z);
        trace.values.push_back(factor * omega_p * rho1(target.first, target.second).imag());
    }
    return trace;
}

std::vector<Peak> find_peaks(const SpectrumTrace& trace, double prominence_frac, double floor)
{
    const std::vector<double>& v = trace.values;
    std::vector<Peak> peaks;
    if (v.size() < 3)
        return peaks;
    const double gmax = *std::max_element(v.begin(), v.end());
    if (gmax <= floor)
        return peaks;
    const double need = prominence_frac * gmax;

    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] > v[i - 1] && v[i] >= v[i + 1]))
            continue;
        // prominence: drop to the key saddle on each side, bounded by the
        // nearest strictly higher ground
        double left_min = v[i];
        for (std::size_t k = i; k-- > 0;) {
            left_min = std::min(left_min, v[k]);
            if (v[k] > v[i])
                break;
        }
        double right_min = v[i];
        for (std::size_t k = i + 1; k < v.size(); ++k) {
            right_min = std::min(right_min, v[k]);
            if (v[k] > v[i])
                break;
        }
        const double prom = v[i] - std::max(left_min, right_min);
        if (prom >= need)
            peaks.push_back({trace.detunings[i], v[i], prom});
    }
    return peaks;
}

double integrate_trace(const SpectrumTrace& trace)
{
    double acc = 0.0;
    for (std::size_t i = 1; i < trace.detunings.size(); ++i)
        acc += 0.5 * (trace.values[i] + trace.values[i - 1]) *
               (trace.detunings[i] - trace.detunings[i - 1]);
    return acc;
}

} // namespace qdint
