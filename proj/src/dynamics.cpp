#include "qdint/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qdint {

DensityMatrix::DensityMatrix(ComplexMatrix m, std::vector<std::string> labels)
    : matrix(std::move(m)), basis_labels(std::move(labels))
{
    validate();
}

DensityMatrix DensityMatrix::pure(const ComplexVector& amplitudes,
                                  std::vector<std::string> labels)
{
    const std::size_t n = amplitudes.size();
    const double nrm = vector_norm(amplitudes);
    if (nrm == 0.0)
        throw ValidationError("pure state needs a nonzero amplitude vector");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / (nrm * nrm);
    return DensityMatrix(std::move(m), std::move(labels));
}

DensityMatrix DensityMatrix::level(const LevelScheme& s, const std::string& name)
{
    ComplexVector amp(s.dim(), cplx(0.0, 0.0));
    if (s.kind == SchemeKind::TwoAtom) {
        const std::vector<std::string> labels = s.basis_labels();
        const auto it = std::find(labels.begin(), labels.end(), name);
        if (it == labels.end())
            throw ValidationError("unknown two-atom basis state: " + name);
        amp[std::size_t(it - labels.begin())] = 1.0;
        return pure(amp, labels);
    }
    amp[s.level_index(name)] = 1.0;
    return pure(amp, s.basis_labels());
}

double DensityMatrix::min_eigenvalue() const
{
    const Spectrum s = eig_general(matrix);
    double low = 0.0;
    for (const cplx& l : s.eigenvalues)
        low = std::min(low, l.real());
    return low;
}

void DensityMatrix::validate() const
{
    if (!matrix.square() || matrix.rows() != basis_labels.size())
        throw ValidationError("density matrix shape disagrees with its basis labels");
    if (!matrix.is_finite())
        throw NumericsError("density matrix has non-finite entries");
    if (!matrix.is_hermitian(kHermitianTol))
        throw NumericsError("density matrix is not Hermitian");
    if (std::abs(matrix.trace() - cplx(1.0, 0.0)) > kTraceTol)
        throw NumericsError("density matrix trace differs from one");
    if (min_eigenvalue() < -kPositivityTol)
        throw NumericsError("density matrix has a significantly negative eigenvalue");
}

Liouvillian build_liouvillian(const ComplexMatrix& h, const std::vector<DissipatorTerm>& terms,
                              std::vector<std::string> basis_labels)
{
    const std::size_t n = h.rows();
    if (!h.square() || n != basis_labels.size())
        throw ValidationError("Liouvillian dimension mismatch");
    if (!h.is_hermitian(1e-12))
        throw ValidationError("Hamiltonian passed to build_liouvillian is not Hermitian");

    const ComplexMatrix ident = ComplexMatrix::identity(n);
    const cplx I(0.0, 1.0);

    // -i (I (x) H - H^T (x) I)
    ComplexMatrix gen = (-I) * (kron(ident, h) - kron(h.transpose(), ident));

    for (const DissipatorTerm& t : terms) {
        if (t.op_i_plus.rows() != n || t.op_j_minus.rows() != n)
            throw ValidationError("dissipator operator dimension mismatch");
        const ComplexMatrix prod = t.op_i_plus * t.op_j_minus; // S_i^+ S_j^-
        ComplexMatrix term = kron(t.op_i_plus.transpose(), t.op_j_minus);
        term -= 0.5 * kron(ident, prod);
        term -= 0.5 * kron(prod.transpose(), ident);
        gen += cplx(t.gamma_ij, 0.0) * term;
    }

    // trace preservation: the identity is a left null vector
    const ComplexVector id_vec = vectorize(ident);
    ComplexVector probe(n * n, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < n * n; ++r)
        for (std::size_t k = 0; k < n * n; ++k)
            probe[k] += std::conj(id_vec[r]) * gen(r, k);
    if (vector_norm(probe) > 1e-9 * std::max(1.0, gen.frobenius_norm()))
        throw NumericsError("constructed generator does not preserve the trace");

    return Liouvillian{std::move(gen), std::move(basis_labels)};
}

Liouvillian build_liouvillian(const LevelScheme& s, const DriveField& d,
                              const CouplingCoefficients& c, Frame frame)
{
    return build_liouvillian(build_hamiltonian(s, d, c, frame),
                             build_dissipator_coefficients(s, c), s.basis_labels());
}

namespace {

ComplexMatrix hermitize(const ComplexMatrix& m)
{
    ComplexMatrix h = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

} // namespace

Trajectory evolve(const Liouvillian& l, const DensityMatrix& rho0,
                  const std::vector<double>& times)
{
    if (rho0.dim() != l.dim())
        throw ValidationError("evolve: state dimension disagrees with the generator");
    rho0.validate();
    Trajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());

    ComplexVector v = vectorize(rho0.matrix);
    double t_prev = 0.0;
    ComplexMatrix step_exp;  // cached exponential for a uniform grid
    double step_cached = -1.0;

    for (double t : times) {
        if (t < t_prev)
            throw ValidationError("evolve: time grid must be ascending and nonnegative");
        const double dt = t - t_prev;
        if (dt > 0.0) {
            if (std::abs(dt - step_cached) > 1e-15 * std::max(1.0, dt)) {
                step_exp = expm(cplx(dt, 0.0) * l.generator);
                step_cached = dt;
            }
            v = matvec(step_exp, v);
        }
        t_prev = t;
        ComplexMatrix rho = hermitize(devectorize(v));
        const cplx tr = rho.trace();
        if (std::abs(tr - cplx(1.0, 0.0)) > 1e-8)
            throw NumericsError("evolve: trace drifted beyond tolerance");
        rho *= 1.0 / tr;
        traj.states.emplace_back(std::move(rho), l.basis_labels);
    }
    return traj;
}

namespace {

constexpr double kKernelTol = 1e-9;

std::vector<ComplexVector> kernel_basis(const ComplexMatrix& m)
{
    return null_space(m, kKernelTol);
}

DensityMatrix normalize_to_state(ComplexMatrix m, const std::vector<std::string>& labels)
{
    const cplx tr = m.trace();
    if (std::abs(tr) < 1e-12)
        throw NumericsError("steady-state candidate has (numerically) zero trace");
    m *= 1.0 / tr;
    m = hermitize(m);
    return DensityMatrix(std::move(m), labels);
}

} // namespace

std::size_t steady_state_degeneracy(const Liouvillian& l)
{
    return kernel_basis(l.generator).size();
}

DensityMatrix steady_state(const Liouvillian& l, const std::optional<DensityMatrix>& rho0)
{
    const std::vector<ComplexVector> right = kernel_basis(l.generator);
    if (right.empty())
        throw NumericsError("generator has no numerical kernel; not a valid Liouvillian?");

    if (right.size() == 1)
        return normalize_to_state(devectorize(right[0]), l.basis_labels);

    if (!rho0.has_value())
        throw ValidationError("degenerate steady state, initial condition required");
    if (rho0->dim() != l.dim())
        throw ValidationError("steady_state: initial state dimension mismatch");

    // Spectral projection of rho0 onto the zero eigenspace: with right kernel
    // basis {r_k} and left kernel basis {l_j}, the projector is
    // P = sum_jk r_k (M^-1)_kj <l_j, .>, M_jk = <l_j, r_k>. The zero
    // eigenvalue of a bounded semigroup generator is semisimple, so M is
    // invertible.
    const std::vector<ComplexVector> left = kernel_basis(l.generator.adjoint());
    if (left.size() != right.size())
        throw NumericsError("left/right kernel dimensions disagree");

    const std::size_t k = right.size();
    const std::size_t nn = l.dim() * l.dim();
    ComplexMatrix m(k, k);
    ComplexVector b(k);
    const ComplexVector v0 = vectorize(rho0->matrix);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < k; ++i) {
            cplx acc = 0.0;
            for (std::size_t r = 0; r < nn; ++r)
                acc += std::conj(left[j][r]) * right[i][r];
            m(j, i) = acc;
        }
        cplx acc = 0.0;
        for (std::size_t r = 0; r < nn; ++r)
            acc += std::conj(left[j][r]) * v0[r];
        b[j] = acc;
    }
    const ComplexVector coef = solve_linear(m, b);
    ComplexVector proj(nn, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < nn; ++r)
            proj[r] += coef[i] * right[i][r];
    return normalize_to_state(devectorize(proj), l.basis_labels);
}

std::vector<double> constant_of_motion_alpha(const Trajectory& traj)
{
    std::vector<double> alpha;
    alpha.reserve(traj.states.size());
    for (const DensityMatrix& rho : traj.states) {
        if (rho.basis_labels.size() < 3 || rho.basis_labels[0] != "1" ||
            rho.basis_labels[2] != "3")
            throw ValidationError("constant of motion is defined on the V-scheme basis");
        const cplx a = rho(0, 0) + rho(2, 2) - rho(0, 2) - rho(2, 0);
        alpha.push_back(a.real());
    }
    return alpha;
}

std::vector<SuperpositionSample> superposition_populations(const Trajectory& traj)
{
    std::vector<SuperpositionSample> out;
    out.reserve(traj.states.size());
    for (const DensityMatrix& rho : traj.states) {
        if (rho.basis_labels.size() < 3 || rho.basis_labels[0] != "1" ||
            rho.basis_labels[2] != "3")
            throw ValidationError("superposition populations are defined on the V-scheme basis");
        // |s> = (|1>+|3>)/sqrt2, |a> = (|1>-|3>)/sqrt2
        const cplx ss = 0.5 * (rho(0, 0) + rho(2, 2) + rho(0, 2) + rho(2, 0));
        const cplx aa = 0.5 * (rho(0, 0) + rho(2, 2) - rho(0, 2) - rho(2, 0));
        const cplx sa = 0.5 * (rho(0, 0) - rho(2, 2) - rho(0, 2) + rho(2, 0));
        out.push_back({ss.real(), aa.real(), sa.real(), sa.imag()});
    }
    return out;
}

CptResult cpt_upper_population(double gamma1, double gamma2, double rabi, double delta,
                               double delta12, double p, double delta_l,
                               const std::optional<DensityMatrix>& rho0)
{
    if (gamma1 <= 0.0 || gamma2 <= 0.0)
        throw ValidationError("cpt_upper_population needs positive decay rates");
    if (p < 0.0 || p > 1.0)
        throw ValidationError("interference parameter p must lie in [0, 1]");

    const double sum = gamma1 + gamma2;
    const double root = std::sqrt(gamma1 * gamma2);
    const double u = std::sqrt(gamma1 / sum);
    const double v = std::sqrt(gamma2 / sum);
    const double delta_c = (delta12 * (gamma1 - gamma2) - delta * root) / sum;

    LevelScheme scheme = make_lambda_scheme(gamma1, gamma2, delta);
    const double omega_l = 0.5 * (scheme.transition_frequency(0) + scheme.transition_frequency(1)) +
                           delta_l;
    // The drive couples only to the decay-weighted symmetric ground
    // superposition |s> = u|1> + v|2>, with strength u*rabi; in the bare
    // basis that is rabi1 = u^2 rabi, rabi2 = u v rabi.
    const DriveField drive = DriveField::both(u * u * rabi, u * v * rabi, omega_l);
    const CouplingCoefficients coup =
        CouplingCoefficients::explicit_coupling(gamma1, gamma2, p * root, 0.0, delta12);

    const Liouvillian liou = build_liouvillian(scheme, drive, coup, Frame::RotatingAtLaser);

    CptResult res{};
    res.delta_c = delta_c;
    res.degenerate_kernel = steady_state_degeneracy(liou) > 1;

    std::optional<DensityMatrix> init = rho0;
    if (res.degenerate_kernel && !init.has_value()) {
        // default: unpolarized ground-state mixture
        ComplexMatrix m(3, 3);
        m(0, 0) = 0.5;
        m(1, 1) = 0.5;
        init = DensityMatrix(std::move(m), scheme.basis_labels());
    }
    const DensityMatrix ss = steady_state(liou, init);
    res.rho33 = ss(2, 2).real();
    return res;
}

} // namespace qdint
