#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdint/complex_kernels.hpp"
#include "qdint/numerics.hpp"

// One-sided Jacobi SVD: rotate column pairs of A until all columns are
// mutually orthogonal; column norms are then the singular values and the
// accumulated rotations form V. Worked on A^T so that columns are contiguous.

namespace qdint {

namespace {

constexpr double kOrthTol = 1e-13;
constexpr int kMaxSweeps = 60;

} // namespace

SvdResult svd_jacobi(const ComplexMatrix& a)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) {
        // factor the adjoint and swap factors: A = U S V^H <=> A^H = V S U^H
        SvdResult r = svd_jacobi(a.adjoint());
        std::swap(r.u, r.v);
        return r;
    }

    ComplexMatrix wt = a.transpose(); // rows of wt = columns of A
    ComplexMatrix vt = ComplexMatrix::identity(n);

    // Columns that collapse to numerical zero carry no direction information;
    // rotating against them cycles forever, so they sit out the sweeps.
    std::vector<double> norm2(n);
    double colmax2 = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        norm2[p] = kernels::zdotc(m, wt.row(p), wt.row(p)).real();
        colmax2 = std::max(colmax2, norm2[p]);
    }
    const double null2 = colmax2 * 1e-30;

    bool changed = true;
    int sweep = 0;
    while (changed) {
        if (++sweep > kMaxSweeps)
            throw ConvergenceError("Jacobi SVD did not converge", kMaxSweeps);
        changed = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double gpp = norm2[p];
                const double gqq = norm2[q];
                if (gpp <= null2 || gqq <= null2)
                    continue;
                const cplx gpq = kernels::zdotc(m, wt.row(p), wt.row(q));
                const double off = std::abs(gpq);
                if (off <= kOrthTol * std::sqrt(gpp * gqq) || off == 0.0)
                    continue;
                changed = true;

                // phase out gpq, then a real Jacobi rotation
                const cplx phase = gpq / off;
                const double zeta = (gqq - gpp) / (2.0 * off);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                kernels::zscal(m, std::conj(phase), wt.row(q));
                kernels::zrot(m, wt.row(p), wt.row(q), c, cplx(-s, 0.0));
                kernels::zscal(n, std::conj(phase), vt.row(q));
                kernels::zrot(n, vt.row(p), vt.row(q), c, cplx(-s, 0.0));
                norm2[p] = kernels::zdotc(m, wt.row(p), wt.row(p)).real();
                norm2[q] = kernels::zdotc(m, wt.row(q), wt.row(q)).real();
            }
        }
    }

    SvdResult out;
    out.singular_values.resize(n);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<double> norms(n);
    for (std::size_t p = 0; p < n; ++p)
        norms[p] = std::sqrt(kernels::zdotc(m, wt.row(p), wt.row(p)).real());
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    out.u = ComplexMatrix(m, n);
    out.v = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = idx[k];
        out.singular_values[k] = norms[p];
        if (norms[p] > 0.0)
            for (std::size_t i = 0; i < m; ++i)
                out.u(i, k) = wt(p, i) / norms[p];
        for (std::size_t i = 0; i < n; ++i)
            out.v(i, k) = vt(p, i);
    }
    return out;
}

std::vector<ComplexVector> null_space(const ComplexMatrix& a, double tol)
{
    if (!a.square())
        throw ValidationError("null_space expects a square matrix");
    if (a.rows() == 0)
        return {};
    const SvdResult svd = svd_jacobi(a);
    const double smax = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
    std::vector<ComplexVector> basis;
    for (std::size_t k = 0; k < svd.singular_values.size(); ++k) {
        if (svd.singular_values[k] <= tol * smax) {
            ComplexVector v(a.cols());
            for (std::size_t i = 0; i < a.cols(); ++i)
                v[i] = svd.v(i, k);
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

} // namespace qdint
