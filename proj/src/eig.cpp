#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdint/complex_kernels.hpp"
#include "qdint/numerics.hpp"

// Dense complex eigensolver: Householder reduction to upper Hessenberg form,
// then single-shift QR iteration with Givens rotations down to complex Schur
// form, then eigenvectors by back substitution through the triangular factor.

namespace qdint {

namespace {

constexpr double kEps = 2.220446049250313e-16;

// Givens pair (c real, s complex) with  [c s; -conj(s) c] * [x; y] = [r; 0].
void givens(cplx x, cplx y, double& c, cplx& s)
{
    const double ax = std::abs(x), ay = std::abs(y);
    if (ay == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    const double r = std::hypot(ax, ay);
    if (ax == 0.0) {
        c = 0.0;
        s = std::conj(y) / ay;
        return;
    }
    c = ax / r;
    s = (x / ax) * std::conj(y) / r;
}

// Reduce H to upper Hessenberg by Householder reflections, accumulating the
// unitary transform into u (H_new = U^H H U).
void hessenberg(ComplexMatrix& h, ComplexMatrix& u)
{
    const std::size_t n = h.rows();
    ComplexVector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double colnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i)
            colnorm += std::norm(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0)
            continue;
        const cplx x0 = h(k + 1, k);
        const cplx phase = (std::abs(x0) == 0.0) ? cplx(1.0, 0.0) : x0 / std::abs(x0);
        const cplx alpha = -phase * colnorm;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
            if (i == k + 1)
                v[i] -= alpha;
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0)
            continue;
        const double inv = 2.0 / vnorm2;

        // rows: H <- (I - 2 v v^H / |v|^2) H
        for (std::size_t j = k; j < n; ++j) {
            cplx dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i)
                dot += std::conj(v[i]) * h(i, j);
            dot *= inv;
            for (std::size_t i = k + 1; i < n; ++i)
                h(i, j) -= dot * v[i];
        }
        // cols: H <- H (I - 2 v v^H / |v|^2)
        for (std::size_t i = 0; i < n; ++i) {
            cplx dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j)
                dot += h(i, j) * v[j];
            dot *= inv;
            for (std::size_t j = k + 1; j < n; ++j)
                h(i, j) -= dot * std::conj(v[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j)
                dot += u(i, j) * v[j];
            dot *= inv;
            for (std::size_t j = k + 1; j < n; ++j)
                u(i, j) -= dot * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < n; ++i)
            h(i, k) = 0.0;
        h(k + 1, k) = alpha;
    }
}

// Eigenvalue of [[a, b], [c, d]] closest to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d)
{
    const cplx tr2 = 0.5 * (a + d);
    const cplx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
    const cplx l1 = tr2 + disc;
    const cplx l2 = tr2 - disc;
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

// Single-shift QR on the Hessenberg matrix, rotations accumulated into u.
void schur_qr(ComplexMatrix& h, ComplexMatrix& u)
{
    const std::size_t n = h.rows();
    if (n < 2)
        return;
    const double hnorm = std::max(h.frobenius_norm(), 1e-300);
    const int max_total = 40 * static_cast<int>(n);
    int total_iters = 0;

    std::size_t hi = n - 1;
    int stuck = 0;
    std::vector<double> cs(n);
    std::vector<cplx> ss(n);

    while (true) {
        // deflate converged subdiagonals
        while (hi > 0) {
            const double off = std::abs(h(hi, hi - 1));
            const double scale = std::abs(h(hi - 1, hi - 1)) + std::abs(h(hi, hi));
            if (off <= kEps * std::max(scale, hnorm * kEps) || off < 1e-300) {
                h(hi, hi - 1) = 0.0;
                --hi;
                stuck = 0;
            } else {
                break;
            }
        }
        if (hi == 0)
            return;

        std::size_t lo = hi;
        while (lo > 0) {
            const double off = std::abs(h(lo, lo - 1));
            const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (off <= kEps * std::max(scale, hnorm * kEps)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (++total_iters > max_total)
            throw ConvergenceError("QR iteration did not converge", max_total);

        cplx mu;
        if (++stuck % 12 == 0) {
            // occasional ad hoc shift to break symmetric stalls
            const double t = std::abs(h(hi, hi - 1)) + (hi > 1 ? std::abs(h(hi - 1, hi - 2)) : 0.0);
            mu = h(hi, hi) + cplx(0.75 * t, 0.2 * t);
        } else {
            mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        for (std::size_t i = lo; i <= hi; ++i)
            h(i, i) -= mu;

        // QR: rotate away the subdiagonal, left-applying G_i to rows (i, i+1)
        for (std::size_t i = lo; i < hi; ++i) {
            givens(h(i, i), h(i + 1, i), cs[i], ss[i]);
            const std::size_t len = n - i;
            kernels::zrot(len, h.row(i) + i, h.row(i + 1) + i, cs[i], ss[i]);
            h(i + 1, i) = 0.0;
        }
        // RQ: right-apply G_i^H to columns (i, i+1); strided, done manually
        for (std::size_t i = lo; i < hi; ++i) {
            const double c = cs[i];
            const cplx s = ss[i];
            const std::size_t top = std::min(i + 2, hi + 1);
            for (std::size_t r = 0; r < top; ++r) {
                const cplx a = h(r, i), b = h(r, i + 1);
                h(r, i) = c * a + std::conj(s) * b;
                h(r, i + 1) = -s * a + c * b;
            }
            for (std::size_t r = 0; r < n; ++r) {
                const cplx a = u(r, i), b = u(r, i + 1);
                u(r, i) = c * a + std::conj(s) * b;
                u(r, i + 1) = -s * a + c * b;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i)
            h(i, i) += mu;
    }
}

} // namespace

Spectrum eig_general(const ComplexMatrix& a)
{
    if (!a.square())
        throw ValidationError("eig_general expects a square matrix");
    if (!a.is_finite())
        throw ValidationError("eig_general expects finite entries");
    const std::size_t n = a.rows();
    Spectrum out;
    if (n == 0)
        return out;

    ComplexMatrix t = a;
    ComplexMatrix u = ComplexMatrix::identity(n);
    hessenberg(t, u);
    schur_qr(t, u);

    const double tnorm = std::max(t.frobenius_norm(), 1e-300);
    ComplexVector lambda(n);
    for (std::size_t i = 0; i < n; ++i)
        lambda[i] = t(i, i);

    // Eigenvectors of the triangular factor by back substitution, guarded
    // against repeated eigenvalues, then rotated back through u.
    ComplexMatrix vecs(n, n);
    ComplexVector y(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(y.begin(), y.end(), cplx(0.0, 0.0));
        y[k] = 1.0;
        for (std::size_t jj = k; jj-- > 0;) {
            cplx acc = 0.0;
            for (std::size_t m = jj + 1; m <= k; ++m)
                acc += t(jj, m) * y[m];
            cplx denom = t(jj, jj) - lambda[k];
            if (std::abs(denom) < kEps * tnorm)
                denom = cplx(kEps * tnorm, 0.0);
            y[jj] = -acc / denom;
        }
        // v = u * y; columns of u are strided, accumulate row-wise
        ComplexVector v(n, cplx(0.0, 0.0));
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (std::size_t m = 0; m <= k; ++m)
                acc += u(r, m) * y[m];
            v[r] = acc;
        }
        // normalize and fix the phase: largest component real positive
        double norm = vector_norm(v);
        if (norm == 0.0) {
            v[k] = 1.0;
            norm = 1.0;
        }
        std::size_t imax = 0;
        for (std::size_t r = 1; r < n; ++r)
            if (std::abs(v[r]) > std::abs(v[imax]))
                imax = r;
        const cplx ph = (std::abs(v[imax]) == 0.0) ? cplx(1.0, 0.0)
                                                   : std::abs(v[imax]) / v[imax];
        for (std::size_t r = 0; r < n; ++r)
            v[r] *= ph / norm;
        for (std::size_t r = 0; r < n; ++r)
            vecs(r, k) = v[r];
    }

    // deterministic ordering: descending real part, then ascending imaginary
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) {
        if (lambda[p].real() != lambda[q].real())
            return lambda[p].real() > lambda[q].real();
        return lambda[p].imag() < lambda[q].imag();
    });

    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = lambda[idx[k]];
        for (std::size_t r = 0; r < n; ++r)
            out.eigenvectors(r, k) = vecs(r, idx[k]);
    }
    return out;
}

} // namespace qdint
