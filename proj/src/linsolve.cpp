#include <cmath>
#include <limits>
#include <vector>

#include "qdint/complex_kernels.hpp"
#include "qdint/numerics.hpp"

namespace qdint {

namespace {

struct LuFactors {
    ComplexMatrix lu;           // L below diagonal (unit), U on and above
    std::vector<std::size_t> perm;
    int sign = 1;
    double max_abs = 0.0;
    double min_pivot = 0.0;
};

LuFactors lu_factor(const ComplexMatrix& a)
{
    if (!a.square())
        throw ValidationError("solve_linear expects a square matrix");
    const std::size_t n = a.rows();
    LuFactors f{a, {}, 1, a.max_abs(), 0.0};
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.perm[i] = i;

    // Rank collapse threshold, relative to the largest entry.
    const double tiny = std::max(f.max_abs, 1e-300) * double(n) * 1e-15;
    f.min_pivot = std::numeric_limits<double>::infinity();

    ComplexMatrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(m(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= tiny) {
            const double cond = f.max_abs * double(n) / std::max(best, 1e-300);
            throw SingularMatrixError("singular matrix in LU factorization", cond);
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m(k, j), m(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        f.min_pivot = std::min(f.min_pivot, best);
        const cplx inv_pivot = 1.0 / m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = m(i, k) * inv_pivot;
            m(i, k) = l;
            if (l != cplx(0.0, 0.0))
                kernels::zaxpy(n - k - 1, -l, m.row(k) + k + 1, m.row(i) + k + 1);
        }
    }
    return f;
}

ComplexVector lu_solve(const LuFactors& f, const ComplexVector& b)
{
    const std::size_t n = f.lu.rows();
    ComplexVector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = b[f.perm[i]];
    // forward substitution (unit lower)
    for (std::size_t i = 1; i < n; ++i)
        x[i] -= kernels::zdotu(i, f.lu.row(i), x.data());
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        x[ii] -= kernels::zdotu(n - ii - 1, f.lu.row(ii) + ii + 1, x.data() + ii + 1);
        x[ii] /= f.lu(ii, ii);
    }
    return x;
}

} // namespace

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b)
{
    if (a.rows() != b.size())
        throw ValidationError("solve_linear: dimension mismatch");
    const LuFactors f = lu_factor(a);
    ComplexVector x = lu_solve(f, b);
    // One refinement step tightens the residual for moderately conditioned
    // systems at negligible cost.
    ComplexVector r = b - matvec(a, x);
    const ComplexVector dx = lu_solve(f, r);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += dx[i];
    return x;
}

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.rows() != b.rows())
        throw ValidationError("solve_linear: dimension mismatch");
    const LuFactors f = lu_factor(a);
    ComplexMatrix x(b.rows(), b.cols());
    ComplexVector col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            col[i] = b(i, j);
        ComplexVector xj = lu_solve(f, col);
        const ComplexVector r = col - matvec(a, xj);
        const ComplexVector dx = lu_solve(f, r);
        for (std::size_t i = 0; i < b.rows(); ++i)
            x(i, j) = xj[i] + dx[i];
    }
    return x;
}

cplx determinant(const ComplexMatrix& a)
{
    try {
        const LuFactors f = lu_factor(a);
        cplx d = double(f.sign);
        for (std::size_t i = 0; i < a.rows(); ++i)
            d *= f.lu(i, i);
        return d;
    } catch (const SingularMatrixError&) {
        return 0.0;
    }
}

} // namespace qdint
