#include "qdint/matrix.hpp"

#include <cmath>

#include "qdint/complex_kernels.hpp"

namespace qdint {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError(std::string("shape mismatch in ") + what);
}

} // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const ComplexVector& d)
{
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c)
            throw ValidationError("ragged initializer in ComplexMatrix::from_rows");
        std::size_t j = 0;
        for (const cplx& v : row)
            m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o)
{
    require_same_shape(*this, o, "matrix addition");
    kernels::zaxpy(data_.size(), 1.0, o.data(), data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o)
{
    require_same_shape(*this, o, "matrix subtraction");
    kernels::zaxpy(data_.size(), -1.0, o.data(), data());
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx a)
{
    kernels::zscal(data_.size(), a, data());
    return *this;
}

ComplexMatrix ComplexMatrix::transpose() const
{
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

ComplexMatrix ComplexMatrix::conjugate() const
{
    ComplexMatrix c(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
        c.data()[i] = std::conj(data_[i]);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = std::conj((*this)(i, j));
    return t;
}

cplx ComplexMatrix::trace() const
{
    if (!square())
        throw ValidationError("trace of a non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const
{
    double s = 0.0;
    for (const cplx& v : data_)
        s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const
{
    double m = 0.0;
    for (const cplx& v : data_)
        m = std::max(m, std::abs(v));
    return m;
}

double ComplexMatrix::norm1() const
{
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

bool ComplexMatrix::is_finite() const
{
    for (const cplx& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

bool ComplexMatrix::is_hermitian(double tol) const
{
    if (!square())
        return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
                return false;
    return true;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b)
{
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b)
{
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows())
        throw ValidationError("shape mismatch in matrix product");
    ComplexMatrix c(a.rows(), b.cols());
    kernels::zgemm_acc(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
    return c;
}

ComplexMatrix operator*(cplx a, ComplexMatrix m)
{
    m *= a;
    return m;
}

ComplexMatrix operator*(double a, ComplexMatrix m)
{
    m *= cplx(a, 0.0);
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0))
                continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                kernels::zaxpy(b.cols(), aij, b.row(p), k.row(i * b.rows() + p) + j * b.cols());
        }
    return k;
}

ComplexVector vectorize(const ComplexMatrix& m)
{
    if (!m.square())
        throw ValidationError("vectorize expects a square matrix");
    const std::size_t n = m.rows();
    ComplexVector v(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            v[j * n + i] = m(i, j);
    return v;
}

ComplexMatrix devectorize(const ComplexVector& v)
{
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(v.size()))));
    if (n * n != v.size())
        throw ValidationError("devectorize expects a vector of square length");
    ComplexMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            m(i, j) = v[j * n + i];
    return m;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x)
{
    if (a.cols() != x.size())
        throw ValidationError("shape mismatch in matrix-vector product");
    ComplexVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = kernels::zdotu(a.cols(), a.row(i), x.data());
    return y;
}

double vector_norm(const ComplexVector& v)
{
    double s = 0.0;
    for (const cplx& z : v)
        s += std::norm(z);
    return std::sqrt(s);
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b)
{
    if (a.size() != b.size())
        throw ValidationError("size mismatch in vector subtraction");
    ComplexVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

} // namespace qdint
