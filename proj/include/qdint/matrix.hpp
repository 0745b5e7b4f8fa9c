#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qdint/core.hpp"

namespace qdint {

using ComplexVector = std::vector<cplx>;

// Dense complex matrix, row-major storage. Small by design: everything in
// this library lives in level bases of dimension <= 16, with Liouvillians of
// dimension <= 256. Products route through the SIMD kernel layer.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols)
    {
    }

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const ComplexVector& d);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    cplx* row(std::size_t i) { return data_.data() + i * cols_; }
    const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx a);

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix adjoint() const;

    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    double norm1() const; // max absolute column sum
    bool is_finite() const;
    bool is_hermitian(double tol) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    ComplexVector data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx a, ComplexMatrix m);
ComplexMatrix operator*(double a, ComplexMatrix m);

// Kronecker product; dims multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Column-stacking bijection between square matrices and vectors, chosen so
// that vec(A X B) = (B^T (x) A) vec(X).
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexVector& v);

// y = A x
ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);

double vector_norm(const ComplexVector& v);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);

} // namespace qdint
