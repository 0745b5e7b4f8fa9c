#pragma once

#include <vector>

#include "qdint/matrix.hpp"

namespace qdint {

// Full eigendecomposition of a general complex matrix. Eigenvalues are sorted
// by descending real part, ties broken by ascending imaginary part, and
// eigenvector columns follow that order. Each eigenvector is normalized and
// phase-fixed so its largest-magnitude component is real and positive.
struct Spectrum {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors; // columns
};

Spectrum eig_general(const ComplexMatrix& a);

// Orthonormal basis of the numerical kernel: right singular vectors whose
// singular value falls below tol * sigma_max.
std::vector<ComplexVector> null_space(const ComplexMatrix& a, double tol = 1e-10);

struct SvdResult {
    std::vector<double> singular_values; // descending
    ComplexMatrix u;                     // columns; zero where sigma == 0
    ComplexMatrix v;                     // columns
};

// One-sided Jacobi SVD. Slow but simple and very accurate at the sizes this
// library works with.
SvdResult svd_jacobi(const ComplexMatrix& a);

// LU solve with partial pivoting and one step of iterative refinement.
// Throws SingularMatrixError (with a rough condition estimate) if a pivot
// collapses.
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);

// As above for a matrix right-hand side.
ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b);

cplx determinant(const ComplexMatrix& a);

// Matrix exponential, Pade(13) with scaling and squaring.
ComplexMatrix expm(const ComplexMatrix& a);

// exp(a*t) * v. Throws NumericsError if the result overflows.
ComplexVector expm_action(const ComplexMatrix& a, const ComplexVector& v, double t);

} // namespace qdint
