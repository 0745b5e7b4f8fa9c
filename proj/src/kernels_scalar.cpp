#include "qdint/complex_kernels.hpp"

// Reference implementations. Deliberately plain loops on the real/imag parts:
// these define the semantics the SIMD variants must reproduce.

namespace qdint::kernels::scalar {

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y)
{
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
    }
}

void scal(std::size_t n, cplx a, cplx* x)
{
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y)
{
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y)
{
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

void rot(std::size_t n, cplx* x, cplx* y, double c, cplx s)
{
    const cplx ms = -std::conj(s);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = c * xi + s * yi;
        y[i] = ms * xi + c * yi;
    }
}

void gemm_acc(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c)
{
    for (std::size_t i = 0; i < m; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t l = 0; l < k; ++l) {
            const cplx ail = a[i * k + l];
            if (ail == cplx(0.0, 0.0))
                continue;
            axpy(n, ail, b + l * n, crow);
        }
    }
}

} // namespace qdint::kernels::scalar
