#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "qdint/complex_kernels.hpp"

// AVX2+FMA variants. Layout: two complex<double> per 256-bit vector,
// interleaved as [re0, im0, re1, im1].
//
// Complex multiply a*x with broadcast scalar a = (ar, ai):
//   even lane: ar*xr - ai*xi
//   odd  lane: ar*xi + ai*xr
// which is exactly _mm256_fmaddsub_pd(ar, x, ai * swap(x)).

namespace qdint::kernels::avx2 {

namespace {

inline __m256d cmul_broadcast(__m256d var, __m256d vai, __m256d vx)
{
    const __m256d xswap = _mm256_permute_pd(vx, 0x5);
    return _mm256_fmaddsub_pd(var, vx, _mm256_mul_pd(vai, xswap));
}

inline void axpy_inline(std::size_t n, cplx a, const cplx* x, cplx* y)
{
    const __m256d var = _mm256_set1_pd(a.real());
    const __m256d vai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        const __m256d vx = _mm256_loadu_pd(px);
        const __m256d vy = _mm256_loadu_pd(py);
        _mm256_storeu_pd(py, _mm256_add_pd(vy, cmul_broadcast(var, vai, vx)));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + a.real() * xr - a.imag() * xi,
                    y[i].imag() + a.real() * xi + a.imag() * xr);
    }
}

} // namespace

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y)
{
    axpy_inline(n, a, x, y);
}

void scal(std::size_t n, cplx a, cplx* x)
{
    const __m256d var = _mm256_set1_pd(a.real());
    const __m256d vai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    double* px = reinterpret_cast<double*>(x);
    for (; i + 2 <= n; i += 2, px += 4)
        _mm256_storeu_pd(px, cmul_broadcast(var, vai, _mm256_loadu_pd(px)));
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx(a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr);
    }
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y)
{
    // re = sum(xr*yr + xi*yi): plain lane-wise product, summed.
    // im = sum(xr*yi - xi*yr): swap x, negate even lanes, summed.
    const __m256d negeven = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
    __m256d vre = _mm256_setzero_pd();
    __m256d vim = _mm256_setzero_pd();
    std::size_t i = 0;
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        const __m256d vx = _mm256_loadu_pd(px);
        const __m256d vy = _mm256_loadu_pd(py);
        vre = _mm256_fmadd_pd(vx, vy, vre);
        const __m256d xswap = _mm256_permute_pd(vx, 0x5);
        vim = _mm256_fmadd_pd(_mm256_mul_pd(xswap, negeven), vy, vim);
    }
    alignas(32) double re4[4], im4[4];
    _mm256_store_pd(re4, vre);
    _mm256_store_pd(im4, vim);
    double re = re4[0] + re4[1] + re4[2] + re4[3];
    double im = im4[0] + im4[1] + im4[2] + im4[3];
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y)
{
    // re = sum(xr*yr - xi*yi): negate odd lanes of the product.
    // im = sum(xr*yi + xi*yr): swap x, plain product.
    const __m256d negodd = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    __m256d vre = _mm256_setzero_pd();
    __m256d vim = _mm256_setzero_pd();
    std::size_t i = 0;
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        const __m256d vx = _mm256_loadu_pd(px);
        const __m256d vy = _mm256_loadu_pd(py);
        vre = _mm256_fmadd_pd(_mm256_mul_pd(vx, negodd), vy, vre);
        const __m256d xswap = _mm256_permute_pd(vx, 0x5);
        vim = _mm256_fmadd_pd(xswap, vy, vim);
    }
    alignas(32) double re4[4], im4[4];
    _mm256_store_pd(re4, vre);
    _mm256_store_pd(im4, vim);
    double re = re4[0] + re4[1] + re4[2] + re4[3];
    double im = im4[0] + im4[1] + im4[2] + im4[3];
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

void rot(std::size_t n, cplx* x, cplx* y, double c, cplx s)
{
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vsr = _mm256_set1_pd(s.real());
    const __m256d vsi = _mm256_set1_pd(s.imag());
    // -conj(s) = (-sr, si)
    const __m256d vmr = _mm256_set1_pd(-s.real());
    std::size_t i = 0;
    double* px = reinterpret_cast<double*>(x);
    double* py = reinterpret_cast<double*>(y);
    for (; i + 2 <= n; i += 2, px += 4, py += 4) {
        const __m256d vx = _mm256_loadu_pd(px);
        const __m256d vy = _mm256_loadu_pd(py);
        const __m256d xnew = _mm256_fmadd_pd(vc, vx, cmul_broadcast(vsr, vsi, vy));
        const __m256d ynew = _mm256_fmadd_pd(vc, vy, cmul_broadcast(vmr, vsi, vx));
        _mm256_storeu_pd(px, xnew);
        _mm256_storeu_pd(py, ynew);
    }
    const cplx ms = -std::conj(s);
    for (; i < n; ++i) {
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
            axpy_inline(n, ail, b + l * n, crow);
        }
    }
}

} // namespace qdint::kernels::avx2

#endif // x86-64
