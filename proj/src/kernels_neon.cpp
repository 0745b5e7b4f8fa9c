#if defined(__aarch64__)

#include <arm_neon.h>

#include "qdint/complex_kernels.hpp"

// NEON variants: one complex<double> per 128-bit vector, [re, im].
// Complex multiply a*x = (ar*xr - ai*xi, ar*xi + ai*xr) is built from a
// lane-swap plus a signed fma with sign = (-1, +1).

namespace qdint::kernels::neon {

namespace {

const float64x2_t kSign = {-1.0, 1.0};

inline float64x2_t cmul(float64x2_t a_r, float64x2_t a_i, float64x2_t x)
{
    const float64x2_t xswap = vextq_f64(x, x, 1); // [xi, xr]
    const float64x2_t t = vmulq_f64(a_i, xswap);  // [ai*xi, ai*xr]
    // a_r*x + sign*t = [ar*xr - ai*xi, ar*xi + ai*xr]
    return vfmaq_f64(vmulq_f64(t, kSign), a_r, x);
}

inline void axpy_inline(std::size_t n, cplx a, const cplx* x, cplx* y)
{
    const float64x2_t var = vdupq_n_f64(a.real());
    const float64x2_t vai = vdupq_n_f64(a.imag());
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        const float64x2_t vx = vld1q_f64(px);
        const float64x2_t vy = vld1q_f64(py);
        vst1q_f64(py, vaddq_f64(vy, cmul(var, vai, vx)));
    }
}

} // namespace

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y)
{
    axpy_inline(n, a, x, y);
}

void scal(std::size_t n, cplx a, cplx* x)
{
    const float64x2_t var = vdupq_n_f64(a.real());
    const float64x2_t vai = vdupq_n_f64(a.imag());
    double* px = reinterpret_cast<double*>(x);
    for (std::size_t i = 0; i < n; ++i, px += 2)
        vst1q_f64(px, cmul(var, vai, vld1q_f64(px)));
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y)
{
    float64x2_t vre = vdupq_n_f64(0.0);
    float64x2_t vim = vdupq_n_f64(0.0);
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        const float64x2_t vx = vld1q_f64(px);
        const float64x2_t vy = vld1q_f64(py);
        vre = vfmaq_f64(vre, vx, vy);                                   // xr*yr, xi*yi
        const float64x2_t xswap = vextq_f64(vx, vx, 1);                 // xi, xr
        vim = vfmaq_f64(vim, vmulq_f64(xswap, kSign), vy);              // -xi*yr, xr*yi
    }
    return {vaddvq_f64(vre), vaddvq_f64(vim)};
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y)
{
    const float64x2_t negodd = {1.0, -1.0};
    float64x2_t vre = vdupq_n_f64(0.0);
    float64x2_t vim = vdupq_n_f64(0.0);
    const double* px = reinterpret_cast<const double*>(x);
    const double* py = reinterpret_cast<const double*>(y);
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        const float64x2_t vx = vld1q_f64(px);
        const float64x2_t vy = vld1q_f64(py);
        vre = vfmaq_f64(vre, vmulq_f64(vx, negodd), vy);                // xr*yr, -xi*yi
        const float64x2_t xswap = vextq_f64(vx, vx, 1);
        vim = vfmaq_f64(vim, xswap, vy);                                // xi*yr, xr*yi
    }
    return {vaddvq_f64(vre), vaddvq_f64(vim)};
}

void rot(std::size_t n, cplx* x, cplx* y, double c, cplx s)
{
    const float64x2_t vc = vdupq_n_f64(c);
    const float64x2_t vsr = vdupq_n_f64(s.real());
    const float64x2_t vsi = vdupq_n_f64(s.imag());
    const float64x2_t vmr = vdupq_n_f64(-s.real());
    double* px = reinterpret_cast<double*>(x);
    double* py = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i, px += 2, py += 2) {
        const float64x2_t vx = vld1q_f64(px);
        const float64x2_t vy = vld1q_f64(py);
        const float64x2_t xnew = vfmaq_f64(cmul(vsr, vsi, vy), vc, vx);
        const float64x2_t ynew = vfmaq_f64(cmul(vmr, vsi, vx), vc, vy);
        vst1q_f64(px, xnew);
        vst1q_f64(py, ynew);
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

} // namespace qdint::kernels::neon

#endif // aarch64
