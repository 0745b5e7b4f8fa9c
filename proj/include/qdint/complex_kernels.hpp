#pragma once

#include <cstddef>
#include <string>

#include "qdint/core.hpp"

// Low-level kernels for interleaved complex<double> arrays. Every routine has
// a scalar reference implementation plus SIMD variants (AVX2 on x86-64, NEON
// on aarch64) selected at runtime. All higher-level dense algebra funnels
// through these, so the scalar/SIMD pair is the unit the equivalence tests
// pin down.

namespace qdint::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Name of a backend for logs and error messages.
const char* backend_name(Backend b);

// True if the backend can run on this machine (compiled in + CPU support).
bool available(Backend b);

// Currently active backend.
Backend active();

// Force a backend. Throws ValidationError if unavailable.
void select(Backend b);

// Pick the best available backend; the QDINT_SIMD environment variable
// ("scalar", "avx2", "neon") overrides. Called lazily on first kernel use.
void select_auto();

struct KernelTable {
    // y += a * x
    void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
    // x *= a
    void (*scal)(std::size_t n, cplx a, cplx* x);
    // sum_i conj(x_i) * y_i
    cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
    // sum_i x_i * y_i
    cplx (*dotu)(std::size_t n, const cplx* x, const cplx* y);
    // plane rotation, c real:  x' = c x + s y,  y' = -conj(s) x + c y
    void (*rot)(std::size_t n, cplx* x, cplx* y, double c, cplx s);
    // row-major accumulate: C(m x n) += A(m x k) * B(k x n)
    void (*gemm_acc)(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
                     cplx* c);
};

const KernelTable& table(Backend b);

// Dispatched entry points.
void zaxpy(std::size_t n, cplx a, const cplx* x, cplx* y);
void zscal(std::size_t n, cplx a, cplx* x);
cplx zdotc(std::size_t n, const cplx* x, const cplx* y);
cplx zdotu(std::size_t n, const cplx* x, const cplx* y);
void zrot(std::size_t n, cplx* x, cplx* y, double c, cplx s);
void zgemm_acc(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c);

} // namespace qdint::kernels
