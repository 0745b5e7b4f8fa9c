#include "qdint/complex_kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qdint::kernels {

namespace scalar {
void axpy(std::size_t, cplx, const cplx*, cplx*);
void scal(std::size_t, cplx, cplx*);
cplx dotc(std::size_t, const cplx*, const cplx*);
cplx dotu(std::size_t, const cplx*, const cplx*);
void rot(std::size_t, cplx*, cplx*, double, cplx);
void gemm_acc(std::size_t, std::size_t, std::size_t, const cplx*, const cplx*, cplx*);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void axpy(std::size_t, cplx, const cplx*, cplx*);
void scal(std::size_t, cplx, cplx*);
cplx dotc(std::size_t, const cplx*, const cplx*);
cplx dotu(std::size_t, const cplx*, const cplx*);
void rot(std::size_t, cplx*, cplx*, double, cplx);
void gemm_acc(std::size_t, std::size_t, std::size_t, const cplx*, const cplx*, cplx*);
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void axpy(std::size_t, cplx, const cplx*, cplx*);
void scal(std::size_t, cplx, cplx*);
cplx dotc(std::size_t, const cplx*, const cplx*);
cplx dotu(std::size_t, const cplx*, const cplx*);
void rot(std::size_t, cplx*, cplx*, double, cplx);
void gemm_acc(std::size_t, std::size_t, std::size_t, const cplx*, const cplx*, cplx*);
} // namespace neon
#endif

namespace {

constexpr KernelTable kScalarTable = {scalar::axpy, scalar::scal, scalar::dotc,
                                      scalar::dotu, scalar::rot,  scalar::gemm_acc};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table = {avx2::axpy, avx2::scal, avx2::dotc,
                                    avx2::dotu, avx2::rot,  avx2::gemm_acc};
#endif

#if defined(__aarch64__)
constexpr KernelTable kNeonTable = {neon::axpy, neon::scal, neon::dotc,
                                    neon::dotu, neon::rot,  neon::gemm_acc};
#endif

const KernelTable* g_active = nullptr;
Backend g_backend = Backend::Scalar;

const KernelTable& ensure_selected()
{
    if (g_active == nullptr)
        select_auto();
    return *g_active;
}

} // namespace

const char* backend_name(Backend b)
{
    switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "?";
}

bool available(Backend b)
{
    switch (b) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Backend active()
{
    ensure_selected();
    return g_backend;
}

const KernelTable& table(Backend b)
{
    if (!available(b))
        throw ValidationError(std::string("SIMD backend not available on this machine: ") +
                              backend_name(b));
    switch (b) {
    case Backend::Scalar:
        return kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
        return kAvx2Table;
#endif
#if defined(__aarch64__)
    case Backend::Neon:
        return kNeonTable;
#endif
    default:
        return kScalarTable;
    }
}

void select(Backend b)
{
    g_active = &table(b);
    g_backend = b;
}

void select_auto()
{
    if (const char* env = std::getenv("QDINT_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) {
            select(Backend::Scalar);
            return;
        }
        if (std::strcmp(env, "avx2") == 0) {
            select(Backend::Avx2);
            return;
        }
        if (std::strcmp(env, "neon") == 0) {
            select(Backend::Neon);
            return;
        }
    }
    if (available(Backend::Avx2))
        select(Backend::Avx2);
    else if (available(Backend::Neon))
        select(Backend::Neon);
    else
        select(Backend::Scalar);
}

void zaxpy(std::size_t n, cplx a, const cplx* x, cplx* y)
{
    ensure_selected().axpy(n, a, x, y);
}

void zscal(std::size_t n, cplx a, cplx* x)
{
    ensure_selected().scal(n, a, x);
}

cplx zdotc(std::size_t n, const cplx* x, const cplx* y)
{
    return ensure_selected().dotc(n, x, y);
}

cplx zdotu(std::size_t n, const cplx* x, const cplx* y)
{
    return ensure_selected().dotu(n, x, y);
}

void zrot(std::size_t n, cplx* x, cplx* y, double c, cplx s)
{
    ensure_selected().rot(n, x, y, c, s);
}

void zgemm_acc(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c)
{
    ensure_selected().gemm_acc(m, k, n, a, b, c);
}

} // namespace qdint::kernels
