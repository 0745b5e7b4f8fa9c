#include <cmath>

#include "qdint/numerics.hpp"

// Matrix exponential via the [13/13] Pade approximant with scaling and
// squaring (Higham 2005). Robust for defective matrices, which the
// dissipative generators here often are.

namespace qdint {

namespace {

constexpr double kTheta13 = 5.371920351148152;

const double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};

} // namespace

ComplexMatrix expm(const ComplexMatrix& a)
{
    if (!a.square())
        throw ValidationError("expm expects a square matrix");
    const std::size_t n = a.rows();
    if (n == 0)
        return a;

    int squarings = 0;
    const double nrm = a.norm1();
    if (nrm > kTheta13)
        squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));

    ComplexMatrix as = a;
    if (squarings > 0)
        as *= cplx(std::ldexp(1.0, -squarings), 0.0);

    const ComplexMatrix ident = ComplexMatrix::identity(n);
    const ComplexMatrix a2 = as * as;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a2 * a4;

    ComplexMatrix u = a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2);
    u += kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 + kPade13[1] * ident;
    u = as * u;

    ComplexMatrix v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2);
    v += kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * ident;

    ComplexMatrix r = solve_linear(v - u, v + u);
    for (int i = 0; i < squarings; ++i)
        r = r * r;
    return r;
}

ComplexVector expm_action(const ComplexMatrix& a, const ComplexVector& v, double t)
{
    if (a.rows() != v.size())
        throw ValidationError("expm_action: dimension mismatch");
    if (!a.is_finite())
        throw ValidationError("expm_action expects finite entries");
    const ComplexMatrix e = expm(cplx(t, 0.0) * a);
    if (!e.is_finite())
        throw NumericsError("expm_action overflowed (strongly unstable generator?)");
    return matvec(e, v);
}

} // namespace qdint
