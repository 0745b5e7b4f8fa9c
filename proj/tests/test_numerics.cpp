#include <doctest.h>

#include <cmath>
#include <random>

#include "qdint/numerics.hpp"

#include "oracles.hpp"

using namespace qdint;

namespace {

double eig_residual(const ComplexMatrix& a, const Spectrum& s)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        ComplexVector v(a.rows());
        for (std::size_t r = 0; r < a.rows(); ++r)
            v[r] = s.eigenvectors(r, k);
        ComplexVector av = matvec(a, v);
        for (std::size_t r = 0; r < a.rows(); ++r)
            av[r] -= s.eigenvalues[k] * v[r];
        worst = std::max(worst, vector_norm(av));
    }
    return worst;
}

} // namespace

TEST_CASE("kron identity and diagonal cases")
{
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    const ComplexMatrix k = kron(i2, i2);
    CHECK(k.rows() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(std::abs(k(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);

    const ComplexMatrix d = kron(ComplexMatrix::diagonal({1.0, 2.0}),
                                 ComplexMatrix::diagonal({3.0}));
    CHECK(std::abs(d(0, 0) - 3.0) < 1e-15);
    CHECK(std::abs(d(1, 1) - 6.0) < 1e-15);
}

TEST_CASE("kron matches the index formula on random factors")
{
    std::mt19937 rng(11);
    const ComplexMatrix a = oracle::random_matrix(2, 2, rng);
    const ComplexMatrix b = oracle::random_matrix(2, 2, rng);
    const ComplexMatrix k = kron(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q)
                    CHECK(std::abs(k(i * 2 + p, j * 2 + q) - a(i, j) * b(p, q)) < 1e-15);
}

TEST_CASE("vectorize basics and the vec identity")
{
    const ComplexVector v = vectorize(ComplexMatrix::identity(2));
    CHECK(std::abs(v[0] - 1.0) < 1e-15);
    CHECK(std::abs(v[1]) < 1e-15);
    CHECK(std::abs(v[2]) < 1e-15);
    CHECK(std::abs(v[3] - 1.0) < 1e-15);

    std::mt19937 rng(5);
    const ComplexMatrix m = oracle::random_matrix(3, 3, rng);
    const ComplexMatrix back = devectorize(vectorize(m));
    CHECK((back - m).max_abs() < 1e-15);

    // vec(A X B) = (B^T kron A) vec(X)
    const ComplexMatrix a = oracle::random_matrix(2, 2, rng);
    const ComplexMatrix x = oracle::random_matrix(2, 2, rng);
    const ComplexMatrix b = oracle::random_matrix(2, 2, rng);
    const ComplexVector lhs = vectorize(a * x * b);
    const ComplexVector rhs = matvec(kron(b.transpose(), a), vectorize(x));
    CHECK(vector_norm(lhs - rhs) < 1e-14);

    ComplexMatrix rect(2, 3);
    CHECK_THROWS_AS(vectorize(rect), ValidationError);
}

TEST_CASE("eig_general on diagonal and symmetric inputs")
{
    const Spectrum d = eig_general(ComplexMatrix::diagonal({cplx(-1.0, 0.0), cplx(-2.0, 3.0)}));
    CHECK(std::abs(d.eigenvalues[0] - cplx(-1.0, 0.0)) < 1e-14);
    CHECK(std::abs(d.eigenvalues[1] - cplx(-2.0, 3.0)) < 1e-14);

    const ComplexMatrix sx = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const Spectrum s = eig_general(sx);
    CHECK(std::abs(s.eigenvalues[0] - 1.0) < 1e-14);
    CHECK(std::abs(s.eigenvalues[1] + 1.0) < 1e-14);
}

TEST_CASE("eig_general residuals, trace and determinant invariants")
{
    std::mt19937 rng(23);
    for (std::size_t n : {2, 3, 4, 6, 9, 16}) {
        const ComplexMatrix a = oracle::random_matrix(n, n, rng);
        const Spectrum s = eig_general(a);
        CHECK(eig_residual(a, s) <= 1e-10 * a.frobenius_norm());

        cplx sum = 0.0;
        for (const cplx& l : s.eigenvalues)
            sum += l;
        CHECK(std::abs(sum - a.trace()) <= 1e-9 * a.frobenius_norm());

        if (n <= 4) {
            cplx prod = 1.0;
            for (const cplx& l : s.eigenvalues)
                prod *= l;
            CHECK(std::abs(prod - determinant(a)) <= 1e-9 * std::pow(a.frobenius_norm(), n));
        }
    }
}

TEST_CASE("eig_general handles a defective block")
{
    const ComplexMatrix j = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    const Spectrum s = eig_general(j);
    CHECK(std::abs(s.eigenvalues[0]) < 1e-14);
    CHECK(std::abs(s.eigenvalues[1]) < 1e-14);
    CHECK(eig_residual(j, s) < 1e-10);
}

TEST_CASE("eig_general sort order is deterministic")
{
    const Spectrum s = eig_general(ComplexMatrix::diagonal(
        {cplx(1.0, 2.0), cplx(3.0, 0.0), cplx(1.0, -2.0), cplx(-1.0, 0.0)}));
    CHECK(s.eigenvalues[0] == cplx(3.0, 0.0));
    CHECK(s.eigenvalues[1] == cplx(1.0, -2.0));
    CHECK(s.eigenvalues[2] == cplx(1.0, 2.0));
    CHECK(s.eigenvalues[3] == cplx(-1.0, 0.0));
}

TEST_CASE("characteristic cubic roots of the driven coherence block")
{
    // Gamma12 = Gamma: the block factorizes with an exact zero root and a
    // conjugate pair at -Gamma/2 +- i sqrt(Omega'^2 - Gamma^2/4).
    const double gamma = 1.0, rabi = 10.0;
    const double c2 = gamma;
    const double c1 = 0.5 * rabi * rabi; // delta = 0, gamma12 = gamma
    const double c0 = 0.0;
    ComplexMatrix companion(3, 3);
    companion(0, 2) = -c0;
    companion(1, 0) = 1.0;
    companion(1, 2) = -c1;
    companion(2, 1) = 1.0;
    companion(2, 2) = -c2;
    const Spectrum s = eig_general(companion);

    const double omega_prime = 0.5 * std::sqrt(2.0 * rabi * rabi);
    const double im_exact = std::sqrt(omega_prime * omega_prime - 0.25 * gamma * gamma);
    bool found_zero = false;
    for (const cplx& l : s.eigenvalues) {
        if (std::abs(l) < 1e-10) {
            found_zero = true;
            continue;
        }
        CHECK(std::abs(l.real() + 0.5 * gamma) < 1e-10);
        CHECK(std::abs(std::abs(l.imag()) - im_exact) < 1e-9);
        CHECK(std::abs(std::abs(l.imag()) - omega_prime) < 0.02 * gamma);
    }
    CHECK(found_zero);
}

TEST_CASE("null_space basics")
{
    CHECK(null_space(ComplexMatrix::identity(3)).empty());

    const auto ns = null_space(ComplexMatrix::diagonal({0.0, 1.0}));
    REQUIRE(ns.size() == 1);
    CHECK(std::abs(std::abs(ns[0][0]) - 1.0) < 1e-12);
    CHECK(std::abs(ns[0][1]) < 1e-12);
}

TEST_CASE("null_space vectors annihilate the matrix")
{
    std::mt19937 rng(3);
    // random rank-3 matrix embedded in dimension 5
    const ComplexMatrix b = oracle::random_matrix(5, 3, rng);
    const ComplexMatrix c = oracle::random_matrix(3, 5, rng);
    const ComplexMatrix a = b * c;
    const double tol = 1e-10;
    const auto ns = null_space(a, tol);
    CHECK(ns.size() == 2);
    const double smax = svd_jacobi(a).singular_values.front();
    for (const ComplexVector& v : ns) {
        CHECK(std::abs(vector_norm(v) - 1.0) < 1e-12);
        CHECK(vector_norm(matvec(a, v)) <= 10.0 * tol * smax);
    }
    // orthonormality of the pair
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        overlap += std::conj(ns[0][i]) * ns[1][i];
    CHECK(std::abs(overlap) < 1e-12);
}

TEST_CASE("solve_linear basics and residuals")
{
    const ComplexVector b{cplx(1.0, -2.0), cplx(0.5, 0.0)};
    const ComplexVector x = solve_linear(ComplexMatrix::identity(2), b);
    CHECK(vector_norm(x - b) < 1e-15);

    const ComplexVector x2 = solve_linear(ComplexMatrix::diagonal({2.0, 4.0}), ComplexVector{2.0, 4.0});
    CHECK(std::abs(x2[0] - 1.0) < 1e-14);
    CHECK(std::abs(x2[1] - 1.0) < 1e-14);

    std::mt19937 rng(17);
    const ComplexMatrix a = oracle::random_matrix(6, 6, rng);
    const ComplexVector rhs = {1.0, 2.0, cplx(0, 1), -1.0, cplx(2, 2), 0.5};
    const ComplexVector sol = solve_linear(a, rhs);
    CHECK(vector_norm(rhs - matvec(a, sol)) <= 1e-10 * vector_norm(rhs));
}

TEST_CASE("solve_linear reports singularity with a condition estimate")
{
    ComplexMatrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0;
    CHECK_THROWS_AS(solve_linear(a, ComplexVector{1.0, 0.0}), SingularMatrixError);
    try {
        solve_linear(a, ComplexVector{1.0, 0.0});
    } catch (const SingularMatrixError& e) {
        CHECK(e.condition_estimate > 1e12);
    }
}

TEST_CASE("expm_action basics")
{
    const ComplexVector v{cplx(0.4, 0.1), cplx(-1.0, 0.2)};
    ComplexMatrix zero(2, 2);
    CHECK(vector_norm(expm_action(zero, v, 3.7) - v) < 1e-14);

    const ComplexVector r = expm_action(ComplexMatrix::diagonal({-1.0}), {1.0}, 1.0);
    CHECK(std::abs(r[0] - std::exp(-1.0)) < 1e-14);
}

TEST_CASE("expm_action semigroup property")
{
    std::mt19937 rng(29);
    ComplexMatrix a = oracle::random_matrix(5, 5, rng);
    // make it mildly dissipative so nothing blows up
    for (std::size_t i = 0; i < 5; ++i)
        a(i, i) -= 2.0;
    const ComplexVector v = {1.0, cplx(0, 1), -0.5, 0.25, cplx(0.1, -0.3)};
    const ComplexVector one = expm_action(a, v, 0.7 + 0.4);
    const ComplexVector two = expm_action(a, expm_action(a, v, 0.4), 0.7);
    CHECK(vector_norm(one - two) <= 1e-8 * std::max(1.0, vector_norm(one)));
}

TEST_CASE("expm_action flags overflow of strongly unstable generators")
{
    // growth rate ~ 700 over t = 2 overflows doubles
    const ComplexMatrix runaway = ComplexMatrix::diagonal({cplx(700.0, 0.0)});
    CHECK_THROWS_AS(expm_action(runaway, {1.0}, 2.0), NumericsError);
}

TEST_CASE("decomposition quality holds at the largest supported sizes")
{
    std::mt19937 rng(131);
    const ComplexMatrix a = oracle::random_matrix(48, 48, rng);
    const Spectrum s = eig_general(a);
    double worst = 0.0;
    for (std::size_t k = 0; k < 48; ++k) {
        ComplexVector v(48);
        for (std::size_t r = 0; r < 48; ++r)
            v[r] = s.eigenvectors(r, k);
        ComplexVector av = matvec(a, v);
        for (std::size_t r = 0; r < 48; ++r)
            av[r] -= s.eigenvalues[k] * v[r];
        worst = std::max(worst, vector_norm(av));
    }
    CHECK(worst <= 1e-10 * a.frobenius_norm());

    // rank-revealing SVD of a tall deficient product
    const ComplexMatrix b = oracle::random_matrix(40, 12, rng);
    const ComplexMatrix c = oracle::random_matrix(12, 25, rng);
    const SvdResult svd = svd_jacobi(b * c);
    std::size_t rank = 0;
    for (double sv : svd.singular_values)
        if (sv > 1e-10 * svd.singular_values.front())
            ++rank;
    CHECK(rank == 12);
}
