#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcsat/linalg.hpp"
#include "dcsat/rng.hpp"

using namespace dcsat;
using linalg::DenseMatrix;
using linalg::Vec;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    auto gen = rng::stream(seed, "test-matrix");
    DenseMatrix m(r, c);
    for (auto& x : m.data) x = gen.normal();
    return m;
}

double reconstruction_error(const DenseMatrix& a, const linalg::SvdResult& sv) {
    DenseMatrix us = sv.u;
    for (std::size_t i = 0; i < us.rows; ++i)
        for (std::size_t j = 0; j < us.cols; ++j) us(i, j) *= sv.singulars[j];
    DenseMatrix rec = linalg::matmul(us, linalg::transpose(sv.v));
    double err = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        err += (rec.data[i] - a.data[i]) * (rec.data[i] - a.data[i]);
    return std::sqrt(err);
}

double max_orthonormality_defect(const DenseMatrix& q) {
    DenseMatrix g = linalg::matmul(linalg::transpose(q), q);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j)
            worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

} // namespace

TEST_CASE("svd of a diagonal matrix") {
    DenseMatrix a(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    auto sv = linalg::svd(a);
    CHECK(sv.singulars[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sv.singulars[1] == doctest::Approx(1.0).epsilon(1e-12));
    // U = V = I up to sign; sign convention makes them exactly I here
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(sv.u(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
            CHECK(sv.v(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
        }
}

TEST_CASE("svd of the zero matrix") {
    DenseMatrix a(2, 3);
    auto sv = linalg::svd(a);
    REQUIRE(sv.singulars.size() == 2);
    CHECK(sv.singulars[0] == 0.0);
    CHECK(sv.singulars[1] == 0.0);
    CHECK(max_orthonormality_defect(sv.u) <= 1e-10);
    CHECK(max_orthonormality_defect(sv.v) <= 1e-10);
}

TEST_CASE("svd of a random 4x3 matrix against the Gram-matrix eigensolver") {
    DenseMatrix a = random_matrix(4, 3, 71);
    auto sv = linalg::svd(a);

    CHECK(reconstruction_error(a, sv) <= 1e-8 * (1.0 + linalg::frobenius_norm(a)));
    CHECK(max_orthonormality_defect(sv.u) <= 1e-10);
    CHECK(max_orthonormality_defect(sv.v) <= 1e-10);
    for (std::size_t i = 1; i < sv.singulars.size(); ++i)
        CHECK(sv.singulars[i] <= sv.singulars[i - 1]);

    // independent route: eigenvalues of A^T A from the two-sided Jacobi solver
    DenseMatrix ata = linalg::matmul(linalg::transpose(a), a);
    Vec eigs = linalg::eig_sym(ata);
    REQUIRE(eigs.size() == sv.singulars.size());
    for (std::size_t i = 0; i < eigs.size(); ++i)
        CHECK(sv.singulars[i] ==
              doctest::Approx(std::sqrt(std::max(0.0, eigs[i]))).epsilon(1e-8));
}

TEST_CASE("svd handles rank deficiency and wide matrices") {
    // rank-1 5x4
    DenseMatrix a(5, 4);
    auto gen = rng::stream(3, "rank1");
    Vec u = gen.normal_vector(5), v = gen.normal_vector(4);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = u[i] * v[j];
    auto sv = linalg::svd(a);
    CHECK(sv.singulars[0] == doctest::Approx(linalg::norm2(u) * linalg::norm2(v)).epsilon(1e-10));
    for (std::size_t i = 1; i < sv.singulars.size(); ++i) CHECK(sv.singulars[i] <= 1e-10);
    CHECK(max_orthonormality_defect(sv.u) <= 1e-10);
    CHECK(reconstruction_error(a, sv) <= 1e-8 * (1.0 + linalg::frobenius_norm(a)));

    DenseMatrix w = random_matrix(3, 6, 99);
    auto svw = linalg::svd(w);
    REQUIRE(svw.singulars.size() == 3);
    CHECK(reconstruction_error(w, svw) <= 1e-8 * (1.0 + linalg::frobenius_norm(w)));
    CHECK(max_orthonormality_defect(svw.u) <= 1e-10);
    CHECK(max_orthonormality_defect(svw.v) <= 1e-10);
}

TEST_CASE("svd sign convention and determinism") {
    DenseMatrix a = random_matrix(6, 4, 1234);
    auto s1 = linalg::svd(a);
    auto s2 = linalg::svd(a);
    CHECK(s1.u.data == s2.u.data);
    CHECK(s1.v.data == s2.v.data);
    CHECK(s1.singulars == s2.singulars);
    for (std::size_t j = 0; j < s1.v.cols; ++j) {
        double lead = 0.0;
        for (std::size_t i = 0; i < s1.v.rows; ++i)
            if (s1.v(i, j) != 0.0) {
                lead = s1.v(i, j);
                break;
            }
        CHECK(lead >= 0.0);
    }
}

TEST_CASE("operator norm of diagonal and identity matrices") {
    DenseMatrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    CHECK(linalg::operator_norm(d).value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(linalg::operator_norm(DenseMatrix::identity(3)).value ==
          doctest::Approx(1.0).epsilon(1e-10));

    DenseMatrix z(3, 2);
    auto on = linalg::operator_norm(z);
    CHECK(on.value == 0.0);
    CHECK(linalg::norm2(on.u) == doctest::Approx(1.0));
    CHECK(linalg::norm2(on.v) == doctest::Approx(1.0));
}

TEST_CASE("operator norm matches the top singular value on random matrices") {
    for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
        DenseMatrix a = random_matrix(5, 4, seed);
        auto sv = linalg::svd(a);
        auto on = linalg::operator_norm(a, 1e-10);
        CHECK(on.value == doctest::Approx(sv.singulars[0]).epsilon(1e-8));
        // the returned pair reproduces sigma: u^T A v = sigma
        Vec av = linalg::matvec(a, on.v);
        CHECK(linalg::dot(on.u, av) == doctest::Approx(on.value).epsilon(1e-8));
    }
}

TEST_CASE("eigmax of symmetric matrices") {
    DenseMatrix d(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 1.0;
    CHECK(linalg::eigmax_sym(d) == doctest::Approx(4.0).epsilon(1e-12));

    // P^T P for P = diag(2,1): eigenvalues are squared singular values
    DenseMatrix p(2, 2);
    p(0, 0) = 2.0;
    p(1, 1) = 1.0;
    DenseMatrix ptp = linalg::matmul(linalg::transpose(p), p);
    CHECK(linalg::eigmax_sym(ptp) == doctest::Approx(4.0).epsilon(1e-12));

    DenseMatrix s(4, 4);
    auto gen = rng::stream(11, "sym");
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) {
            const double v = gen.normal();
            s(i, j) = v;
            s(j, i) = v;
        }
    // symmetric matrices: |eigenvalues| equal singular values; compare the
    // largest eigenvalue against the SVD spectrum
    auto eigs = linalg::eig_sym(s);
    auto sv = linalg::svd(s);
    double expected = eigs.front();
    bool found = false;
    for (double sg : sv.singulars)
        if (std::abs(sg - expected) <= 1e-8 * std::max(1.0, std::abs(expected))) found = true;
    CHECK(found);

    DenseMatrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(linalg::eigmax_sym(asym), std::invalid_argument);
}

TEST_CASE("eigmax_sym agrees with the squared operator norm") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        DenseMatrix p = random_matrix(4, 3, seed);
        DenseMatrix ptp = linalg::matmul(linalg::transpose(p), p);
        const double on = linalg::operator_norm(p).value;
        CHECK(linalg::eigmax_sym(ptp) == doctest::Approx(on * on).epsilon(1e-8));
    }
}
