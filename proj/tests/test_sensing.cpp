#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dcsat/rng.hpp"
#include "dcsat/sensing.hpp"

using namespace dcsat;
using linalg::DenseMatrix;
using linalg::Vec;

TEST_CASE("make_sampler cardinality and determinism") {
    auto phi = sensing::make_sampler(4, 0.5, 9);
    CHECK(phi.kept() == 2);
    for (std::size_t i = 1; i < phi.selected.size(); ++i)
        CHECK(phi.selected[i] > phi.selected[i - 1]);
    CHECK(phi.selected.back() < 4);

    // Table-scale case: 80% of 784 rounds to 627
    auto big = sensing::make_sampler(784, 0.8, 9);
    CHECK(big.kept() == 627);

    auto full = sensing::make_sampler(10, 1.0, 9);
    REQUIRE(full.kept() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(full.selected[i] == i);

    auto again = sensing::make_sampler(784, 0.8, 9);
    CHECK(again.selected == big.selected);
    auto other_seed = sensing::make_sampler(784, 0.8, 10);
    CHECK(other_seed.selected != big.selected);

    CHECK_THROWS_AS(sensing::make_sampler(4, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sensing::make_sampler(4, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(sensing::make_sampler(100, 0.001, 1), std::invalid_argument);
}

TEST_CASE("pinned mask for regression") {
    // frozen after the first build; the shuffle algorithm is part of the
    // file-format contract so these bytes must never change
    auto phi = sensing::make_sampler(10, 0.4, 42);
    REQUIRE(phi.kept() == 4);
    std::ostringstream ss;
    sensing::save_mask(phi, ss);
    CHECK(ss.str() == "10 4 0.4 42\n" + [&] {
        std::string s;
        for (std::size_t i = 0; i < 4; ++i)
            s += (i ? " " : "") + std::to_string(phi.selected[i]);
        return s + "\n";
    }());
}

TEST_CASE("apply selects coordinates") {
    sensing::SamplingMatrix phi;
    phi.ambient_dim = 3;
    phi.selected = {0, 2};
    phi.sampling_rate = 2.0 / 3.0;
    Vec y = sensing::apply(phi, {5.0, 6.0, 7.0});
    CHECK(y == Vec{5.0, 7.0});
    CHECK_THROWS_AS(sensing::apply(phi, {1.0, 2.0}), std::invalid_argument);

    auto full = sensing::make_sampler(5, 1.0, 3);
    Vec x{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(sensing::apply(full, x) == x);
}

TEST_CASE("apply and compose agree with the dense materialization") {
    auto phi = sensing::make_sampler(12, 0.6, 17);
    auto gen = rng::stream(17, "sense-test");
    Vec x = gen.normal_vector(12);

    DenseMatrix d = sensing::dense(phi);
    Vec expect = linalg::matvec(d, x);
    CHECK(sensing::apply(phi, x) == expect);

    DenseMatrix w(12, 3);
    for (auto& v : w.data) v = gen.normal();
    DenseMatrix composed = sensing::compose(phi, w);
    DenseMatrix expect_m = linalg::matmul(d, w);
    CHECK(composed.data == expect_m.data);

    auto full = sensing::make_sampler(12, 1.0, 17);
    CHECK(sensing::compose(full, w).data == w.data);

    sensing::SamplingMatrix single;
    single.ambient_dim = 2;
    single.selected = {1};
    DenseMatrix small(2, 2);
    small(0, 0) = 1.0;
    small(0, 1) = 2.0;
    small(1, 0) = 3.0;
    small(1, 1) = 4.0;
    DenseMatrix sel = sensing::compose(single, small);
    CHECK(sel.rows == 1);
    CHECK(sel.data == Vec{3.0, 4.0});

    CHECK_THROWS_AS(sensing::compose(phi, DenseMatrix(5, 2)), std::invalid_argument);
}

TEST_CASE("selection never increases energy") {
    auto gen = rng::stream(23, "energy");
    for (int trial = 0; trial < 20; ++trial) {
        auto phi = sensing::make_sampler(30, 0.5, 100 + trial);
        Vec x = gen.normal_vector(30);
        CHECK(linalg::norm2(sensing::apply(phi, x)) <= linalg::norm2(x) + 1e-12);
    }
}

TEST_CASE("scatter is the adjoint of apply") {
    auto phi = sensing::make_sampler(9, 0.4, 5);
    auto gen = rng::stream(5, "adjoint");
    Vec x = gen.normal_vector(9);
    Vec y = gen.normal_vector(phi.kept());
    // <apply(x), y> == <x, scatter(y)>
    const double lhs = linalg::dot(sensing::apply(phi, x), y);
    const double rhs = linalg::dot(x, sensing::scatter(phi, y));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("mask round-trips through the text format") {
    auto phi = sensing::make_sampler(50, 0.3, 77);
    std::ostringstream ss;
    sensing::save_mask(phi, ss);
    std::istringstream in(ss.str());
    auto loaded = sensing::load_mask(in);
    CHECK(loaded.ambient_dim == phi.ambient_dim);
    CHECK(loaded.selected == phi.selected);
    CHECK(loaded.sampling_rate == phi.sampling_rate);
    CHECK(loaded.seed == phi.seed);

    std::istringstream bad("5 2 0.4 1\n0 7\n");
    CHECK_THROWS(sensing::load_mask(bad));
}
