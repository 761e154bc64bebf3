#include <cmath>

#include <doctest.h>

#include "poexp/finite_pmf.hpp"
#include "poexp/tabulated_function.hpp"
#include "test_util.hpp"

using namespace poexp;

TEST_CASE("fromWeights normalizes and trims") {
    const auto a = FinitePmf<double>::fromWeights({0.7, 0.3});
    CHECK(a.supportBound() == 1);
    CHECK(a(0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(a(1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(a.mean() == doctest::Approx(0.3).epsilon(1e-15));

    const auto b = FinitePmf<double>::fromWeights({2.0, 2.0});
    CHECK(b(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.mean() == doctest::Approx(0.5).epsilon(1e-15));

    const auto c = FinitePmf<double>::fromWeights({1.0, 0.0, 0.0});
    CHECK(c.supportBound() == 0);
    CHECK(c(0) == 1.0);
}

TEST_CASE("fromWeights rejects bad input") {
    CHECK_THROWS_AS(FinitePmf<double>::fromWeights({0.0, 0.0}), AllZero);
    CHECK_THROWS_AS(FinitePmf<double>::fromWeights({0.5, -0.1}), NegativeWeight);
}

TEST_CASE("parametric constructors") {
    const auto bern = FinitePmf<double>::bernoulli(0.3);
    CHECK(bern(0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(bern(1) == doctest::Approx(0.3).epsilon(1e-15));

    const auto bin = FinitePmf<double>::binomial(2, 0.5);
    CHECK(bin(0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(bin(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(bin(2) == doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS(FinitePmf<double>::bernoulli(0.0), BadParameter);
    CHECK_THROWS_AS(FinitePmf<double>::bernoulli(1.0), BadParameter);
    CHECK_THROWS_AS(FinitePmf<double>::binomial(0, 0.5), BadParameter);
    CHECK_THROWS_AS(FinitePmf<double>::poissonTruncated(-1.0, 1e-12), BadParameter);
    CHECK_THROWS_AS(FinitePmf<double>::poissonTruncated(1.0, 2.0), BadParameter);
}

TEST_CASE("truncated poisson matches direct factorial evaluation") {
    const double lambda = 0.5;
    const auto pmf = FinitePmf<double>::poissonTruncated(lambda, 1e-12);
    // Independent evaluation of e^-l l^x / x! via tgamma, renormalized over
    // the same support.
    double mass = 0.0;
    std::vector<double> direct;
    for (Index x = 0; x <= pmf.supportBound(); ++x) {
        direct.push_back(std::exp(-lambda) * std::pow(lambda, double(x)) /
                         std::tgamma(double(x) + 1.0));
        mass += direct.back();
    }
    for (Index x = 0; x <= pmf.supportBound(); ++x) {
        CHECK(pmf(x) ==
              doctest::Approx(direct[static_cast<std::size_t>(x)] / mass).epsilon(1e-12));
    }
    // Truncation point really does certify the requested tail mass.
    double tail = 1.0;
    for (double v : direct) tail -= v;
    CHECK(tail < 1e-12);
    CHECK(pmf(pmf.supportBound()) > 0.0);
}

TEST_CASE("convolution basics") {
    const auto bern = FinitePmf<double>::bernoulli(0.5);
    const auto sum = convolve(bern, bern);
    CHECK(sum(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(sum(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sum(2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(sum.mean() == doctest::Approx(1.0).epsilon(1e-14));

    // Point mass at zero is the identity element.
    const auto id = FinitePmf<double>::pointMass(0);
    const auto same = convolve(sum, id);
    CHECK(same.supportBound() == sum.supportBound());
    for (Index x = 0; x <= sum.supportBound(); ++x) CHECK(same(x) == sum(x));

    // (0.8 + 0.2 z)(0.7 + 0.3 z) expanded by hand.
    const auto mixed = convolve(FinitePmf<double>::bernoulli(0.2),
                                FinitePmf<double>::bernoulli(0.3));
    CHECK(mixed(0) == doctest::Approx(0.56).epsilon(1e-15));
    CHECK(mixed(1) == doctest::Approx(0.38).epsilon(1e-15));
    CHECK(mixed(2) == doctest::Approx(0.06).epsilon(1e-15));
}

TEST_CASE("convolution is commutative and associative") {
    testutil::Rng rng(20240601);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testutil::randomPmf(rng, 5);
        const auto b = testutil::randomPmf(rng, 5);
        const auto c = testutil::randomPmf(rng, 5);
        const auto ab = convolve(a, b);
        const auto ba = convolve(b, a);
        REQUIRE(ab.supportBound() == ba.supportBound());
        for (Index x = 0; x <= ab.supportBound(); ++x) {
            CHECK(std::abs(ab(x) - ba(x)) <= 1e-13);
        }
        const auto abc = convolve(ab, c);
        const auto acb = convolve(a, convolve(b, c));
        REQUIRE(abc.supportBound() == acb.supportBound());
        for (Index x = 0; x <= abc.supportBound(); ++x) {
            CHECK(std::abs(abc(x) - acb(x)) <= 1e-13);
        }
    }
}

TEST_CASE("zero bias of named laws") {
    // Bernoulli maps to the point mass at 0.
    const auto star = zeroBias(FinitePmf<double>::bernoulli(0.3));
    CHECK(star.supportBound() == 0);
    CHECK(star(0) == doctest::Approx(1.0).epsilon(1e-15));

    // A deterministic unit is its own fixed point shifted down.
    const auto unitStar = zeroBias(FinitePmf<double>::pointMass(1));
    CHECK(unitStar.supportBound() == 0);
    CHECK(unitStar(0) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(zeroBias(FinitePmf<double>::pointMass(0)), ZeroMean);
}

TEST_CASE("poisson is a zero-bias fixed point") {
    for (double lambda : {0.2, 1.0, 4.0}) {
        const auto pois = FinitePmf<double>::poissonTruncated(lambda, 1e-14);
        const auto star = zeroBias(pois);
        for (Index x = 0; x <= pois.supportBound(); ++x) {
            CHECK(std::abs(star(x) - pois(x)) <= 1e-11);
        }
    }
}

TEST_CASE("zero bias output is a pmf") {
    testutil::Rng rng(987);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pmf = testutil::randomPmfPositiveMean(rng, 10);
        const auto star = zeroBias(pmf);
        double sum = 0.0;
        for (Index x = 0; x <= star.supportBound(); ++x) sum += star(x);
        CHECK(std::abs(sum - 1.0) <= 1e-13);
    }
}

TEST_CASE("zero-bias identity E[X f(X)] = lambda E[f(X*+1)]") {
    testutil::Rng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pmf = testutil::randomPmfPositiveMean(rng, 12);
        const auto f = testutil::randomBoundedFunction(rng, pmf.supportBound() + 1);
        const auto star = zeroBias(pmf);
        double lhs = 0.0;
        for (Index x = 0; x <= pmf.supportBound(); ++x) lhs += double(x) * pmf(x) * f(x);
        double rhs = 0.0;
        for (Index y = 0; y <= star.supportBound(); ++y) rhs += star(y) * f(y + 1);
        rhs *= pmf.mean();
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("binomial moments") {
    const auto three = FinitePmf<double>::pointMass(3);
    CHECK(binomMoment(three, {2, 0.0}) == doctest::Approx(3.0).epsilon(1e-15));

    const auto bern = FinitePmf<double>::bernoulli(0.4);
    CHECK(binomMoment(bern, {1, 0.0}) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(binomMoment(bern, {2, 0.0}) == 0.0);
    CHECK(binomMoment(bern, {1, 2.0}) == doctest::Approx(0.4).epsilon(1e-15));

    testutil::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pmf = testutil::randomPmf(rng, 8);
        CHECK(binomMoment(pmf, {0, 0.0}) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("binomial moment products over index tuples") {
    const auto three = FinitePmf<double>::pointMass(3);
    CHECK(binomMomentProduct(three, Composition{}) == 1.0);
    CHECK(binomMomentProduct(three, Composition({1, 2})) == doctest::Approx(9.0).epsilon(1e-14));

    const auto bern = FinitePmf<double>::bernoulli(0.4);
    CHECK(binomMomentProduct(bern, Composition({1, 1})) ==
          doctest::Approx(0.16).epsilon(1e-14));
}

TEST_CASE("raw moments") {
    testutil::Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        CHECK(rawMoment(testutil::randomPmf(rng, 8), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(rawMoment(FinitePmf<double>::bernoulli(0.3), 2.0) ==
          doctest::Approx(0.3).epsilon(1e-15));
    const double expected = 0.5 * 1.0 + 0.25 * std::pow(2.0, 1.5);
    CHECK(rawMoment(FinitePmf<double>::binomial(2, 0.5), 1.5) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("zero-bias mean identity") {
    testutil::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pmf = testutil::randomPmfPositiveMean(rng, 10);
        const auto star = zeroBias(pmf);
        const double expected = (rawMoment(pmf, 2.0) - pmf.mean()) / pmf.mean();
        CHECK(star.mean() == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("core types instantiate at other scalar precisions") {
    using Pmf = FinitePmf<long double>;
    const auto a = Pmf::bernoulli(0.25L);
    const auto b = Pmf::binomial(3, 0.125L);
    const auto sum = convolve(a, b);
    CHECK(sum.mean() == doctest::Approx(double(0.25L + 3 * 0.125L)).epsilon(1e-17));
    const auto star = zeroBias(sum);
    // The defining identity holds at extended precision.
    long double lhs = 0.0L, rhs = 0.0L;
    for (Index x = 0; x <= sum.supportBound(); ++x) lhs += x * sum(x) * (x * x);
    for (Index y = 0; y <= star.supportBound(); ++y) rhs += star(y) * (y + 1) * (y + 1);
    rhs *= sum.mean();
    CHECK(std::abs(double(lhs - rhs)) <= 1e-15 * (1.0 + std::abs(double(lhs))));
}

TEST_CASE("cached mean matches direct sum") {
    testutil::Rng rng(88);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pmf = testutil::randomPmf(rng, 12);
        double direct = 0.0;
        for (Index x = 0; x <= pmf.supportBound(); ++x) direct += double(x) * pmf(x);
        CHECK(std::abs(pmf.mean() - direct) <= 1e-14 * (1.0 + std::abs(direct)));
    }
}
