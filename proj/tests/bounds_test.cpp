#include <cmath>
#include <vector>

#include <doctest.h>

#include "poexp/bounds.hpp"
#include "poexp/oracle.hpp"
#include "test_util.hpp"

using namespace poexp;

TEST_CASE("seminorm closed cases") {
    const auto linear = TabulatedFunction<double>::fromMonomial(1.0, 40);
    const auto n0 = seminorm(linear, 0, 1.0);
    CHECK(n0.value == doctest::Approx(1.0).epsilon(1e-14)); // Df = 1, sup 1/x at x=1
    CHECK(n0.exact);

    // Polynomials of degree <= order have vanishing higher differences.
    const auto quad = TabulatedFunction<double>::fromPolynomial({1.0, -2.0, 0.5}, 40);
    CHECK(seminorm(quad, 2, 1.0).value == 0.0);
    CHECK(seminorm(quad, 2, 1.0).exact);

    // f = x^2: Df(x) = 2x+1, sup (2x+1)/x = 3 at x = 1.
    const auto sq = TabulatedFunction<double>::fromMonomial(2.0, 40);
    const auto n1 = seminorm(sq, 0, 1.0);
    CHECK(n1.value == doctest::Approx(3.0).epsilon(1e-14));

    CHECK_THROWS_AS(seminorm(sq, 39, 1.0), GridTooShort);
}

TEST_CASE("pointwise bounds vanish in the degenerate cases") {
    const auto sq = TabulatedFunction<double>::fromMonomial(2.0, 40);
    const auto x = FinitePmf<double>::binomial(3, 0.3);
    const auto origin = FinitePmf<double>::pointMass(0);

    NormEstimate<double> zero{0.0, 2.0, 1, 1, 38, true};
    CHECK(deltaBound(zero, x, x, 1, 0, 2.0) == 0.0);
    CHECK(epsilonBound(zero, x, x, 1, 0, 2.0) == 0.0);

    const auto norm = seminorm(sq, 1, 2.0);
    CHECK(deltaBound(norm, x, origin, 1, 0, 2.0) == 0.0);
    CHECK(epsilonBound(norm, x, origin, 1, 0, 2.0) == 0.0);
}

TEST_CASE("bounds scale linearly with the seminorm") {
    const auto x = FinitePmf<double>::binomial(3, 0.3);
    const auto y = FinitePmf<double>::binomial(2, 0.4);
    NormEstimate<double> one{1.0, 2.0, 2, 1, 30, true};
    NormEstimate<double> three{3.0, 2.0, 2, 1, 30, true};
    CHECK(deltaBound(three, x, y, 2, 1, 2.0) ==
          doctest::Approx(3.0 * deltaBound(one, x, y, 2, 1, 2.0)).epsilon(1e-14));
    CHECK(epsilonBound(three, x, y, 2, 1, 2.0) ==
          doctest::Approx(3.0 * epsilonBound(one, x, y, 2, 1, 2.0)).epsilon(1e-14));
}

TEST_CASE("bound dominance over the exact remainders") {
    testutil::Rng rng(606060);
    std::uniform_int_distribution<int> degreeDist(0, 3);
    std::uniform_int_distribution<int> orderDist(0, 3);
    std::uniform_real_distribution<double> coefDist(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int degree = degreeDist(rng);
        std::vector<double> coefs(static_cast<std::size_t>(degree) + 1);
        for (auto& c : coefs) c = coefDist(rng);
        const double p = double(degree);
        const auto f = TabulatedFunction<double>::fromPolynomial(coefs, 40);

        const auto x = testutil::randomPmf(rng, 6);
        const auto y = testutil::randomPmf(rng, 6);
        const int order = orderDist(rng);
        std::uniform_int_distribution<int> kDist(0, order);
        const int k = kDist(rng);

        const auto norm = seminorm(f, order, p);
        const auto shiftedDiff = forwardDifference(shift(f), k);

        const double dExact = deltaRemainder(shiftedDiff, order - k, x, y);
        const double dBound = deltaBound(norm, x, y, order, k, p);
        CHECK(dBound >= std::abs(dExact) - 1e-12 * (1.0 + dBound));

        const double eExact = epsilonRemainder(shiftedDiff, order - k, x, y);
        const double eBound = epsilonBound(norm, x, y, order, k, p);
        CHECK(eBound >= std::abs(eExact) - 1e-12 * (1.0 + eBound));
    }
}

TEST_CASE("zero-order bound, hand reduced for one bernoulli") {
    // Single Bernoulli(q), h = x^2 (p = 2): the leave-one-out sum and the
    // zero-biased law are both point masses at 0, so only the q * E[X^{p+1}]
    // block survives: bound = 2 * seminorm * q^2.
    const double q = 0.35;
    const auto model =
        SumModel<double>::fromComponents({FinitePmf<double>::bernoulli(q)});
    const auto h = TabulatedFunction<double>::fromMonomial(2.0, 64);
    const auto fh = steinSolution(h, model.lambdaW(), 1e-12);
    const double norm = seminorm(fh, 0, 2.0).value;
    const double expected = 2.0 * norm * q * q;
    CHECK(e0Bound(model, h, 2.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("recursive bound, hand reduced for one bernoulli at order one") {
    // With X* = delta_0 every zero-biased moment of positive index dies;
    // what remains is q^4 * ||f_g||_{0,p} + q^3 * ||f_h||_{1,p}, times the
    // growth constant.
    const double q = 0.3;
    const double p = 2.0;
    const auto model =
        SumModel<double>::fromComponents({FinitePmf<double>::bernoulli(q)});
    const double lw = model.lambdaW();
    const auto h = TabulatedFunction<double>::fromMonomial(p, 64);
    const auto fh = steinSolution(h, lw, 1e-12);
    const auto g1 = withMeasuredEnvelope(forwardDifference(shift(fh), 1));
    const auto fg1 = steinSolution(g1, lw, 1e-12);
    const double expected = 2.0 * (std::pow(q, 4.0) * seminorm(fg1, 0, p).value +
                                   std::pow(q, 3.0) * seminorm(fh, 1, p).value);
    CHECK(recursiveEBound(model, h, 1, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("remainder bounds dominate the exact remainders") {
    using P = FinitePmf<double>;
    const std::vector<std::vector<P>> models = {
        {P::bernoulli(0.1), P::bernoulli(0.2), P::bernoulli(0.3)},
        {P::bernoulli(0.05), P::binomial(2, 0.15), P::binomial(3, 0.1)},
        {P::poissonTruncated(0.4, 1e-13)},
    };
    const Index m = 90;
    for (const auto& comps : models) {
        const auto model = SumModel<double>::fromComponents(comps);
        const std::vector<std::pair<TabulatedFunction<double>, double>> hs = {
            {TabulatedFunction<double>::fromMonomial(1.0, m), 1.0},
            {TabulatedFunction<double>::fromMonomial(2.0, m), 2.0},
            {TabulatedFunction<double>::fromIndicator({0}, m), 0.0},
        };
        for (const auto& [h, p] : hs) {
            const auto report = expand(model, h, 3);
            const double exact = oracle::exactExpectation(comps, h);

            const double b0 = e0Bound(model, h, p);
            CHECK(b0 >= std::abs(exact - report.orders[0].c) - 1e-12);
            for (int k = 1; k <= 3; ++k) {
                const double bk = recursiveEBound(model, h, k, p);
                const double ek = std::abs(exact - report.orders[static_cast<std::size_t>(k)].c);
                CHECK(bk >= ek - 1e-12 * (1.0 + bk));
            }
        }
    }
}

TEST_CASE("constant functions produce vanishing bounds at every order") {
    // f_h of a constant vanishes, so the seminorm and every inner bound
    // collapse to the certification noise floor.
    const auto model = SumModel<double>::fromComponents(
        {FinitePmf<double>::bernoulli(0.2), FinitePmf<double>::bernoulli(0.1)});
    const auto h = TabulatedFunction<double>::fromPolynomial({4.0}, 60);
    CHECK(e0Bound(model, h, 0.0) <= 1e-12);
    CHECK(recursiveEBound(model, h, 1, 0.0) <= 1e-12);
    CHECK(recursiveEBound(model, h, 2, 0.0) <= 1e-12);
}

TEST_CASE("poisson components: tiny remainder, positive bound") {
    const std::vector<FinitePmf<double>> comps = {
        FinitePmf<double>::poissonTruncated(0.5, 1e-13)};
    const auto model = SumModel<double>::fromComponents(comps);
    const auto h = TabulatedFunction<double>::fromMonomial(2.0, 80);
    const auto report = expand(model, h, 0);
    const double exact = oracle::exactExpectation(comps, h);
    const double bound = e0Bound(model, h, 2.0);
    CHECK(std::abs(exact - report.orders[0].c) <= 1e-9);
    CHECK(bound > 0.0);
    CHECK(bound >= std::abs(exact - report.orders[0].c));
}

TEST_CASE("seminorm mismatch is rejected") {
    const auto sq = TabulatedFunction<double>::fromMonomial(2.0, 40);
    const auto norm = seminorm(sq, 1, 2.0);
    const auto x = FinitePmf<double>::bernoulli(0.5);
    CHECK_THROWS_AS(deltaBound(norm, x, x, 2, 0, 2.0), BadParameter);
    CHECK_THROWS_AS(epsilonBound(norm, x, x, 1, 0, 1.0), BadParameter);
}
