#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "poexp/errors.hpp"
#include "poexp/tabulated_function.hpp"

namespace poexp {

/// Working grid bound covering the support of the sum, the bulk of the
/// Poisson mass at its rate, and the shrinkage from repeated differencing.
template <typename Scalar>
Index defaultGridBound(Scalar lambdaW, int order, Scalar growthExponent, Index supportBound) {
    const Scalar raw = Scalar(4) * lambdaW + Scalar(8) * (Scalar(order) + growthExponent) +
                       Scalar(supportBound);
    const Index m = static_cast<Index>(std::ceil(raw));
    return m < 32 ? 32 : m;
}

/// Truncation policy for Poisson-weighted series: the rate, the tolerance
/// every certified tail must stay below, and the working grid bound.
template <typename Scalar>
struct SteinContext {
    Scalar lambda;
    Scalar tailTol;
    Index gridBound;

    static SteinContext forProblem(Scalar lambdaW, int order, Scalar growthExponent,
                                   Index supportBound, Scalar tailTol,
                                   std::optional<Index> overrideBound = std::nullopt) {
        if (!(lambdaW > Scalar(0))) throw BadParameter("SteinContext: lambda must be > 0");
        if (!(tailTol > Scalar(0))) throw BadParameter("SteinContext: tail_tol must be > 0");
        const Index m = overrideBound.value_or(
            defaultGridBound(lambdaW, order, growthExponent, supportBound));
        return {lambdaW, tailTol, m};
    }
};

/// A Poisson expectation together with its truncation certificate.
template <typename Scalar>
struct PoissonExpectation {
    Scalar value;
    Scalar tailBound;
    Index truncatedAt;
};

/// Sum_{x<=M'} pois(lambda, x) f(x) with M' <= grid bound chosen so the
/// envelope-certified tail is below tailTol. The tail certificate is
/// geometric: once the term ratio drops below 1/2 the omitted mass is at
/// most twice the first omitted term.
template <typename Scalar>
PoissonExpectation<Scalar> poissonExpectation(const TabulatedFunction<Scalar>& f, Scalar lambda,
                                              Scalar tailTol) {
    if (!(lambda > Scalar(0))) throw BadParameter("poissonExpectation: lambda must be > 0");
    if (!(tailTol > Scalar(0))) throw BadParameter("poissonExpectation: tail_tol must be > 0");
    const Scalar envK = f.envelope().bound;
    const Scalar envP = f.envelope().exponent;

    KahanSum<Scalar> acc;
    Scalar pmf = std::exp(-lambda); // pois(lambda, 0)
    for (Index x = 0; x <= f.gridBound(); ++x) {
        acc.add(pmf * f(x));
        const Scalar pmfNext = pmf * lambda / Scalar(x + 1);
        const Scalar firstOmitted = pmfNext * envK * envelopeWeight(x + 1, envP);
        const Scalar ratio = lambda / Scalar(x + 2) *
                             std::pow(Scalar(x + 2) / Scalar(x + 1), envP);
        if (ratio <= Scalar(0.5)) {
            const Scalar tailBound = Scalar(2) * firstOmitted;
            if (tailBound < tailTol) {
                return {acc.value(), tailBound, x};
            }
        }
        pmf = pmfNext;
    }
    throw GridTooShort("poissonExpectation: grid bound " + std::to_string(f.gridBound()) +
                       " cannot certify tail below tolerance");
}

namespace detail {

/// Shared solver for x f(x) - lambda f(x+1) = g(x) where g is h minus an
/// optional centering constant. Uses the backward recursion on the
/// Poisson-weighted tail sums t(x) = sum_{i>=x} lambda^i/i! g(i); the
/// prefactor (x-1)!/lambda^x is applied in log space. The output grid is
/// the largest prefix on which the truncation error of every value is
/// certified below tailTol.
template <typename Scalar>
TabulatedFunction<Scalar> solveSteinSeries(const TabulatedFunction<Scalar>& h, Scalar lambda,
                                           Scalar tailTol, Scalar center) {
    const Index mh = h.gridBound();
    const Scalar p = h.envelope().exponent;
    const Scalar kBar = h.envelope().bound + std::abs(center);
    const Scalar logLambda = std::log(lambda);

    // Series weights w(i) = lambda^i / i!.
    typename TabulatedFunction<Scalar>::Array w(mh + 2);
    w[0] = Scalar(1);
    for (Index i = 1; i <= mh + 1; ++i) w[i] = w[i - 1] * lambda / Scalar(i);

    // Envelope tail of sum_{i > mh} w(i) |g(i)|, by geometric domination.
    const Scalar ratio = lambda / Scalar(mh + 2) * std::pow(Scalar(mh + 2) / Scalar(mh + 1), p);
    if (ratio > Scalar(0.5)) {
        throw TailNotCertified("stein solution: grid bound " + std::to_string(mh) +
                               " too short for a geometric tail certificate at lambda=" +
                               std::to_string(double(lambda)));
    }
    const Scalar tailT = Scalar(2) * w[mh + 1] * kBar * envelopeWeight(mh + 1, p);
    const Scalar logTailT =
        tailT > Scalar(0) ? std::log(tailT) : -std::numeric_limits<Scalar>::infinity();
    const Scalar logTol = std::log(tailTol);

    // Largest x such that every value on [1, x] has certified truncation
    // error factor(x') * tailT <= tailTol, factor(x) = (x-1)!/lambda^x.
    Index mOut = 0;
    for (Index x = 1; x <= mh; ++x) {
        const Scalar logFactor = std::lgamma(Scalar(x)) - Scalar(x) * logLambda;
        if (logFactor + logTailT <= logTol) {
            mOut = x;
        } else {
            break;
        }
    }
    if (mOut < 1) {
        throw TailNotCertified("stein solution: series tail not certifiable below tolerance");
    }

    // Backward accumulation of the weighted tail sums.
    typename TabulatedFunction<Scalar>::Array tails(mh + 1);
    KahanSum<Scalar> acc;
    for (Index i = mh; i >= 1; --i) {
        acc.add(w[i] * (h(i) - center));
        tails[i] = acc.value();
    }

    typename TabulatedFunction<Scalar>::Array values =
        TabulatedFunction<Scalar>::Array::Zero(mOut + 1); // f(0) := 0, never consumed
    Scalar measured = Scalar(0);
    for (Index x = 1; x <= mOut; ++x) {
        const Scalar t = tails[x];
        if (t != Scalar(0)) {
            const Scalar logMag =
                std::lgamma(Scalar(x)) - Scalar(x) * logLambda + std::log(std::abs(t));
            values[x] = std::copysign(std::exp(logMag), t);
        }
        const Scalar r = std::abs(values[x]) / envelopeWeight(x, p);
        if (r > measured) measured = r;
    }

    // Grid-measured envelope, inflated x2; reported as measured, not proven.
    Scalar outBound = Scalar(2) * measured;
    if (!(outBound > Scalar(0))) outBound = std::numeric_limits<Scalar>::min();
    return TabulatedFunction<Scalar>::fromValuesUnchecked(std::move(values), {outBound, p});
}

} // namespace detail

/// Solution of x f(x) - lambda f(x+1) = h(x) - P_lambda(h) on the positive
/// integers, with f(0) := 0. Validity is checked by the residual tests,
/// not assumed from the recursion.
template <typename Scalar>
TabulatedFunction<Scalar> steinSolution(const TabulatedFunction<Scalar>& h, Scalar lambda,
                                        Scalar tailTol) {
    const PoissonExpectation<Scalar> p = poissonExpectation(h, lambda, tailTol);
    return detail::solveSteinSeries(h, lambda, tailTol, p.value);
}

/// Solution of x f(x) - lambda f(x+1) = h(x) on the positive integers
/// (no centering), restricted to the polynomially growing branch.
template <typename Scalar>
TabulatedFunction<Scalar> steinSolutionModified(const TabulatedFunction<Scalar>& h, Scalar lambda,
                                                Scalar tailTol) {
    if (!(lambda > Scalar(0))) throw BadParameter("steinSolutionModified: lambda must be > 0");
    if (!(tailTol > Scalar(0))) throw BadParameter("steinSolutionModified: tail_tol must be > 0");
    return detail::solveSteinSeries(h, lambda, tailTol, Scalar(0));
}

template <typename Scalar>
PoissonExpectation<Scalar> poissonExpectation(const TabulatedFunction<Scalar>& f,
                                              const SteinContext<Scalar>& ctx) {
    return poissonExpectation(f, ctx.lambda, ctx.tailTol);
}

template <typename Scalar>
TabulatedFunction<Scalar> steinSolution(const TabulatedFunction<Scalar>& h,
                                        const SteinContext<Scalar>& ctx) {
    return steinSolution(h, ctx.lambda, ctx.tailTol);
}

template <typename Scalar>
TabulatedFunction<Scalar> steinSolutionModified(const TabulatedFunction<Scalar>& h,
                                                const SteinContext<Scalar>& ctx) {
    return steinSolutionModified(h, ctx.lambda, ctx.tailTol);
}

} // namespace poexp
