#pragma once

#include <cmath>
#include <vector>

#include "poexp/compositions.hpp"
#include "poexp/expansion.hpp"
#include "poexp/finite_pmf.hpp"
#include "poexp/stein.hpp"
#include "poexp/tabulated_function.hpp"

namespace poexp {

/// Grid measurement of sup_{x>=1} |D^{N+1} f(x)| / x^p. The sup over the
/// full domain is not computable from a table; `exact` records whether the
/// grid maximum is trustworthy as the sup (vanishing or decaying tail).
template <typename Scalar>
struct NormEstimate {
    Scalar value;
    Scalar p;
    int order;
    Index measuredLo;
    Index measuredHi;
    bool exact;
};

template <typename Scalar>
NormEstimate<Scalar> seminorm(const TabulatedFunction<Scalar>& f, int order, Scalar p) {
    if (order < 0) throw BadParameter("seminorm: order must be >= 0");
    if (p < Scalar(0)) throw BadParameter("seminorm: p must be >= 0");
    const Index m = f.gridBound();
    if (m < order + 3) {
        throw GridTooShort("seminorm: grid bound " + std::to_string(m) +
                           " below order + 3 = " + std::to_string(order + 3));
    }
    const TabulatedFunction<Scalar> diff = forwardDifference(f, order + 1);
    const Index hi = m - order - 1;

    std::vector<Scalar> ratio(static_cast<std::size_t>(hi) + 1, Scalar(0));
    Scalar best = Scalar(0);
    for (Index x = 1; x <= hi; ++x) {
        ratio[static_cast<std::size_t>(x)] = std::abs(diff(x)) / std::pow(Scalar(x), p);
        if (ratio[static_cast<std::size_t>(x)] > best) best = ratio[static_cast<std::size_t>(x)];
    }

    // Trust the grid maximum as the sup when the tail of the measured
    // ratios either vanishes or is non-increasing over the last quarter.
    const Index tailStart = hi - (hi - 1) / 4;
    bool tailZero = true;
    bool tailDecreasing = true;
    const Scalar slack = best * Scalar(1e-12);
    for (Index x = tailStart; x <= hi; ++x) {
        if (std::abs(diff(x)) > slack) tailZero = false;
        if (x > tailStart &&
            ratio[static_cast<std::size_t>(x)] > ratio[static_cast<std::size_t>(x - 1)] + slack) {
            tailDecreasing = false;
        }
    }
    return {best, p, order, 1, hi, tailZero || tailDecreasing};
}

/// Bound on |delta_{N-k}(D^k f(.+1), X, Y)| from the (N, p) seminorm of f.
template <typename Scalar>
Scalar deltaBound(const NormEstimate<Scalar>& fNorm, const FinitePmf<Scalar>& x,
                  const FinitePmf<Scalar>& y, int order, int k, Scalar p) {
    if (k < 0 || k > order) throw BadParameter("deltaBound: need 0 <= k <= order");
    if (fNorm.order != order || fNorm.p != p) {
        throw BadParameter("deltaBound: seminorm was measured at a different (order, p)");
    }
    const int mo = order - k + 1;
    return powerSplitConstant(p) * fNorm.value *
           (rawMoment(x, p) * binomMoment(y, MomentKey<Scalar>{mo, Scalar(0)}) +
            binomMoment(y, MomentKey<Scalar>{mo, p}));
}

/// Bound on |epsilon_{N-k}(D^k f(.+1), X, Y)|: the composition-summed
/// counterpart of deltaBound, all terms taken positively.
template <typename Scalar>
Scalar epsilonBound(const NormEstimate<Scalar>& fNorm, const FinitePmf<Scalar>& x,
                    const FinitePmf<Scalar>& y, int order, int k, Scalar p) {
    if (k < 0 || k > order) throw BadParameter("epsilonBound: need 0 <= k <= order");
    if (fNorm.order != order || fNorm.p != p) {
        throw BadParameter("epsilonBound: seminorm was measured at a different (order, p)");
    }
    const Scalar xMoment = rawMoment(x, p);
    KahanSum<Scalar> acc;
    for (const Composition& j : enumerateCompositions(order - k)) {
        const int mo = order - k - j.total() + 1;
        acc.add(binomMomentProduct(y, j) *
                (xMoment * binomMoment(y, MomentKey<Scalar>{mo, Scalar(0)}) +
                 binomMoment(y, MomentKey<Scalar>{mo, p})));
    }
    return powerSplitConstant(p) * fNorm.value * acc.value();
}

/// Bound on |e_0(h)| from the zero-order seminorm of the Stein solution.
template <typename Scalar>
Scalar e0Bound(const SumModel<Scalar>& model, const TabulatedFunction<Scalar>& h, Scalar p,
               Scalar tailTol = Scalar(1e-12)) {
    const TabulatedFunction<Scalar> fh = steinSolution(h, model.lambdaW(), tailTol);
    const NormEstimate<Scalar> norm = seminorm(fh, 0, p);
    KahanSum<Scalar> acc;
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!model.zeroBiased(i)) continue;
        const FinitePmf<Scalar>& xi = model.components()[i];
        const Scalar lambdaI = xi.mean();
        const Scalar second = rawMoment(xi, Scalar(2));
        acc.add(rawMoment(model.leaveOneOut(i), p) * (second + lambdaI * lambdaI - lambdaI));
        acc.add(lambdaI * (rawMoment(*model.zeroBiased(i), p + Scalar(1)) +
                           rawMoment(xi, p + Scalar(1))));
    }
    return powerSplitConstant(p) * norm.value * acc.value();
}

/// Recursive bound on |e_N(h)|. Inner remainders are bounded recursively
/// (never read from the exact path), so the bound is computable with no
/// oracle. Seminorms are re-measured per inner function.
template <typename Scalar>
Scalar recursiveEBound(const SumModel<Scalar>& model, const TabulatedFunction<Scalar>& h,
                       int order, Scalar p, Scalar tailTol = Scalar(1e-12)) {
    if (order < 0) throw BadParameter("recursiveEBound: order must be >= 0");
    if (order == 0) return e0Bound(model, h, p, tailTol);

    const TabulatedFunction<Scalar> fh = steinSolution(h, model.lambdaW(), tailTol);
    const NormEstimate<Scalar> norm = seminorm(fh, order, p);
    const TabulatedFunction<Scalar> shifted = shift(fh);

    std::vector<TabulatedFunction<Scalar>> childFns;
    childFns.push_back(shifted);
    std::vector<Scalar> childBounds(static_cast<std::size_t>(order) + 1, Scalar(0));
    for (int t = 1; t <= order; ++t) {
        childFns.push_back(withMeasuredEnvelope(forwardDifference(shifted, t)));
        childBounds[static_cast<std::size_t>(t)] =
            recursiveEBound(model, childFns[static_cast<std::size_t>(t)], order - t, p, tailTol);
    }

    const std::vector<Composition> comps = enumerateCompositions(order);
    KahanSum<Scalar> total;
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!model.zeroBiased(i)) continue;
        const FinitePmf<Scalar>& xi = model.components()[i];
        const FinitePmf<Scalar>& star = *model.zeroBiased(i);
        const FinitePmf<Scalar>& rest = model.leaveOneOut(i);

        // Composition weights with |m* - m| replaced by m* + m.
        std::vector<Scalar> absWeight(static_cast<std::size_t>(order) + 1, Scalar(0));
        for (const Composition& j : comps) {
            if (j.empty()) continue;
            Scalar prod = Scalar(1);
            const auto& parts = j.parts();
            for (std::size_t l = 0; l + 1 < parts.size(); ++l) {
                prod *= binomMoment(xi, MomentKey<Scalar>{parts[l], Scalar(0)});
            }
            const int lastPart = parts.back();
            prod *= binomMoment(star, MomentKey<Scalar>{lastPart, Scalar(0)}) +
                    binomMoment(xi, MomentKey<Scalar>{lastPart, Scalar(0)});
            absWeight[static_cast<std::size_t>(j.total())] += prod;
        }

        KahanSum<Scalar> inner;
        for (int t = 1; t <= order; ++t) {
            inner.add(absWeight[static_cast<std::size_t>(t)] *
                      childBounds[static_cast<std::size_t>(t)]);
        }
        for (int k = 0; k <= order; ++k) {
            inner.add(binomMoment(star, MomentKey<Scalar>{k, Scalar(0)}) *
                      epsilonBound(norm, rest, xi, order, k, p));
        }
        inner.add(deltaBound(norm, rest, star, order, 0, p));
        total.add(xi.mean() * inner.value());
    }
    return total.value();
}

} // namespace poexp
