#pragma once

#include <vector>

#include "poexp/compositions.hpp"
#include "poexp/finite_pmf.hpp"
#include "poexp/tabulated_function.hpp"

namespace poexp {

/// Remainder of the order-N discrete Taylor expansion of E[f(X+Y)]:
/// the expectation over strictly increasing tuples j_1 < ... < j_{N+1}
/// below Y of the (N+1)-st difference at X + j_1. Computed exactly over
/// the finite supports; the tuple count for fixed j_1 is C(y-1-j_1, N).
template <typename Scalar>
Scalar deltaRemainder(const TabulatedFunction<Scalar>& f, int order, const FinitePmf<Scalar>& x,
                      const FinitePmf<Scalar>& y) {
    if (order < 0) throw BadParameter("deltaRemainder: order must be >= 0");
    if (f.gridBound() < x.supportBound() + y.supportBound()) {
        throw GridTooShort("deltaRemainder: grid bound " + std::to_string(f.gridBound()) +
                           " below combined support " +
                           std::to_string(x.supportBound() + y.supportBound()));
    }
    const TabulatedFunction<Scalar> diff = forwardDifference(f, order + 1);
    KahanSum<Scalar> acc;
    for (Index yv = 0; yv <= y.supportBound(); ++yv) {
        const Scalar py = y(yv);
        if (py == Scalar(0)) continue;
        for (Index xv = 0; xv <= x.supportBound(); ++xv) {
            const Scalar px = x(xv);
            if (px == Scalar(0)) continue;
            KahanSum<Scalar> inner;
            for (Index j1 = 0; j1 + order + 1 <= yv; ++j1) {
                inner.add(binomialCoefficient<Scalar>(yv - 1 - j1, order) * diff(xv + j1));
            }
            acc.add(px * py * inner.value());
        }
    }
    return acc.value();
}

template <typename Scalar>
struct TaylorExpansion {
    Scalar main;
    Scalar delta;
};

/// Order-N discrete Taylor expansion of E[f(X+Y)] for independent X, Y:
/// main = sum_k m_Y^(k) E[D^k f(X)], and main + delta = E[f(X+Y)] exactly
/// up to rounding.
template <typename Scalar>
TaylorExpansion<Scalar> taylorExpand(const TabulatedFunction<Scalar>& f, int order,
                                     const FinitePmf<Scalar>& x, const FinitePmf<Scalar>& y) {
    if (order < 0) throw BadParameter("taylorExpand: order must be >= 0");
    KahanSum<Scalar> main;
    for (int k = 0; k <= order; ++k) {
        const Scalar mk = binomMoment(y, MomentKey<Scalar>{k, Scalar(0)});
        main.add(mk * expectation(x, forwardDifference(f, k)));
    }
    return {main.value(), deltaRemainder(f, order, x, y)};
}

/// Remainder of the order-N discrete reverse Taylor expansion of E[f(X)]
/// in terms of E[D^|J| f(X+Y)]: the alternating composition sum of
/// deltaRemainder values of increasingly differenced f.
template <typename Scalar>
Scalar epsilonRemainder(const TabulatedFunction<Scalar>& f, int order, const FinitePmf<Scalar>& x,
                        const FinitePmf<Scalar>& y) {
    if (order < 0) throw BadParameter("epsilonRemainder: order must be >= 0");
    // Signed composition weights grouped by total: s_t = sum over tuples J
    // with |J| = t of (-1)^{d(J)} prod_l m_Y^{(j_l)}.
    std::vector<Scalar> momentByOrder(order + 1);
    for (int k = 1; k <= order; ++k) {
        momentByOrder[k] = binomMoment(y, MomentKey<Scalar>{k, Scalar(0)});
    }
    std::vector<KahanSum<Scalar>> signedWeights(order + 1);
    for (const Composition& j : enumerateCompositions(order)) {
        Scalar prod = (j.size() % 2 == 0) ? Scalar(1) : Scalar(-1);
        for (int part : j.parts()) prod *= momentByOrder[part];
        signedWeights[j.total()].add(prod);
    }
    KahanSum<Scalar> acc;
    for (int t = 0; t <= order; ++t) {
        const TabulatedFunction<Scalar> diff = forwardDifference(f, t);
        acc.add(-signedWeights[t].value() * deltaRemainder(diff, order - t, x, y));
    }
    return acc.value();
}

} // namespace poexp
