#pragma once

#include <functional>
#include <vector>

#include "poexp/errors.hpp"
#include "poexp/finite_pmf.hpp"
#include "poexp/tabulated_function.hpp"

// Independent ground truth. Everything here is deliberately written from
// scratch on std::vector loops, sharing no computational code path with
// the expansion machinery it is used to check.

namespace poexp::oracle {

/// E[h(X_1 + ... + X_n)] by direct convolution of the component laws.
template <typename Scalar>
Scalar exactExpectation(const std::vector<FinitePmf<Scalar>>& components,
                        const TabulatedFunction<Scalar>& h) {
    std::vector<Scalar> dist{Scalar(1)}; // law of the empty sum
    for (const FinitePmf<Scalar>& comp : components) {
        std::vector<Scalar> next(dist.size() + static_cast<std::size_t>(comp.supportBound()),
                                 Scalar(0));
        for (std::size_t a = 0; a < dist.size(); ++a) {
            for (Index b = 0; b <= comp.supportBound(); ++b) {
                next[a + static_cast<std::size_t>(b)] += dist[a] * comp(b);
            }
        }
        dist = std::move(next);
    }
    if (h.gridBound() + 1 < static_cast<Index>(dist.size())) {
        throw GridTooShort("exactExpectation: grid bound " + std::to_string(h.gridBound()) +
                           " below sum support " + std::to_string(dist.size() - 1));
    }
    Scalar total = Scalar(0);
    for (std::size_t v = 0; v < dist.size(); ++v) {
        total += dist[v] * h(static_cast<Index>(v));
    }
    return total;
}

/// The discrete Taylor remainder by literal enumeration of every strictly
/// increasing index tuple below Y, with no counting shortcut. The
/// (order+1)-st difference is evaluated through its alternating binomial
/// form rather than by iterated differencing.
template <typename Scalar>
Scalar bruteDelta(const TabulatedFunction<Scalar>& f, int order, const FinitePmf<Scalar>& x,
                  const FinitePmf<Scalar>& y) {
    if (order < 0) throw BadParameter("bruteDelta: order must be >= 0");
    if (y.supportBound() > 25 || order > 6) {
        throw TooLarge("bruteDelta: support or order beyond enumeration guards");
    }
    if (f.gridBound() < x.supportBound() + y.supportBound()) {
        throw GridTooShort("bruteDelta: grid too short for combined support");
    }

    // Pascal row for C(order+1, j).
    std::vector<Scalar> binom(static_cast<std::size_t>(order) + 2, Scalar(0));
    binom[0] = Scalar(1);
    for (int row = 1; row <= order + 1; ++row) {
        for (int j = row; j >= 1; --j) binom[static_cast<std::size_t>(j)] += binom[j - 1];
    }
    const auto differenced = [&](Index z) {
        Scalar acc = Scalar(0);
        for (int j = 0; j <= order + 1; ++j) {
            const Scalar sign = ((order + 1 - j) % 2 == 0) ? Scalar(1) : Scalar(-1);
            acc += sign * binom[static_cast<std::size_t>(j)] * f(z + j);
        }
        return acc;
    };

    Scalar total = Scalar(0);
    std::vector<Index> tuple(static_cast<std::size_t>(order) + 1);
    for (Index yv = 0; yv <= y.supportBound(); ++yv) {
        for (Index xv = 0; xv <= x.supportBound(); ++xv) {
            const Scalar weight = x(xv) * y(yv);
            Scalar tupleSum = Scalar(0);
            // Enumerate 0 <= j_1 < ... < j_{order+1} < yv.
            std::function<void(int, Index)> walk = [&](int depth, Index from) {
                if (depth == order + 1) {
                    tupleSum += differenced(xv + tuple[0]);
                    return;
                }
                for (Index j = from; j < yv; ++j) {
                    tuple[static_cast<std::size_t>(depth)] = j;
                    walk(depth + 1, j + 1);
                }
            };
            walk(0, 0);
            total += weight * tupleSum;
        }
    }
    return total;
}

} // namespace poexp::oracle
