#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "poexp/compositions.hpp"
#include "poexp/errors.hpp"
#include "poexp/numeric.hpp"

namespace poexp {

/// Selects a binomial moment E[C(Y,k) Y^p]. p = 0 recovers the plain
/// binomial moment; 0^0 = 1 so both readings agree on the support point 0.
template <typename Scalar>
struct MomentKey {
    int k = 0;
    Scalar p = Scalar(0);
};

/// A probability mass function on {0, 1, ..., s} with finite support.
///
/// Entries are nonnegative, sum to 1, and the trailing entry is positive
/// (canonical support bound) unless s = 0. The mean is cached at
/// construction. Values are immutable afterwards; every operation on them
/// is pure.
template <typename Scalar = double>
class FinitePmf {
public:
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    /// Normalizes nonnegative weights into a pmf. Trailing zeros are
    /// trimmed so the support bound is canonical.
    static FinitePmf fromWeights(Array weights) {
        if (weights.size() == 0) throw AllZero("fromWeights: empty weight vector");
        if ((weights < Scalar(0)).any()) {
            throw NegativeWeight("fromWeights: negative weight entry");
        }
        Index top = weights.size() - 1;
        while (top > 0 && weights[top] == Scalar(0)) --top;
        Array trimmed = weights.head(top + 1);
        const Scalar mass = trimmed.sum();
        if (mass <= Scalar(0)) throw AllZero("fromWeights: all weights are zero");
        trimmed /= mass;
        return FinitePmf(std::move(trimmed));
    }

    static FinitePmf fromWeights(std::initializer_list<Scalar> weights) {
        Array a(static_cast<Index>(weights.size()));
        Index i = 0;
        for (Scalar w : weights) a[i++] = w;
        return fromWeights(std::move(a));
    }

    /// Point mass at x.
    static FinitePmf pointMass(Index x) {
        if (x < 0) throw BadParameter("pointMass: x must be >= 0");
        Array a = Array::Zero(x + 1);
        a[x] = Scalar(1);
        return FinitePmf(std::move(a));
    }

    static FinitePmf bernoulli(Scalar p) {
        if (!(p > Scalar(0) && p < Scalar(1))) {
            throw BadParameter("bernoulli: p must lie in (0, 1)");
        }
        Array a(2);
        a[0] = Scalar(1) - p;
        a[1] = p;
        return FinitePmf(std::move(a));
    }

    static FinitePmf binomial(int n, Scalar p) {
        if (n < 1) throw BadParameter("binomial: n must be >= 1");
        if (!(p > Scalar(0) && p < Scalar(1))) {
            throw BadParameter("binomial: p must lie in (0, 1)");
        }
        Array a(n + 1);
        for (Index k = 0; k <= n; ++k) {
            a[k] = binomialCoefficient<Scalar>(n, k) * std::pow(p, Scalar(k)) *
                   std::pow(Scalar(1) - p, Scalar(n - k));
        }
        return FinitePmf(std::move(a));
    }

    /// Poisson(lambda) truncated at the least M whose certified tail mass
    /// is below tailTol, then renormalized. The tail certificate is the
    /// geometric bound P(X > M) <= pmf(M+1) * (M+2) / (M+2-lambda).
    static FinitePmf poissonTruncated(Scalar lambda, Scalar tailTol) {
        if (!(lambda > Scalar(0))) throw BadParameter("poissonTruncated: lambda must be > 0");
        if (!(tailTol > Scalar(0) && tailTol < Scalar(1))) {
            throw BadParameter("poissonTruncated: tail_tol must lie in (0, 1)");
        }
        std::vector<Scalar> terms;
        Scalar term = std::exp(-lambda); // pmf(0)
        terms.push_back(term);
        Index m = 0;
        while (true) {
            const Scalar next = term * lambda / Scalar(m + 1); // pmf(m+1)
            if (Scalar(m + 2) > lambda) {
                const Scalar tailBound = next * Scalar(m + 2) / (Scalar(m + 2) - lambda);
                if (tailBound < tailTol) break;
            }
            terms.push_back(next);
            term = next;
            ++m;
            if (m > 100000) throw BadParameter("poissonTruncated: tail scan failed to converge");
        }
        Array a(static_cast<Index>(terms.size()));
        for (Index i = 0; i < a.size(); ++i) a[i] = terms[static_cast<std::size_t>(i)];
        a /= a.sum();
        return FinitePmf(std::move(a));
    }

    const Array& probs() const { return probs_; }
    Index supportBound() const { return probs_.size() - 1; }
    Scalar mean() const { return mean_; }

    /// P(X = x); zero outside the support.
    Scalar operator()(Index x) const {
        return (x >= 0 && x < probs_.size()) ? probs_[x] : Scalar(0);
    }

private:
    explicit FinitePmf(Array probs) : probs_(std::move(probs)) {
        KahanSum<Scalar> acc;
        for (Index x = 0; x < probs_.size(); ++x) acc.add(Scalar(x) * probs_[x]);
        mean_ = acc.value();
    }

    Array probs_;
    Scalar mean_ = Scalar(0);

    template <typename S>
    friend FinitePmf<S> convolve(const FinitePmf<S>&, const FinitePmf<S>&);
    template <typename S>
    friend FinitePmf<S> zeroBias(const FinitePmf<S>&);
};

/// Law of the sum of two independent variables.
template <typename Scalar>
FinitePmf<Scalar> convolve(const FinitePmf<Scalar>& a, const FinitePmf<Scalar>& b) {
    using Array = typename FinitePmf<Scalar>::Array;
    Array out = Array::Zero(a.supportBound() + b.supportBound() + 1);
    for (Index x = 0; x <= a.supportBound(); ++x) {
        if (a(x) == Scalar(0)) continue;
        for (Index y = 0; y <= b.supportBound(); ++y) {
            out[x + y] += a(x) * b(y);
        }
    }
    return FinitePmf<Scalar>(std::move(out));
}

/// The transform X -> X* with P(X* = y) = (y+1) P(X = y+1) / E[X].
/// The output sums to 1 by telescoping; no renormalization is applied.
template <typename Scalar>
FinitePmf<Scalar> zeroBias(const FinitePmf<Scalar>& x) {
    const Scalar lambda = x.mean();
    if (!(lambda > Scalar(0))) throw ZeroMean("zeroBias: pmf has zero mean");
    using Array = typename FinitePmf<Scalar>::Array;
    Array out(x.supportBound());
    for (Index y = 0; y < x.supportBound(); ++y) {
        out[y] = Scalar(y + 1) * x(y + 1) / lambda;
    }
    return FinitePmf<Scalar>(std::move(out));
}

/// E[C(Y,k) Y^p]. C(y,k) vanishes for y < k; 0^0 = 1.
template <typename Scalar>
Scalar binomMoment(const FinitePmf<Scalar>& y, MomentKey<Scalar> key) {
    if (key.k < 0) throw BadParameter("binomMoment: k must be >= 0");
    if (key.p < Scalar(0)) throw BadParameter("binomMoment: p must be >= 0");
    KahanSum<Scalar> acc;
    for (Index v = 0; v <= y.supportBound(); ++v) {
        const Scalar c = binomialCoefficient<Scalar>(v, key.k);
        if (c == Scalar(0)) continue;
        acc.add(y(v) * c * powNonneg(Scalar(v), key.p));
    }
    return acc.value();
}

/// Product of plain binomial moments over the coordinates of j.
/// The empty tuple gives 1.
template <typename Scalar>
Scalar binomMomentProduct(const FinitePmf<Scalar>& y, const Composition& j) {
    Scalar out = Scalar(1);
    for (int part : j.parts()) {
        out *= binomMoment(y, MomentKey<Scalar>{part, Scalar(0)});
    }
    return out;
}

/// E[X^p] with 0^0 = 1.
template <typename Scalar>
Scalar rawMoment(const FinitePmf<Scalar>& x, Scalar p) {
    if (p < Scalar(0)) throw BadParameter("rawMoment: p must be >= 0");
    KahanSum<Scalar> acc;
    for (Index v = 0; v <= x.supportBound(); ++v) {
        acc.add(x(v) * powNonneg(Scalar(v), p));
    }
    return acc.value();
}

} // namespace poexp
