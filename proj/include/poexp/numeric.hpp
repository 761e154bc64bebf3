#pragma once

#include <cmath>

#include <Eigen/Core>

namespace poexp {

using Index = Eigen::Index;

/// Compensated (Kahan) accumulator. Keeps alternating and near-cancelling
/// sums accurate to a few ulps regardless of term ordering.
template <typename Scalar>
class KahanSum {
public:
    void add(Scalar term) {
        const Scalar y = term - compensation_;
        const Scalar t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    Scalar value() const { return sum_; }

private:
    Scalar sum_ = Scalar(0);
    Scalar compensation_ = Scalar(0);
};

/// C(n, k) by the multiplicative recurrence; 0 when n < k. Safe for the
/// support sizes handled here (no factorial overflow).
template <typename Scalar>
Scalar binomialCoefficient(Index n, Index k) {
    if (k < 0 || n < k) return Scalar(0);
    Scalar c = Scalar(1);
    for (Index j = 1; j <= k; ++j) {
        c *= Scalar(n - k + j) / Scalar(j);
    }
    return c;
}

/// x^p on the nonnegative axis with the convention 0^0 = 1.
template <typename Scalar>
Scalar powNonneg(Scalar x, Scalar p) {
    if (p == Scalar(0)) return Scalar(1);
    if (x == Scalar(0)) return Scalar(0);
    return std::pow(x, p);
}

/// max(x, 1)^p, the growth-envelope weight.
template <typename Scalar>
Scalar envelopeWeight(Index x, Scalar p) {
    const Scalar base = x > 1 ? Scalar(x) : Scalar(1);
    return std::pow(base, p);
}

/// max(2^{p-1}, 1), the subadditivity constant for (x+y)^p.
template <typename Scalar>
Scalar powerSplitConstant(Scalar p) {
    const Scalar c = std::pow(Scalar(2), p - Scalar(1));
    return c > Scalar(1) ? c : Scalar(1);
}

} // namespace poexp
