#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "poexp/errors.hpp"
#include "poexp/finite_pmf.hpp"
#include "poexp/numeric.hpp"

namespace poexp {

/// Certificate that |g(x)| <= bound * max(x,1)^exponent for all x >= 0.
/// Checked on the tabulated grid at construction, asserted beyond it.
template <typename Scalar>
struct GrowthEnvelope {
    Scalar bound;
    Scalar exponent;

    Scalar at(Index x) const { return bound * envelopeWeight(x, exponent); }
};

/// Values of a function on the contiguous integer grid [0, M] together
/// with a growth envelope. Immutable after construction.
template <typename Scalar = double>
class TabulatedFunction {
public:
    using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    /// Wraps raw values; throws EnvelopeViolated if any grid value exceeds
    /// the declared envelope.
    static TabulatedFunction fromValues(Array values, GrowthEnvelope<Scalar> envelope) {
        requireGrid(values.size());
        for (Index x = 0; x < values.size(); ++x) {
            if (std::abs(values[x]) > envelope.at(x)) {
                throw EnvelopeViolated("fromValues: grid value exceeds declared envelope at x=" +
                                       std::to_string(x));
            }
        }
        return TabulatedFunction(std::move(values), envelope);
    }

    /// Polynomial with ascending coefficients; envelope (sum |c_j|, degree).
    static TabulatedFunction fromPolynomial(const std::vector<Scalar>& coefficients,
                                            Index gridBound) {
        requireGrid(gridBound + 1);
        if (coefficients.empty()) throw BadParameter("fromPolynomial: no coefficients");
        Array values(gridBound + 1);
        for (Index x = 0; x <= gridBound; ++x) {
            Scalar acc = Scalar(0);
            for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
                acc = acc * Scalar(x) + *it; // Horner
            }
            values[x] = acc;
        }
        Scalar absSum = Scalar(0);
        for (Scalar c : coefficients) absSum += std::abs(c);
        if (absSum == Scalar(0)) absSum = std::numeric_limits<Scalar>::min();
        const Scalar degree = Scalar(coefficients.size() - 1);
        return TabulatedFunction(std::move(values), {absSum, degree});
    }

    /// Indicator of a finite set of points; envelope (1, 0).
    static TabulatedFunction fromIndicator(const std::vector<Index>& points, Index gridBound) {
        requireGrid(gridBound + 1);
        Array values = Array::Zero(gridBound + 1);
        for (Index pt : points) {
            if (pt < 0) throw BadParameter("fromIndicator: negative point");
            if (pt <= gridBound) values[pt] = Scalar(1);
        }
        return TabulatedFunction(std::move(values), {Scalar(1), Scalar(0)});
    }

    /// x^power with 0^0 = 1; envelope (1, power).
    static TabulatedFunction fromMonomial(Scalar power, Index gridBound) {
        requireGrid(gridBound + 1);
        if (power < Scalar(0)) throw BadParameter("fromMonomial: power must be >= 0");
        Array values(gridBound + 1);
        for (Index x = 0; x <= gridBound; ++x) values[x] = powNonneg(Scalar(x), power);
        return TabulatedFunction(std::move(values), {Scalar(1), power});
    }

    const Array& values() const { return values_; }
    Index gridBound() const { return values_.size() - 1; }
    const GrowthEnvelope<Scalar>& envelope() const { return envelope_; }

    Scalar operator()(Index x) const {
        if (x < 0 || x >= values_.size()) {
            throw GridTooShort("TabulatedFunction: evaluation at x=" + std::to_string(x) +
                               " beyond grid bound " + std::to_string(gridBound()));
        }
        return values_[x];
    }

    /// Internal constructor for operator results whose envelope is derived
    /// analytically rather than re-checked on the grid.
    static TabulatedFunction fromValuesUnchecked(Array values, GrowthEnvelope<Scalar> envelope) {
        requireGrid(values.size());
        return TabulatedFunction(std::move(values), envelope);
    }

private:
    TabulatedFunction(Array values, GrowthEnvelope<Scalar> envelope)
        : values_(std::move(values)), envelope_(envelope) {}

    static void requireGrid(Index size) {
        if (size < 2) throw GridTooShort("TabulatedFunction: grid bound must be >= 1");
    }

    Array values_;
    GrowthEnvelope<Scalar> envelope_;
};

/// k-fold forward difference (D f)(x) = f(x+1) - f(x), on the grid
/// [0, M-k]. Envelope propagates as (2^k K, p) by the triangle inequality.
template <typename Scalar>
TabulatedFunction<Scalar> forwardDifference(const TabulatedFunction<Scalar>& f, int k) {
    if (k < 0) throw BadParameter("forwardDifference: k must be >= 0");
    if (f.gridBound() < k + 1) {
        throw GridTooShort("forwardDifference: grid bound " + std::to_string(f.gridBound()) +
                           " too short for order " + std::to_string(k));
    }
    typename TabulatedFunction<Scalar>::Array cur = f.values();
    for (int step = 0; step < k; ++step) {
        cur = (cur.tail(cur.size() - 1) - cur.head(cur.size() - 1)).eval();
    }
    const Scalar factor = std::pow(Scalar(2), Scalar(k));
    return TabulatedFunction<Scalar>::fromValuesUnchecked(
        std::move(cur), {f.envelope().bound * factor, f.envelope().exponent});
}

/// g(x) = f(x+1) on [0, M-1]; envelope (2^p K, p).
template <typename Scalar>
TabulatedFunction<Scalar> shift(const TabulatedFunction<Scalar>& f) {
    if (f.gridBound() < 1) throw GridTooShort("shift: grid bound must be >= 1");
    typename TabulatedFunction<Scalar>::Array out = f.values().tail(f.values().size() - 1);
    const Scalar p = f.envelope().exponent;
    return TabulatedFunction<Scalar>::fromValuesUnchecked(
        std::move(out), {f.envelope().bound * std::pow(Scalar(2), p), p});
}

/// g(x) = f(x+1) / (x+1) on [0, M-1]; envelope (2^p K, max(p-1, 0)).
template <typename Scalar>
TabulatedFunction<Scalar> tau(const TabulatedFunction<Scalar>& f) {
    if (f.gridBound() < 1) throw GridTooShort("tau: grid bound must be >= 1");
    typename TabulatedFunction<Scalar>::Array out(f.values().size() - 1);
    for (Index x = 0; x < out.size(); ++x) out[x] = f(x + 1) / Scalar(x + 1);
    const Scalar p = f.envelope().exponent;
    const Scalar pOut = p > Scalar(1) ? p - Scalar(1) : Scalar(0);
    return TabulatedFunction<Scalar>::fromValuesUnchecked(
        std::move(out), {f.envelope().bound * std::pow(Scalar(2), p), pOut});
}

/// Same values with the envelope bound re-measured on the grid (inflated
/// x2, exponent kept). Analytic propagation through difference/shift
/// chains compounds multiplicatively and can overstate the bound by many
/// orders; since envelopes only gate series truncation, the measured
/// bound is the useful one for derived tables.
template <typename Scalar>
TabulatedFunction<Scalar> withMeasuredEnvelope(const TabulatedFunction<Scalar>& f) {
    const Scalar p = f.envelope().exponent;
    Scalar measured = Scalar(0);
    for (Index x = 0; x <= f.gridBound(); ++x) {
        const Scalar r = std::abs(f(x)) / envelopeWeight(x, p);
        if (r > measured) measured = r;
    }
    Scalar bound = Scalar(2) * measured;
    if (!(bound > Scalar(0))) bound = std::numeric_limits<Scalar>::min();
    return TabulatedFunction<Scalar>::fromValuesUnchecked(f.values(), {bound, p});
}

/// E[f(X)] over the pmf's support. The grid must cover the support.
template <typename Scalar>
Scalar expectation(const FinitePmf<Scalar>& x, const TabulatedFunction<Scalar>& f) {
    if (f.gridBound() < x.supportBound()) {
        throw GridTooShort("expectation: grid bound " + std::to_string(f.gridBound()) +
                           " below pmf support " + std::to_string(x.supportBound()));
    }
    KahanSum<Scalar> acc;
    for (Index v = 0; v <= x.supportBound(); ++v) acc.add(x(v) * f(v));
    return acc.value();
}

} // namespace poexp
