#pragma once

#include <vector>

#include "poexp/errors.hpp"
#include "poexp/numeric.hpp"

namespace poexp {

/// An ordered tuple of positive integers. The empty tuple is allowed and
/// has total 0. Tuples index the correction terms of the expansion: the
/// product moment runs over all coordinates, while the recursion treats
/// the last coordinate specially.
class Composition {
public:
    Composition() = default;

    explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (int part : parts_) {
            if (part < 1) throw BadParameter("Composition: every part must be >= 1");
            total_ += part;
        }
    }

    const std::vector<int>& parts() const { return parts_; }
    int total() const { return total_; }
    int size() const { return static_cast<int>(parts_.size()); }
    bool empty() const { return parts_.empty(); }

    /// Last coordinate. Only valid on non-empty tuples.
    int last() const {
        if (empty()) throw BadParameter("Composition::last on empty tuple");
        return parts_.back();
    }

    /// All coordinates but the last. Only valid on non-empty tuples.
    Composition dropLast() const {
        if (empty()) throw BadParameter("Composition::dropLast on empty tuple");
        return Composition(std::vector<int>(parts_.begin(), parts_.end() - 1));
    }

    bool operator==(const Composition& other) const { return parts_ == other.parts_; }

private:
    std::vector<int> parts_;
    int total_ = 0;
};

namespace detail {

inline void appendCompositionsOfExactly(int total, std::vector<int>& prefix,
                                        std::vector<Composition>& out) {
    if (total == 0) {
        out.emplace_back(prefix);
        return;
    }
    for (int first = 1; first <= total; ++first) {
        prefix.push_back(first);
        appendCompositionsOfExactly(total - first, prefix, out);
        prefix.pop_back();
    }
}

} // namespace detail

/// All compositions with total <= nMax, the empty tuple included, ordered
/// by increasing total and lexicographically within a total. The count is
/// exactly 2^nMax.
inline std::vector<Composition> enumerateCompositions(int nMax) {
    if (nMax < 0) throw BadParameter("enumerateCompositions: nMax must be >= 0");
    std::vector<Composition> out;
    out.reserve(std::size_t(1) << std::min(nMax, 30));
    std::vector<int> prefix;
    for (int total = 0; total <= nMax; ++total) {
        detail::appendCompositionsOfExactly(total, prefix, out);
    }
    return out;
}

} // namespace poexp
