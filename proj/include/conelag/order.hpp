#pragma once

#include "conelag/cone.hpp"

namespace conelag {

/// A finite point set ordered by a cone.
struct OrderedSample {
    SpaceSpec space;
    ConvexCone cone; // ordering cone Y+
    std::vector<Vec> points;

    OrderedSample(SpaceSpec s, ConvexCone c, std::vector<Vec> pts)
        : space(s), cone(std::move(c)), points(std::move(pts)) {
        for (const auto& p : points) check_dim(space, p, "OrderedSample");
        if (cone.space.dim != space.dim)
            throw DimensionMismatch("OrderedSample: cone dim != space dim");
    }
};

/// y0 nondominated by A: every a in A cap (y0 - Y+) also lies in y0 + Y+.
/// Implemented literally so non-pointed ordering cones keep their
/// equivalence-class behavior.
inline bool is_nondominated(const Vec& y0, const OrderedSample& sample, double tol = kTolExact) {
    check_dim(sample.space, y0, "is_nondominated");
    for (const auto& a : sample.points) {
        if (!cone_contains(sample.cone, sub(y0, a), tol)) continue; // a not below y0
        if (!cone_contains(sample.cone, sub(a, y0), tol)) return false;
    }
    return true;
}

/// Min(A | Y+) = nondominated members of A, ordered lexicographically.
inline std::vector<Vec> min_set(const OrderedSample& sample, double tol = kTolExact) {
    if (sample.points.empty()) throw EmptySet("min_set: empty sample");
    std::vector<Vec> out;
    for (const auto& a : sample.points)
        if (is_nondominated(a, sample, tol)) out.push_back(a);
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Nondominance of y0 for a sampled program value set V(0). An empty value
/// set signals a violated regularity assumption upstream.
inline bool nd_check_program(const std::vector<Vec>& value_set, const Vec& y0,
                             const ConvexCone& cone, double tol = kTolExact) {
    if (value_set.empty())
        throw EmptySet("nd_check_program: empty value set (regularity V(z) != {} violated)");
    OrderedSample s(cone.space, cone, value_set);
    return is_nondominated(y0, s, tol);
}

} // namespace conelag
