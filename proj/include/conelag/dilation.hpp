#pragma once

#include "conelag/cone.hpp"

namespace conelag {

/// d(y, A) over a finite sample A.
inline double distance_to_set(const SpaceSpec& space, const Vec& y, const std::vector<Vec>& A) {
    if (A.empty()) throw EmptySet("distance_to_set: empty sample");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : A) best = std::min(best, distance(space, y, a));
    return best;
}

namespace detail {

/// Sampled S_Y-cap of the cone plus eps-ball offsets, used by the n-D
/// (inner-approximation) dilation paths. Deterministic: seeded internally.
inline std::vector<Vec> fattened_samples(const std::vector<Vec>& core_points, double eps,
                                         int dim, int sphere_samples) {
    Rng rng(0xd11a7eULL);
    std::vector<Vec> offsets;
    for (int i = 0; i < dim; ++i) {
        Vec e = zeros(dim);
        e[static_cast<size_t>(i)] = 1.0;
        offsets.push_back(e);
        offsets.push_back(neg(e));
    }
    for (int i = 0; i < sphere_samples; ++i) offsets.push_back(rng.unit_vec(dim));
    std::vector<Vec> out;
    out.reserve(core_points.size() * (offsets.size() + 1));
    for (const auto& u : core_points) {
        out.push_back(u);
        for (const auto& v : offsets) {
            Vec w = add(u, scale(eps, v));
            if (norm2(w) > 1e-9) out.push_back(w);
        }
    }
    return out;
}

} // namespace detail

/// Epsilon-conic neighborhood C_eps = cone(cl((S_Y cap C) + eps*B_Y)).
/// Exact for 1-D cones and euclidean planar sectors (each side widens by
/// arcsin eps); elsewhere an inner approximation by sampled rays.
inline ConvexCone dilate_eps(const ConvexCone& cone, double eps, int sample_density = 64) {
    if (!(eps > 0.0 && eps < 1.0)) throw EpsilonOutOfRange("dilate_eps: need 0 < eps < 1");
    if (cone.space.dim == 1) return cone;
    if (cone.space.norm != Norm::Euclidean)
        throw Error("dilation calculus requires the euclidean norm");
    if (cone.sector) {
        double a = std::asin(eps);
        const auto& s = *cone.sector;
        double w = s.width + 2 * a;
        if (w >= kTwoPi - 1e-9)
            throw Error("dilation fills the plane; resulting cone trivial");
        return ConvexCone::make_sector(s.lo - a, s.lo - a + w, cone.space);
    }
    Rng rng(0xd17a7eULL);
    auto caps = sample_rays(cone, std::max(sample_density, 8 * cone.space.dim), rng);
    auto rays = detail::fattened_samples(caps, eps, cone.space.dim, sample_density);
    return ConvexCone::from_generators(cone.space, std::move(rays));
}

/// Membership y in C_eps without materializing the dilated cone: line search
/// over the scaling t in y/t in (S_Y cap C) + eps*B_Y. Exact in the planar
/// path, sampled-cap distance otherwise.
inline bool dilated_contains(const ConvexCone& cone, double eps, const Vec& y,
                             double tol = kTolExact, int cap_samples = 256) {
    if (!(eps > 0.0 && eps < 1.0)) throw EpsilonOutOfRange("dilated_contains: need 0 < eps < 1");
    check_dim(cone.space, y, "dilated_contains");
    double ny = norm_of(cone.space, y);
    if (ny <= tol) return true;
    if (cone.space.dim == 1) return cone_contains(cone, y, tol);
    if (cone.sector) {
        double a = std::asin(std::min(1.0, eps + tol));
        SectorRep wide{wrap_angle(cone.sector->lo - a), cone.sector->width + 2 * a};
        return detail::distance_to_sector(wide, y) <= tol;
    }
    Rng rng(0xca95ULL);
    auto caps = sample_rays(cone, cap_samples, rng);
    auto dist_at = [&](double t) {
        Vec p = scale(1.0 / t, y);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& u : caps) best = std::min(best, norm2(sub(p, u)));
        return best;
    };
    double lo = ny / (1.0 + eps), hi = ny / (1.0 - eps);
    double t = num::grid_refine_min(dist_at, lo, hi, 128);
    return dist_at(t) <= eps + tol;
}

/// Henig dilating cone C_(B,eps) = cone({y : d(y, B) <= eps}). Exact planar /
/// 1-D paths; sampled generators otherwise.
inline ConvexCone henig_dilate(const ConeBase& base, double eps, int sample_density = 64) {
    if (!(eps > 0.0) || eps >= std::min(1.0, base.delta))
        throw EpsilonTooLarge("henig_dilate: need 0 < eps < min{1, delta_B}");
    const ConvexCone& C = base.cone;
    if (C.space.dim == 1) return C;
    if (C.space.norm != Norm::Euclidean)
        throw Error("dilation calculus requires the euclidean norm");
    if (C.sector) {
        const auto& s = *C.sector;
        const Vec& f = base.functional;
        double nf = norm2(f);
        double tf = std::atan2(f[1], f[0]);
        auto radius = [&](double th) { return base.level / (nf * std::cos(th - tf)); };
        // extreme angles of cone(B_eps): optimize th -/+ arcsin(eps / r(th))
        auto lo_angle = [&](double th) { return th - std::asin(std::min(1.0, eps / radius(th))); };
        auto hi_angle = [&](double th) { return th + std::asin(std::min(1.0, eps / radius(th))); };
        double th_lo = num::grid_refine_min([&](double t) { return lo_angle(t); }, s.lo, s.hi());
        double th_hi = num::grid_refine_min([&](double t) { return -hi_angle(t); }, s.lo, s.hi());
        double new_lo = lo_angle(th_lo);
        double new_hi = hi_angle(th_hi);
        if (new_hi - new_lo >= kTwoPi - 1e-9)
            throw Error("Henig dilation fills the plane");
        return ConvexCone::make_sector(new_lo, new_hi, C.space);
    }
    Rng rng(0x4e16ULL);
    auto pts = sample_base_points(base, std::max(sample_density, 8 * C.space.dim), rng);
    auto rays = detail::fattened_samples(pts, eps, C.space.dim, sample_density);
    return ConvexCone::from_generators(C.space, std::move(rays));
}

/// Bounded base of the Henig dilated cone, built the constructive way: a
/// separating functional for cl(B + eps*B_Y) from the closest-point direction,
/// with the level set taken halfway to the separation gap.
inline ConeBase henig_bounded_base(const ConeBase& base, double eps, int sample_density = 64) {
    double eps_prime = base.level / norm2(base.functional);
    if (!(eps > 0.0) || eps >= eps_prime)
        throw EpsilonTooLarge("henig_bounded_base: need 0 < eps < eps' = level/||f||");
    if (eps >= std::min(1.0, base.delta))
        throw EpsilonTooLarge("henig_bounded_base: need eps < min{1, delta_B}");

    ConvexCone dilated = henig_dilate(base, eps, sample_density);
    if (base.cone.space.dim == 1) {
        // B_eps = [b - eps, b + eps] stays positive; separate at the midpoint.
        double b = base.level / base.functional[0];
        double gamma = (std::abs(b) - eps) / 2.0;
        Vec g = {b > 0 ? 1.0 : -1.0};
        return base_from_functional(dilated, g, gamma);
    }
    Vec bstar = min_norm_base_point(base);
    double m = norm2(bstar);
    // closest point of cl(B + eps*B_Y) to the origin lies at distance m - eps
    Vec g = scale(1.0 / m, bstar);
    double gamma = (m - eps) / 2.0;
    return base_from_functional(dilated, g, gamma);
}

/// Rescaled base B = (2L/delta) * (1/delta_B1) * B1 realizing the separation
/// d(-lambda*b, A - ybar) >= 2*L*lambda. The sampled precondition
/// [A - ybar] cap (-C_delta) subset {0} is checked first, and the distance
/// bound is re-verified on sampled base points.
inline ConeBase rescale_base_for_separation(const ConeBase& base, double L, double delta,
                                            const std::vector<Vec>& samples_A_minus_y,
                                            double tol = kTolExact) {
    if (!(L > 0.0)) throw Error("rescale_base_for_separation: L must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw Error("rescale_base_for_separation: need 0 < delta < 1");
    const SpaceSpec& sp = base.cone.space;
    for (const auto& s : samples_A_minus_y) {
        check_dim(sp, s, "rescale_base_for_separation");
        if (norm_of(sp, s) <= tol) continue;
        if (dilated_contains(base.cone, delta, neg(s), tol))
            throw SeparationViolated("a sample of A - ybar lies in -C_delta \\ {0}");
    }
    ConeBase rescaled = base.scaled((2.0 * L / delta) / base.delta);
    if (!samples_A_minus_y.empty()) {
        Rng rng(0x5e9aULL);
        auto pts = sample_base_points(rescaled, 64, rng);
        for (const auto& b : pts) {
            for (double lambda : {0.25, 1.0, 4.0}) {
                double d = distance_to_set(sp, scale(-lambda, b), samples_A_minus_y);
                if (d < 2.0 * L * lambda - 1e-7 * std::max(1.0, 2.0 * L * lambda))
                    throw SeparationViolated("rescaled base fails the sampled distance bound");
            }
        }
    }
    return rescaled;
}

} // namespace conelag
