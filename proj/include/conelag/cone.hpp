#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "conelag/numerics.hpp"
#include "conelag/space.hpp"

namespace conelag {

/// Default membership tolerances: exact representation paths vs sampled ones.
inline constexpr double kTolExact = 1e-9;
inline constexpr double kTolSampled = 1e-6;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

inline double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w;
}

inline Vec dir2(double theta) { return {std::cos(theta), std::sin(theta)}; }

// ------------------------------------------------------------ representations

/// Planar sector {r*dir(theta) : r >= 0, theta in [lo, lo+width]}.
/// Width 0 is a ray; width <= pi is convex; dilation results may exceed pi
/// (the dilated cone of the calculus need not be convex) and are accepted
/// for membership-only use.
struct SectorRep {
    double lo = 0.0;    // normalized to [0, 2*pi)
    double width = 0.0; // in [0, 2*pi)
    double hi() const { return lo + width; }
};

/// Conic hull of finitely many nonzero rays.
struct GeneratorsRep {
    std::vector<Vec> rays;
};

/// {y : n . y >= 0 for every normal n}; normals stored unit length.
struct HalfspacesRep {
    std::vector<Vec> normals;
};

using ConeRep = std::variant<SectorRep, GeneratorsRep, HalfspacesRep>;

// ------------------------------------------------------------------ the cone

class ConvexCone {
public:
    SpaceSpec space = real_line();
    ConeRep rep = HalfspacesRep{{{1.0}}}; // defaults to the halfline R+
    /// Canonical angular view, available for every 2-D cone. All exact planar
    /// paths (duals, bases, dilations) run on this.
    std::optional<SectorRep> sector;

    static ConvexCone make_sector(double lo, double hi, SpaceSpec s = euclidean(2));
    static ConvexCone from_generators(SpaceSpec s, std::vector<Vec> rays);
    static ConvexCone from_halfspaces(SpaceSpec s, std::vector<Vec> normals);
    /// 1-D halfline: sign > 0 gives R+, sign < 0 gives R-.
    static ConvexCone halfline(double sign, SpaceSpec s = real_line());
    static ConvexCone orthant(int dim);

    bool is_pointed() const;
    bool is_convex() const;

    ConvexCone() = default;

private:
    void canonicalize_2d();
    void validate_nontrivial() const;
};

double distance_to_cone(const ConvexCone& cone, const Vec& y);
/// A negative tol selects the representation default: 1e-9 on the exact
/// paths (sectors, halflines, halfspaces), 1e-6 on sampled generator cones.
bool cone_contains(const ConvexCone& cone, const Vec& y, double tol = -1.0);
std::vector<Vec> sample_rays(const ConvexCone& cone, int count, Rng& rng);

inline double default_tol(const ConvexCone& cone) {
    return std::holds_alternative<GeneratorsRep>(cone.rep) && !cone.sector ? kTolSampled
                                                                           : kTolExact;
}

// ----------------------------------------------------------------- utilities

namespace detail {

/// Distance from p to the ray {t*d : t >= 0}, d unit, euclidean.
inline double distance_to_ray(const Vec& p, const Vec& d) {
    double t = std::max(0.0, dot(p, d));
    return norm2(sub(p, scale(t, d)));
}

/// True if angle theta lies in the circular interval [lo, lo+width].
inline bool angle_in(double theta, double lo, double width, double ang_tol = 1e-12) {
    double off = wrap_angle(theta - lo);
    return off <= width + ang_tol || off >= kTwoPi - ang_tol;
}

inline double distance_to_sector(const SectorRep& sec, const Vec& y) {
    double r = norm2(y);
    if (r == 0.0) return 0.0;
    double theta = std::atan2(y[1], y[0]);
    if (angle_in(theta, sec.lo, sec.width)) return 0.0;
    double d = distance_to_ray(y, dir2(sec.lo));
    if (sec.width > 0.0) d = std::min(d, distance_to_ray(y, dir2(sec.hi())));
    return d;
}

/// Intersection of circular arcs [a, a+wa] and [b, b+wb]. Returns the single
/// resulting arc, nullopt when the intersection is empty, and throws when it
/// splits into two components (a degenerate line-like cone).
inline std::optional<SectorRep> intersect_arcs(const SectorRep& A, const SectorRep& B) {
    double d = wrap_angle(B.lo - A.lo);
    struct Piece { double s, e; };
    std::vector<Piece> pieces;
    for (double shift : {0.0, -kTwoPi}) {
        double s = std::max(0.0, d + shift);
        double e = std::min(A.width, d + shift + B.width);
        if (e >= s - 1e-12) pieces.push_back({s, std::max(s, e)});
    }
    if (pieces.empty()) return std::nullopt;
    // for arcs of width <= pi two overlap windows only occur in the exact
    // antipodal case, i.e. the cone degenerates to a line
    if (pieces.size() > 1)
        throw Error("cone degenerates to two antipodal pieces (a line); rejected");
    return SectorRep{wrap_angle(A.lo + pieces[0].s), pieces[0].e - pieces[0].s};
}

} // namespace detail

// -------------------------------------------------------------- construction

inline void ConvexCone::canonicalize_2d() {
    if (space.dim != 2) return;
    if (auto* s = std::get_if<SectorRep>(&rep)) {
        sector = *s;
        return;
    }
    if (auto* g = std::get_if<GeneratorsRep>(&rep)) {
        std::vector<double> angles;
        for (const auto& r : g->rays) angles.push_back(wrap_angle(std::atan2(r[1], r[0])));
        std::sort(angles.begin(), angles.end());
        angles.erase(std::unique(angles.begin(), angles.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                     angles.end());
        // conic hull spans the complement of the largest circular gap
        double max_gap = kTwoPi - (angles.back() - angles.front());
        size_t k = angles.size() - 1; // gap after angles[k]
        for (size_t i = 0; i + 1 < angles.size(); ++i) {
            double gap = angles[i + 1] - angles[i];
            if (gap > max_gap) { max_gap = gap; k = i; }
        }
        if (max_gap < kPi - 1e-12)
            throw Error("generators span the whole plane; cone is trivial");
        double lo = angles[(k + 1) % angles.size()];
        sector = SectorRep{lo, kTwoPi - max_gap};
        return;
    }
    const auto& h = std::get<HalfspacesRep>(rep);
    // each normal constrains the angle to an arc of width pi
    std::optional<SectorRep> acc;
    for (const auto& n : h.normals) {
        SectorRep arc{wrap_angle(std::atan2(n[1], n[0]) - kPi / 2), kPi};
        if (!acc) {
            acc = arc;
        } else {
            acc = detail::intersect_arcs(*acc, arc);
            if (!acc) throw Error("halfspace cone is trivial ({0})");
        }
    }
    sector = acc;
}

inline void ConvexCone::validate_nontrivial() const {
    if (sector) {
        if (sector->width >= kTwoPi - 1e-9)
            throw Error("cone equals the whole plane; rejected as trivial");
        return;
    }
    if (std::holds_alternative<GeneratorsRep>(rep)) {
        // member: any generator. nonmember: sampled search.
        Rng rng(0x6e6f6eULL);
        for (int i = 0; i < 512; ++i) {
            Vec y = i < 2 * space.dim
                        ? [&] {
                              Vec e = zeros(space.dim);
                              e[static_cast<size_t>(i / 2)] = (i % 2) ? -1.0 : 1.0;
                              return e;
                          }()
                        : rng.unit_vec(space.dim);
            if (!cone_contains(*this, y, kTolSampled)) return;
        }
        throw Error("no nonmember found; cone appears trivial (whole space)");
    }
    if (const auto* h = std::get_if<HalfspacesRep>(&rep)) {
        if (h->normals.empty()) throw Error("halfspace cone needs at least one normal");
        // nonmember: -n for any normal n. member: projected sampled search.
        Rng rng(0x6d656dULL);
        for (int i = 0; i < 512; ++i) {
            Vec probe = i < 2 * space.dim
                            ? [&] {
                                  Vec e = zeros(space.dim);
                                  e[static_cast<size_t>(i / 2)] = (i % 2) ? -1.0 : 1.0;
                                  return e;
                              }()
                            : rng.unit_vec(space.dim);
            Vec proj = num::project_halfspaces(h->normals, zeros(static_cast<int>(h->normals.size())), probe);
            if (norm2(proj) > 1e-9) return;
        }
        throw Error("no nonzero member found; cone appears trivial ({0})");
    }
}

inline ConvexCone ConvexCone::make_sector(double lo, double hi, SpaceSpec s) {
    if (s.dim != 2) throw Error("sector cones live in 2-D spaces");
    if (hi < lo) throw Error("sector: need hi >= lo");
    ConvexCone c;
    c.space = s;
    c.rep = SectorRep{wrap_angle(lo), hi - lo};
    c.canonicalize_2d();
    c.validate_nontrivial();
    return c;
}

inline ConvexCone ConvexCone::from_generators(SpaceSpec s, std::vector<Vec> rays) {
    if (rays.empty()) throw Error("generators cone needs at least one ray");
    for (const auto& r : rays) {
        check_dim(s, r, "generators");
        if (norm2(r) == 0.0) throw Error("generators cone stores no zero generator");
    }
    ConvexCone c;
    c.space = s;
    if (s.dim == 1) {
        double sign = rays[0][0] > 0 ? 1.0 : -1.0;
        for (const auto& r : rays)
            if (r[0] * sign < 0) throw Error("1-D generators of both signs give a line; rejected");
        c.rep = HalfspacesRep{{{sign}}};
    } else {
        c.rep = GeneratorsRep{std::move(rays)};
    }
    c.canonicalize_2d();
    c.validate_nontrivial();
    return c;
}

inline ConvexCone ConvexCone::from_halfspaces(SpaceSpec s, std::vector<Vec> normals) {
    if (normals.empty()) throw Error("halfspace cone needs at least one normal");
    ConvexCone c;
    c.space = s;
    std::vector<Vec> unit;
    unit.reserve(normals.size());
    for (const auto& n : normals) {
        check_dim(s, n, "halfspaces");
        unit.push_back(normalized(n));
    }
    if (s.dim == 1) {
        double sign = unit[0][0];
        for (const auto& n : unit)
            if (n[0] * sign < 0) throw Error("1-D halfspaces of both signs give {0}; rejected");
        unit = {{sign}};
    }
    c.rep = HalfspacesRep{std::move(unit)};
    c.canonicalize_2d();
    c.validate_nontrivial();
    return c;
}

inline ConvexCone ConvexCone::halfline(double sign, SpaceSpec s) {
    if (s.dim != 1) throw Error("halfline: 1-D only");
    ConvexCone c;
    c.space = s;
    c.rep = HalfspacesRep{{{sign > 0 ? 1.0 : -1.0}}};
    return c;
}

inline ConvexCone ConvexCone::orthant(int dim) {
    if (dim == 1) return halfline(+1.0);
    if (dim == 2) return make_sector(0.0, kPi / 2);
    std::vector<Vec> normals;
    for (int i = 0; i < dim; ++i) {
        Vec e = zeros(dim);
        e[static_cast<size_t>(i)] = 1.0;
        normals.push_back(e);
    }
    return from_halfspaces(euclidean(dim), std::move(normals));
}

inline bool ConvexCone::is_pointed() const {
    if (space.dim == 1) return true;
    if (sector) return sector->width < kPi - 1e-12;
    if (const auto* g = std::get_if<GeneratorsRep>(&rep)) {
        std::vector<Vec> unit;
        for (const auto& r : g->rays) unit.push_back(normalized(r));
        return num::min_norm_point(unit).lower > 1e-9;
    }
    // halfspaces in dim >= 3: pointed iff the normals span positively; sampled
    Rng rng(0x70ULL);
    for (int i = 0; i < 200; ++i) {
        Vec u = rng.unit_vec(space.dim);
        if (cone_contains(*this, u, kTolSampled) && cone_contains(*this, neg(u), kTolSampled))
            return false;
    }
    return true;
}

inline bool ConvexCone::is_convex() const {
    if (sector) return sector->width <= kPi + 1e-12;
    return true; // conic hulls and halfspace intersections are convex
}

// ----------------------------------------------------------------- membership

inline double distance_to_cone(const ConvexCone& cone, const Vec& y) {
    check_dim(cone.space, y, "distance_to_cone");
    if (cone.space.dim == 1) {
        const auto& h = std::get<HalfspacesRep>(cone.rep);
        double v = h.normals[0][0] * y[0];
        return v >= 0 ? 0.0 : -v;
    }
    if (cone.sector) return detail::distance_to_sector(*cone.sector, y);
    if (const auto* g = std::get_if<GeneratorsRep>(&cone.rep)) {
        if (cone.space.norm != Norm::Euclidean)
            throw Error("generator-cone distance implemented for euclidean norm only");
        return num::nnls(g->rays, y).residual; // exact distance to the conic hull
    }
    const auto& h = std::get<HalfspacesRep>(cone.rep);
    double worst = 0.0;
    for (const auto& n : h.normals) worst = std::max(worst, -dot(n, y));
    if (worst == 0.0) return 0.0;
    Vec proj = num::project_halfspaces(h.normals, zeros(static_cast<int>(h.normals.size())), y);
    return norm2(sub(y, proj));
}

inline bool cone_contains(const ConvexCone& cone, const Vec& y, double tol) {
    check_dim(cone.space, y, "cone_contains");
    if (tol < 0) tol = default_tol(cone);
    if (cone.space.dim >= 3) {
        if (const auto* h = std::get_if<HalfspacesRep>(&cone.rep)) {
            // cheap slack test first; rows are unit so slack bounds distance
            double worst = 0.0;
            for (const auto& n : h->normals) worst = std::max(worst, -dot(n, y));
            if (worst <= tol) return true;
        }
    }
    return distance_to_cone(cone, y) <= tol;
}

// ------------------------------------------------------------------- sampling

/// Deterministic-ish ray sample of the cone: boundary extremes first, then
/// rng-driven interior directions. All rays unit length.
inline std::vector<Vec> sample_rays(const ConvexCone& cone, int count, Rng& rng) {
    std::vector<Vec> out;
    if (cone.space.dim == 1) {
        const auto& h = std::get<HalfspacesRep>(cone.rep);
        out.push_back({h.normals[0][0]});
        return out;
    }
    if (cone.sector) {
        const auto& s = *cone.sector;
        int n = std::max(2, count);
        for (int i = 0; i < n; ++i)
            out.push_back(dir2(s.lo + s.width * i / (n - 1)));
        return out;
    }
    if (const auto* g = std::get_if<GeneratorsRep>(&cone.rep)) {
        for (const auto& r : g->rays) {
            out.push_back(normalized(r));
            if (static_cast<int>(out.size()) >= count) return out;
        }
        while (static_cast<int>(out.size()) < count) {
            Vec acc = zeros(cone.space.dim);
            for (const auto& r : g->rays) acc = add(acc, scale(rng.uniform01(), normalized(r)));
            double n = norm2(acc);
            if (n > 1e-9) out.push_back(scale(1.0 / n, acc));
        }
        return out;
    }
    const auto& h = std::get<HalfspacesRep>(cone.rep);
    Vec zero_off = zeros(static_cast<int>(h.normals.size()));
    auto push_projected = [&](const Vec& probe) {
        Vec p = num::project_halfspaces(h.normals, zero_off, probe);
        double n = norm2(p);
        if (n > 1e-9) out.push_back(scale(1.0 / n, p));
    };
    for (int i = 0; i < cone.space.dim && static_cast<int>(out.size()) < count; ++i) {
        Vec e = zeros(cone.space.dim);
        e[static_cast<size_t>(i)] = 1.0;
        push_projected(e);
        e[static_cast<size_t>(i)] = -1.0;
        push_projected(e);
    }
    int guard = 50 * count + 200;
    while (static_cast<int>(out.size()) < count && guard-- > 0)
        push_projected(rng.unit_vec(cone.space.dim));
    return out;
}

// ----------------------------------------------------------------------- dual

/// Dual cone {f : f.y >= 0 on the cone}, kept in the closed-form families:
/// sectors rotate, generators and halfspaces swap.
inline ConvexCone dual_cone(const ConvexCone& cone) {
    if (cone.space.dim == 1) {
        const auto& h = std::get<HalfspacesRep>(cone.rep);
        return ConvexCone::halfline(h.normals[0][0], cone.space);
    }
    if (cone.space.dim == 2) {
        const auto& s = *cone.sector;
        if (s.width > kPi + 1e-12)
            throw Error("dual of a sector wider than pi is trivial ({0})");
        double lo = s.hi() - kPi / 2;
        double width = kPi - s.width;
        return ConvexCone::make_sector(lo, lo + width, cone.space);
    }
    if (const auto* g = std::get_if<GeneratorsRep>(&cone.rep))
        return ConvexCone::from_halfspaces(cone.space, g->rays);
    const auto& h = std::get<HalfspacesRep>(cone.rep);
    return ConvexCone::from_generators(cone.space, h.normals);
}

// --------------------------------------------------------- strict functionals

/// A functional strictly positive on the cone minus the origin (an element of
/// C#). Exact for sectors; max-margin direction over sampled rays otherwise,
/// validated by sampling.
inline Vec quasi_interior_functional(const ConvexCone& cone) {
    if (cone.space.dim == 1) {
        const auto& h = std::get<HalfspacesRep>(cone.rep);
        return {h.normals[0][0]};
    }
    if (cone.sector) {
        const auto& s = *cone.sector;
        if (s.width >= kPi - 1e-12)
            throw NoBase("sector of width >= pi is not well-based");
        return dir2(s.lo + s.width / 2);
    }
    Rng rng(0xb45eULL);
    std::vector<Vec> rays = sample_rays(cone, std::max(64, 16 * cone.space.dim), rng);
    auto mn = num::min_norm_point(rays);
    if (mn.lower <= 1e-9)
        throw NoBase("no strictly positive functional found (cone not well-based)");
    Vec f = normalized(mn.point);
    for (const auto& r : rays)
        if (dot(f, r) <= 1e-12) throw NoBase("max-margin functional fails on a sampled ray");
    return f;
}

// ---------------------------------------------------------------------- bases

/// Base B = {x in C : f(x) = level} with its norm bounds. sigma is exact on
/// the representation extremes; delta is exact on sector/1-D paths and a
/// certified Frank-Wolfe bound for generator cones.
struct ConeBase {
    ConvexCone cone;
    Vec functional;
    double level = 1.0;
    double sigma = 0.0; // sup ||b||
    double delta = 0.0; // inf ||b||

    double lambda_of(const Vec& y) const { return dot(functional, y) / level; }
    Vec base_point_of(const Vec& y) const { return scale(1.0 / lambda_of(y), y); }

    /// Same base scaled by c > 0 (level set of the same functional at c*level).
    ConeBase scaled(double c) const {
        if (c <= 0) throw Error("ConeBase::scaled: factor must be positive");
        ConeBase b = *this;
        b.level *= c;
        b.sigma *= c;
        b.delta *= c;
        return b;
    }
};

namespace detail {

/// min / max of f.dir(theta) over the sector's angle interval; assumes f
/// strictly positive there (validated by the caller).
inline std::pair<double, double> functional_range_on_sector(const SectorRep& s, const Vec& f) {
    double nf = norm2(f);
    double tf = std::atan2(f[1], f[0]);
    auto c = [&](double th) { return nf * std::cos(th - tf); };
    double cmin = std::min(c(s.lo), c(s.hi()));
    double cmax = std::max(c(s.lo), c(s.hi()));
    if (angle_in(tf, s.lo, s.width)) cmax = nf;
    return {cmin, cmax};
}

} // namespace detail

inline std::vector<Vec> sample_base_points(const ConeBase& b, int count, Rng& rng) {
    std::vector<Vec> pts;
    for (const auto& r : sample_rays(b.cone, count, rng)) {
        double lam = b.lambda_of(r);
        if (lam <= 0) continue;
        pts.push_back(scale(1.0 / lam, r));
    }
    if (pts.empty()) throw Error("sample_base_points: no positive-functional rays");
    return pts;
}

/// The norm-minimal point of the base (exact for sectors and 1-D, Frank-Wolfe
/// over generator base points otherwise).
inline Vec min_norm_base_point(const ConeBase& b) {
    if (b.cone.space.dim == 1)
        return {b.level / b.functional[0]};
    if (b.cone.sector) {
        const auto& s = *b.cone.sector;
        double tf = std::atan2(b.functional[1], b.functional[0]);
        double theta;
        if (detail::angle_in(tf, s.lo, s.width)) {
            theta = tf;
        } else {
            double dlo = std::min(wrap_angle(tf - s.lo), wrap_angle(s.lo - tf));
            double dhi = std::min(wrap_angle(tf - s.hi()), wrap_angle(s.hi() - tf));
            theta = dlo <= dhi ? s.lo : s.hi();
        }
        Vec d = dir2(theta);
        return scale(b.level / dot(b.functional, d), d);
    }
    const auto& g = std::get<GeneratorsRep>(b.cone.rep);
    std::vector<Vec> pts;
    for (const auto& r : g.rays) pts.push_back(scale(b.level / dot(b.functional, r), r));
    return num::min_norm_point(pts).point;
}

inline ConeBase base_from_functional(const ConvexCone& cone, const Vec& f, double level) {
    check_dim(cone.space, f, "base_from_functional");
    if (level <= 0) throw Error("base level must be positive");
    if (cone.space.norm == Norm::Supremum && cone.space.dim > 1)
        throw Error("cone base calculus implemented for euclidean / 1-D norms");

    ConeBase b{cone, f, level, 0.0, 0.0};

    if (cone.space.dim == 1) {
        const auto& h = std::get<HalfspacesRep>(cone.rep);
        if (f[0] * h.normals[0][0] <= 0)
            throw NotQuasiInterior("functional not strictly positive on the halfline");
        double bp = level / f[0];
        b.sigma = b.delta = std::abs(bp);
        return b;
    }
    if (cone.sector) {
        const auto& s = *cone.sector;
        if (s.width >= kPi - 1e-12) throw NotQuasiInterior("sector too wide for a base");
        auto [cmin, cmax] = detail::functional_range_on_sector(s, f);
        if (cmin <= 1e-12)
            throw NotQuasiInterior("functional vanishes on a boundary ray");
        b.sigma = level / cmin;
        b.delta = level / cmax;
        return b;
    }
    const auto* g = std::get_if<GeneratorsRep>(&cone.rep);
    if (!g) {
        // n-D halfspace cones: validate on sampled rays, then bound over them.
        Rng rng(0xba5eULL);
        auto rays = sample_rays(cone, std::max(128, 32 * cone.space.dim), rng);
        std::vector<Vec> pts;
        for (const auto& r : rays) {
            double v = dot(f, r);
            if (v <= 1e-12) throw NotQuasiInterior("functional fails on a sampled ray");
            pts.push_back(scale(level / v, r));
        }
        double sig = 0.0;
        for (const auto& p : pts) sig = std::max(sig, norm2(p));
        b.sigma = sig;
        b.delta = num::min_norm_point(pts).lower;
        return b;
    }
    std::vector<Vec> pts;
    for (const auto& r : g->rays) {
        double v = dot(f, r);
        if (v <= 1e-12 * norm2(r))
            throw NotQuasiInterior("functional not strictly positive on a generator");
        pts.push_back(scale(level / v, r));
    }
    double sig = 0.0;
    for (const auto& p : pts) sig = std::max(sig, norm2(p));
    b.sigma = sig;
    b.delta = num::min_norm_point(pts).lower;
    return b;
}

} // namespace conelag
