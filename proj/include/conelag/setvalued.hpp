#pragma once

#include <map>
#include <memory>
#include <string>

#include "conelag/cone.hpp"

namespace conelag {

/// Finite graph of a set-valued map: pairs (x, image set). Unbounded images
/// (cone-shifted values) are represented by truncation at `truncation_radius`
/// plus an optional exact cone-offset membership rule.
struct SampledMap {
    SpaceSpec domain;
    SpaceSpec codomain;
    struct Entry {
        Vec x;
        std::vector<Vec> values;
    };
    std::vector<Entry> entries;
    std::string name;
    double truncation_radius = 10.0;
    /// When set, the true image is values + cone (Remark-style inequality
    /// embedding); membership queries stay exact through this field.
    std::shared_ptr<const ConvexCone> cone_offset;

    SampledMap(SpaceSpec dom, SpaceSpec cod, std::string tag = "")
        : domain(dom), codomain(cod), name(std::move(tag)) {}

    void add(Vec x, std::vector<Vec> values) {
        check_dim(domain, x, "SampledMap::add");
        if (values.empty()) throw Error("SampledMap: image sets must be nonempty");
        for (const auto& v : values) check_dim(codomain, v, "SampledMap::add value");
        if (index_.count(x)) throw Error("SampledMap: duplicate domain point");
        index_[x] = entries.size();
        entries.push_back({std::move(x), std::move(values)});
    }

    const std::vector<Vec>* find(const Vec& x) const {
        auto it = index_.find(x);
        return it == index_.end() ? nullptr : &entries[it->second].values;
    }

    const std::vector<Vec>& image_of(const Vec& x) const {
        const auto* v = find(x);
        if (!v) throw AnchorMissing("SampledMap: point not in sampled domain: " + fmt_vec(x));
        return *v;
    }

    /// Exact membership z in map(x) (+ cone offset when present).
    bool contains_pair(const Vec& x, const Vec& z, double tol = kTolExact) const {
        const auto* vals = find(x);
        if (!vals) return false;
        for (const auto& v : *vals) {
            if (!cone_offset) {
                if (distance(codomain, z, v) <= tol) return true;
            } else if (cone_contains(*cone_offset, sub(z, v), tol)) {
                return true;
            }
        }
        return false;
    }

private:
    std::map<Vec, size_t, VecLexLess> index_;
};

/// Graph transpose: (y, {x : y in map(x)}).
inline SampledMap invert(const SampledMap& map) {
    if (map.entries.empty()) throw EmptySet("invert: empty graph");
    std::map<Vec, std::vector<Vec>, VecLexLess> grouped;
    for (const auto& e : map.entries)
        for (const auto& y : e.values) grouped[y].push_back(e.x);
    SampledMap inv(map.codomain, map.domain, map.name.empty() ? "" : map.name + "^-1");
    for (auto& [y, xs] : grouped) {
        std::sort(xs.begin(), xs.end(), lex_less);
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        inv.add(y, std::move(xs));
    }
    return inv;
}

/// V = F o G^-1 over the sample Omega: V(z) = union of F(x) over x in Omega
/// with z in G(x). When `require_nonempty_at` is given, an empty V(z) at one
/// of those parameters raises RegularityViolated.
inline SampledMap compose_V(const SampledMap& F, const SampledMap& G,
                            const std::vector<Vec>& omega,
                            const std::vector<Vec>* require_nonempty_at = nullptr) {
    std::map<Vec, std::vector<Vec>, VecLexLess> grouped;
    for (const auto& x : omega) {
        const auto& gx = G.image_of(x);
        const auto& fx = F.image_of(x);
        for (const auto& z : gx)
            for (const auto& y : fx) grouped[z].push_back(y);
    }
    SampledMap V(G.codomain, F.codomain, "V");
    for (auto& [z, ys] : grouped) {
        std::sort(ys.begin(), ys.end(), lex_less);
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        V.add(z, std::move(ys));
    }
    if (require_nonempty_at) {
        for (const auto& z : *require_nonempty_at)
            if (!V.find(z))
                throw RegularityViolated("V(z) empty at z = " + fmt_vec(z));
    }
    return V;
}

/// Inequality-constraint embedding x -> G(x) + Z+. The materialized graph
/// carries sampled cone offsets bounded by the truncation radius; membership
/// queries through contains_pair remain exact via the cone_offset rule.
inline SampledMap embed_inequality_constraint(const SampledMap& G, const ConvexCone& z_plus,
                                              int ray_samples) {
    if (z_plus.space.dim != G.codomain.dim)
        throw DimensionMismatch("embed_inequality_constraint: cone lives in the wrong space");
    Rng rng(0xe2bedULL);
    std::vector<Vec> offsets = {zeros(G.codomain.dim)};
    double R = G.truncation_radius;
    for (const auto& u : sample_rays(z_plus, std::max(1, ray_samples), rng))
        for (double r : {0.25 * R, 0.5 * R, R}) offsets.push_back(scale(r, u));

    SampledMap out(G.domain, G.codomain, G.name.empty() ? "G+Z+" : G.name + "+Z+");
    out.truncation_radius = R;
    out.cone_offset = std::make_shared<const ConvexCone>(z_plus);
    for (const auto& e : G.entries) {
        std::vector<Vec> vals;
        vals.reserve(e.values.size() * offsets.size());
        for (const auto& v : e.values)
            for (const auto& o : offsets) vals.push_back(add(v, o));
        std::sort(vals.begin(), vals.end(), lex_less);
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        out.add(e.x, std::move(vals));
    }
    return out;
}

// ------------------------------------------------------------------ Lipschitz

/// One-sided Hausdorff excess sup_{a in A} d(a, B) over finite samples.
inline double excess(const SpaceSpec& space, const std::vector<Vec>& A, const std::vector<Vec>& B) {
    if (A.empty() || B.empty()) throw EmptySet("excess: empty sample");
    double worst = 0.0;
    for (const auto& a : A) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : B) best = std::min(best, distance(space, a, b));
        worst = std::max(worst, best);
    }
    return worst;
}

/// Grid estimate of the pointwise Lipschitz bound L_{F,anchor}. A lower
/// estimate: nondecreasing as samples are added, never above the true bound.
struct LipschitzEstimate {
    Vec anchor;
    double constant = 0.0;
    int sample_count = 0;
};

inline LipschitzEstimate lipschitz_at(const SampledMap& map, const Vec& anchor) {
    const auto& base = map.image_of(anchor);
    LipschitzEstimate est;
    est.anchor = anchor;
    for (const auto& e : map.entries) {
        double dist = distance(map.domain, e.x, anchor);
        if (dist <= 0.0) continue;
        est.constant = std::max(est.constant, excess(map.codomain, e.values, base) / dist);
        ++est.sample_count;
    }
    return est;
}

/// Whole-domain exact-bound estimate sup_{x,u} excess(F(x),F(u))/||x-u||,
/// measured over all anchor pairs. A lower estimate of L_F.
inline double lipschitz_on(const SampledMap& map) {
    double worst = 0.0;
    for (const auto& e : map.entries)
        worst = std::max(worst, lipschitz_at(map, e.x).constant);
    return worst;
}

/// Composition bound L_{F2 o F1, z} <= L_{F2, F1(z)} * L_{F1, z}.
inline double composition_lipschitz_bound(double L_outer_sup, double L_inner) {
    if (!std::isfinite(L_outer_sup) || !std::isfinite(L_inner))
        throw Error("composition_lipschitz_bound: arguments must be finite");
    return L_outer_sup * L_inner;
}

} // namespace conelag
