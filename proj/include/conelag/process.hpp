#pragma once

#include "conelag/cone.hpp"
#include "conelag/setvalued.hpp"

namespace conelag {

// ------------------------------------------------------------------ sublinear

/// Finite sublinear function on Z, in one of two closed families.
struct SublinearFn {
    struct ScaledNorm {
        double mu = 0.0; // phi(z) = mu * ||z||
    };
    struct MaxOfLinear {
        std::vector<Vec> functionals; // phi(z) = max_i f_i(z)
    };

    SpaceSpec domain;
    std::variant<ScaledNorm, MaxOfLinear> rep;

    static SublinearFn scaled_norm(SpaceSpec Z, double mu) {
        return {Z, ScaledNorm{mu}};
    }
    static SublinearFn max_of_linear(SpaceSpec Z, std::vector<Vec> fs) {
        if (fs.empty()) throw Error("max_of_linear: needs at least one functional");
        for (const auto& f : fs) check_dim(Z, f, "max_of_linear");
        return {Z, MaxOfLinear{std::move(fs)}};
    }

    double operator()(const Vec& z) const {
        check_dim(domain, z, "SublinearFn");
        if (const auto* s = std::get_if<ScaledNorm>(&rep)) return s->mu * norm_of(domain, z);
        const auto& m = std::get<MaxOfLinear>(rep);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& f : m.functionals) best = std::max(best, dot(f, z));
        return best;
    }
};

/// Sampled validation of positive homogeneity and subadditivity.
inline bool sublinearity_holds_on_samples(const SublinearFn& phi, int samples = 200,
                                          double tol = 1e-9, uint64_t seed = 0x5ab1ULL) {
    Rng rng(seed);
    const int d = phi.domain.dim;
    for (int i = 0; i < samples; ++i) {
        Vec z1 = scale(rng.uniform(0.1, 3.0), rng.unit_vec(d));
        Vec z2 = scale(rng.uniform(0.1, 3.0), rng.unit_vec(d));
        if (!std::isfinite(phi(z1))) return false;
        for (double lam : {0.0, 0.5, 2.0})
            if (std::abs(phi(scale(lam, z1)) - lam * phi(z1)) > tol * std::max(1.0, lam))
                return false;
        if (phi(add(z1, z2)) > phi(z1) + phi(z2) + tol) return false;
    }
    return true;
}

// -------------------------------------------------------------------- process

/// Proper closed convex process, one of three closed graph families:
///   - NormCoupledHalfspaces: Gph = {(z,y) : g_i . y >= alpha_i ||z||}
///   - BaseGenerated:         Gph = cl cone(B_Z x B) for a bounded base B
///   - SublinearEpigraph:     Gph = epi(phi), Y = R
struct Process {
    struct HalfspaceRow {
        Vec g;
        double alpha = 0.0; // >= 0
    };
    struct NormCoupledHalfspaces {
        std::vector<HalfspaceRow> rows;
    };
    struct BaseGenerated {
        ConeBase base;
    };
    struct SublinearEpigraph {
        SublinearFn phi;
    };

    SpaceSpec domain;   // Z
    SpaceSpec codomain; // Y
    std::variant<NormCoupledHalfspaces, BaseGenerated, SublinearEpigraph> rep;

    static Process halfspaces(SpaceSpec Z, SpaceSpec Y, std::vector<HalfspaceRow> rows) {
        if (rows.empty()) throw Error("process: needs at least one halfspace row");
        for (const auto& r : rows) {
            check_dim(Y, r.g, "process row");
            if (r.alpha < 0) throw Error("process row: alpha must be >= 0");
        }
        return {Z, Y, NormCoupledHalfspaces{std::move(rows)}};
    }
};

/// Membership (z, y) in Gph(Delta). Exact for halfspace and epigraph reps;
/// base decomposition (lambda_y >= ||z||) for base-generated graphs.
inline bool graph_contains(const Process& p, const Vec& z, const Vec& y, double tol = kTolExact) {
    check_dim(p.domain, z, "graph_contains z");
    check_dim(p.codomain, y, "graph_contains y");
    double nz = norm_of(p.domain, z);
    if (const auto* h = std::get_if<Process::NormCoupledHalfspaces>(&p.rep)) {
        for (const auto& row : h->rows)
            if (dot(row.g, y) < row.alpha * nz - tol) return false;
        return true;
    }
    if (const auto* b = std::get_if<Process::BaseGenerated>(&p.rep)) {
        if (norm_of(p.codomain, y) <= tol) return nz <= tol;
        if (!cone_contains(b->base.cone, y, tol)) return false;
        return b->base.lambda_of(y) >= nz - tol;
    }
    const auto& e = std::get<Process::SublinearEpigraph>(p.rep);
    return y[0] >= e.phi(z) - tol;
}

/// The cone over B_Z x {mu}: Gph = {(z, r) : r >= mu ||z||}.
inline Process delta_mu(SpaceSpec Z, double mu) {
    if (!(mu > 0)) throw Error("delta_mu: mu must be positive");
    return Process::halfspaces(Z, real_line(), {{{1.0}, mu}});
}

/// Value set Delta(z) restricted to probe points.
inline std::vector<Vec> evaluate(const Process& p, const Vec& z, const std::vector<Vec>& probes,
                                 double tol = kTolExact) {
    std::vector<Vec> out;
    for (const auto& y : probes)
        if (graph_contains(p, z, y, tol)) out.push_back(y);
    return out;
}

/// Canonical near-minimal members of Delta(z), so probe-based scans of
/// augmented value sets always see the bottom of each value set.
inline std::vector<Vec> support_points(const Process& p, const Vec& z) {
    double nz = norm_of(p.domain, z);
    if (const auto* h = std::get_if<Process::NormCoupledHalfspaces>(&p.rep)) {
        std::vector<Vec> rows;
        Vec offs;
        for (const auto& r : h->rows) {
            rows.push_back(r.g);
            offs.push_back(r.alpha * nz);
        }
        Vec proj = num::project_halfspaces(rows, offs, zeros(p.codomain.dim));
        return {proj};
    }
    if (const auto* b = std::get_if<Process::BaseGenerated>(&p.rep)) {
        if (nz == 0.0) return {zeros(p.codomain.dim)};
        Rng rng(0x5a9bULL);
        std::vector<Vec> pts;
        for (const auto& bp : sample_base_points(b->base, 16, rng))
            pts.push_back(scale(nz, bp));
        pts.push_back(scale(nz, min_norm_base_point(b->base)));
        return pts;
    }
    const auto& e = std::get<Process::SublinearEpigraph>(p.rep);
    return {{e.phi(z)}};
}

/// d(0_Y, Delta(z)); infinity when the value set is empty past `cap`.
inline double value_set_distance_to_origin(const Process& p, const Vec& z, double cap = 1e9) {
    double nz = norm_of(p.domain, z);
    if (const auto* h = std::get_if<Process::NormCoupledHalfspaces>(&p.rep)) {
        if (p.codomain.dim == 1) {
            // interval {r : g_i r >= a_i nz}
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            for (const auto& r : h->rows) {
                double c = r.alpha * nz;
                if (r.g[0] > 0)
                    lo = std::max(lo, c / r.g[0]);
                else if (r.g[0] < 0)
                    hi = std::min(hi, c / r.g[0]);
                else if (c > 0)
                    return std::numeric_limits<double>::infinity();
            }
            if (lo > hi + 1e-15) return std::numeric_limits<double>::infinity();
            if (lo <= 0 && hi >= 0) return 0.0;
            return std::min(std::abs(lo), std::abs(hi));
        }
        std::vector<Vec> rows;
        Vec offs;
        for (const auto& r : h->rows) {
            rows.push_back(r.g);
            offs.push_back(r.alpha * nz);
        }
        Vec proj = num::project_halfspaces(rows, offs, zeros(p.codomain.dim));
        for (size_t i = 0; i < rows.size(); ++i)
            if (dot(rows[i], proj) < offs[i] - 1e-6 * std::max(1.0, std::abs(offs[i])))
                return std::numeric_limits<double>::infinity(); // empty value set
        double d = norm_of(p.codomain, proj);
        return d > cap ? std::numeric_limits<double>::infinity() : d;
    }
    if (const auto* b = std::get_if<Process::BaseGenerated>(&p.rep))
        return nz * b->base.delta;
    const auto& e = std::get<Process::SublinearEpigraph>(p.rep);
    return std::max(e.phi(z), 0.0);
}

/// Norm of a process: sup over the sampled unit sphere of d(0_Y, Delta(z)).
/// Closed forms are used per representation where available.
inline double process_norm(const Process& p, int sphere_samples = 256, double cap = 1e9,
                           uint64_t seed = 0x90a7ULL) {
    std::vector<Vec> zs;
    if (p.domain.dim == 1) {
        zs = {{1.0}, {-1.0}};
    } else {
        Rng rng(seed);
        for (int i = 0; i < p.domain.dim; ++i) {
            Vec e = zeros(p.domain.dim);
            e[static_cast<size_t>(i)] = 1.0;
            zs.push_back(e);
            zs.push_back(neg(e));
        }
        for (int i = 0; i < sphere_samples; ++i) zs.push_back(rng.unit_vec(p.domain.dim));
        if (p.domain.norm == Norm::Supremum)
            for (auto& z : zs) z = scale(1.0 / norm_sup(z), z);
    }
    double sup = 0.0;
    for (const auto& z : zs) {
        double d = value_set_distance_to_origin(p, z, cap);
        if (!std::isfinite(d) || d > cap)
            throw Unbounded("process_norm: sampled value exceeds the cap");
        sup = std::max(sup, d);
    }
    return sup;
}

// ---------------------------------------------------------------- Upsilon map

/// Gph(Upsilon(phi)) = epi(phi).
inline Process upsilon(const SublinearFn& phi) {
    if (!sublinearity_holds_on_samples(phi))
        throw NotSublinear("upsilon: sampled sublinearity check failed");
    return {phi.domain, real_line(), Process::SublinearEpigraph{phi}};
}

/// Inverse of Upsilon: phi(z) = min{r : (z, r) in Gph}. Requires a positive
/// process (Delta(0) = R+).
inline SublinearFn upsilon_inverse(const Process& p) {
    if (p.codomain.dim != 1)
        throw NotPositive("upsilon_inverse: process must be real (Y = R)");
    if (const auto* e = std::get_if<Process::SublinearEpigraph>(&p.rep)) return e->phi;
    if (const auto* h = std::get_if<Process::NormCoupledHalfspaces>(&p.rep)) {
        // Delta(0) = {r : g_i r >= 0}; positive iff all g_i >= 0 and one > 0
        double mu = 0.0;
        bool some_positive = false;
        for (const auto& row : h->rows) {
            if (row.g[0] < 0) throw NotPositive("upsilon_inverse: Delta(0) is not R+");
            if (row.g[0] == 0) {
                if (row.alpha > 0)
                    throw NotPositive("upsilon_inverse: process not proper");
                continue;
            }
            some_positive = true;
            mu = std::max(mu, row.alpha / row.g[0]);
        }
        if (!some_positive) throw NotPositive("upsilon_inverse: Delta(0) = R");
        return SublinearFn::scaled_norm(p.domain, mu);
    }
    const auto& b = std::get<Process::BaseGenerated>(p.rep);
    double bp = b.base.level / b.base.functional[0];
    if (bp <= 0) throw NotPositive("upsilon_inverse: Delta(0) is not R+");
    return SublinearFn::scaled_norm(p.domain, bp);
}

/// Gph(Delta) = cl cone(B_Z x B) for a bounded base B.
inline Process build_from_base(SpaceSpec Z, const ConeBase& base) {
    if (!(base.delta > 0) || !std::isfinite(base.sigma))
        throw UnboundedBase("build_from_base: base must satisfy 0 < delta_B <= sigma_B < inf");
    return {Z, base.cone.space, Process::BaseGenerated{base}};
}

} // namespace conelag
