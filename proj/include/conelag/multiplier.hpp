#pragma once

#include "conelag/dilation.hpp"
#include "conelag/order.hpp"
#include "conelag/process.hpp"

namespace conelag {

/// Sampled instance of the parametric program family (P(z)).
struct SampledProblem {
    SpaceSpec X, Y, Z;
    SampledMap F; // objective values over Omega
    SampledMap G; // constraint values over Omega
    std::vector<Vec> omega;
    ConvexCone y_plus;

    SampledMap compose_value_map() const { return compose_V(F, G, omega); }
};

// ----------------------------------------------------------- assumption checks

struct CoreWitness {
    bool found = false;
    Vec z, y;             // witness point of core(Gph(Delta))
    double radius = 0.0;  // verified perturbation radius
    int directions = 0;
};

namespace detail {

/// Bisection radius search: largest t <= t_max with witness + t*dir in Gph.
inline double direction_reach(const Process& p, const Vec& wz, const Vec& wy, const Vec& dz,
                              const Vec& dy, double t_max) {
    auto inside = [&](double t) {
        return graph_contains(p, add(wz, scale(t, dz)), add(wy, scale(t, dy)), 0.0);
    };
    if (!inside(0.0)) return 0.0;
    double t_min = 1e-7 * t_max;
    if (!inside(t_min)) return 0.0;
    double lo = t_min, hi = t_max;
    if (inside(hi)) return hi;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return lo;
}

/// Verify a core witness by perturbation sampling: axis directions plus
/// `random_dirs` random unit directions in Z x Y, radius found by bisection.
inline CoreWitness verify_core_witness(const Process& p, const Vec& wz, const Vec& wy,
                                       int random_dirs = 100, double t_max = 4.0,
                                       uint64_t seed = 0xc03eULL) {
    const int dz = p.domain.dim, dy = p.codomain.dim;
    CoreWitness w;
    w.z = wz;
    w.y = wy;
    if (!graph_contains(p, wz, wy, 0.0)) return w;
    std::vector<Vec> dirs;
    for (int i = 0; i < dz + dy; ++i) {
        Vec e = zeros(dz + dy);
        e[static_cast<size_t>(i)] = 1.0;
        dirs.push_back(e);
        dirs.push_back(neg(e));
    }
    Rng rng(seed);
    for (int i = 0; i < random_dirs; ++i) dirs.push_back(rng.unit_vec(dz + dy));
    double radius = t_max;
    for (const auto& d : dirs) {
        Vec ddz(d.begin(), d.begin() + dz), ddy(d.begin() + dz, d.end());
        double r = direction_reach(p, wz, wy, ddz, ddy, t_max);
        if (r <= 0.0) return w; // no reach along this direction: not a core point
        radius = std::min(radius, r);
    }
    w.found = true;
    w.radius = radius;
    w.directions = static_cast<int>(dirs.size());
    return w;
}

} // namespace detail

/// Assumption (a): core(Gph(Delta)) nonempty, witness-based. A negative
/// outcome means "no witness found", never a proof of emptiness.
inline CoreWitness check_assumption_a(const Process& p, int random_dirs = 100) {
    const int dy = p.codomain.dim;
    if (const auto* h = std::get_if<Process::NormCoupledHalfspaces>(&p.rep)) {
        // strict interior direction of the row functionals, max-margin scaled
        std::vector<Vec> rows;
        for (const auto& r : h->rows) rows.push_back(normalized(r.g));
        auto mn = num::min_norm_point(rows);
        if (mn.lower <= 1e-9) return CoreWitness{false, zeros(p.domain.dim), zeros(dy), 0.0, 0};
        Vec ystar = normalized(mn.point);
        double margin = std::numeric_limits<double>::infinity();
        double alpha_max = 0.0;
        for (const auto& r : h->rows) {
            margin = std::min(margin, dot(normalized(r.g), ystar));
            alpha_max = std::max(alpha_max, r.alpha);
        }
        if (margin <= 0) return CoreWitness{false, zeros(p.domain.dim), zeros(dy), 0.0, 0};
        Vec witness = scale(2.0 * (1.0 + alpha_max) / margin, ystar);
        return detail::verify_core_witness(p, zeros(p.domain.dim), witness, random_dirs);
    }
    if (std::get_if<Process::SublinearEpigraph>(&p.rep)) {
        double n = process_norm(p);
        Vec witness = {2.0 * std::max(1.0, n)};
        return detail::verify_core_witness(p, zeros(p.domain.dim), witness, random_dirs);
    }
    const auto& b = std::get<Process::BaseGenerated>(p.rep);
    // candidate: the most interior base point (max-margin direction on C)
    Vec f;
    try {
        f = quasi_interior_functional(b.base.cone);
    } catch (const NoBase&) {
        return CoreWitness{false, zeros(p.domain.dim), zeros(dy), 0.0, 0};
    }
    Vec bp = scale(b.base.level / dot(b.base.functional, f), f);
    return detail::verify_core_witness(p, zeros(p.domain.dim), bp, random_dirs);
}

/// Assumption (b): Y+ included in Delta(0) and (-Y+) cap Delta(0) inside Y+,
/// both over sampled rays.
inline bool check_assumption_b(const Process& p, const ConvexCone& y_plus, int ray_count = 64,
                               double tol = kTolExact, uint64_t seed = 0xabULL) {
    Rng rng(seed);
    Vec zero_z = zeros(p.domain.dim);
    for (const auto& u : sample_rays(y_plus, ray_count, rng)) {
        for (double r : {0.5, 1.0, 2.0}) {
            Vec y = scale(r, u);
            if (!graph_contains(p, zero_z, y, tol)) return false;
            Vec w = neg(y);
            if (graph_contains(p, zero_z, w, tol) && !cone_contains(y_plus, w, tol)) return false;
        }
    }
    return true;
}

struct SeparationCheck {
    bool ok = true;
    Vec z, w; // violating pair (z, y - y0) when !ok
};

/// Assumption (c): Gph(-Delta) cap [Gph(V) - (0, y0)] = {0} over the sampled
/// graph of V. The zero pair is exempted at tolerance 1e-9 on both slots.
inline SeparationCheck check_assumption_c(const Process& p, const SampledMap& v_graph,
                                          const Vec& y0, double tol = kTolExact) {
    SeparationCheck res;
    for (const auto& e : v_graph.entries) {
        for (const auto& y : e.values) {
            Vec w = sub(y, y0);
            if (norm_of(p.domain, e.x) <= 1e-9 && norm2(w) <= 1e-9) continue;
            if (graph_contains(p, e.x, neg(w), tol)) {
                res.ok = false;
                res.z = e.x;
                res.w = w;
                return res;
            }
        }
    }
    return res;
}

/// Evidence that a process belongs to Gamma_{y0}: the three structural checks
/// with witnesses / violating samples.
struct GammaCertificate {
    CoreWitness core;
    bool cone_compat = false;
    SeparationCheck separation;
    int cone_samples = 0;
    int separation_samples = 0;

    bool valid() const { return core.found && cone_compat && separation.ok; }
    std::string failing_check() const {
        if (!core.found) return "(a) core witness";
        if (!cone_compat) return "(b) cone compatibility";
        if (!separation.ok) return "(c) graph separation";
        return "";
    }
};

inline GammaCertificate certify(const Process& p, const SampledProblem& prob,
                                const SampledMap& v_graph, const Vec& y0,
                                double tol = kTolExact) {
    GammaCertificate cert;
    cert.core = check_assumption_a(p);
    cert.cone_compat = check_assumption_b(p, prob.y_plus, 64, tol);
    cert.cone_samples = 64;
    cert.separation = check_assumption_c(p, v_graph, y0, tol);
    for (const auto& e : v_graph.entries)
        cert.separation_samples += static_cast<int>(e.values.size());
    return cert;
}

// --------------------------------------------------------- multiplier pipeline

struct MultiplierResult {
    Process process;
    GammaCertificate certificate;
    // diagnostics of the constructive chain
    double delta = 0.0;       // nondegeneracy parameter
    double delta_prime = 0.0; // delta / 4
    double rho = 0.0;         // chosen in (0, delta')
    double mu = 0.0;          // rho / 2, Henig dilation parameter
    double lipschitz_hat = 0.0;
    double lipschitz_used = 0.0; // safety * L_hat (floored)
};

/// Constructive multiplier chain: Henig-dilate the ordering cone, extract a
/// bounded base, rescale it against the shifted value samples, and build the
/// process Gph = cl cone(B_Z x B). rho < 0 selects the default delta'/2.
inline MultiplierResult find_multiplier(const SampledProblem& prob, const Vec& y0, double delta,
                                        double rho = -1.0, double safety = 1.25,
                                        double tol = kTolExact) {
    if (!(delta > 0.0 && delta < 1.0))
        throw Error("find_multiplier: need 0 < delta < 1");
    SampledMap V = prob.compose_value_map();
    const Vec zero_z = zeros(prob.Z.dim);
    const auto* v0 = V.find(zero_z);
    if (!v0) throw EmptySet("find_multiplier: V(0) empty (program infeasible at 0)");

    if (!nd_check_program(*v0, y0, prob.y_plus, tol))
        throw NondegeneracyViolated("y0 is not nondominated in V(0)");
    for (const auto& v : *v0) {
        if (distance(prob.Y, v, y0) <= tol) continue;
        if (dilated_contains(prob.y_plus, delta, sub(y0, v), tol))
            throw NondegeneracyViolated("V(0) meets y0 - (Y+)_delta beyond y0 at " + fmt_vec(v));
    }

    MultiplierResult out{Process::halfspaces(prob.Z, real_line(), {{{1.0}, 1.0}}), {}, 0, 0, 0, 0, 0, 0};
    out.delta = delta;
    out.delta_prime = delta / 4.0;
    out.rho = rho > 0.0 ? rho : out.delta_prime / 2.0;
    if (!(out.rho < out.delta_prime))
        throw Error("find_multiplier: need 0 < rho < delta/4");
    out.mu = out.rho / 2.0;

    Vec f;
    try {
        f = quasi_interior_functional(prob.y_plus);
    } catch (const NoBase& e) {
        throw NoBoundedBase(std::string("ordering cone has no bounded base: ") + e.what());
    }
    // unit functional at level 1: every base point has norm >= 1, so the
    // Henig parameter mu < 1/8 is always admissible
    ConeBase base1 = base_from_functional(prob.y_plus, normalized(f), 1.0);

    ConeBase henig_base = henig_bounded_base(base1, out.mu);

    LipschitzEstimate lip = lipschitz_at(V, zero_z);
    out.lipschitz_hat = lip.constant;
    out.lipschitz_used = std::max(safety * lip.constant, 1e-6);

    std::vector<Vec> shifted;
    shifted.reserve(v0->size());
    for (const auto& v : *v0) shifted.push_back(sub(v, y0));
    ConeBase rescaled =
        rescale_base_for_separation(henig_base, out.lipschitz_used, out.delta_prime, shifted, tol);

    out.process = build_from_base(prob.Z, rescaled);
    out.certificate = certify(out.process, prob, V, y0, tol);
    if (!out.certificate.valid())
        throw CertificateFailed("multiplier certificate failed at " +
                                out.certificate.failing_check());
    return out;
}

// -------------------------------------------------------------- augmented scan

struct AugmentedCheck {
    bool nondominated = true;
    bool minimal_attained = false;  // y0 in F(x0) + Delta(G(x0)) for feasible x0
    bool compatibility_ok = true;   // Delta(G(x0)) cap (-Y+) inside Y+
    Vec violation;                  // augmented point below y0 when !nondominated
    long pairs_checked = 0;
};

/// Verify y0 nondominated in the augmented program F(x) + Delta(G(x)) by
/// probing value sets of the process; when y0 is attained at a feasible x0
/// the minimality and the compatibility inclusion are verified as well.
inline AugmentedCheck augmented_nd_check(const SampledProblem& prob, const Process& p,
                                         const Vec& y0, double probe_radius = 4.0,
                                         int probe_count = 512, double tol = kTolExact,
                                         uint64_t seed = 0xa09dULL) {
    AugmentedCheck res;
    Rng rng(seed);
    std::vector<Vec> probes = {zeros(prob.Y.dim)};
    for (int i = 0; i < prob.Y.dim; ++i) {
        Vec e = zeros(prob.Y.dim);
        for (double r : {0.25, 0.5, 1.0}) {
            e[static_cast<size_t>(i)] = r * probe_radius;
            probes.push_back(e);
            e[static_cast<size_t>(i)] = -r * probe_radius;
            probes.push_back(e);
            e[static_cast<size_t>(i)] = 0.0;
        }
    }
    for (int i = 0; i < probe_count; ++i)
        probes.push_back(scale(probe_radius, rng.ball_vec(prob.Y.dim)));

    Rng cone_rng(seed ^ 0x77ULL);
    auto minus_rays = sample_rays(prob.y_plus, 32, cone_rng);

    for (const auto& x : prob.omega) {
        const auto* fx = prob.F.find(x);
        const auto* gx = prob.G.find(x);
        if (!fx || !gx) continue;
        bool x_feasible = false;
        for (const auto& z : *gx) {
            std::vector<Vec> members = evaluate(p, z, probes, tol);
            for (const auto& s : support_points(p, z)) members.push_back(s);
            bool zero_here = norm_of(prob.Z, z) <= tol;
            x_feasible = x_feasible || zero_here;
            for (const auto& y1 : *fx) {
                for (const auto& y2 : members) {
                    Vec v = add(y1, y2);
                    ++res.pairs_checked;
                    if (cone_contains(prob.y_plus, sub(y0, v), tol) &&
                        !cone_contains(prob.y_plus, sub(v, y0), tol)) {
                        res.nondominated = false;
                        res.violation = v;
                        return res;
                    }
                    if (zero_here && distance(prob.Y, v, y0) <= tol)
                        res.minimal_attained = true;
                }
            }
        }
        if (x_feasible && distance_to_set(prob.Y, y0, *fx) <= tol) {
            // attaining point: y0 = y0 + 0 with 0 in Delta(0), and the
            // compatibility inclusion runs over the whole image G(x0)
            res.minimal_attained = true;
            for (const auto& z : *gx) {
                for (const auto& u : minus_rays) {
                    for (double r : {0.5, 1.0, 2.0}) {
                        Vec w = scale(-r, u);
                        if (graph_contains(p, z, w, tol) && !cone_contains(prob.y_plus, w, tol))
                            res.compatibility_ok = false;
                    }
                }
            }
        }
    }
    return res;
}

/// Bisection helper for the nondegeneracy parameter: the largest delta in
/// (0, 1) whose sampled check V(0) cap [y0 - (Y+)_delta] = {y0} passes.
/// The paper leaves the choice of delta open; this search is an addition.
inline double suggest_delta(const SampledProblem& prob, const Vec& y0, int iters = 40,
                            double tol = kTolExact) {
    SampledMap V = prob.compose_value_map();
    const auto* v0 = V.find(zeros(prob.Z.dim));
    if (!v0) throw EmptySet("suggest_delta: V(0) empty");
    auto passes = [&](double d) {
        for (const auto& v : *v0) {
            if (distance(prob.Y, v, y0) <= tol) continue;
            if (dilated_contains(prob.y_plus, d, sub(y0, v), tol)) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 1.0 - 1e-9;
    if (passes(hi)) return hi;
    if (!passes(1e-6)) return 0.0;
    lo = 1e-6;
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        (passes(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace conelag
