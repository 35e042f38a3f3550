#pragma once

#include "conelag/multiplier.hpp"

namespace conelag {

/// Piecewise-linear function on a uniform grid of [0, 1], sup-norm. Stands in
/// for C[0,1] elements; integrals and sup-norms are exact for this class.
struct DiscretizedFunction {
    std::vector<double> grid;   // N >= 2 sample times in [0, 1]
    std::vector<double> values; // N reals

    static DiscretizedFunction uniform(int n, std::vector<double> vals) {
        if (n < 2) throw Error("DiscretizedFunction: need N >= 2");
        if (static_cast<int>(vals.size()) != n)
            throw Error("DiscretizedFunction: values/grid size mismatch");
        DiscretizedFunction f;
        for (int i = 0; i < n; ++i) f.grid.push_back(static_cast<double>(i) / (n - 1));
        f.values = std::move(vals);
        return f;
    }

    double at_zero() const { return values.front(); }
    double sup_norm() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    /// Trapezoid rule; exact for the piecewise-linear interpolant.
    double integral() const {
        double s = 0.0;
        for (size_t i = 0; i + 1 < grid.size(); ++i)
            s += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
        return s;
    }
};

/// Sampled set-valued vector equilibrium instance: a feasible sample, the
/// bifunction table over it, and the ordering cone.
struct EquilibriumProblem {
    SpaceSpec X, Y;
    std::vector<Vec> sigma; // feasible sample
    // fbar[i][j] = value set of F̄(sigma[i], sigma[j])
    std::vector<std::vector<std::vector<Vec>>> fbar;
    ConvexCone y_plus;
    bool consistency_checked = false;

    void check_consistency(double tol = kTolExact) {
        for (size_t i = 0; i < sigma.size(); ++i) {
            if (fbar[i][i].size() != 1 || norm_of(Y, fbar[i][i][0]) > tol)
                throw ConsistencyViolated("F(x,x) != {0} at sample " + std::to_string(i));
        }
        consistency_checked = true;
    }

    static EquilibriumProblem tabulate(
        SpaceSpec X, SpaceSpec Y, std::vector<Vec> sigma, ConvexCone y_plus,
        const std::function<std::vector<Vec>(const Vec&, const Vec&)>& bifunction) {
        EquilibriumProblem p;
        p.X = X;
        p.Y = Y;
        p.sigma = std::move(sigma);
        p.y_plus = std::move(y_plus);
        p.fbar.resize(p.sigma.size());
        for (size_t i = 0; i < p.sigma.size(); ++i) {
            p.fbar[i].resize(p.sigma.size());
            for (size_t j = 0; j < p.sigma.size(); ++j)
                p.fbar[i][j] = bifunction(p.sigma[i], p.sigma[j]);
        }
        p.check_consistency();
        return p;
    }
};

struct EquilibriumCheck {
    bool equilibrium = true;
    size_t violating_index = 0;
    Vec violating_value;
};

/// x0 solves (E) iff F(x0, x) cap (-Y+) stays inside Y+ for every sampled x.
inline EquilibriumCheck is_equilibrium(const EquilibriumProblem& p, size_t x0_index,
                                       double tol = kTolExact) {
    if (!p.consistency_checked)
        throw ConsistencyViolated("equilibrium problem not consistency-checked");
    if (x0_index >= p.sigma.size()) throw Error("is_equilibrium: index out of range");
    EquilibriumCheck res;
    for (size_t j = 0; j < p.sigma.size(); ++j) {
        for (const auto& y : p.fbar[x0_index][j]) {
            if (cone_contains(p.y_plus, neg(y), tol) && !cone_contains(p.y_plus, y, tol)) {
                res.equilibrium = false;
                res.violating_index = j;
                res.violating_value = y;
                return res;
            }
        }
    }
    return res;
}

/// Embed (E) as the constrained program (P(0)): F(x) = Fbar(x0, x) is the
/// objective, G(x) = Fbar(x, x) the constraint; consistency makes G == {0}
/// on the sample and x0 feasible. Z = Y.
inline SampledProblem reformulate(const EquilibriumProblem& p, size_t x0_index) {
    if (!p.consistency_checked)
        throw ConsistencyViolated("equilibrium problem not consistency-checked");
    if (x0_index >= p.sigma.size()) throw Error("reformulate: index out of range");
    SampledMap F(p.X, p.Y, "F_eq");
    SampledMap G(p.X, p.Y, "G_eq");
    for (size_t j = 0; j < p.sigma.size(); ++j) {
        F.add(p.sigma[j], p.fbar[x0_index][j]);
        G.add(p.sigma[j], p.fbar[j][j]);
    }
    return SampledProblem{p.X, p.Y, p.Y, std::move(F), std::move(G), p.sigma, p.y_plus};
}

struct EquilibriumMultiplierCheck {
    AugmentedCheck augmented;
    bool compatibility_ok = true; // Delta(G(x0)) cap (-Y+) inside Y+ on probes
    bool ok() const { return augmented.nondominated && compatibility_ok; }
};

/// Multiplier validation at an equilibrium point: augmented nondominance of 0
/// for the reformulated program plus the compatibility inclusion on probes.
inline EquilibriumMultiplierCheck equilibrium_multiplier_check(const EquilibriumProblem& p,
                                                               size_t x0_index, const Process& delta,
                                                               double probe_radius = 4.0,
                                                               int probe_count = 512,
                                                               double tol = kTolExact) {
    EquilibriumCheck eq = is_equilibrium(p, x0_index, tol);
    if (!eq.equilibrium) throw Error("equilibrium_multiplier_check: x0 is not an equilibrium");
    SampledProblem prob = reformulate(p, x0_index);
    EquilibriumMultiplierCheck res;
    res.augmented = augmented_nd_check(prob, delta, zeros(p.Y.dim), probe_radius, probe_count, tol);
    Rng rng(0xe9ULL);
    for (const auto& z : prob.G.image_of(p.sigma[x0_index])) {
        for (const auto& u : sample_rays(p.y_plus, 32, rng)) {
            for (double r : {0.5, 1.0, 2.0}) {
                Vec w = scale(-r, u);
                if (graph_contains(delta, z, w, tol) && !cone_contains(p.y_plus, w, tol))
                    res.compatibility_ok = false;
            }
        }
    }
    return res;
}

// ----------------------------------------------------------- worked instance

struct SlantedConeReport {
    int grid = 0;
    int samples = 0;
    uint64_t seed = 0;
    bool consistency_ok = false;
    bool equilibrium_ok = false;
    bool multiplier_ok = false;
    bool compatibility_ok = false;
    // robustness note: whether the equilibrium check also passes when the
    // slanted cone is replaced by the orthant. On Sigma the first bifunction
    // coordinate is exactly 0, so this fails as soon as a sampled function
    // has positive integral; the report carries the observed value.
    bool orthant_equilibrium = false;
    std::vector<double> sample_integrals;
    // per-sample verdicts of the membership rule at u0 under each cone
    std::vector<bool> slanted_sample_ok;
    std::vector<bool> orthant_sample_ok;
};

/// The slanted-cone instance on discretized C[0,1]: M seeded piecewise-linear
/// functions with u(0) = 0 and sup-norm <= 1, bifunction
///   (u(0)^2 + (v(0)-u(0))^2, integral(u - v)),
/// ordering cone sqrt(2)/2 y1 <= y2 <= sqrt(3)/2 y1, and the explicit
/// three-row multiplier process with the homogeneous row y1 >= 0.
inline ConvexCone slanted_cone() {
    const double s2 = std::sqrt(2.0) / 2.0, s3 = std::sqrt(3.0) / 2.0;
    return ConvexCone::from_halfspaces(euclidean(2), {{-s2, 1.0}, {s3, -1.0}});
}

inline Process slanted_cone_process() {
    const double s2 = std::sqrt(2.0) / 2.0, s3 = std::sqrt(3.0) / 2.0;
    return Process::halfspaces(euclidean(2), euclidean(2),
                               {{{-s2, 1.0}, 1.0}, {{s3, -1.0}, 1.0}, {{1.0, 0.0}, 0.0}});
}

inline SlantedConeReport run_example_slanted_cone(int grid_n, int sample_m, uint64_t seed) {
    if (grid_n < 2) throw Error("run_example_slanted_cone: need grid N >= 2");
    if (sample_m < 1) throw Error("run_example_slanted_cone: need M >= 1");

    SlantedConeReport rep;
    rep.grid = grid_n;
    rep.samples = sample_m;
    rep.seed = seed;

    Rng rng(seed);
    std::vector<DiscretizedFunction> fns;
    fns.push_back(DiscretizedFunction::uniform(grid_n, std::vector<double>(grid_n, 0.0)));
    for (int k = 1; k < sample_m; ++k) {
        std::vector<double> vals(static_cast<size_t>(grid_n));
        vals[0] = 0.0; // membership in Sigma = {u : u(0) = 0}
        for (int i = 1; i < grid_n; ++i) vals[static_cast<size_t>(i)] = rng.uniform(-1.0, 1.0);
        fns.push_back(DiscretizedFunction::uniform(grid_n, std::move(vals)));
    }

    SpaceSpec Xspace(grid_n, Norm::Supremum);
    std::vector<Vec> sigma;
    for (const auto& f : fns) {
        sigma.push_back(f.values);
        rep.sample_integrals.push_back(f.integral());
    }

    auto fn_of = [&](const Vec& v) { return DiscretizedFunction::uniform(grid_n, v); };
    auto bifun = [&](const Vec& uu, const Vec& vv) -> std::vector<Vec> {
        DiscretizedFunction u = fn_of(uu), v = fn_of(vv);
        double u0 = u.at_zero(), v0 = v.at_zero();
        double first = u0 * u0 + (v0 - u0) * (v0 - u0);
        double second = u.integral() - v.integral();
        return {{first, second}};
    };

    EquilibriumProblem prob =
        EquilibriumProblem::tabulate(Xspace, euclidean(2), sigma, slanted_cone(), bifun);
    rep.consistency_ok = prob.consistency_checked;
    rep.equilibrium_ok = is_equilibrium(prob, 0).equilibrium;

    Process delta = slanted_cone_process();
    EquilibriumMultiplierCheck mc = equilibrium_multiplier_check(prob, 0, delta);
    rep.multiplier_ok = mc.augmented.nondominated;
    rep.compatibility_ok = mc.compatibility_ok;

    EquilibriumProblem orthant_prob =
        EquilibriumProblem::tabulate(Xspace, euclidean(2), sigma, ConvexCone::orthant(2), bifun);
    rep.orthant_equilibrium = is_equilibrium(orthant_prob, 0).equilibrium;

    auto sample_verdict = [&](const EquilibriumProblem& p, size_t j) {
        for (const auto& y : p.fbar[0][j])
            if (cone_contains(p.y_plus, neg(y)) && !cone_contains(p.y_plus, y)) return false;
        return true;
    };
    for (size_t j = 0; j < sigma.size(); ++j) {
        rep.slanted_sample_ok.push_back(sample_verdict(prob, j));
        rep.orthant_sample_ok.push_back(sample_verdict(orthant_prob, j));
    }
    return rep;
}

} // namespace conelag
