#pragma once

#include <functional>
#include <map>

#include "conelag/process.hpp"

namespace conelag {

/// Sampled scalar constrained program: value tables over Omega, possibly
/// set-valued. Feasibility means ||g(x)|| <= feasibility_tol.
struct ScalarProblem {
    SpaceSpec X, Z;
    std::vector<Vec> omega;
    std::vector<std::vector<double>> f_values; // per omega point, nonempty
    std::vector<std::vector<Vec>> g_values;    // per omega point, nonempty
    double feasibility_tol = 1e-9;

    void validate() const {
        if (omega.size() != f_values.size() || omega.size() != g_values.size())
            throw Error("ScalarProblem: tables must be total on Omega");
        for (size_t i = 0; i < omega.size(); ++i) {
            check_dim(X, omega[i], "ScalarProblem omega");
            if (f_values[i].empty() || g_values[i].empty())
                throw Error("ScalarProblem: empty value set in table");
            for (const auto& gv : g_values[i]) check_dim(Z, gv, "ScalarProblem g");
        }
        if (feasibility_tol < 0) throw Error("ScalarProblem: feasibility_tol must be >= 0");
    }

    /// Single-valued convenience builder from callables on a grid.
    static ScalarProblem tabulate(SpaceSpec X, SpaceSpec Z, const std::vector<Vec>& omega,
                                  const std::function<double(const Vec&)>& f,
                                  const std::function<Vec(const Vec&)>& g) {
        ScalarProblem p;
        p.X = X;
        p.Z = Z;
        p.omega = omega;
        for (const auto& x : omega) {
            p.f_values.push_back({f(x)});
            p.g_values.push_back({g(x)});
        }
        p.validate();
        return p;
    }

    /// The sampled graph of V = f o g^-1, for Lipschitz estimation.
    SampledMap value_map() const {
        std::map<Vec, std::vector<Vec>, VecLexLess> grouped;
        for (size_t i = 0; i < omega.size(); ++i)
            for (const auto& gv : g_values[i])
                for (double fv : f_values[i]) grouped[gv].push_back({fv});
        SampledMap V(Z, real_line(), "V");
        for (auto& [z, ys] : grouped) {
            std::sort(ys.begin(), ys.end(), lex_less);
            ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
            V.add(z, std::move(ys));
        }
        return V;
    }
};

struct ArgminResult {
    double value = 0.0;
    std::vector<Vec> argmin; // lexicographically sorted
};

/// r0 = inf{f(x) : x in Omega, ||g(x)|| <= tol}.
inline ArgminResult constrained_infimum(const ScalarProblem& p) {
    p.validate();
    ArgminResult res;
    res.value = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.omega.size(); ++i) {
        bool feasible = false;
        for (const auto& gv : p.g_values[i])
            if (norm_of(p.Z, gv) <= p.feasibility_tol) { feasible = true; break; }
        if (!feasible) continue;
        for (double fv : p.f_values[i]) {
            if (fv < res.value - 1e-15) {
                res.value = fv;
                res.argmin = {p.omega[i]};
            } else if (std::abs(fv - res.value) <= 1e-15) {
                res.argmin.push_back(p.omega[i]);
            }
        }
    }
    if (!std::isfinite(res.value)) throw Infeasible("constrained_infimum: no feasible point");
    std::sort(res.argmin.begin(), res.argmin.end(), lex_less);
    res.argmin.erase(std::unique(res.argmin.begin(), res.argmin.end()), res.argmin.end());
    return res;
}

/// inf over Omega of f(x) + phi(g(x)), minimizing over value-set members.
inline ArgminResult penalized_infimum(const ScalarProblem& p, const SublinearFn& phi) {
    p.validate();
    ArgminResult res;
    res.value = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < p.omega.size(); ++i) {
        double best_here = std::numeric_limits<double>::infinity();
        for (double fv : p.f_values[i])
            for (const auto& gv : p.g_values[i])
                best_here = std::min(best_here, fv + phi(gv));
        if (best_here < res.value - 1e-15) {
            res.value = best_here;
            res.argmin = {p.omega[i]};
        } else if (std::abs(best_here - res.value) <= 1e-15) {
            res.argmin.push_back(p.omega[i]);
        }
    }
    std::sort(res.argmin.begin(), res.argmin.end(), lex_less);
    res.argmin.erase(std::unique(res.argmin.begin(), res.argmin.end()), res.argmin.end());
    return res;
}

struct SR0Check {
    bool member = true;
    Vec violating_z;
    double violating_r = 0.0;
};

/// Membership of phi in S_{r0}: -phi(z) < r - r0 strictly (margin 1e-12) for
/// every sampled z != 0 in the image of g and r in F(G^-1(z)).
inline SR0Check s_r0_membership(const ScalarProblem& p, const SublinearFn& phi, double r0) {
    p.validate();
    SR0Check res;
    for (size_t i = 0; i < p.omega.size(); ++i) {
        for (const auto& gv : p.g_values[i]) {
            if (norm_of(p.Z, gv) <= p.feasibility_tol) continue; // z = 0 exempt
            for (double fv : p.f_values[i]) {
                if (!(-phi(gv) < fv - r0 - 1e-12)) {
                    res.member = false;
                    res.violating_z = gv;
                    res.violating_r = fv;
                    return res;
                }
            }
        }
    }
    return res;
}

struct PenaltyReport {
    double r0 = 0.0;
    double l_hat = 0.0;
    double mu = 0.0;
    double penalized_inf = 0.0;
    double gap = 0.0; // r0 - penalized_inf
    std::vector<Vec> argmin;
    bool argmin_preserved = true; // feasible argmin also solves the penalized problem
    bool gap_ok = true;
};

/// Exact-penalty verification: mu = safety * max(L_hat, eps_floor), penalized
/// infimum with phi = mu||.||, and the gap assertion. eps_floor keeps mu
/// strictly positive when the value map is constant.
inline PenaltyReport exact_penalty_verify(const ScalarProblem& p, double safety,
                                          double gap_tol = 1e-9, double eps_floor = 1e-6) {
    ArgminResult constrained = constrained_infimum(p);
    SampledMap V = p.value_map();
    // anchor at the minimum-norm sampled constraint value; catalog grids
    // contain exact zeros, user tables may only come tolerance-close (a
    // feasible point exists, so the anchor is within feasibility_tol of 0)
    const Vec* anchor = &V.entries.front().x;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : V.entries) {
        double n = norm_of(p.Z, e.x);
        if (n < best) { best = n; anchor = &e.x; }
    }
    LipschitzEstimate lip = lipschitz_at(V, *anchor);

    PenaltyReport rep;
    rep.r0 = constrained.value;
    rep.l_hat = lip.constant;
    rep.mu = safety * std::max(lip.constant, eps_floor);
    ArgminResult pen = penalized_infimum(p, SublinearFn::scaled_norm(p.Z, rep.mu));
    rep.penalized_inf = pen.value;
    rep.gap = rep.r0 - rep.penalized_inf;
    rep.argmin = pen.argmin;
    rep.gap_ok = rep.gap <= gap_tol;
    if (!constrained.argmin.empty()) {
        const Vec& x0 = constrained.argmin.front();
        rep.argmin_preserved = false;
        for (const auto& x : pen.argmin)
            if (approx_eq(x, x0, 1e-12)) { rep.argmin_preserved = true; break; }
        // a tie at the same value also counts: check x0 attains pen.value
        if (!rep.argmin_preserved) {
            for (size_t i = 0; i < p.omega.size(); ++i) {
                if (!approx_eq(p.omega[i], x0, 1e-12)) continue;
                double best = std::numeric_limits<double>::infinity();
                for (double fv : p.f_values[i])
                    for (const auto& gv : p.g_values[i])
                        best = std::min(best, fv + rep.mu * norm_of(p.Z, gv));
                rep.argmin_preserved = best <= pen.value + gap_tol;
            }
        }
    }
    if (!rep.gap_ok)
        throw GapExceedsTolerance("exact penalty gap " + fmt_g(rep.gap) + " exceeds " +
                                  fmt_g(gap_tol) + " at mu = " + fmt_g(rep.mu));
    return rep;
}

struct SweepRow {
    double mu = 0.0;
    double penalized_inf = 0.0;
    double gap = 0.0;
    std::vector<Vec> argmin;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double threshold_mu = std::numeric_limits<double>::quiet_NaN(); // smallest mu with gap <= tol
    double l_hat = 0.0;
};

/// Per-mu penalized infima and the empirical exactness threshold, for
/// comparison against the Lipschitz bound.
inline SweepResult penalty_threshold_sweep(const ScalarProblem& p,
                                           const std::vector<double>& mu_grid,
                                           double gap_tol = 1e-9) {
    for (size_t i = 1; i < mu_grid.size(); ++i)
        if (mu_grid[i] < mu_grid[i - 1]) throw Error("penalty_threshold_sweep: grid not sorted");
    ArgminResult constrained = constrained_infimum(p);
    SweepResult out;
    out.l_hat = lipschitz_at(p.value_map(), zeros(p.Z.dim)).constant;
    for (double mu : mu_grid) {
        ArgminResult pen = penalized_infimum(p, SublinearFn::scaled_norm(p.Z, std::max(mu, 0.0)));
        SweepRow row;
        row.mu = mu;
        row.penalized_inf = pen.value;
        row.gap = constrained.value - pen.value;
        row.argmin = pen.argmin;
        if (std::isnan(out.threshold_mu) && row.gap <= gap_tol) out.threshold_mu = mu;
        out.rows.push_back(std::move(row));
    }
    return out;
}

/// Estimate of sup{L_{f,x} : x in the sampled fiber g^-1(0)}, the quantity in
/// the corollary's case (b1). A sampled lower estimate.
inline double fiber_lipschitz_sup(const ScalarProblem& p) {
    SampledMap f_map(p.X, real_line(), "f");
    for (size_t i = 0; i < p.omega.size(); ++i) {
        std::vector<Vec> vals;
        for (double fv : p.f_values[i]) vals.push_back({fv});
        f_map.add(p.omega[i], std::move(vals));
    }
    double sup = 0.0;
    bool any = false;
    for (size_t i = 0; i < p.omega.size(); ++i) {
        bool in_fiber = false;
        for (const auto& gv : p.g_values[i])
            if (norm_of(p.Z, gv) <= p.feasibility_tol) { in_fiber = true; break; }
        if (!in_fiber) continue;
        any = true;
        sup = std::max(sup, lipschitz_at(f_map, p.omega[i]).constant);
    }
    if (!any) throw Infeasible("fiber_lipschitz_sup: empty sampled fiber");
    return sup;
}

} // namespace conelag
