#pragma once

#include "conelag/problem_io.hpp"
#include "conelag/report.hpp"

namespace conelag {

/// Flags of the command-line surface, already parsed. Exit-code contract:
/// 0 = all requested checks pass, 1 = a mathematical check failed,
/// 2 = input/usage error (ParseError, SchemaError, DimensionMismatch,
/// UnknownCommand propagate to the caller).
struct DispatchOptions {
    std::string problem_path;
    std::string points_path;
    std::string cone_spec; // inline JSON or a path to a JSON file
    std::string y0_csv;    // comma-separated reference value
    std::string mu = "auto";
    std::string sweep;     // "start:stop:step"
    std::string csv_path;
    std::string example;   // 3.8 | 3.9 | 5.4
    std::string point_csv; // membership probe for `dilate`
    // negative values mean "unset": the problem file's defaults block (or the
    // library default) applies
    double tol = -1.0;
    double safety = -1.0;
    long long seed = -1;
    int grid = 11;
    int samples = 50;
    int dim = 5;
    double eps = 0.1;
    bool henig = false;
    double level = 1.0;
    double delta = -1.0; // < 0 means: use the problem file's default
    double rho = -1.0;
};

namespace cli_detail {

inline Vec parse_csv_vec(const std::string& s, const char* what) {
    Vec v;
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            v.push_back(std::stod(tok, &used));
        } catch (...) {
            throw ParseError(std::string(what) + ": expected comma-separated numbers, got '" + s +
                             "'");
        }
    }
    if (v.empty()) throw ParseError(std::string(what) + ": empty vector");
    return v;
}

inline std::vector<Vec> load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open points file: " + path);
    std::vector<Vec> pts;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::stringstream ss(line);
        Vec v;
        double x;
        while (ss >> x) v.push_back(x);
        if (v.empty()) continue; // blank line
        if (!pts.empty() && pts.front().size() != v.size())
            throw ParseError("points file line " + std::to_string(lineno) +
                             ": inconsistent dimension");
        pts.push_back(std::move(v));
    }
    if (pts.empty()) throw ParseError("points file has no vectors: " + path);
    return pts;
}

inline ordered_json load_json_arg(const std::string& spec, const char* what) {
    std::string text = spec;
    if (!spec.empty() && spec[0] != '{') {
        std::ifstream in(spec);
        if (!in) throw ParseError(std::string(what) + ": cannot open " + spec);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

inline ConvexCone load_cone(const std::string& spec) {
    ordered_json j = load_json_arg(spec, "--cone");
    int dim = 2;
    if (j.contains("kind")) {
        std::string k = j["kind"].get<std::string>();
        if (k == "generators" && j.contains("rays") && !j["rays"].empty())
            dim = static_cast<int>(j["rays"][0].size());
        if (k == "halfspaces" && j.contains("normals") && !j["normals"].empty())
            dim = static_cast<int>(j["normals"][0].size());
    }
    SpaceSpec space = dim == 1 ? real_line() : euclidean(dim);
    return parse_cone(j, space, "--cone");
}

/// Wrap a pipeline stage: mathematical failures become failed checks in the
/// report (exit 1) instead of exceptions; input errors still propagate.
template <typename Fn>
inline void run_checked(RunReport& rep, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const ParseError&) {
        throw;
    } catch (const SchemaError&) {
        throw;
    } catch (const DimensionMismatch&) {
        throw;
    } catch (const UnknownCommand&) {
        throw;
    } catch (const Error& e) {
        rep.check(name, false, e.what());
    }
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << content;
}

/// Flag > problem-file default > library default.
struct Effective {
    double tol = kTolExact;
    double safety = 1.25;
    uint64_t seed = 0;
};

inline Effective resolve(const DispatchOptions& opt, const ProblemFile* pf = nullptr) {
    Effective e;
    if (pf) {
        e.tol = pf->defaults.tol;
        e.safety = pf->defaults.safety;
        e.seed = pf->defaults.seed;
    }
    if (opt.tol >= 0) e.tol = opt.tol;
    if (opt.safety > 0) e.safety = opt.safety;
    if (opt.seed >= 0) e.seed = static_cast<uint64_t>(opt.seed);
    return e;
}

inline std::string vec_list_str(const std::vector<Vec>& pts, size_t cap = 8) {
    std::string s;
    for (size_t i = 0; i < pts.size() && i < cap; ++i) {
        if (i) s += "; ";
        s += fmt_vec(pts[i]);
    }
    if (pts.size() > cap) s += "; ... (" + std::to_string(pts.size()) + " total)";
    return s;
}

} // namespace cli_detail

// ----------------------------------------------------------------- commands

inline void cmd_nd_min(bool minimal, const DispatchOptions& opt, RunReport& rep) {
    auto eff = cli_detail::resolve(opt);
    auto pts = cli_detail::load_points(opt.points_path);
    ConvexCone cone = cli_detail::load_cone(opt.cone_spec);
    SpaceSpec space = cone.space;
    OrderedSample sample(space, cone, pts);
    if (minimal) {
        auto ms = min_set(sample, eff.tol);
        rep.value("points", static_cast<double>(pts.size()));
        rep.value("minimal_points", cli_detail::vec_list_str(ms, 1000));
        rep.check("min_set_nonempty", !ms.empty());
    } else {
        Vec y0 = cli_detail::parse_csv_vec(opt.y0_csv, "--y0");
        check_dim(space, y0, "--y0");
        rep.value("points", static_cast<double>(pts.size()));
        rep.check("nondominated", is_nondominated(y0, sample, eff.tol), "y0 = " + fmt_vec(y0));
    }
}

inline void cmd_dilate(const DispatchOptions& opt, RunReport& rep) {
    auto eff = cli_detail::resolve(opt);
    ConvexCone cone = cli_detail::load_cone(opt.cone_spec);
    ConvexCone out;
    if (opt.henig) {
        Vec f = quasi_interior_functional(cone);
        ConeBase base = base_from_functional(cone, normalized(f), opt.level);
        rep.value("delta_B", base.delta);
        rep.value("sigma_B", base.sigma);
        out = henig_dilate(base, opt.eps);
    } else {
        out = dilate_eps(cone, opt.eps);
    }
    rep.value("eps", opt.eps);
    rep.value("cone", cone_to_json(out).dump());
    if (!opt.point_csv.empty()) {
        Vec y = cli_detail::parse_csv_vec(opt.point_csv, "--point");
        check_dim(out.space, y, "--point");
        rep.check("dilated_membership", cone_contains(out, y, eff.tol), fmt_vec(y));
    }
}

inline void cmd_check_assumptions(const DispatchOptions& opt, RunReport& rep) {
    ProblemFile pf = parse_problem(opt.problem_path);
    auto eff = cli_detail::resolve(opt, &pf);
    if (!pf.process_spec) throw SchemaError("check-assumptions needs a 'process' in the file");
    SampledProblem prob = build_sampled_problem(pf);
    Process proc = parse_process(*pf.process_spec, pf.Z, pf.Y, "$.process");
    Vec y0 = pf.y0.value_or(zeros(pf.Y.dim));
    SampledMap V = prob.compose_value_map();

    auto core = check_assumption_a(proc);
    rep.check("assumption_a_core", core.found,
              core.found ? "witness " + fmt_vec(concat(core.z, core.y)) +
                               " radius " + fmt_g(core.radius)
                         : "no witness found");
    rep.check("assumption_b_cone", check_assumption_b(proc, prob.y_plus, 64, eff.tol));
    auto sep = check_assumption_c(proc, V, y0, eff.tol);
    rep.check("assumption_c_separation", sep.ok,
              sep.ok ? "" : "violation at z = " + fmt_vec(sep.z) + ", w = " + fmt_vec(sep.w));
}

inline void cmd_find_multiplier(const DispatchOptions& opt, RunReport& rep) {
    ProblemFile pf = parse_problem(opt.problem_path);
    auto eff = cli_detail::resolve(opt, &pf);
    SampledProblem prob = build_sampled_problem(pf);
    Vec y0 = pf.y0.value_or(zeros(pf.Y.dim));
    if (!opt.y0_csv.empty()) y0 = cli_detail::parse_csv_vec(opt.y0_csv, "--y0");
    double delta = opt.delta > 0 ? opt.delta : pf.defaults.delta;

    cli_detail::run_checked(rep, "multiplier_pipeline", [&] {
        MultiplierResult res = find_multiplier(prob, y0, delta, opt.rho, eff.safety, eff.tol);
        rep.value("delta", res.delta);
        rep.value("delta_prime", res.delta_prime);
        rep.value("rho", res.rho);
        rep.value("mu_henig", res.mu);
        rep.value("lipschitz_hat", res.lipschitz_hat);
        rep.value("lipschitz_used", res.lipschitz_used);
        rep.value("process", process_to_json(res.process).dump());
        const auto& c = res.certificate;
        rep.check("assumption_a_core", c.core.found,
                  "witness radius " + fmt_g(c.core.radius));
        rep.check("assumption_b_cone", c.cone_compat);
        rep.check("assumption_c_separation", c.separation.ok);
        auto aug = augmented_nd_check(prob, res.process, y0, 4.0, 512, eff.tol, eff.seed + 1);
        rep.check("augmented_nondominated", aug.nondominated);
        rep.value("augmented_pairs", static_cast<double>(aug.pairs_checked));
    });
}

inline void append_sweep(RunReport& rep, const ScalarProblem& prob, const std::string& grid_spec,
                         const std::string& csv_path, double tol) {
    double start = 0, stop = 0, step = 0;
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
        throw ParseError("--sweep: expected start:stop:step with positive step");
    std::vector<double> grid;
    for (double mu = start; mu <= stop + 1e-12; mu += step) grid.push_back(mu);

    auto sweep = penalty_threshold_sweep(prob, grid, tol);
    double r0 = constrained_infimum(prob).value;
    rep.value("r0", r0);
    rep.value("lipschitz_hat", sweep.l_hat);
    rep.value("rows", static_cast<double>(sweep.rows.size()));
    if (!std::isnan(sweep.threshold_mu)) rep.value("threshold_mu", sweep.threshold_mu);

    bool monotone = true, bounded = true;
    for (size_t i = 0; i < sweep.rows.size(); ++i) {
        if (i > 0 && sweep.rows[i].penalized_inf < sweep.rows[i - 1].penalized_inf - 1e-12)
            monotone = false;
        if (sweep.rows[i].penalized_inf > r0 + 1e-12) bounded = false;
    }
    rep.check("penalized_inf_monotone", monotone);
    rep.check("penalized_inf_bounded_by_r0", bounded);

    std::string csv = "mu,penalized_inf,gap,argmin\n";
    for (const auto& row : sweep.rows) {
        csv += fmt_g(row.mu) + "," + fmt_g(row.penalized_inf) + "," + fmt_g(row.gap) + ",\"" +
               cli_detail::vec_list_str(row.argmin, 4) + "\"\n";
    }
    if (!csv_path.empty())
        cli_detail::write_file(csv_path, csv);
    else
        rep.value("sweep_csv", "\n" + csv);
}

inline void cmd_penalize(const DispatchOptions& opt, RunReport& rep) {
    ProblemFile pf = parse_problem(opt.problem_path);
    auto eff = cli_detail::resolve(opt, &pf);
    ScalarProblem prob = build_scalar_problem(pf);

    if (opt.mu == "auto") {
        cli_detail::run_checked(rep, "exact_penalty_gap", [&] {
            PenaltyReport r;
            try {
                r = exact_penalty_verify(prob, eff.safety, eff.tol);
            } catch (const GapExceedsTolerance& e) {
                // reported with the certificate rather than silently
                auto cons = constrained_infimum(prob);
                rep.value("r0", cons.value);
                rep.check("exact_penalty_gap", false, e.what());
                return;
            }
            rep.value("r0", r.r0);
            rep.value("lipschitz_hat", r.l_hat);
            rep.value("mu", r.mu);
            rep.value("penalized_inf", r.penalized_inf);
            rep.value("gap", r.gap);
            rep.value("argmin", cli_detail::vec_list_str(r.argmin));
            rep.check("exact_penalty_gap", r.gap_ok, "gap = " + fmt_g(r.gap));
            rep.check("argmin_preserved", r.argmin_preserved);
        });
    } else {
        double mu = 0.0;
        try {
            mu = std::stod(opt.mu);
        } catch (...) {
            throw ParseError("--mu: expected a number or 'auto'");
        }
        auto cons = constrained_infimum(prob);
        auto pen = penalized_infimum(prob, SublinearFn::scaled_norm(prob.Z, mu));
        rep.value("r0", cons.value);
        rep.value("mu", mu);
        rep.value("penalized_inf", pen.value);
        rep.value("gap", cons.value - pen.value);
        rep.value("argmin", cli_detail::vec_list_str(pen.argmin));
        rep.check("exact_penalty_gap", cons.value - pen.value <= eff.tol,
                  "gap = " + fmt_g(cons.value - pen.value));
    }
    if (!opt.sweep.empty()) append_sweep(rep, prob, opt.sweep, opt.csv_path, eff.tol);
}

inline void cmd_sweep(const DispatchOptions& opt, RunReport& rep) {
    ProblemFile pf = parse_problem(opt.problem_path);
    auto eff = cli_detail::resolve(opt, &pf);
    ScalarProblem prob = build_scalar_problem(pf);
    if (opt.sweep.empty()) throw ParseError("sweep: missing --sweep start:stop:step");
    append_sweep(rep, prob, opt.sweep, opt.csv_path, eff.tol);
}

inline void cmd_equilibrium(const DispatchOptions& opt, RunReport& rep) {
    if (opt.example != "5.4")
        throw UnknownCommand("equilibrium: only --example 5.4 is cataloged");
    auto eff = cli_detail::resolve(opt);
    auto r = run_example_slanted_cone(opt.grid, opt.samples, eff.seed);
    rep.value("grid", static_cast<double>(r.grid));
    rep.value("samples", static_cast<double>(r.samples));
    rep.value("seed", static_cast<double>(r.seed));
    rep.check("consistency", r.consistency_ok);
    rep.check("equilibrium_at_zero", r.equilibrium_ok);
    rep.check("multiplier_nondominance", r.multiplier_ok);
    rep.check("compatibility_inclusion", r.compatibility_ok);
    rep.notes.push_back(std::string("orthant robustness: equilibrium under R^2_+ observed ") +
                        (r.orthant_equilibrium ? "true" : "false") +
                        " (fails whenever a sampled function has positive integral)");
    if (!opt.csv_path.empty()) {
        std::string csv = "sample,integral,slanted_ok,orthant_ok\n";
        for (size_t i = 0; i < r.sample_integrals.size(); ++i) {
            csv += std::to_string(i) + "," + fmt_g(r.sample_integrals[i]) + "," +
                   (r.slanted_sample_ok[i] ? "1" : "0") + "," +
                   (r.orthant_sample_ok[i] ? "1" : "0") + "\n";
        }
        cli_detail::write_file(opt.csv_path, csv);
    }
}

inline void cmd_example(const DispatchOptions& opt, RunReport& rep) {
    auto eff = cli_detail::resolve(opt);
    if (opt.example == "3.8") {
        auto prob = catalog::half_disc_problem(0.05);
        auto delta = catalog::half_disc_process();
        auto V = prob.compose_value_map();
        const auto& v0 = V.image_of(zeros(1));
        rep.value("omega_points", static_cast<double>(prob.omega.size()));
        rep.check("minimal_in_P0", nd_check_program(v0, {0.0, 0.0}, prob.y_plus, eff.tol) &&
                                       distance_to_set(prob.Y, {0.0, 0.0}, v0) <= eff.tol);
        auto core = check_assumption_a(delta);
        rep.check("assumption_a_core", core.found, "radius " + fmt_g(core.radius));
        rep.check("assumption_b_cone", check_assumption_b(delta, prob.y_plus, 64, eff.tol));
        rep.check("assumption_c_separation", check_assumption_c(delta, V, {0.0, 0.0}, eff.tol).ok);
        auto aug = augmented_nd_check(prob, delta, {0.0, 0.0}, 4.0, 512, eff.tol, eff.seed + 1);
        rep.check("augmented_minimal", aug.nondominated && aug.minimal_attained);
        rep.check("compatibility_inclusion", aug.compatibility_ok);

        // F(x0) + Delta(G(x0)) = Y+ on probes
        Rng rng(eff.seed + 2);
        bool cover = true, pointed = true;
        for (const auto& u : sample_rays(prob.y_plus, 64, rng)) {
            for (double s : {0.25, 1.0, 3.0}) {
                cover = cover && graph_contains(delta, {0.0}, scale(s, u), eff.tol);
                pointed = pointed && !graph_contains(delta, {0.0}, scale(-s, u), eff.tol);
            }
        }
        rep.check("augmented_value_set_is_orthant", cover && pointed);
        return;
    }
    if (opt.example == "3.9") {
        int n = opt.dim;
        auto prob = catalog::truncated_sequence_problem(n, 400, eff.seed + 17);
        auto delta = catalog::coordinatewise_norm_process(n);
        auto V = prob.compose_value_map();
        rep.value("dim", static_cast<double>(n));
        rep.check("minimal_in_P0",
                  nd_check_program(V.image_of(zeros(n)), zeros(n), prob.y_plus, eff.tol));
        auto core = check_assumption_a(delta);
        rep.check("assumption_a_core_finite_dim", core.found, "radius " + fmt_g(core.radius));
        auto aug = augmented_nd_check(prob, delta, zeros(n), 4.0, 512, eff.tol, eff.seed + 1);
        rep.check("augmented_minimal", aug.nondominated && aug.minimal_attained);
        rep.value("augmented_pairs", static_cast<double>(aug.pairs_checked));

        // (F(x) + Delta(G(x))) cap (-Y+) inside {0} over sampled pairs
        Rng rng(eff.seed + 3);
        long pairs = 0;
        bool intersection_trivial = true;
        for (const auto& x : prob.omega) {
            const Vec& z = prob.G.image_of(x).front();
            std::vector<Vec> members = support_points(delta, z);
            for (int k = 0; k < 8; ++k) {
                Vec up = rng.ball_vec(n);
                for (auto& u : up) u = 0.5 * std::abs(u);
                members.push_back(add(members.front(), up));
            }
            for (const auto& f : prob.F.image_of(x)) {
                for (const auto& m : members) {
                    if (!graph_contains(delta, z, m, eff.tol)) continue;
                    Vec v = add(f, m);
                    ++pairs;
                    if (cone_contains(prob.y_plus, neg(v), eff.tol) &&
                        norm_of(prob.Y, v) > eff.tol)
                        intersection_trivial = false;
                }
            }
        }
        rep.value("intersection_pairs", static_cast<double>(pairs));
        rep.check("augmented_cap_minus_cone_trivial", intersection_trivial);
        return;
    }
    if (opt.example == "5.4") {
        cmd_equilibrium(opt, rep);
        return;
    }
    throw UnknownCommand("example: expected 3.8, 3.9 or 5.4");
}

// ----------------------------------------------------------------- dispatch

inline RunReport dispatch(const std::string& command, const DispatchOptions& opt) {
    RunReport rep;
    rep.command = command;

    std::string canonical = command + "|seed=" + std::to_string(opt.seed) +
                            "|tol=" + fmt_g(opt.tol) + "|safety=" + fmt_g(opt.safety);
    if (!opt.problem_path.empty()) {
        ProblemFile pf = parse_problem(opt.problem_path); // early validation
        canonical += "|problem=" + pf.raw.dump();
    }
    for (const std::string& s : {opt.points_path, opt.cone_spec, opt.y0_csv, opt.mu, opt.sweep,
                                 opt.example, opt.point_csv})
        canonical += "|" + s;
    canonical += "|grid=" + std::to_string(opt.grid) + "|samples=" + std::to_string(opt.samples) +
                 "|dim=" + std::to_string(opt.dim) + "|eps=" + fmt_g(opt.eps) +
                 "|henig=" + std::to_string(opt.henig) + "|delta=" + fmt_g(opt.delta);
    rep.digest = input_digest(canonical);

    if (command == "nd")
        cmd_nd_min(false, opt, rep);
    else if (command == "min")
        cmd_nd_min(true, opt, rep);
    else if (command == "dilate")
        cmd_dilate(opt, rep);
    else if (command == "check-assumptions")
        cmd_check_assumptions(opt, rep);
    else if (command == "find-multiplier")
        cmd_find_multiplier(opt, rep);
    else if (command == "penalize")
        cmd_penalize(opt, rep);
    else if (command == "sweep")
        cmd_sweep(opt, rep);
    else if (command == "equilibrium")
        cmd_equilibrium(opt, rep);
    else if (command == "example")
        cmd_example(opt, rep);
    else
        throw UnknownCommand("unknown command: " + command);
    return rep;
}

} // namespace conelag
