#pragma once

#include "conelag/equilibrium.hpp"
#include "conelag/penalty.hpp"

namespace conelag::catalog {

/// Half-disc sample {x1^2 + x2^2 <= 1, x2 >= 0} on a square grid of the given
/// step; the grid is built from integer multiples of the step so it contains
/// exact zeros and the boundary points (+-1, 0).
inline std::vector<Vec> half_disc_grid(double step) {
    std::vector<Vec> pts;
    for (double x1 : step_grid(-1.0, 1.0, step))
        for (double x2 : step_grid(0.0, 1.0, step))
            if (x1 * x1 + x2 * x2 <= 1.0 + 1e-12) pts.push_back({x1, x2});
    return pts;
}

inline std::vector<Vec> interval_grid(double lo, double hi, double step) {
    std::vector<Vec> pts;
    for (double x : step_grid(lo, hi, step)) pts.push_back({x});
    return pts;
}

/// Seeded sample of the closed unit ball in R^n, always containing the origin.
inline std::vector<Vec> unit_ball_sample(int dim, int count, uint64_t seed) {
    Rng rng(seed);
    std::vector<Vec> pts = {zeros(dim)};
    for (int i = 1; i < count; ++i) pts.push_back(rng.ball_vec(dim));
    return pts;
}

// ------------------------------------------------- half-disc planar instance

/// F(x1,x2) = {(x1^2 + x2^2, x2^2 + x1 x2)} over the half-disc.
inline SampledMap half_disc_objective(const std::vector<Vec>& omega) {
    SampledMap F(euclidean(2), euclidean(2), "example_3_8_F");
    for (const auto& x : omega)
        F.add(x, {{x[0] * x[0] + x[1] * x[1], x[1] * x[1] + x[0] * x[1]}});
    return F;
}

/// G(x1,x2) = {x1}.
inline SampledMap half_disc_constraint(const std::vector<Vec>& omega) {
    SampledMap G(euclidean(2), real_line(), "example_3_8_G");
    for (const auto& x : omega) G.add(x, {{x[0]}});
    return G;
}

/// Delta(z) = {y : y1 >= |z|, y2 >= |z|}.
inline Process half_disc_process() {
    return Process::halfspaces(real_line(), euclidean(2), {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}});
}

inline SampledProblem half_disc_problem(double step = 0.05) {
    auto omega = half_disc_grid(step);
    return SampledProblem{euclidean(2),
                          euclidean(2),
                          real_line(),
                          half_disc_objective(omega),
                          half_disc_constraint(omega),
                          omega,
                          ConvexCone::orthant(2)};
}

// ------------------------------------ truncated sequence-space instance (R^n)

/// F(x) = {(x_i^2)} + Y+ over the unit ball, truncated: the materialized
/// graph carries sampled orthant offsets, the cone_offset rule keeps
/// membership exact.
inline SampledMap squares_plus_orthant_objective(int dim, const std::vector<Vec>& omega,
                                                 int offsets_per_point = 4, uint64_t seed = 17) {
    SampledMap F(euclidean(dim), euclidean(dim),
                 "example_3_9_F_" + std::to_string(dim));
    ConvexCone orth = ConvexCone::orthant(dim);
    Rng rng(seed);
    std::vector<Vec> offs = {zeros(dim)};
    for (const auto& u : sample_rays(orth, offsets_per_point, rng))
        for (double r : {0.5, 2.0}) offs.push_back(scale(r, u));
    for (const auto& x : omega) {
        Vec sq(x.size());
        for (size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
        std::vector<Vec> vals;
        for (const auto& o : offs) vals.push_back(add(sq, o));
        std::sort(vals.begin(), vals.end(), lex_less);
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        F.add(x, std::move(vals));
    }
    F.cone_offset = std::make_shared<const ConvexCone>(std::move(orth));
    return F;
}

/// G(x) = {(x_i^3)}.
inline SampledMap cubes_constraint(int dim, const std::vector<Vec>& omega) {
    SampledMap G(euclidean(dim), euclidean(dim),
                 "example_3_9_G_" + std::to_string(dim));
    for (const auto& x : omega) {
        Vec cu(x.size());
        for (size_t i = 0; i < x.size(); ++i) cu[i] = x[i] * x[i] * x[i];
        G.add(x, {cu});
    }
    return G;
}

/// Delta(z) = {y : y_i >= ||z|| for all i}.
inline Process coordinatewise_norm_process(int dim) {
    std::vector<Process::HalfspaceRow> rows;
    for (int i = 0; i < dim; ++i) {
        Vec e = zeros(dim);
        e[static_cast<size_t>(i)] = 1.0;
        rows.push_back({e, 1.0});
    }
    return Process::halfspaces(euclidean(dim), euclidean(dim), std::move(rows));
}

inline SampledProblem truncated_sequence_problem(int dim, int samples = 400, uint64_t seed = 17) {
    auto omega = unit_ball_sample(dim, samples, seed);
    return SampledProblem{euclidean(dim),
                          euclidean(dim),
                          euclidean(dim),
                          squares_plus_orthant_objective(dim, omega),
                          cubes_constraint(dim, omega),
                          omega,
                          ConvexCone::orthant(dim)};
}

// ----------------------------------------------------- scalar penalty catalog

/// f = -x^2, g = x on a grid of [-1, 1].
inline ScalarProblem parabola_problem(double step = 0.001) {
    return ScalarProblem::tabulate(
        real_line(), real_line(), interval_grid(-1.0, 1.0, step),
        [](const Vec& x) { return -x[0] * x[0]; }, [](const Vec& x) { return Vec{x[0]}; });
}

/// f = |x - 0.5|, g = x on a grid of [-1, 1].
inline ScalarProblem abs_shift_problem(double step = 0.001) {
    return ScalarProblem::tabulate(
        real_line(), real_line(), interval_grid(-1.0, 1.0, step),
        [](const Vec& x) { return std::abs(x[0] - 0.5); }, [](const Vec& x) { return Vec{x[0]}; });
}

/// f = -x^2, g = x^3 on a grid of [-r, r]; the constraint inverse is not
/// Lipschitz at 0, so the estimate grows as the grid refines.
inline ScalarProblem cube_constraint_problem(double radius = 1.0, double step = 0.01) {
    return ScalarProblem::tabulate(
        real_line(), real_line(), interval_grid(-radius, radius, step),
        [](const Vec& x) { return -x[0] * x[0]; },
        [](const Vec& x) { return Vec{x[0] * x[0] * x[0]}; });
}

inline std::vector<std::pair<std::string, ScalarProblem>> scalar_catalog(double step = 0.01) {
    return {{"parabola", parabola_problem(step)},
            {"abs_shift", abs_shift_problem(step)},
            {"cube_constraint", cube_constraint_problem(1.0, step)}};
}

// --------------------------------------------------------------- named lookup

/// Tabulated maps by catalog name, over a caller-provided sample. Names with
/// a trailing _<n> select the space dimension.
inline SampledMap map_by_name(const std::string& name, const std::vector<Vec>& omega) {
    if (name == "example_3_8_F") return half_disc_objective(omega);
    if (name == "example_3_8_G") return half_disc_constraint(omega);
    auto starts_with = [&](const std::string& prefix) {
        return name.rfind(prefix, 0) == 0 && name.size() > prefix.size();
    };
    if (starts_with("example_3_9_F_"))
        return squares_plus_orthant_objective(std::stoi(name.substr(14)), omega);
    if (starts_with("example_3_9_G_")) return cubes_constraint(std::stoi(name.substr(14)), omega);
    if (name == "parabola_f") {
        SampledMap m(real_line(), real_line(), name);
        for (const auto& x : omega) m.add(x, {{-x[0] * x[0]}});
        return m;
    }
    if (name == "identity_g") {
        SampledMap m(real_line(), real_line(), name);
        for (const auto& x : omega) m.add(x, {{x[0]}});
        return m;
    }
    if (name == "cube_g") {
        SampledMap m(real_line(), real_line(), name);
        for (const auto& x : omega) m.add(x, {{x[0] * x[0] * x[0]}});
        return m;
    }
    throw Error("unknown catalog map: " + name);
}

} // namespace conelag::catalog
