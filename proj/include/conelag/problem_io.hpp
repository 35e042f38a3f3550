#pragma once

#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "conelag/catalog.hpp"
#include "conelag/multiplier.hpp"
#include "conelag/penalty.hpp"

namespace conelag {

using nlohmann::ordered_json;

namespace io_detail {

/// Strict-mode key validation: unknown fields are schema errors.
inline void require_keys(const ordered_json& j, const std::string& path,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    std::string problems;
    for (const char* k : required)
        if (!j.contains(k)) problems += path + ": missing field '" + k + "'; ";
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : required) known = known || it.key() == k;
        for (const char* k : optional) known = known || it.key() == k;
        if (!known) problems += path + ": unknown field '" + it.key() + "'; ";
    }
    if (!problems.empty()) throw SchemaError(problems);
}

inline Vec parse_vec(const ordered_json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a number array");
    Vec v;
    for (const auto& x : j) {
        if (!x.is_number()) throw SchemaError(path + ": expected a number array");
        v.push_back(x.get<double>());
    }
    return v;
}

inline std::vector<Vec> parse_vec_list(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path + ": expected an array of vectors");
    std::vector<Vec> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_vec(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

} // namespace io_detail

// ------------------------------------------------------------------- spaces

inline SpaceSpec parse_space(const ordered_json& j, const std::string& path) {
    io_detail::require_keys(j, path, {"dim", "norm"});
    if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw SchemaError(path + ".dim: expected a positive integer");
    std::string n = j["norm"].get<std::string>();
    Norm norm;
    if (n == "euclidean")
        norm = Norm::Euclidean;
    else if (n == "supremum")
        norm = Norm::Supremum;
    else if (n == "absolute-value")
        norm = Norm::AbsoluteValue;
    else
        throw SchemaError(path + ".norm: expected euclidean|supremum|absolute-value");
    try {
        return SpaceSpec(j["dim"].get<int>(), norm);
    } catch (const Error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline ordered_json space_to_json(const SpaceSpec& s) {
    return {{"dim", s.dim}, {"norm", to_string(s.norm)}};
}

// -------------------------------------------------------------------- cones

/// Cone sub-schema: {"kind": "sector"|"generators"|"halfspaces", ...},
/// sector angles in degrees.
inline ConvexCone parse_cone(const ordered_json& j, const SpaceSpec& space,
                             const std::string& path) {
    if (!j.is_object() || !j.contains("kind"))
        throw SchemaError(path + ": expected a cone object with 'kind'");
    std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "sector") {
            io_detail::require_keys(j, path, {"kind", "degrees"});
            Vec d = io_detail::parse_vec(j["degrees"], path + ".degrees");
            if (d.size() != 2) throw SchemaError(path + ".degrees: expected [lo, hi]");
            if (space.dim != 2) throw DimensionMismatch(path + ": sector cones need dim 2");
            return ConvexCone::make_sector(d[0] * kPi / 180.0, d[1] * kPi / 180.0, space);
        }
        if (kind == "generators") {
            io_detail::require_keys(j, path, {"kind", "rays"});
            return ConvexCone::from_generators(space,
                                               io_detail::parse_vec_list(j["rays"], path + ".rays"));
        }
        if (kind == "halfspaces") {
            io_detail::require_keys(j, path, {"kind", "normals"});
            return ConvexCone::from_halfspaces(
                space, io_detail::parse_vec_list(j["normals"], path + ".normals"));
        }
    } catch (const DimensionMismatch&) {
        throw;
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    throw SchemaError(path + ".kind: expected sector|generators|halfspaces");
}

inline ordered_json cone_to_json(const ConvexCone& c) {
    if (const auto* s = std::get_if<SectorRep>(&c.rep))
        return {{"kind", "sector"},
                {"degrees", {round_sig(s->lo * 180.0 / kPi), round_sig(s->hi() * 180.0 / kPi)}}};
    if (const auto* g = std::get_if<GeneratorsRep>(&c.rep)) {
        ordered_json rays = ordered_json::array();
        for (const auto& r : g->rays) rays.push_back(r);
        return {{"kind", "generators"}, {"rays", rays}};
    }
    const auto& h = std::get<HalfspacesRep>(c.rep);
    ordered_json normals = ordered_json::array();
    for (const auto& n : h.normals) normals.push_back(n);
    return {{"kind", "halfspaces"}, {"normals", normals}};
}

// ---------------------------------------------------------------- processes

/// Process sub-schema: {"kind": "halfspaces"|"base"|"sublinear", ...}.
inline Process parse_process(const ordered_json& j, const SpaceSpec& Z, const SpaceSpec& Y,
                             const std::string& path) {
    if (!j.is_object() || !j.contains("kind"))
        throw SchemaError(path + ": expected a process object with 'kind'");
    std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "halfspaces") {
            io_detail::require_keys(j, path, {"kind", "rows"});
            std::vector<Process::HalfspaceRow> rows;
            for (size_t i = 0; i < j["rows"].size(); ++i) {
                const auto& r = j["rows"][i];
                std::string rp = path + ".rows[" + std::to_string(i) + "]";
                io_detail::require_keys(r, rp, {"g", "alpha"});
                rows.push_back({io_detail::parse_vec(r["g"], rp + ".g"), r["alpha"].get<double>()});
            }
            return Process::halfspaces(Z, Y, std::move(rows));
        }
        if (kind == "base") {
            io_detail::require_keys(j, path, {"kind", "cone", "functional", "level"});
            ConvexCone cone = parse_cone(j["cone"], Y, path + ".cone");
            ConeBase base = base_from_functional(
                cone, io_detail::parse_vec(j["functional"], path + ".functional"),
                j["level"].get<double>());
            return build_from_base(Z, base);
        }
        if (kind == "sublinear") {
            io_detail::require_keys(j, path, {"kind", "phi"});
            const auto& p = j["phi"];
            if (!p.is_object() || !p.contains("kind"))
                throw SchemaError(path + ".phi: expected an object with 'kind'");
            std::string pk = p["kind"].get<std::string>();
            if (pk == "scaled_norm") {
                io_detail::require_keys(p, path + ".phi", {"kind", "mu"});
                return upsilon(SublinearFn::scaled_norm(Z, p["mu"].get<double>()));
            }
            if (pk == "max_linear") {
                io_detail::require_keys(p, path + ".phi", {"kind", "functionals"});
                return upsilon(SublinearFn::max_of_linear(
                    Z, io_detail::parse_vec_list(p["functionals"], path + ".phi.functionals")));
            }
            throw SchemaError(path + ".phi.kind: expected scaled_norm|max_linear");
        }
    } catch (const SchemaError&) {
        throw;
    } catch (const DimensionMismatch&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    throw SchemaError(path + ".kind: expected halfspaces|base|sublinear");
}

inline ordered_json process_to_json(const Process& p) {
    if (const auto* h = std::get_if<Process::NormCoupledHalfspaces>(&p.rep)) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : h->rows) rows.push_back({{"g", r.g}, {"alpha", round_sig(r.alpha)}});
        return {{"kind", "halfspaces"}, {"rows", rows}};
    }
    if (const auto* b = std::get_if<Process::BaseGenerated>(&p.rep)) {
        return {{"kind", "base"},
                {"cone", cone_to_json(b->base.cone)},
                {"functional", b->base.functional},
                {"level", round_sig(b->base.level)}};
    }
    const auto& e = std::get<Process::SublinearEpigraph>(p.rep);
    if (const auto* s = std::get_if<SublinearFn::ScaledNorm>(&e.phi.rep))
        return {{"kind", "sublinear"},
                {"phi", {{"kind", "scaled_norm"}, {"mu", round_sig(s->mu)}}}};
    const auto& m = std::get<SublinearFn::MaxOfLinear>(e.phi.rep);
    ordered_json fs = ordered_json::array();
    for (const auto& f : m.functionals) fs.push_back(f);
    return {{"kind", "sublinear"}, {"phi", {{"kind", "max_linear"}, {"functionals", fs}}}};
}

// ------------------------------------------------------------- problem files

struct MapSpec {
    std::string catalog;                                  // catalog name, or
    std::vector<std::pair<Vec, std::vector<Vec>>> graph;  // explicit graph
    double truncation_radius = 10.0;
};

struct OmegaSpec {
    std::string kind;               // points | grid | half_disc
    std::vector<Vec> points;        // kind = points
    std::vector<Vec> ranges;        // kind = grid: per-dimension [lo, hi]
    double step = 0.1;              // kind = grid | half_disc
};

struct ProblemFile {
    int version = 1;
    SpaceSpec X, Y, Z;
    ConvexCone y_plus;
    std::optional<ConvexCone> z_plus;
    MapSpec F, G;
    OmegaSpec omega;
    std::optional<ordered_json> process_spec; // parsed lazily against Z, Y
    std::optional<Vec> y0;
    struct Defaults {
        double tol = kTolExact;
        double safety = 1.25;
        uint64_t seed = 0;
        double delta = 0.5;
    } defaults;
    ordered_json raw; // canonical parsed document, for digests and round-trips
};

inline std::vector<Vec> build_omega(const OmegaSpec& o, const SpaceSpec& X) {
    if (o.kind == "points") {
        for (const auto& p : o.points) check_dim(X, p, "omega.points");
        return o.points;
    }
    if (o.kind == "half_disc") {
        if (X.dim != 2) throw DimensionMismatch("omega.half_disc requires X.dim = 2");
        return catalog::half_disc_grid(o.step);
    }
    if (o.kind == "grid") {
        if (static_cast<int>(o.ranges.size()) != X.dim)
            throw DimensionMismatch("omega.grid: one [lo, hi] range per dimension");
        std::vector<Vec> pts = {{}};
        for (const auto& r : o.ranges) {
            std::vector<Vec> next;
            for (const auto& prefix : pts) {
                for (double v : step_grid(r[0], r[1], o.step)) {
                    Vec p = prefix;
                    p.push_back(v);
                    next.push_back(std::move(p));
                }
            }
            pts = std::move(next);
        }
        return pts;
    }
    throw SchemaError("omega.kind: expected points|grid|half_disc");
}

inline SampledMap build_map(const MapSpec& spec, const SpaceSpec& dom, const SpaceSpec& cod,
                            const std::vector<Vec>& omega, const std::string& which) {
    if (!spec.catalog.empty()) {
        SampledMap m = catalog::map_by_name(spec.catalog, omega);
        if (m.domain.dim != dom.dim || m.codomain.dim != cod.dim)
            throw DimensionMismatch(which + ": catalog map '" + spec.catalog +
                                    "' does not match the declared spaces");
        return m;
    }
    SampledMap m(dom, cod, which);
    m.truncation_radius = spec.truncation_radius;
    try {
        for (const auto& [x, vals] : spec.graph) m.add(x, vals);
    } catch (const DimensionMismatch&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(which + ": " + e.what());
    }
    return m;
}

inline ProblemFile parse_problem_json(const ordered_json& j) {
    io_detail::require_keys(j, "$", {"version", "spaces", "cones", "maps", "omega"},
                            {"process", "y0", "defaults"});
    ProblemFile p;
    p.raw = j;
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1)
        throw SchemaError("$.version: expected 1");
    p.version = 1;

    io_detail::require_keys(j["spaces"], "$.spaces", {"X", "Y", "Z"});
    p.X = parse_space(j["spaces"]["X"], "$.spaces.X");
    p.Y = parse_space(j["spaces"]["Y"], "$.spaces.Y");
    p.Z = parse_space(j["spaces"]["Z"], "$.spaces.Z");

    io_detail::require_keys(j["cones"], "$.cones", {"Y_plus"}, {"Z_plus"});
    p.y_plus = parse_cone(j["cones"]["Y_plus"], p.Y, "$.cones.Y_plus");
    if (j["cones"].contains("Z_plus"))
        p.z_plus = parse_cone(j["cones"]["Z_plus"], p.Z, "$.cones.Z_plus");

    auto parse_map_spec = [&](const ordered_json& m, const std::string& path) {
        MapSpec spec;
        if (m.contains("catalog")) {
            io_detail::require_keys(m, path, {"catalog"});
            spec.catalog = m["catalog"].get<std::string>();
        } else {
            io_detail::require_keys(m, path, {"graph"}, {"truncation_radius"});
            if (m.contains("truncation_radius"))
                spec.truncation_radius = m["truncation_radius"].get<double>();
            for (size_t i = 0; i < m["graph"].size(); ++i) {
                const auto& e = m["graph"][i];
                std::string ep = path + ".graph[" + std::to_string(i) + "]";
                io_detail::require_keys(e, ep, {"x", "values"});
                spec.graph.emplace_back(io_detail::parse_vec(e["x"], ep + ".x"),
                                        io_detail::parse_vec_list(e["values"], ep + ".values"));
            }
        }
        return spec;
    };
    io_detail::require_keys(j["maps"], "$.maps", {"F", "G"});
    p.F = parse_map_spec(j["maps"]["F"], "$.maps.F");
    p.G = parse_map_spec(j["maps"]["G"], "$.maps.G");

    const auto& o = j["omega"];
    if (!o.is_object() || !o.contains("kind"))
        throw SchemaError("$.omega: expected an object with 'kind'");
    p.omega.kind = o["kind"].get<std::string>();
    if (p.omega.kind == "points") {
        io_detail::require_keys(o, "$.omega", {"kind", "points"});
        p.omega.points = io_detail::parse_vec_list(o["points"], "$.omega.points");
    } else if (p.omega.kind == "grid") {
        io_detail::require_keys(o, "$.omega", {"kind", "ranges", "step"});
        p.omega.ranges = io_detail::parse_vec_list(o["ranges"], "$.omega.ranges");
        for (const auto& r : p.omega.ranges)
            if (r.size() != 2 || r[0] > r[1])
                throw SchemaError("$.omega.ranges: expected [lo, hi] pairs");
        p.omega.step = o["step"].get<double>();
    } else if (p.omega.kind == "half_disc") {
        io_detail::require_keys(o, "$.omega", {"kind", "step"});
        p.omega.step = o["step"].get<double>();
    } else {
        throw SchemaError("$.omega.kind: expected points|grid|half_disc");
    }

    if (j.contains("process")) p.process_spec = j["process"];
    if (j.contains("y0")) {
        p.y0 = io_detail::parse_vec(j["y0"], "$.y0");
        check_dim(p.Y, *p.y0, "$.y0");
    }
    if (j.contains("defaults")) {
        io_detail::require_keys(j["defaults"], "$.defaults", {},
                                {"tol", "safety", "seed", "delta"});
        const auto& d = j["defaults"];
        if (d.contains("tol")) p.defaults.tol = d["tol"].get<double>();
        if (d.contains("safety")) p.defaults.safety = d["safety"].get<double>();
        if (d.contains("seed")) p.defaults.seed = d["seed"].get<uint64_t>();
        if (d.contains("delta")) p.defaults.delta = d["delta"].get<double>();
    }
    return p;
}

inline ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (buf.str().empty()) throw ParseError("empty problem file: " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("problem file is not valid JSON: ") + e.what());
    }
    return parse_problem_json(j);
}

inline ordered_json problem_to_json(const ProblemFile& p) { return p.raw; }

/// Build the runtime instance. Maps are validated against Omega here.
inline SampledProblem build_sampled_problem(const ProblemFile& p) {
    std::vector<Vec> omega = build_omega(p.omega, p.X);
    SampledMap F = build_map(p.F, p.X, p.Y, omega, "F");
    SampledMap G = build_map(p.G, p.X, p.Z, omega, "G");
    if (p.z_plus) G = embed_inequality_constraint(G, *p.z_plus, 8);
    try {
        for (const auto& x : omega) {
            F.image_of(x);
            G.image_of(x);
        }
    } catch (const AnchorMissing& e) {
        throw SchemaError(std::string("maps must be total on omega: ") + e.what());
    }
    return SampledProblem{p.X, p.Y, p.Z, std::move(F), std::move(G), std::move(omega), p.y_plus};
}

/// Scalar view of a single-valued problem file (Y must be the real line).
inline ScalarProblem build_scalar_problem(const ProblemFile& p) {
    if (p.Y.dim != 1) throw Error("scalar commands need Y of dimension 1");
    SampledProblem sp = build_sampled_problem(p);
    ScalarProblem out;
    out.X = p.X;
    out.Z = p.Z;
    out.feasibility_tol = p.defaults.tol;
    for (const auto& x : sp.omega) {
        out.omega.push_back(x);
        std::vector<double> fv;
        for (const auto& v : sp.F.image_of(x)) fv.push_back(v[0]);
        out.f_values.push_back(std::move(fv));
        out.g_values.push_back(sp.G.image_of(x));
    }
    out.validate();
    return out;
}

} // namespace conelag
