#include <catch2/catch_amalgamated.hpp>

#include "conelag/catalog.hpp"
#include "conelag/process.hpp"

using namespace conelag;

namespace {

/// Sampled members of Gph(Delta): support points lifted by cone directions.
std::vector<std::pair<Vec, Vec>> sample_graph_members(const Process& p, Rng& rng, int count) {
    std::vector<std::pair<Vec, Vec>> out;
    while (static_cast<int>(out.size()) < count) {
        Vec z = scale(rng.uniform(0.0, 2.0), rng.unit_vec(p.domain.dim));
        for (const auto& s : support_points(p, z)) {
            Vec y = s;
            for (int lift = 0; lift < 3 && static_cast<int>(out.size()) < count; ++lift) {
                if (graph_contains(p, z, y, 1e-9)) out.emplace_back(z, y);
                Vec up(static_cast<size_t>(p.codomain.dim), 0.0);
                for (auto& u : up) u = rng.uniform(0.0, 1.0);
                y = add(y, up);
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("graph membership per representation", "[process]") {
    // the half-disc multiplier: Delta(z) = {y : y1 >= |z|, y2 >= |z|}
    auto d38 = catalog::half_disc_process();
    CHECK(graph_contains(d38, {0.5}, {0.5, 0.7}));
    CHECK_FALSE(graph_contains(d38, {0.5}, {0.5, 0.3}));
    CHECK(graph_contains(d38, {0.0}, {0.0, 0.0}));

    auto dmu = delta_mu(euclidean(3), 2.0);
    Vec unit = normalized(Vec{1.0, 2.0, 2.0});
    CHECK(graph_contains(dmu, unit, {2.0}));       // boundary
    CHECK(graph_contains(dmu, zeros(3), {0.0}));   // origin
    CHECK_FALSE(graph_contains(dmu, unit, {1.9}));

    // base-generated membership via the base decomposition
    auto base = base_from_functional(ConvexCone::orthant(2), {1.0, 1.0}, 1.0);
    auto pb = build_from_base(real_line(), base);
    CHECK(graph_contains(pb, {0.5}, {0.3, 0.3}));        // lambda_y = 0.6 >= 0.5
    CHECK_FALSE(graph_contains(pb, {0.7}, {0.3, 0.3}));  // lambda_y = 0.6 < 0.7
    CHECK_FALSE(graph_contains(pb, {0.0}, {-0.1, 0.5})); // y outside the cone
    CHECK(graph_contains(pb, {0.0}, {0.0, 0.0}));
}

TEST_CASE("cone(B_Z x {alpha}) equals the norm-coupled halfspace", "[process]") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        int dim = rng.uniform_int(1, 4);
        double alpha = rng.uniform(0.05, 4.0);
        Vec x = scale(rng.uniform(0.0, 3.0), rng.unit_vec(dim));
        double r = rng.uniform(-1.0, 13.0);
        auto p = delta_mu(euclidean(dim), alpha);
        bool lhs = graph_contains(p, x, {r}, 0.0);
        bool rhs = r >= alpha * norm2(x);
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("value-set evaluation through probes", "[process]") {
    auto d38 = catalog::half_disc_process();
    std::vector<Vec> probes;
    for (double a : step_grid(-2, 2, 0.5))
        for (double b : step_grid(-2, 2, 0.5)) probes.push_back({a, b});

    for (const auto& y : evaluate(d38, {0.0}, probes)) {
        CHECK(y[0] >= 0.0);
        CHECK(y[1] >= 0.0);
    }

    auto dmu = delta_mu(real_line(), 1.0);
    std::vector<Vec> rprobes;
    for (double r : step_grid(-2, 2, 0.25)) rprobes.push_back({r});
    for (const auto& y : evaluate(dmu, {0.0}, rprobes)) CHECK(y[0] >= 0.0);

    // base-generated at ||z|| = 1: exactly the cone members with f(y) >= 1
    auto base = base_from_functional(ConvexCone::orthant(2), {1.0, 1.0}, 1.0);
    auto pb = build_from_base(real_line(), base);
    for (const auto& y : probes) {
        bool in = graph_contains(pb, {1.0}, y, 1e-12);
        bool expect = y[0] >= -1e-12 && y[1] >= -1e-12 && (y[0] + y[1]) >= 1.0 - 1e-12;
        CHECK(in == expect);
    }
}

TEST_CASE("process norms", "[process]") {
    CHECK(process_norm(delta_mu(euclidean(2), 3.0)) == Catch::Approx(3.0).margin(1e-9));

    auto ups = upsilon(SublinearFn::scaled_norm(real_line(), 1.0));
    CHECK(process_norm(ups) == Catch::Approx(1.0).margin(1e-12));

    auto zero = upsilon(SublinearFn::scaled_norm(real_line(), 0.0));
    CHECK(process_norm(zero) == Catch::Approx(0.0).margin(1e-15));

    // norm of the half-disc multiplier: d(0, Delta(z)) = sqrt(2)|z|
    CHECK(process_norm(catalog::half_disc_process()) ==
          Catch::Approx(std::sqrt(2.0)).margin(1e-6));

    // empty value sets past the cap: {r >= |z|} cap {-r >= |z|}
    auto bad = Process::halfspaces(real_line(), real_line(), {{{1.0}, 1.0}, {{-1.0}, 1.0}});
    CHECK_THROWS_AS(process_norm(bad), Unbounded);
}

TEST_CASE("norm of an epigraph process is the sphere supremum", "[process]") {
    Rng rng(8);
    for (int dim : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Vec> fs;
            for (int k = 0; k < 3; ++k)
                fs.push_back(scale(rng.uniform(0.2, 2.0), rng.unit_vec(dim)));
            SublinearFn phi = SublinearFn::max_of_linear(euclidean(dim), fs);
            auto p = upsilon(phi);
            double sup = 0.0;
            Rng prng(91 + trial);
            for (int i = 0; i < 20000; ++i) sup = std::max(sup, phi(prng.unit_vec(dim)));
            CHECK(process_norm(p, 20000, 1e9, 91 + trial) == Catch::Approx(sup).margin(1e-6));
        }
    }
}

TEST_CASE("Upsilon and its inverse", "[process]") {
    // phi = mu ||.|| matches Delta_mu membership on a grid
    auto phi = SublinearFn::scaled_norm(euclidean(2), 1.5);
    auto p = upsilon(phi);
    auto dmu = delta_mu(euclidean(2), 1.5);
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        Vec z = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Vec r = {rng.uniform(-1, 4)};
        CHECK(graph_contains(p, z, r) == graph_contains(dmu, z, r));
    }

    // epigraph of |f| as the max of a functional and its negation
    auto absf = SublinearFn::max_of_linear(real_line(), {{2.0}, {-2.0}});
    CHECK(absf({0.5}) == Catch::Approx(1.0));
    CHECK(upsilon(absf).codomain.dim == 1);

    // a single linear functional gives the halfplane-graph process
    auto lin = SublinearFn::max_of_linear(euclidean(2), {{1.0, -1.0}});
    auto pl = upsilon(lin);
    CHECK(graph_contains(pl, {1.0, 0.0}, {1.0}));
    CHECK(graph_contains(pl, {0.0, 1.0}, {-1.0})); // phi = -1 there
    CHECK_FALSE(graph_contains(pl, {1.0, 0.0}, {0.5}));

    CHECK_THROWS_AS(upsilon(SublinearFn::scaled_norm(euclidean(2), -1.0)), NotSublinear);

    // inverse closed forms
    auto inv = upsilon_inverse(delta_mu(euclidean(2), 2.5));
    CHECK(std::get<SublinearFn::ScaledNorm>(inv.rep).mu == Catch::Approx(2.5));

    auto zero_phi = upsilon_inverse(upsilon(SublinearFn::scaled_norm(euclidean(3), 0.0)));
    CHECK(zero_phi({0.3, -0.4, 1.0}) == 0.0);

    auto whole = Process::halfspaces(real_line(), real_line(), {{{0.0}, 0.0}});
    CHECK_THROWS_AS(upsilon_inverse(whole), NotPositive); // Delta(0) = R
}

TEST_CASE("Upsilon roundtrips on 1e3 samples", "[process]") {
    Rng rng(77);
    // phi -> process -> phi pointwise
    std::vector<SublinearFn> phis = {
        SublinearFn::scaled_norm(euclidean(2), 0.8),
        SublinearFn::max_of_linear(euclidean(2), {{1.0, 0.2}, {-0.5, 1.0}, {0.3, -0.9}})};
    for (const auto& f : phis) {
        auto back = upsilon_inverse(upsilon(f));
        for (int i = 0; i < 1000; ++i) {
            Vec z = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
            CHECK(back(z) == Catch::Approx(f(z)).margin(1e-9));
        }
    }
    // process -> phi -> process membership on a grid
    auto dmu = delta_mu(euclidean(2), 1.2);
    auto round = upsilon(upsilon_inverse(dmu));
    for (int i = 0; i < 1000; ++i) {
        Vec z = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
        Vec r = {rng.uniform(-1, 4)};
        CHECK(graph_contains(round, z, r) == graph_contains(dmu, z, r));
    }
}

TEST_CASE("base-generated processes satisfy the construction bounds", "[process]") {
    auto base = base_from_functional(ConvexCone::orthant(2), {1.0, 1.0}, 1.0);
    auto p = build_from_base(real_line(), base);

    // C inside Delta(0)
    Rng rng(3);
    for (const auto& u : sample_rays(base.cone, 64, rng))
        for (double r : {0.25, 1.0, 4.0}) CHECK(graph_contains(p, {0.0}, scale(r, u)));

    // (-C) cap Delta(0) = {0}
    for (const auto& u : sample_rays(base.cone, 64, rng))
        CHECK_FALSE(graph_contains(p, {0.0}, scale(-1.0, u)));

    // ||Delta|| <= delta_B (equality for this construction)
    CHECK(process_norm(p) <= base.delta + 1e-9);
    CHECK(process_norm(p) == Catch::Approx(base.delta).margin(1e-9));

    // 1-D: base {mu} reproduces Delta_mu membership
    auto b1 = base_from_functional(ConvexCone::halfline(+1.0), {1.0}, 2.0);
    auto p1 = build_from_base(real_line(), b1);
    auto d1 = delta_mu(real_line(), 2.0);
    for (int i = 0; i < 500; ++i) {
        Vec z = {rng.uniform(-2, 2)};
        Vec r = {rng.uniform(-1, 5)};
        CHECK(graph_contains(p1, z, r, 1e-12) == graph_contains(d1, z, r, 1e-12));
    }

    CHECK_THROWS_AS(build_from_base(real_line(), ConeBase{base.cone, {1.0, 1.0}, 1.0, 1.0, 0.0}),
                    UnboundedBase);
}

TEST_CASE("constructed graphs are cones and convex on samples", "[process]") {
    Rng rng(123);
    auto base = base_from_functional(ConvexCone::orthant(2), {1.0, 2.0}, 1.5);
    std::vector<Process> procs = {
        catalog::half_disc_process(),
        delta_mu(euclidean(2), 0.7),
        build_from_base(euclidean(2), base),
        upsilon(SublinearFn::max_of_linear(euclidean(2), {{1.0, 0.0}, {0.0, 1.0}})),
    };
    for (const auto& p : procs) {
        auto members = sample_graph_members(p, rng, 60);
        for (const auto& [z, y] : members) {
            for (double lam : {0.0, 0.5, 2.0})
                CHECK(graph_contains(p, scale(lam, z), scale(lam, y), 1e-9));
        }
        for (size_t i = 0; i + 1 < members.size(); i += 2) {
            Vec zm = scale(0.5, add(members[i].first, members[i + 1].first));
            Vec ym = scale(0.5, add(members[i].second, members[i + 1].second));
            CHECK(graph_contains(p, zm, ym, 1e-9));
        }
    }
}

TEST_CASE("support points are minimal members", "[process]") {
    auto d38 = catalog::half_disc_process();
    auto sp = support_points(d38, {0.5});
    REQUIRE(sp.size() == 1);
    CHECK(sp[0][0] == Catch::Approx(0.5).margin(1e-9));
    CHECK(sp[0][1] == Catch::Approx(0.5).margin(1e-9));
    CHECK(graph_contains(d38, {0.5}, sp[0], 1e-9));

    auto base2 = base_from_functional(ConvexCone::orthant(2), {1.0, 1.0}, 1.0);
    auto pb = build_from_base(real_line(), base2);
    for (const auto& s : support_points(pb, {2.0})) {
        CHECK(graph_contains(pb, {2.0}, s, 1e-9));
        CHECK(base2.lambda_of(s) == Catch::Approx(2.0).margin(1e-9));
    }
}
