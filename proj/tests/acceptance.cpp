#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>

#include "conelag/conelag.hpp"

using namespace conelag;

namespace {

struct Criterion {
    int index;
    std::string name;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    void finish(bool pass, double limit_s) const {
        double t = seconds();
        std::printf("[%s] criterion %2d: %s (%.2fs / limit %.0fs)\n", pass ? " PASS " : " FAIL ",
                    index, name.c_str(), t, limit_s);
        std::fflush(stdout);
        CHECK(pass);
        CHECK(t < limit_s);
    }
};

bool oracle_in_sector(const SectorRep& s, const Vec& y) {
    double r = std::hypot(y[0], y[1]);
    if (r < 1e-13) return true;
    double off = std::fmod(std::atan2(y[1], y[0]) - s.lo, kTwoPi);
    if (off < 0) off += kTwoPi;
    return off <= s.width + 1e-12 || off >= kTwoPi - 1e-12;
}

} // namespace

TEST_CASE("AC1: half-disc instance reproduction", "[acceptance]") {
    Criterion c{1, "half-disc planar instance: minimality, multiplier, orthant identity"};
    const double tol = 1e-9;
    auto prob = catalog::half_disc_problem(0.05);
    auto delta = catalog::half_disc_process();
    auto V = prob.compose_value_map();
    const auto& v0 = V.image_of({0.0});

    bool pass = nd_check_program(v0, {0.0, 0.0}, prob.y_plus, tol);
    pass = pass && distance_to_set(prob.Y, {0.0, 0.0}, v0) <= tol;

    auto aug = augmented_nd_check(prob, delta, {0.0, 0.0}, 4.0, 512, tol);
    pass = pass && aug.nondominated && aug.minimal_attained && aug.compatibility_ok;

    // F(x0) + Delta(G(x0)) contains the sampled orthant and meets -Y+ only at 0
    Rng rng(1);
    for (const auto& u : sample_rays(prob.y_plus, 128, rng)) {
        for (double s : {0.25, 1.0, 3.0}) {
            pass = pass && graph_contains(delta, {0.0}, scale(s, u), tol);
            pass = pass && !graph_contains(delta, {0.0}, scale(-s, u), tol);
        }
    }
    c.finish(pass, 5.0);
}

TEST_CASE("AC2: truncated sequence-space instance", "[acceptance]") {
    Criterion c{2, "coordinatewise multiplier on R^n, n in {3,5,10}"};
    const double tol = 1e-9;
    bool pass = true;
    for (int n : {3, 5, 10}) {
        auto prob = catalog::truncated_sequence_problem(n, 400, 17);
        auto delta = catalog::coordinatewise_norm_process(n);
        auto V = prob.compose_value_map();
        pass = pass && nd_check_program(V.image_of(zeros(n)), zeros(n), prob.y_plus, tol);
        pass = pass && distance_to_set(prob.Y, zeros(n), V.image_of(zeros(n))) <= tol;

        auto aug = augmented_nd_check(prob, delta, zeros(n), 4.0, 256, tol);
        pass = pass && aug.nondominated && aug.minimal_attained;

        // (F(x) + Delta(G(x))) cap (-Y+) inside {0} over >= 1e4 sampled pairs
        Rng rng(100 + n);
        long pairs = 0;
        for (const auto& x : prob.omega) {
            const Vec& z = prob.G.image_of(x).front();
            std::vector<Vec> members = support_points(delta, z);
            for (int k = 0; k < 8; ++k) {
                Vec up = rng.ball_vec(n);
                for (auto& u : up) u = 0.75 * std::abs(u); // stay inside the value set
                Vec m = add(members.front(), up);
                if (graph_contains(delta, z, m, tol)) members.push_back(m);
            }
            for (const auto& f : prob.F.image_of(x)) {
                for (const auto& m : members) {
                    Vec v = add(f, m);
                    ++pairs;
                    if (cone_contains(prob.y_plus, neg(v), tol) && norm_of(prob.Y, v) > tol)
                        pass = false;
                }
            }
        }
        pass = pass && pairs >= 10000;
    }
    c.finish(pass, 10.0);
}

TEST_CASE("AC3: slanted-cone equilibrium reproduction", "[acceptance]") {
    Criterion c{3, "discretized equilibrium instance, N=11, M=50, seed 7"};
    const double tol = 1e-9;
    auto rep = run_example_slanted_cone(11, 50, 7);
    bool pass = rep.consistency_ok && rep.equilibrium_ok && rep.multiplier_ok &&
                rep.compatibility_ok;

    // Delta(G(u0)) cap (-Y+) = {0}: 0 belongs, nonzero members never do
    auto delta = slanted_cone_process();
    auto cone = slanted_cone();
    pass = pass && graph_contains(delta, zeros(2), zeros(2), tol);
    Rng rng(3);
    for (const auto& u : sample_rays(cone, 128, rng)) {
        for (double s : {0.25, 1.0, 3.0}) {
            Vec w = scale(-s, u);
            if (graph_contains(delta, zeros(2), w, tol))
                pass = pass && cone_contains(cone, w, tol);
        }
    }
    c.finish(pass, 5.0);
}

TEST_CASE("AC4: scalar exact penalty", "[acceptance]") {
    Criterion c{4, "parabola instance: r0, Lipschitz estimate, exact recovery at mu=1.5"};
    auto prob = catalog::parabola_problem(0.001);

    auto cons = constrained_infimum(prob);
    bool pass = cons.value == 0.0;
    pass = pass && cons.argmin.size() == 1 && cons.argmin[0][0] == 0.0;

    double l_hat = lipschitz_at(prob.value_map(), {0.0}).constant;
    pass = pass && l_hat >= 0.99 && l_hat <= 1.0;

    auto pen = penalized_infimum(prob, SublinearFn::scaled_norm(real_line(), 1.5));
    pass = pass && std::abs(pen.value - 0.0) <= 1e-12;
    pass = pass && cons.value - pen.value <= 1e-12;
    pass = pass && !pen.argmin.empty() && pen.argmin[0][0] == 0.0;

    auto sweep = penalty_threshold_sweep(prob, {0.5, 1.0, 1.5}, 1e-12);
    pass = pass && sweep.rows[0].gap > 0.0; // mu = 0.5 is below the threshold
    c.finish(pass, 2.0);
}

TEST_CASE("AC5: dilation calculus property suite", "[acceptance]") {
    Criterion c{5, "500 random sectors: monotonicity and composition inclusions"};
    Rng rng(55);
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        double lo = rng.uniform(0.0, kTwoPi);
        double w = rng.uniform(0.05, 2.4);
        auto C = ConvexCone::make_sector(lo, lo + w);
        auto D = ConvexCone::make_sector(lo - rng.uniform(0.0, 0.3),
                                         lo + w + rng.uniform(0.0, 0.3));
        double mu = rng.uniform(0.02, 1.0 / 3.0 - 1e-9);
        double eps = rng.uniform(0.25 * mu, mu - 1e-12);

        auto C_eps = dilate_eps(C, eps);
        auto D_eps = dilate_eps(D, eps);
        auto C_mu = dilate_eps(C, mu);
        auto C_eps_mu = dilate_eps(C_eps, mu);
        auto C_3mu = dilate_eps(C, 3.0 * mu);
        auto C_qq = dilate_eps(dilate_eps(C, mu / 4.0), mu / 4.0);

        auto member = [&](const ConvexCone& K) {
            const auto& s = *K.sector;
            return scale(rng.uniform(0.1, 4.0), dir2(s.lo + rng.uniform01() * s.width));
        };
        for (int k = 0; k < 10; ++k) {
            if (!cone_contains(D_eps, member(C_eps), 1e-9)) ++violations;  // (i)
            if (!cone_contains(C_mu, member(C_eps), 1e-9)) ++violations;   // (iv)
            if (!cone_contains(C_3mu, member(C_eps_mu), 1e-9)) ++violations; // (v)
            if (!cone_contains(C_mu, member(C_qq), 1e-9)) ++violations;    // (vi)
            if (!cone_contains(C_eps, member(C), 1e-9)) ++violations;      // C in C_eps
        }
    }
    c.finish(violations == 0, 10.0);
}

TEST_CASE("AC6: norm-coupled cone identity", "[acceptance]") {
    Criterion c{6, "graph membership of Delta_alpha iff r >= alpha ||x||, 1e3 draws"};
    Rng rng(66);
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
        int dim = rng.uniform_int(1, 4);
        double alpha = rng.uniform(0.05, 5.0);
        Vec x = scale(rng.uniform(0.0, 3.0), rng.unit_vec(dim));
        double r = rng.uniform(-2.0, 16.0);
        bool lhs = graph_contains(delta_mu(euclidean(dim), alpha), x, {r}, 0.0);
        if (lhs != (r >= alpha * norm2(x))) ++disagreements;
    }
    c.finish(disagreements == 0, 5.0);
}

TEST_CASE("AC7: sublinear-process bijection", "[acceptance]") {
    Criterion c{7, "epigraph bijection roundtrips and the process-norm identity"};
    bool pass = true;
    Rng rng(77);

    for (int dim : {2, 3}) {
        std::vector<SublinearFn> phis = {
            SublinearFn::scaled_norm(euclidean(dim), rng.uniform(0.2, 3.0)),
            SublinearFn::max_of_linear(euclidean(dim),
                                       {rng.unit_vec(dim), rng.unit_vec(dim), rng.unit_vec(dim)})};
        for (const auto& phi : phis) {
            auto proc = upsilon(phi);
            auto back = upsilon_inverse(proc);
            for (int i = 0; i < 1000; ++i) {
                Vec z = scale(rng.uniform(0.0, 3.0), rng.unit_vec(dim));
                if (std::abs(back(z) - phi(z)) > 1e-9) pass = false;
            }
            auto round = upsilon(back);
            for (int i = 0; i < 1000; ++i) {
                Vec z = scale(rng.uniform(0.0, 2.0), rng.unit_vec(dim));
                Vec r = {rng.uniform(-2.0, 4.0)};
                if (graph_contains(round, z, r) != graph_contains(proc, z, r)) pass = false;
            }
            // ||Upsilon(phi)|| = sup over the sampled unit sphere of phi
            double sup = 0.0;
            Rng srng(770 + dim);
            for (int i = 0; i < 20000; ++i) sup = std::max(sup, phi(srng.unit_vec(dim)));
            if (std::abs(process_norm(proc, 20000, 1e9, 770 + dim) - sup) > 1e-6) pass = false;
        }
    }
    c.finish(pass, 10.0);
}

TEST_CASE("AC8: multiplier theorem meta-property", "[acceptance]") {
    Criterion c{8, "100 randomized scalar instances: certified processes stay multipliers"};
    Rng rng(88);
    int passed = 0, certified = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double w1 = rng.uniform(0.2, 2.0), w2 = rng.uniform(0.2, 2.0);
        double k1 = rng.uniform(-0.8, 0.8), k2 = rng.uniform(-0.8, 0.8);
        double s = rng.uniform(-1.0, 1.0);
        double a = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);

        SampledMap F(real_line(), real_line(), "f");
        SampledMap G(real_line(), real_line(), "g");
        std::vector<Vec> omega;
        for (double x : step_grid(-1.0, 1.0, 0.02)) {
            omega.push_back({x});
            F.add({x}, {{w1 * std::abs(x - k1) + w2 * std::abs(x - k2) + s * x}});
            G.add({x}, {{a * x}});
        }
        double r0 = w1 * std::abs(k1) + w2 * std::abs(k2);
        SampledProblem prob{real_line(), real_line(), real_line(), std::move(F), std::move(G),
                            std::move(omega), ConvexCone::halfline(+1.0)};

        MultiplierResult res = find_multiplier(prob, {r0}, 0.5);
        if (!res.certificate.valid()) continue;
        ++certified;
        auto aug = augmented_nd_check(prob, res.process, {r0}, 4.0 + std::abs(r0), 256);
        if (aug.nondominated && aug.minimal_attained) ++passed;
    }
    c.finish(certified == 100 && passed == 100, 30.0);
}

TEST_CASE("AC9: minimal-set oracle equivalence", "[acceptance]") {
    Criterion c{9, "min_set equals the naive double loop on 200 random instances"};
    Rng rng(99);
    bool pass = true;
    for (int trial = 0; trial < 200; ++trial) {
        double lo = rng.uniform(0.0, kTwoPi);
        double w = rng.uniform(0.1, 2.9);
        auto cone = ConvexCone::make_sector(lo, lo + w);
        int n = rng.uniform_int(1, 200);
        std::vector<Vec> pts;
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});

        OrderedSample sample(euclidean(2), cone, pts);
        auto impl = min_set(sample);

        std::vector<Vec> oracle;
        for (const auto& cand : pts) {
            bool nondominated = true;
            for (const auto& p : pts)
                if (oracle_in_sector(*cone.sector, sub(cand, p)) &&
                    !oracle_in_sector(*cone.sector, sub(p, cand))) {
                    nondominated = false;
                    break;
                }
            if (nondominated) oracle.push_back(cand);
        }
        std::sort(oracle.begin(), oracle.end(), lex_less);
        oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());
        if (impl != oracle) pass = false;
    }
    c.finish(pass, 20.0);
}

TEST_CASE("AC10: penalty monotonicity and bound", "[acceptance]") {
    Criterion c{10, "penalized infima nondecreasing in mu and bounded by r0, catalog-wide"};
    int violations = 0;
    for (auto& [name, prob] : catalog::scalar_catalog(0.005)) {
        double r0 = constrained_infimum(prob).value;
        double prev = -std::numeric_limits<double>::infinity();
        for (double mu : {0.0, 0.1, 0.35, 0.8, 1.6, 4.0, 12.0}) {
            auto pen = penalized_infimum(prob, SublinearFn::scaled_norm(real_line(), mu));
            if (pen.value < prev - 1e-15) ++violations;
            if (pen.value > r0 + 1e-12) ++violations;
            prev = pen.value;
        }
    }
    c.finish(violations == 0, 10.0);
}
