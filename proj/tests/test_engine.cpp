#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "seedseg/engine.hpp"
#include "seedseg/errors.hpp"
#include "support/oracles.hpp"

using namespace seedseg;

namespace {

bool sameBits(const GridField& a, const GridField& b) {
    return a.size() == b.size() && std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(double)) == 0;
}

// Seeds on a 32^2 grid: an Inside block on the left, an Outside block on the right.
SeedMask blockSeeds(const GridSpec& s) {
    return unite(synthBarSeed({0.25, 0.5}, 0.1, 0.2, SeedLabel::Inside, s),
                 synthBarSeed({0.75, 0.5}, 0.1, 0.2, SeedLabel::Outside, s));
}

}  // namespace

TEST_SUITE("engine") {
    TEST_CASE("initial circle values") {
        const auto s = GridSpec::unitSquare(10);
        const double r = std::sqrt(0.08);
        const auto u = initialCircle({0.5, 0.5}, r, s);
        CHECK(u(5, 5) == doctest::Approx(-0.282843).epsilon(1e-6));
        const auto on = initialCircle({0.2, 0.5}, 0.3, s);
        CHECK(std::abs(on(5, 5)) <= 1e-15);
        const auto far = initialCircle({0.0, 0.0}, 0.3, s);
        CHECK(far(6, 0) == doctest::Approx(0.3));
        CHECK_THROWS_AS(initialCircle({0.5, 0.5}, 0.0, s), ParameterError);
    }

    TEST_CASE("constraint fields follow the labels") {
        const auto s = GridSpec::unitSquare(32);
        const auto mask = blockSeeds(s);
        const auto cf = buildConstraints(mask, 0.05, 1e6);
        for (std::size_t I = 0; I < s.nodeCount(); ++I) {
            if (mask[I] == SeedLabel::Inside) {
                CHECK(cf.w[I] == -1e6);
                CHECK(cf.v[I] == -0.05);
            } else if (mask[I] == SeedLabel::Outside) {
                CHECK(cf.w[I] == 0.05);
                CHECK(cf.v[I] == 1e6);
            } else {
                CHECK(cf.w[I] == -1e6);
                CHECK(cf.v[I] == 1e6);
            }
        }
        CHECK_THROWS_AS(buildConstraints(mask, 0.0, 1e6), ParameterError);
        CHECK_THROWS_AS(buildConstraints(mask, 0.1, 0.1), ParameterError);
    }

    TEST_CASE("clamping") {
        const auto s = GridSpec::unitSquare(32);
        const auto cf = buildConstraints(blockSeeds(s), 0.05, 1e6);
        const auto u = clampToConstraints(GridField(s, 0.0), cf);
        CHECK(u(s.N1() / 4, 16) == -0.05);
        CHECK(u(3 * s.N1() / 4, 16) == 0.05);
        CHECK(u(16, 2) == 0.0);
        CHECK_THROWS_AS(clampToConstraints(GridField(GridSpec::unitSquare(4)), cf), ShapeError);
    }

    TEST_CASE("signed distance to Inside seeds") {
        const auto s = GridSpec::unitSquare(32);
        const auto mask = blockSeeds(s);
        const auto u = signedDistanceToSeeds(mask);
        for (std::size_t I = 0; I < s.nodeCount(); ++I) CHECK((u[I] < 0.0) == (mask[I] == SeedLabel::Inside));
        // half a step off the front on both sides
        const int edge = static_cast<int>(std::floor((0.25 + 0.05) / s.h1()));
        CHECK(u(edge, 16) == doctest::Approx(-0.5 * s.h1()));
        CHECK(u(edge + 1, 16) == doctest::Approx(0.5 * s.h1()));
        CHECK_THROWS_AS(signedDistanceToSeeds(SeedMask(s)), std::invalid_argument);
    }

    TEST_CASE("initial level set selection") {
        const auto s = GridSpec::unitSquare(16);
        SegmentationParams p;
        const auto fallback = initialLevelSet(SeedMask(s), p);
        CHECK(fallback(8, 8) == doctest::Approx(-std::sqrt(0.08)));
        CHECK(sameBits(initialLevelSet(blockSeeds(s), p), signedDistanceToSeeds(blockSeeds(s))));
        p.initCircle = Circle{{0.3, 0.3}, 0.1};
        CHECK(sameBits(initialLevelSet(blockSeeds(s), p), initialCircle({0.3, 0.3}, 0.1, s)));
    }

    TEST_CASE("curvature flow moves a circle inward") {
        const auto s = GridSpec::unitSquare(64);
        const auto u0 = initialCircle({0.5, 0.5}, 0.25, s);
        const auto free = buildConstraints(SeedMask(s), 0.05, 1e6);
        SegmentationParams p;
        p.epsilon = 1e-4;
        const auto r = timeStep(u0, uniformEdgeMap(s), free, p, 10 * s.h1() * s.h2());
        double sum = 0.0;
        int n = 0;
        for (const auto& pl : extractContour(u0))
            for (const auto& q : pl.points) {
                // bilinear read of the new field at the old zero set
                const double fx = q.x1 / s.h1(), fy = q.x2 / s.h2();
                const int i = std::min(static_cast<int>(fx), s.N1() - 1), j = std::min(static_cast<int>(fy), s.N2() - 1);
                const double a = fx - i, b = fy - j;
                sum += (1 - a) * (1 - b) * r.u(i, j) + a * (1 - b) * r.u(i + 1, j) + (1 - a) * b * r.u(i, j + 1) +
                       a * b * r.u(i + 1, j + 1);
                ++n;
            }
        REQUIRE(n > 0);
        CHECK(sum / n > 0.0);
        // analytic shrink over one step is about tau / r
        CHECK(sum / n == doctest::Approx(10 * s.h1() * s.h2() / 0.25).epsilon(0.25));
    }

    TEST_CASE("a tiny step is the identity up to clamping") {
        const auto s = GridSpec::unitSquare(32);
        const auto mask = blockSeeds(s);
        const auto cf = buildConstraints(mask, 0.05, 1e6);
        const auto u0 = initialCircle({0.4, 0.5}, 0.2, s);
        const auto r = timeStep(u0, uniformEdgeMap(s), cf, SegmentationParams{}, 1e-12);
        const auto clamped = clampToConstraints(u0, cf);
        for (int j = 1; j < s.N2(); ++j)
            for (int i = 1; i < s.N1(); ++i) CHECK(std::abs(r.u(i, j) - clamped(i, j)) <= 1e-9);
    }

    TEST_CASE("seed nodes keep their sign through a run") {
        const auto s = GridSpec::unitSquare(32);
        const auto mask = blockSeeds(s);
        SegmentationParams p;
        p.steps = 15;
        p.tau = 4 * s.h1() * s.h2();
        p.initCircle = Circle{{0.5, 0.5}, 0.3};
        const auto cf = buildConstraints(mask, p.deltaFor(s), p.bigM);
        int seen = 0;
        bool ok = true;
        const auto result = run(GridField(s, 1.0), mask, p, [&](const Snapshot& snap) {
            ++seen;
            for (std::size_t I = 0; I < s.nodeCount(); ++I) {
                if (snap.u[I] < cf.w[I] || snap.u[I] > cf.v[I]) ok = false;
                if (mask[I] == SeedLabel::Inside && !(snap.u[I] <= -p.deltaFor(s))) ok = false;
                if (mask[I] == SeedLabel::Outside && !(snap.u[I] >= p.deltaFor(s))) ok = false;
            }
        });
        CHECK(ok);
        CHECK(seen == 15);
        CHECK(result.history.size() == 15u);
        CHECK(result.status == RunStatus::HorizonReached);
        CHECK(result.final.step == 15);
        CHECK(result.final.time == doctest::Approx(15 * *p.tau));
    }

    TEST_CASE("stationary input stops on the steady criterion") {
        const auto s = GridSpec::unitSquare(16);
        SegmentationParams p;
        const auto cf = buildConstraints(SeedMask(s), p.deltaFor(s), p.bigM);
        const auto r = timeStep(GridField(s, 0.7), uniformEdgeMap(s), cf, p);
        CHECK(maxAbsDiff(r.u, GridField(s, 0.7)) < p.steadyTol);

        p.steadyTol = 10.0;
        const auto res = run(GridField(s, 0.5), SeedMask(s), p);
        CHECK(res.status == RunStatus::Steady);
        CHECK(res.history.size() == 1u);
    }

    TEST_CASE("final time lands exactly") {
        const auto s = GridSpec::unitSquare(16);
        SegmentationParams p;
        p.tau = 0.003;
        p.finalTime = 0.01;
        const auto res = run(GridField(s, 1.0), SeedMask(s), p);
        REQUIRE(res.history.size() == 4u);
        CHECK(res.final.time == 0.01);
        CHECK(res.history[2].time == doctest::Approx(0.009));
    }

    TEST_CASE("without seeds PSOR and plain SOR give identical runs") {
        const auto s = GridSpec::unitSquare(24);
        SegmentationParams p;
        p.steps = 5;
        p.tau = 5 * s.h1() * s.h2();
        GridField img(s, 1.0);
        for (int j = 6; j < 18; ++j) img(8, j) = 0.0;
        const auto a = run(img, SeedMask(s), p);
        const auto b = run(img, SeedMask(s), p, {}, RunOptions{StepSolver::Sor, {}});
        CHECK(sameBits(a.final.u, b.final.u));
        for (std::size_t k = 0; k < a.history.size(); ++k)
            CHECK(a.history[k].report.sweeps == b.history[k].report.sweeps);
    }

    TEST_CASE("comparison principle for one step") {
        const GridSpec s(1, 1, 6, 6);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> d(-1, 1), up(0, 0.5);
        for (int trial = 0; trial < 10; ++trial) {
            GridField lo(s), hi(s), g(s);
            for (std::size_t I = 0; I < s.nodeCount(); ++I) {
                lo[I] = d(rng);
                hi[I] = lo[I] + up(rng);
                g[I] = 0.1 + 0.9 * up(rng) * 2;
            }
            // one operator, two ordered right-hand sides
            const auto ref = oracle::semiImplicitStep(lo, g, 0.05, 0.1);
            std::vector<double> bhi = ref.b;
            for (int j = 1; j < 6; ++j)
                for (int i = 1; i < 6; ++i) bhi[s.at(i, j)] = hi(i, j);
            const auto ulo = oracle::luSolve(ref.a, ref.b);
            const auto uhi = oracle::luSolve(ref.a, bhi);
            for (std::size_t I = 0; I < s.nodeCount(); ++I) CHECK(ulo[I] <= uhi[I] + 1e-12);

            // and through the library: PSOR with common bounds preserves order too
            const PentaSystem sys = assemble(lo, edgeMapFromNodes(g), 0.05, 0.1);
            PentaSystem sysHi = sys;
            for (int j = 1; j < 6; ++j)
                for (int i = 1; i < 6; ++i) sysHi.rhs[s.at(i, j)] = hi(i, j);
            Bounds b = Bounds::unbounded(s.nodeCount());
            b.lower[s.at(2, 2)] = 0.1;
            b.upper[s.at(4, 3)] = -0.1;
            const SolverParams sp{1.2, 1e-13, 10000};
            const auto rlo = psorSolve(sys, b, GridField(s), sp);
            const auto rhi = psorSolve(sysHi, b, GridField(s), sp);
            for (std::size_t I = 0; I < s.nodeCount(); ++I) CHECK(rlo.u[I] <= rhi.u[I] + 1e-10);
        }
    }

    TEST_CASE("step solver residual target") {
        SegmentationParams p;
        CHECK(p.stepSolver().residualTol == doctest::Approx(100 * p.solver.tol));
        p.residualFactor = 0.0;
        CHECK(p.stepSolver().residualTol == 0.0);
        p.solver.residualTol = 1e-5;
        CHECK(p.stepSolver().residualTol == 1e-5);
    }

    TEST_CASE("parameter validation names the field") {
        const auto s = GridSpec::unitSquare(8);
        const auto bad = [&](auto&& tweak) {
            SegmentationParams p;
            tweak(p);
            CHECK_THROWS_AS(p.validate(s), ParameterError);
        };
        bad([](auto& p) { p.epsilon = 0.0; });
        bad([](auto& p) { p.edgeStop.lambda = -1.0; });
        bad([](auto& p) { p.sigma = 0.0; });
        bad([](auto& p) { p.truncationRadius = 1.0; });
        bad([](auto& p) { p.tau = -1.0; });
        bad([](auto& p) { p.solver.omega = 2.0; });
        bad([](auto& p) { p.residualFactor = -1.0; });
        bad([](auto& p) { p.finalTime = 0.0; });
        bad([](auto& p) { p.steps = 0; });
        bad([](auto& p) { p.delta = 0.0; });
        bad([](auto& p) { p.bigM = 0.01; });
        bad([](auto& p) { p.initCircle = Circle{{0.5, 0.5}, 0.0}; });
        try {
            SegmentationParams p;
            p.epsilon = -1;
            p.validate(s);
        } catch (const ParameterError& e) {
            CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
        }
        CHECK_NOTHROW(SegmentationParams{}.validate(s));
    }

    TEST_CASE("cancellation ends the run as failed") {
        const auto s = GridSpec::unitSquare(16);
        SegmentationParams p;
        p.steps = 50;
        int polls = 0;
        const auto res = run(GridField(s, 1.0), SeedMask(s), p, {}, RunOptions{StepSolver::Psor, [&] { return ++polls > 3; }});
        CHECK(res.status == RunStatus::Failed);
        CHECK(res.history.size() == 3u);
        CHECK(res.error == "run cancelled");
    }

    TEST_CASE("mismatched mask") {
        CHECK_THROWS_AS(run(GridField(GridSpec::unitSquare(8)), SeedMask(GridSpec::unitSquare(9)), {}), ShapeError);
    }
}
