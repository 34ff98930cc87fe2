#include <doctest.h>

#include <cmath>

#include "wosnet/problems.hpp"
#include "wosnet/wos.hpp"

using namespace wosnet;

TEST_CASE("walk paths stay inside and record radii consistently") {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    RngStream rng(21);
    for (int t = 0; t < 50; ++t) {
        Vector x = 0.8 * ball.sample_uniform(rng);
        const WalkPath p = run_walk(ball, x, 0.01, 10000, rng);
        CHECK(p.points.size() == p.radii.size() + 1);
        CHECK_FALSE(p.capped);
        for (std::size_t k = 0; k < p.radii.size(); ++k) {
            CHECK(ball.contains(p.points[k + 1], 1e-9));
            CHECK(p.radii[k] ==
                  doctest::Approx(ball.dist_to_boundary(p.points[k])).epsilon(1e-12));
            CHECK((p.points[k + 1] - p.points[k]).norm() ==
                  doctest::Approx(p.radii[k]).epsilon(1e-12));
        }
        CHECK(ball.dist_to_boundary(p.points.back()) <= 0.01 + 1e-12);
        CHECK(p.n_eps == p.first_index_within(ball, 0.01));
    }
}

TEST_CASE("stepwise exit-time identity: sum of squared radii") {
    // E(sum_k r_k^2) telescopes to R^2 - |x|^2 on the ball
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    for (double x1 : {0.0, 0.5}) {
        Vector x = Vector::Zero(3);
        x(0) = x1;
        const long n = 4000;
        double mean = 0.0, ss = 0.0;
        std::vector<double> vals(n);
        for (long i = 0; i < n; ++i) {
            RngStream rng = RngStream::substream(22, static_cast<std::uint64_t>(i));
            const WalkPath p = run_walk(ball, x, 1e-4, 100000, rng);
            double s = 0.0;
            for (double r : p.radii) s += r * r;
            vals[i] = s;
            mean += s;
        }
        mean /= static_cast<double>(n);
        for (double v : vals) ss += (v - mean) * (v - mean);
        const double se = std::sqrt(ss / (n - 1.0) / n);
        CHECK(std::abs(mean - (1.0 - x1 * x1)) < 3.0 * se + 1e-3);
    }
}

TEST_CASE("boundary estimator recovers a harmonic function") {
    const ConvexDomain cube = ConvexDomain::cube(3, 1.0);
    Vector x(3);
    x << 0.1, -0.2, 0.3;
    const double eps = 1e-3;
    const WosEstimate est = estimate_boundary_term(
        cube, [](const Vector& y) { return y(0); }, x, 20000, eps, default_cap(cube, eps), 23, 4);
    CHECK(std::abs(est.value - 0.1) < 3.0 * est.std_error + cube.diameter() * eps);
    CHECK_FALSE(est.any_capped);
}

TEST_CASE("kernel functional is exact on constants") {
    for (int d : {3, 5, 10}) {
        RngStream rng(24);
        const WosEstimate est = k1_estimate([](const Vector&) { return 1.0; }, d, 500, rng);
        CHECK(std::abs(est.value - 1.0 / (2.0 * d)) <= 1e-15);
        CHECK(est.std_error == 0.0);
    }
}

TEST_CASE("kernel functional matches an independent radial quadrature") {
    // oracle: K1(|y|^2) via trapezoid quadrature of the radial kernel
    const int d = 3;
    const long steps = 200000;
    double integral = 0.0;
    // K1(v) for radial v(r) = r^2: kappa_d * int r^2 dF(r)
    for (long i = 0; i < steps; ++i) {
        const double r0 = static_cast<double>(i) / steps;
        const double r1 = static_cast<double>(i + 1) / steps;
        auto dens = [&](double r) { return 2.0 * d / (d - 2.0) * (r - std::pow(r, d - 1)); };
        integral += 0.5 * (r0 * r0 * dens(r0) + r1 * r1 * dens(r1)) * (r1 - r0);
    }
    const double oracle = integral / (2.0 * d);
    CHECK(oracle == doctest::Approx(0.05).epsilon(1e-6));  // = 1/20 at d = 3

    RngStream rng(25);
    const WosEstimate est =
        k1_estimate([](const Vector& y) { return y.squaredNorm(); }, d, 100000, rng);
    CHECK(std::abs(est.value - oracle) < 3.0 * est.std_error);
}

TEST_CASE("source estimator solves the constant-curvature problem at the origin") {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    const Vector x = Vector::Zero(3);
    const double eps = 1e-3;
    const WosEstimate est = estimate_source_term(
        ball, [](const Vector&) { return 6.0; }, x, 4000, 16, eps, default_cap(ball, eps), 26, 4);
    CHECK(std::abs(est.value - 1.0) < 3.0 * est.std_error + 2.0 * ball.diameter() * eps * 6.0);
}

TEST_CASE("combined solve matches superposition of analytic parts") {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    const Problem prob = get_problem("superposition", 3);
    Vector x(3);
    x << 0.3, 0.1, -0.2;
    SolveConfig cfg;
    cfg.m = 8000;
    cfg.threads = 4;
    cfg.seed = 27;
    const WosEstimate est = solve_point(ball, &prob.f, prob.g, x, cfg);
    CHECK(std::abs(est.value - prob.u(x)) <
          3.0 * est.std_error + 2.0 * ball.diameter() * est.eps * 6.0);
}

TEST_CASE("estimates are identical across thread counts") {
    const ConvexDomain ball = ConvexDomain::ball(4, 1.0);
    const Problem prob = get_problem("quadratic-ball", 4);
    Vector x(4);
    x << 0.2, 0.0, -0.1, 0.3;
    SolveConfig a;
    a.m = 2000;
    a.threads = 1;
    a.seed = 28;
    SolveConfig b = a;
    b.threads = 4;
    const WosEstimate ea = solve_point(ball, &prob.f, prob.g, x, a);
    const WosEstimate eb = solve_point(ball, &prob.f, prob.g, x, b);
    CHECK(ea.value == eb.value);
    CHECK(ea.std_error == eb.std_error);
}

TEST_CASE("standard errors scale like the inverse square root of the sample count") {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    const Problem prob = get_problem("harmonic-linear", 3);
    Vector x(3);
    x << 0.4, 0.0, 0.0;
    SolveConfig small;
    small.m = 4000;
    small.seed = 29;
    SolveConfig big = small;
    big.m = 16000;
    const double r = solve_point(ball, nullptr, prob.g, x, big).std_error /
                     solve_point(ball, nullptr, prob.g, x, small).std_error;
    CHECK(r > 0.4);
    CHECK(r < 0.6);
}

TEST_CASE("error budget formulas match an independent recomputation") {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    const double diam = 2.0, vol = ball.volume();
    const long M = 500;
    const double eps = 0.01, dg = 0.05;
    const BoundaryNorms bn{2.0, 1.5};  // lap_g, g
    const ErrorBudget b = boundary_error_budget(M, eps, dg, bn, ball);
    const double expect = 0.75 * 4.0 * diam * diam * vol * eps * eps + 3.0 * vol * dg * dg +
                          3.0 * vol * (1.5 + dg) * (1.5 + dg) / M + diam * diam / M;
    CHECK(b.total_sq == doctest::Approx(expect).epsilon(1e-13));
    CHECK(b.term("surrogate") == doctest::Approx(3.0 * vol * dg * dg).epsilon(1e-13));

    const long M1 = 400, M2 = 16;
    const double df = 0.02, f_eff = 3.0 + df;
    const SourceNorms sn{3.0};
    const ErrorBudget s = source_error_budget(M1, M2, eps, df, sn, ball, 3);
    const double d4 = diam * diam * diam * diam;
    const double expect_s = 4.0 * vol * (d4 / 16.0) / 9.0 * df * df +
                            4.0 * vol * diam * diam * f_eff * f_eff * eps * eps +
                            4.0 * vol * (d4 / 16.0) / 9.0 * f_eff * f_eff / M2 +
                            8.0 * vol * (1.0 / 6.0) * f_eff * f_eff * d4 * (2.0 - 3.0 / 5.0) / M1 +
                            diam * diam / M1;
    CHECK(s.total_sq == doctest::Approx(expect_s).epsilon(1e-13));

    // monotone in every driver
    CHECK(boundary_error_budget(2 * M, eps, dg, bn, ball).total_sq < b.total_sq);
    CHECK(boundary_error_budget(M, 2.0 * eps, dg, bn, ball).total_sq > b.total_sq);
    CHECK(source_error_budget(M1, M2, eps, 2.0 * df, sn, ball, 3).total_sq > s.total_sq);
}

TEST_CASE("empirical path counts respect the quadratic shell bound") {
    for (const ConvexDomain& dom : {ConvexDomain::ball(3, 1.0), ConvexDomain::cube(5, 1.0)}) {
        RngStream prng(30);
        std::vector<Vector> probes(10);
        for (auto& p : probes) p = dom.sample_uniform(prng);
        for (double eps : {0.05, 0.1}) {
            const SupNepsResult r =
                estimate_sup_n_eps(dom, eps, probes, 30, default_cap(dom, eps), 31);
            CHECK(r.empirical <= r.bound);
            CHECK_FALSE(r.any_capped);
        }
    }
}

TEST_CASE("source estimation requires at least three dimensions") {
    const ConvexDomain disk = ConvexDomain::ball(2, 1.0);
    const Vector x = Vector::Zero(2);
    SolveConfig cfg;
    ScalarField f = [](const Vector&) { return 1.0; };
    ScalarField g = [](const Vector&) { return 0.0; };
    CHECK_THROWS_AS(solve_point(disk, &f, g, x, cfg), std::invalid_argument);
    CHECK_NOTHROW(solve_point(disk, nullptr, g, x, cfg));
}
