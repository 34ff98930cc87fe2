#include "wosnet/verify.hpp"

#include <cmath>

#include "wosnet/problems.hpp"
#include "wosnet/relu_builders.hpp"
#include "wosnet/synthesis.hpp"
#include "wosnet/wos.hpp"

namespace wosnet {

namespace {

using relu::Matrix;
using relu::ReluNet;

ReluNet random_net(RngStream& rng, int input_dim, int depth, int max_width) {
    std::vector<relu::Layer> layers;
    int prev = input_dim;
    for (int l = 0; l < depth; ++l) {
        const int w = (l == depth - 1)
                          ? 1
                          : 1 + static_cast<int>(rng.uniform() * max_width);
        Matrix A(w, prev);
        relu::Vector b(w);
        for (int r = 0; r < w; ++r) {
            b(r) = rng.normal();
            for (int c = 0; c < prev; ++c) A(r, c) = rng.normal();
        }
        layers.push_back({std::move(A), std::move(b)});
        prev = w;
    }
    return ReluNet(std::move(layers));
}

struct Suite {
    std::vector<CheckResult> results;
    std::string only;

    bool wants(const std::string& name) const {
        return only.empty() || name.rfind(only, 0) == 0;
    }

    void add(const std::string& name, double measured, double bound,
             const std::string& detail, bool pass_iff_leq = true) {
        CheckResult r;
        r.name = name;
        r.measured = measured;
        r.bound = bound;
        r.detail = detail;
        r.passed = pass_iff_leq ? (measured <= bound) : (measured >= bound);
        results.push_back(std::move(r));
    }
};

void check_calculus(Suite& s, std::uint64_t seed) {
    RngStream rng = RngStream::substream(seed, 101);
    double worst_rel = 0.0;
    long size_violations = 0;
    for (int pair = 0; pair < 100; ++pair) {
        const int din = 2;
        const ReluNet inner = random_net(rng, din, 1 + pair % 3, 4);
        const ReluNet outer = random_net(rng, 1, 1 + (pair / 3) % 3, 4);
        const ReluNet comp = relu::compose(outer, inner);
        if (comp.size() > 2 * outer.size() + 2 * inner.size()) ++size_violations;

        const ReluNet other = random_net(rng, din, 1 + (pair / 2) % 3, 4);
        const double a = rng.normal(), b = rng.normal();
        const ReluNet lc = relu::linear_combination({a, b}, {inner, other});
        const int L = std::max(inner.depth(), other.depth());
        const long lc_bound = (inner.size() + inner.width() + 2 * (L - inner.depth()) + 1) +
                              (other.size() + other.width() + 2 * (L - other.depth()) + 1);
        if (lc.size() > lc_bound) ++size_violations;

        const ReluNet par = relu::parallelize({inner, other}, true);
        for (int t = 0; t < 10; ++t) {
            Vector x(din);
            x << rng.normal(), rng.normal();
            const double ref_c = outer.eval1(inner.eval(x));
            const double ref_l = a * inner.eval1(x) + b * other.eval1(x);
            const Vector pv = par.eval(x);
            const double scale = 1.0 + std::abs(ref_c) + std::abs(ref_l);
            worst_rel = std::max(worst_rel, std::abs(comp.eval1(x) - ref_c) / scale);
            worst_rel = std::max(worst_rel, std::abs(lc.eval1(x) - ref_l) / scale);
            worst_rel = std::max(worst_rel,
                                 std::abs(pv(0) - inner.eval1(x)) + std::abs(pv(1) - other.eval1(x)));
        }
    }
    s.add("calculus-exactness", worst_rel, 1e-12,
          "compose/linear_combination/parallelize vs direct evaluation, relative");
    s.add("calculus-size-bounds", static_cast<double>(size_violations), 0.0,
          "violations of the composition and combination size bounds");
}

void check_square(Suite& s) {
    for (double delta2 : {1e-2, 1e-4}) {
        const ReluNet sq = relu::build_square(delta2);
        double lo = 0.0, hi = 0.0;
        Vector x(1);
        for (int i = 0; i <= 2000; ++i) {
            x(0) = i / 2000.0;
            const double v = sq.eval1(x);
            lo = std::min(lo, v - x(0) * x(0));
            hi = std::max(hi, v - x(0) * x(0));
        }
        s.add("square-one-sided(delta2=" + std::to_string(delta2) + ")",
              std::max(-lo, hi / delta2 - 1.0), 1e-9,
              "net - x^2 must lie in [0, delta2] on [0,1]");
    }
}

void check_product(Suite& s) {
    const std::vector<std::pair<double, double>> cases = {{1.0, 1e-2}, {2.0, 1e-3}};
    for (auto [c, delta] : cases) {
        const ReluNet prod = relu::build_product(delta, c);
        double worst = 0.0;
        Vector x(2);
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 100; ++j) {
                x << c * (2.0 * i / 100.0 - 1.0), c * (2.0 * j / 100.0 - 1.0);
                worst = std::max(worst, std::abs(prod.eval1(x) - x(0) * x(1)));
            }
        s.add("product-sup(c=" + std::to_string(c) + ")", worst, delta,
              "grid sup |ab - net(a,b)| on [-c,c]^2");
    }
}

void check_sqrt(Suite& s, double tolerance_scale) {
    for (double delta_bar : {1e-1, 1e-2, 1e-3}) {
        const ReluNet sq = relu::build_sqrt(delta_bar);
        double worst = 0.0;
        Vector x(1);
        for (int i = 0; i <= 10000; ++i) {
            x(0) = 2.0 * i / 10000.0;
            worst = std::max(worst, std::abs(sq.eval1(x) - std::sqrt(x(0))));
        }
        s.add("sqrt-sup(delta=" + std::to_string(delta_bar) + ")", worst,
              delta_bar * tolerance_scale, "grid sup |sqrt(x) - net(x)| on [0,2]");
    }
}

void check_dist(Suite& s, std::uint64_t seed) {
    for (int d : {2, 8, 32}) {
        const ConvexDomain cube = ConvexDomain::cube(d, 1.0);
        const ReluNet net = relu::build_dist_cube(d, 1.0);
        RngStream rng = RngStream::substream(seed, 200 + d);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const Vector x = cube.sample_uniform(rng);
            worst = std::max(worst, std::abs(net.eval1(x) - cube.dist_to_boundary(x)));
        }
        s.add("dist-cube(d=" + std::to_string(d) + ")", worst, 1e-12,
              "exact half-side minus max coordinate, size " + std::to_string(net.size()));
    }
    for (int d : {3, 10}) {
        const double delta = 1e-2;
        const ConvexDomain ball = ConvexDomain::ball(d, 1.0);
        const ReluNet net = relu::build_dist_ball(d, delta);
        RngStream rng = RngStream::substream(seed, 300 + d);
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const Vector x = ball.sample_uniform(rng);
            worst = std::max(worst, std::abs(net.eval1(x) - ball.dist_to_boundary(x)));
        }
        s.add("dist-ball(d=" + std::to_string(d) + ")", worst, delta,
              "|net - (1-|x|)| on uniform ball points");
    }
}

void check_exit_time(Suite& s, std::uint64_t seed, int threads) {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    for (double x1 : {0.0, 0.5}) {
        Vector x = Vector::Zero(3);
        x(0) = x1;
        const double eps = 1e-3;
        const long cap = default_cap(ball, eps);
        const long n = 10000;
        std::vector<double> vals(n);
        for (long i = 0; i < n; ++i) {
            RngStream rng = RngStream::substream(seed + 7, static_cast<std::uint64_t>(i));
            const WalkPath p = run_walk(ball, x, eps, cap, rng);
            double s2 = 0.0;
            for (double r : p.radii) s2 += r * r;
            vals[i] = s2;
        }
        (void)threads;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        const double se = std::sqrt(ss / (n - 1.0)) / std::sqrt(static_cast<double>(n));
        const double target = 1.0 - x.squaredNorm();
        s.add("exit-time(x1=" + std::to_string(x1) + ")", std::abs(mean - target),
              3.0 * se + 2.0 * ball.diameter() * eps,
              "mean sum r_k^2 vs R^2 - |x|^2 on the unit ball");
    }
}

void check_kappa(Suite& s, std::uint64_t seed) {
    for (int d : {3, 5, 10}) {
        RngStream rng = RngStream::substream(seed, 400 + d);
        const WosEstimate est = k1_estimate([](const Vector&) { return 1.0; }, d, 1000, rng);
        s.add("kappa(d=" + std::to_string(d) + ")",
              std::abs(est.value - 1.0 / (2.0 * d)) + est.std_error, 1e-15,
              "constant integrand collapses to 1/(2d) exactly, zero variance");
    }
}

void check_boggio_moment(Suite& s, std::uint64_t seed) {
    RngStream rng = RngStream::substream(seed, 500);
    const WosEstimate est =
        k1_estimate([](const Vector& y) { return y.squaredNorm(); }, 3, 100000, rng);
    s.add("boggio-moment", std::abs(est.value - 0.05), 3.0 * est.std_error,
          "kernel average of |y|^2 in d=3 equals 1/20");
}

void check_shell_bias(Suite& s, std::uint64_t seed, int threads) {
    const ConvexDomain cube = ConvexDomain::cube(3, 1.0);
    const Problem prob = get_problem("harmonic-linear", 3);
    Vector x = Vector::Zero(3);
    x(0) = 0.2;
    SolveConfig cfg;
    cfg.m = 20000;
    cfg.eps = 0.05;
    cfg.seed = seed + 11;
    cfg.threads = threads;
    const WosEstimate est = solve_point(cube, nullptr, prob.g, x, cfg);
    const double lip = prob.norms(cube).lip_g;
    s.add("shell-bias", std::abs(est.value - prob.u(x)),
          3.0 * est.std_error + lip * cube.diameter() * cfg.eps,
          "harmonic boundary estimate vs analytic value, coarse shell");
}

void check_path_count(Suite& s, std::uint64_t seed) {
    const std::vector<ConvexDomain> domains = {ConvexDomain::ball(3, 1.0),
                                               ConvexDomain::cube(5, 1.0)};
    for (const auto& dom : domains) {
        RngStream prng = RngStream::substream(seed, 600);
        std::vector<Vector> probes(20);
        for (auto& p : probes) p = dom.sample_uniform(prng);
        for (double eps : {0.05, 0.1}) {
            const SupNepsResult r =
                estimate_sup_n_eps(dom, eps, probes, 100, default_cap(dom, eps), seed + 13);
            s.add("path-count(" + dom.kind_name() + ",eps=" + std::to_string(eps) + ")",
                  r.empirical, r.bound, "mean over trials of worst-probe walk length");
        }
    }
}

void check_drift(Suite& s, std::uint64_t seed) {
    const ConvexDomain ball = ConvexDomain::ball(3, 1.0);
    const double delta_dist = 1e-6;
    const ReluNet dist_net = make_dist_net(ball, delta_dist);
    SynthesisPlan plan;
    plan.delta_bar = 0.5;
    plan.delta1 = plan.delta2 = 0.1;
    plan.eps = 0.05;
    plan.M = plan.M1 = plan.M2 = 4;
    plan.hard_cap = 10;
    plan.delta_g = plan.delta_f = plan.delta_tilde = 0.1;
    plan.delta_dist = delta_dist;
    const RandomTableau t = freeze_tableau(plan, ball, seed + 17, 8);
    RngStream rng = RngStream::substream(seed, 700);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const long i = trial % t.directions.size();
        const Vector x = 0.5 * ball.sample_uniform(rng);
        const long n = std::min<long>(10, static_cast<long>(t.directions[i].size()));
        const auto pert = perturbed_walk(t, dist_net, x, i, n);
        Vector exact = x;
        for (long k = 1; k <= n; ++k) {
            exact += ball.dist_to_boundary(exact) * t.directions[i][k - 1];
            const double dev = (exact - pert[k]).norm();
            worst_ratio = std::max(worst_ratio, dev / (std::exp2(k) * delta_dist));
            if (ball.dist_to_boundary(exact) <= kBoundaryTol) break;
        }
    }
    s.add("drift-bound", worst_ratio, 1.0,
          "|exact walk - perturbed walk| relative to 2^k delta_dist");
}

void check_plan(Suite& s) {
    const ConvexDomain cube = ConvexDomain::cube(3, 1.0);  // |D| = 1
    const SynthesisPlan plan = make_plan(0.5, cube, ProblemNorms{0.0, 1.0, 0.0, 0.0, 1.0});
    s.add("plan-calibration", std::abs(plan.delta1 - 0.0625), 1e-15,
          "delta1 = delta_bar / (2 + 6 sqrt|D|) at |D| = 1");
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    Suite s;
    s.only = opt.only;
    if (s.wants("calculus")) check_calculus(s, opt.seed);
    if (s.wants("square")) check_square(s);
    if (s.wants("product")) check_product(s);
    if (s.wants("sqrt")) check_sqrt(s, opt.sqrt_tolerance_scale);
    if (s.wants("dist")) check_dist(s, opt.seed);
    if (s.wants("exit-time")) check_exit_time(s, opt.seed, opt.threads);
    if (s.wants("kappa")) check_kappa(s, opt.seed);
    if (s.wants("boggio")) check_boggio_moment(s, opt.seed);
    if (s.wants("shell-bias")) check_shell_bias(s, opt.seed, opt.threads);
    if (s.wants("path-count")) check_path_count(s, opt.seed);
    if (s.wants("drift")) check_drift(s, opt.seed);
    if (s.wants("plan")) check_plan(s);
    return s.results;
}

}  // namespace wosnet
