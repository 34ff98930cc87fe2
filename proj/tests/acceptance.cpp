// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each check is self-contained and uses fixed seeds.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wosnet/net_io.hpp"
#include "wosnet/problems.hpp"
#include "wosnet/relu_builders.hpp"
#include "wosnet/synthesis.hpp"
#include "wosnet/wos.hpp"

using namespace wosnet;
using relu::Matrix;
using relu::ReluNet;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// A1: mean of the summed squared step radii equals R^2 - |x|^2 on the ball.
void a1_exit_time() {
    bool ok = true;
    std::string detail;
    for (int d : {3, 10}) {
        const ConvexDomain ball = ConvexDomain::ball(d, 1.0);
        Vector x = Vector::Zero(d);
        x(0) = 0.4;
        const long n = 4000;
        double mean = 0.0, ss = 0.0;
        std::vector<double> vals(n);
        for (long i = 0; i < n; ++i) {
            RngStream rng = RngStream::substream(101, static_cast<std::uint64_t>(i));
            const WalkPath p = run_walk(ball, x, 1e-4, 200000, rng);
            double s = 0.0;
            for (double r : p.radii) s += r * r;
            vals[i] = s;
            mean += s;
        }
        mean /= static_cast<double>(n);
        for (double v : vals) ss += (v - mean) * (v - mean);
        const double se = std::sqrt(ss / (n - 1.0) / n);
        const double err = std::abs(mean - (1.0 - 0.16));
        ok = ok && err < 3.0 * se + 1e-3;
        detail += "d=" + std::to_string(d) + " err=" + fmt(err) + " se=" + fmt(se) + " ";
    }
    report("A1", ok, "exit-time identity on the ball; " + detail);
}

// A2: the kernel functional is exact (zero variance) on constants.
void a2_kernel_constant() {
    bool ok = true;
    std::string detail;
    for (int d : {3, 5, 10}) {
        RngStream rng(102);
        const WosEstimate est = k1_estimate([](const Vector&) { return 1.0; }, d, 200, rng);
        const double err = std::abs(est.value - 1.0 / (2.0 * d));
        ok = ok && err <= 1e-15 && est.std_error == 0.0;
        detail += "d=" + std::to_string(d) + " err=" + fmt(err) + " ";
    }
    report("A2", ok, "kernel functional exact on constants; " + detail);
}

// A3: kernel functional of the squared radius equals 1/20 in dimension three.
void a3_kernel_moment() {
    RngStream rng(103);
    const WosEstimate est =
        k1_estimate([](const Vector& y) { return y.squaredNorm(); }, 3, 100000, rng);
    const double err = std::abs(est.value - 0.05);
    report("A3", err < 3.0 * est.std_error,
           "kernel radial moment = 1/20; err=" + fmt(err) + " se=" + fmt(est.std_error));
}

// A4: pointwise Poisson solve on the ball with a constant source.
void a4_pointwise_solve() {
    bool ok = true;
    std::string detail;
    for (int d : {3, 10}) {
        const ConvexDomain ball = ConvexDomain::ball(d, 1.0);
        const Problem prob = get_problem("quadratic-ball", d);
        const double eps = 1e-3;
        RngStream prng(104);
        double worst = 0.0;
        for (int p = 0; p < 5; ++p) {
            const Vector x = 0.9 * ball.sample_uniform(prng);
            SolveConfig cfg;
            cfg.m = 10000;
            cfg.m2 = 16;
            cfg.eps = eps;
            cfg.threads = 4;
            cfg.seed = 104 + static_cast<std::uint64_t>(p);
            const WosEstimate est = solve_point(ball, &prob.f, prob.g, x, cfg);
            const double err = std::abs(est.value - prob.u(x));
            const double bound =
                3.0 * est.std_error + 2.0 * ball.diameter() * eps * std::max(2.0 * d, 1.0);
            ok = ok && err <= bound;
            worst = std::max(worst, err);
        }
        detail += "d=" + std::to_string(d) + " worst_err=" + fmt(worst) + " ";
    }
    report("A4", ok, "pointwise solve within statistical + shell tolerance; " + detail);
}

// A5: the synthesized boundary network meets its calibrated L2 budget on the
// cube, and tightening the target does not hurt.
void a5_calibrated_budget() {
    const ConvexDomain cube = ConvexDomain::cube(3, 1.0);
    const Problem prob = get_problem("harmonic-sum", 3);
    const ReluNet dist_net = make_dist_net(cube, 0.0);
    const ReluNet g_net = prob.g_surrogate(cube, 0.0);
    bool ok = true;
    std::string detail;
    double prev_err = 0.0;
    int step = 0;
    for (double delta_bar : {0.8, 0.4}) {
        PlanOverrides ov;
        ov.M1 = 1;
        ov.M2 = 1;
        const SynthesisPlan plan = make_plan(delta_bar, cube, prob.norms(cube), {}, ov);
        const RandomTableau t = freeze_tableau(plan, cube, 105);
        const double l2 =
            l2_error([&](const Vector& x) { return phi1_eval(t, g_net, dist_net, x); }, prob.u,
                     cube, 2000, 106, 4);
        const double budget = plan.calibrated_boundary_budget(cube);
        ok = ok && l2 <= 3.0 * budget;
        if (step > 0) ok = ok && l2 <= prev_err + 0.25 * budget;
        prev_err = l2;
        ++step;
        detail += "target=" + fmt(delta_bar) + " l2=" + fmt(l2) + " budget=" + fmt(budget) + " ";
    }
    report("A5", ok, "boundary network within calibrated budget, improving with target; " + detail);
}

// A6: square-root network accuracy and near-quadratic log-size growth.
void a6_sqrt_network() {
    bool ok = true;
    std::string detail;
    std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
    std::vector<double> sizes;
    for (double delta : deltas) {
        const ReluNet net = relu::build_sqrt(delta);
        double sup = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double v = delta * delta +
                             (1.0 - delta * delta) * static_cast<double>(i) / 2000.0;
            Vector x(1);
            x << v;
            sup = std::max(sup, std::abs(net.eval1(x) - std::sqrt(v)));
        }
        ok = ok && sup <= delta;
        sizes.push_back(static_cast<double>(net.size()));
        detail += "delta=" + fmt(delta) + " sup=" + fmt(sup) + " size=" + fmt(sizes.back()) + " ";
    }
    // log-log slope of size against 1/delta stays below 2.3
    const double slope = (std::log(sizes.back()) - std::log(sizes.front())) /
                         (std::log(1.0 / deltas.back()) - std::log(1.0 / deltas.front()));
    ok = ok && slope <= 2.3;
    report("A6", ok, "sqrt network accuracy and size growth; slope=" + fmt(slope) + "; " + detail);
}

// A7: product network accuracy grid and logarithmic size growth.
void a7_product_network() {
    bool ok = true;
    std::string detail;
    for (const auto& [delta, c] : std::vector<std::pair<double, double>>{
             {1e-2, 1.0}, {1e-3, 2.0}, {1e-4, 1.0}}) {
        const ReluNet net = relu::build_product(delta, c);
        double sup = 0.0;
        const int n = 60;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double a = -c + 2.0 * c * i / n;
                const double b = -c + 2.0 * c * j / n;
                Vector x(2);
                x << a, b;
                sup = std::max(sup, std::abs(net.eval1(x) - a * b));
            }
        ok = ok && sup <= delta;
        detail += "(" + fmt(delta) + "," + fmt(c) + ") sup=" + fmt(sup) + " ";
    }
    const long s2 = relu::build_product(1e-2, 1.0).size();
    const long s6 = relu::build_product(1e-6, 1.0).size();
    ok = ok && static_cast<double>(s6) <= 4.0 * static_cast<double>(s2);
    report("A7", ok,
           "product network accuracy with log-size growth; size(1e-2)=" + std::to_string(s2) +
               " size(1e-6)=" + std::to_string(s6) + "; " + detail);
}

// A8: network calculus is exact and respects its integer size bounds.
void a8_calculus() {
    RngStream rng(108);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const int d0 = 1 + static_cast<int>(rng.next_u64() % 4);
        const int d1 = 1 + static_cast<int>(rng.next_u64() % 4);
        const int d2 = 1 + static_cast<int>(rng.next_u64() % 4);
        auto rand_mat = [&](int r, int c) {
            Matrix m(r, c);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
            return m;
        };
        const ReluNet f = relu::affine_net(rand_mat(d1, d0));
        const ReluNet g = relu::affine_net(rand_mat(d2, d1));
        const ReluNet comp = relu::compose(g, f);
        ok = ok && comp.size() <= 2 * f.size() + 2 * g.size();
        const ReluNet lc = (d1 == 1) ? relu::linear_combination({0.5, 0.5}, {f, f}) : f;
        for (int t = 0; t < 10; ++t) {
            Vector x(d0);
            for (int i = 0; i < d0; ++i) x(i) = rng.normal();
            worst = std::max(worst, (comp.eval(x) - g.eval(f.eval(x))).cwiseAbs().maxCoeff());
            worst = std::max(worst, (lc.eval(x) - f.eval(x)).cwiseAbs().maxCoeff());
        }
    }
    ok = ok && worst <= 1e-12;
    report("A8", ok, "composition and combination exact within size bounds; worst_dev=" +
                         fmt(worst));
}

// A9: distance surrogates — exact on cubes, delta-accurate on balls.
void a9_distance_networks() {
    bool ok = true;
    std::string detail;
    for (int d : {2, 8}) {
        const ConvexDomain cube = ConvexDomain::cube(d, 2.0);
        const ReluNet net = make_dist_net(cube, 0.0);
        RngStream rng(109);
        double sup = 0.0;
        for (int i = 0; i < 500; ++i) {
            const Vector x = cube.sample_uniform(rng);
            sup = std::max(sup, std::abs(net.eval1(x) - cube.dist_to_boundary(x)));
        }
        ok = ok && sup <= 1e-12;
        detail += "cube d=" + std::to_string(d) + " sup=" + fmt(sup) + " ";
    }
    for (int d : {3, 10}) {
        for (double delta : {1e-1, 1e-2}) {
            const ConvexDomain ball = ConvexDomain::ball(d, 1.0);
            const ReluNet net = make_dist_net(ball, delta);
            RngStream rng(110);
            double sup = 0.0;
            for (int i = 0; i < 300; ++i) {
                const Vector x = ball.sample_uniform(rng);
                sup = std::max(sup, std::abs(net.eval1(x) - ball.dist_to_boundary(x)));
            }
            ok = ok && sup <= delta;
            detail += "ball d=" + std::to_string(d) + " delta=" + fmt(delta) + " sup=" +
                      fmt(sup) + " ";
        }
    }
    report("A9", ok, "distance surrogates; " + detail);
}

// A10: the flattened network reproduces the virtual evaluator.
void a10_flatten() {
    const ConvexDomain cube = ConvexDomain::cube(3, 1.0);
    const Problem prob = get_problem("superposition", 3);
    PlanOverrides ov;
    ov.M = 2;
    ov.M1 = 1;
    ov.M2 = 2;
    ov.eps = 0.2;
    const SynthesisPlan plan = make_plan(0.3, cube, prob.norms(cube), {}, ov);
    const RandomTableau t = freeze_tableau(plan, cube, 111);
    const ReluNet dist_net = make_dist_net(cube, 0.0);
    const ReluNet g_net = prob.g_surrogate(cube, 1e-6);
    const ReluNet f_net = prob.f_surrogate(cube);
    const ReluNet prod = relu::build_product(plan.delta_tilde, plan.prod_range);
    const ReluNet flat = flatten(t, &f_net, g_net, dist_net, &prod, plan);
    RngStream rng(112);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Vector x = cube.sample_uniform(rng);
        const double virt = phi_u_eval(t, &f_net, g_net, dist_net, &prod, x);
        worst = std::max(worst, std::abs(flat.eval1(x) - virt) / (1.0 + std::abs(virt)));
    }
    report("A10", worst <= 1e-9,
           "flattened network matches virtual evaluation; worst_rel=" + fmt(worst) +
               " size=" + std::to_string(flat.size()));
}

// A11: empirical walk lengths to the shell respect the quadratic bound.
void a11_path_counts() {
    bool ok = true;
    std::string detail;
    const std::vector<ConvexDomain> domains = {ConvexDomain::ball(3, 1.0),
                                               ConvexDomain::cube(5, 1.0)};
    for (const ConvexDomain& dom : domains) {
        RngStream prng(113);
        std::vector<Vector> probes(10);
        for (auto& p : probes) p = dom.sample_uniform(prng);
        for (double eps : {0.05, 0.02}) {
            const SupNepsResult r =
                estimate_sup_n_eps(dom, eps, probes, 40, default_cap(dom, eps), 114);
            ok = ok && r.empirical <= r.bound && !r.any_capped;
            detail += "d=" + std::to_string(dom.dim()) + " eps=" + fmt(eps) + " sup=" +
                      std::to_string(r.empirical) + "<=" + fmt(r.bound) + " ";
        }
    }
    report("A11", ok, "shell hitting counts within the quadratic bound; " + detail);
}

// A12: CLI artifacts are byte-identical across reruns and thread counts.
void a12_cli_determinism() {
    const std::string cli = WOSNET_CLI_PATH;
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return (status != -1) ? WEXITSTATUS(status) : -1;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const fs::path base = fs::temp_directory_path() / "wosnet-acceptance";
    fs::remove_all(base);
    const std::string shared =
        "solve --domain ball --dim 3 --problem quadratic-ball --points origin "
        "--points 0.25,-0.1,0.3 --m 1000 --eps 0.005 --seed 115";
    bool ok = true;
    std::string detail;
    const fs::path a = base / "a", b = base / "b", c = base / "c";
    fs::create_directories(a);
    fs::create_directories(b);
    fs::create_directories(c);
    ok = ok && run(shared + " --threads 1 --out " + a.string()) == 0;
    ok = ok && run(shared + " --threads 1 --out " + b.string()) == 0;
    ok = ok && run(shared + " --threads 4 --out " + c.string()) == 0;
    const std::string csv = slurp(a / "solve.csv");
    const bool rerun_same = !csv.empty() && csv == slurp(b / "solve.csv");
    const bool threads_same = csv == slurp(c / "solve.csv");
    ok = ok && rerun_same && threads_same;
    detail += std::string("rerun_identical=") + (rerun_same ? "yes" : "no") +
              " threads_identical=" + (threads_same ? "yes" : "no");
    report("A12", ok, "solver artifacts byte-identical; " + detail);
}

}  // namespace

int main() {
    a1_exit_time();
    a2_kernel_constant();
    a3_kernel_moment();
    a4_pointwise_solve();
    a5_calibrated_budget();
    a6_sqrt_network();
    a7_product_network();
    a8_calculus();
    a9_distance_networks();
    a10_flatten();
    a11_path_counts();
    a12_cli_determinism();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
