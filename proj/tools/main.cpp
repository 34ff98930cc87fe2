#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wosnet/net_io.hpp"
#include "wosnet/problems.hpp"
#include "wosnet/relu_builders.hpp"
#include "wosnet/synthesis.hpp"
#include "wosnet/verify.hpp"
#include "wosnet/wos.hpp"

namespace {

using json = nlohmann::json;
using namespace wosnet;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitSizeBudget = 4;

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    std::uint64_t seed = 1;
    int threads = 1;

    std::string domain = "ball";
    int dim = 3;
    double radius = 1.0;
    double side = 1.0;
    std::string problem = "quadratic-ball";

    std::vector<std::string> points;
    long m = 10000;
    long m2 = 16;
    double eps = 0.0;
    long cap = 0;

    double delta_bar = 0.3;
    long syn_m = 16, syn_m1 = 16, syn_m2 = 8;
    double syn_eps = 0.0;
    long syn_cap = 0;
    double delta_dist = 1e-2;
    double g_delta = 1e-6;
    int n_probes = 16;
    long quad_points = 10000;
    int best_of = 1;
    bool do_flatten = false;
    double size_budget = 5e6;
    std::string tableau_in;

    std::string only;
    double sqrt_tolerance_scale = 1.0;

    std::vector<int> bench_dims = {3, 10, 50, 100};
    long bench_m = 10000;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_config_file(Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot read config " + o.config_path);
    const json j = json::parse(in);
    maybe(j, "out", o.out_dir);
    maybe(j, "format", o.format);
    maybe(j, "seed", o.seed);
    maybe(j, "threads", o.threads);
    maybe(j, "domain", o.domain);
    maybe(j, "dim", o.dim);
    maybe(j, "radius", o.radius);
    maybe(j, "side", o.side);
    maybe(j, "problem", o.problem);
    maybe(j, "points", o.points);
    maybe(j, "m", o.m);
    maybe(j, "m2", o.m2);
    maybe(j, "eps", o.eps);
    maybe(j, "cap", o.cap);
    maybe(j, "delta_bar", o.delta_bar);
    maybe(j, "syn_m", o.syn_m);
    maybe(j, "syn_m1", o.syn_m1);
    maybe(j, "syn_m2", o.syn_m2);
    maybe(j, "syn_eps", o.syn_eps);
    maybe(j, "syn_cap", o.syn_cap);
    maybe(j, "delta_dist", o.delta_dist);
    maybe(j, "g_delta", o.g_delta);
    maybe(j, "n_probes", o.n_probes);
    maybe(j, "quad_points", o.quad_points);
    maybe(j, "best_of", o.best_of);
    maybe(j, "flatten", o.do_flatten);
    maybe(j, "size_budget", o.size_budget);
    maybe(j, "tableau_in", o.tableau_in);
    maybe(j, "only", o.only);
    maybe(j, "sqrt_tolerance_scale", o.sqrt_tolerance_scale);
    maybe(j, "bench_dims", o.bench_dims);
    maybe(j, "bench_m", o.bench_m);
}

ConvexDomain make_domain(const Options& o) {
    if (o.domain == "ball") return ConvexDomain::ball(o.dim, o.radius);
    if (o.domain == "cube") return ConvexDomain::cube(o.dim, o.side);
    throw std::invalid_argument("unknown domain " + o.domain + " (ball|cube)");
}

std::filesystem::path out_dir(const Options& o) {
    std::string dir = o.out_dir;
    if (dir.empty()) {
        const char* env = std::getenv("WOSNET_OUT");
        dir = (env != nullptr) ? env : ".";
    }
    std::filesystem::create_directories(dir);
    return dir;
}

// Hash of the run-defining parameters; excludes threads and output paths so
// reruns across thread counts produce identical artifacts.
std::string config_hash(const json& canonical) { return hex64(fnv1a64(canonical.dump())); }

std::vector<Vector> parse_points(const Options& o, const ConvexDomain& domain) {
    std::vector<std::string> specs = o.points;
    if (specs.empty()) specs = {"origin"};
    std::vector<Vector> pts;
    for (const auto& s : specs) {
        if (s == "origin") {
            pts.push_back(Vector::Zero(domain.dim()));
        } else if (s.rfind("random:", 0) == 0) {
            const long n = std::stol(s.substr(7));
            RngStream rng = RngStream::substream(o.seed, 0xAAAAu);
            for (long i = 0; i < n; ++i) pts.push_back(domain.sample_uniform(rng));
        } else {
            Vector x(domain.dim());
            std::stringstream ss(s);
            std::string tok;
            Eigen::Index i = 0;
            while (std::getline(ss, tok, ',')) {
                if (i >= x.size()) throw std::invalid_argument("point has too many coordinates: " + s);
                x(i++) = std::stod(tok);
            }
            if (i != x.size()) throw std::invalid_argument("point has too few coordinates: " + s);
            pts.push_back(x);
        }
    }
    return pts;
}

std::string join_coords(const Vector& x) {
    std::string s;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i > 0) s += ";";
        s += fmt_double(x(i));
    }
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_solve(const Options& o) {
    const ConvexDomain domain = make_domain(o);
    const Problem prob = get_problem(o.problem, o.dim);
    if (prob.has_source && o.dim < 3)
        throw std::invalid_argument("problem " + o.problem + " has a source term; requires dim >= 3");
    const std::vector<Vector> pts = parse_points(o, domain);

    const json canonical = {{"cmd", "solve"},     {"domain", o.domain}, {"dim", o.dim},
                            {"radius", o.radius}, {"side", o.side},     {"problem", o.problem},
                            {"points", o.points}, {"m", o.m},           {"m2", o.m2},
                            {"eps", o.eps},       {"cap", o.cap},       {"seed", o.seed}};
    const std::string hash = config_hash(canonical);

    SolveConfig cfg;
    cfg.m = o.m;
    cfg.m2 = o.m2;
    cfg.eps = o.eps;
    cfg.cap = o.cap;
    cfg.threads = o.threads;

    std::string csv = "# config_hash=" + hash + " seed=" + std::to_string(o.seed) + "\n";
    csv += "x,estimate,std_error,eps,M,M1,M2,analytic,abs_error\n";
    json rows = json::array();
    for (std::size_t p = 0; p < pts.size(); ++p) {
        cfg.seed = o.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(p);
        const WosEstimate est =
            solve_point(domain, prob.has_source ? &prob.f : nullptr, prob.g, pts[p], cfg);
        const double analytic = prob.u(pts[p]);
        const double abs_err = std::abs(est.value - analytic);
        csv += join_coords(pts[p]) + "," + fmt_double(est.value) + "," + fmt_double(est.std_error) +
               "," + fmt_double(est.eps) + "," + std::to_string(est.n_outer) + "," +
               std::to_string(prob.has_source ? est.n_outer : 0) + "," +
               std::to_string(est.n_inner) + "," + fmt_double(analytic) + "," +
               fmt_double(abs_err) + "\n";
        rows.push_back({{"x", join_coords(pts[p])},
                        {"estimate", est.value},
                        {"std_error", est.std_error},
                        {"eps", est.eps},
                        {"M", est.n_outer},
                        {"M1", prob.has_source ? est.n_outer : 0},
                        {"M2", est.n_inner},
                        {"analytic", analytic},
                        {"abs_error", abs_err},
                        {"any_capped", est.any_capped}});
    }
    const auto dir = out_dir(o);
    write_text(dir / "solve.csv", csv);
    const json artifact = {{"config_hash", hash}, {"seed", o.seed}, {"rows", rows}};
    write_text(dir / "solve.json", artifact.dump(2) + "\n");
    std::cout << ((o.format == "json") ? artifact.dump(2) : csv);
    std::cout.flush();
    return kExitOk;
}

int cmd_synthesize(const Options& o) {
    const ConvexDomain domain = make_domain(o);
    const Problem prob = get_problem(o.problem, o.dim);
    if (prob.has_source && o.dim < 3)
        throw std::invalid_argument("problem " + o.problem + " has a source term; requires dim >= 3");

    PlanOverrides ov;
    ov.M = o.syn_m;
    ov.M1 = o.syn_m1;
    ov.M2 = o.syn_m2;
    ov.eps = (o.syn_eps > 0.0) ? o.syn_eps : 0.05 * domain.diameter();
    if (o.syn_cap > 0) ov.hard_cap = o.syn_cap;
    ov.delta_dist = o.delta_dist;
    if (o.do_flatten) ov.size_budget = o.size_budget;
    const SynthesisPlan plan = make_plan(o.delta_bar, domain, prob.norms(domain), {}, ov);

    const relu::ReluNet dist_net = make_dist_net(domain, plan.delta_dist);
    const relu::ReluNet g_net = prob.g_surrogate(domain, o.g_delta);
    std::optional<relu::ReluNet> f_net, product_net;
    if (prob.has_source) {
        f_net = prob.f_surrogate(domain);
        product_net = relu::build_product(plan.delta_tilde, plan.prod_range);
    }

    const json canonical = {{"cmd", "synthesize"}, {"domain", o.domain},
                            {"dim", o.dim},        {"radius", o.radius},
                            {"side", o.side},      {"problem", o.problem},
                            {"delta_bar", o.delta_bar}, {"syn_m", o.syn_m},
                            {"syn_m1", o.syn_m1},  {"syn_m2", o.syn_m2},
                            {"syn_eps", o.syn_eps}, {"syn_cap", o.syn_cap},
                            {"delta_dist", o.delta_dist}, {"g_delta", o.g_delta},
                            {"n_probes", o.n_probes}, {"quad_points", o.quad_points},
                            {"best_of", o.best_of}, {"flatten", o.do_flatten},
                            {"tableau_in", o.tableau_in}, {"seed", o.seed}};
    const std::string hash = config_hash(canonical);

    auto phi = [&](const RandomTableau& t) {
        return [&domain, &t, &f_net, &g_net, &dist_net, &product_net](const Vector& x) {
            return phi_u_eval(t, f_net ? &*f_net : nullptr, g_net, dist_net,
                              product_net ? &*product_net : nullptr, x);
        };
    };

    RandomTableau tableau;
    json selection = json::object();
    if (!o.tableau_in.empty()) {
        tableau = io::load_tableau(o.tableau_in);
        selection["source"] = "file";
    } else if (o.best_of <= 1) {
        tableau = freeze_tableau(plan, domain, o.seed, o.n_probes);
        selection["source"] = "seed";
    } else {
        double best_score = 0.0;
        json scores = json::array();
        for (int r = 0; r < o.best_of; ++r) {
            RandomTableau cand = freeze_tableau(plan, domain, o.seed + static_cast<std::uint64_t>(r),
                                                o.n_probes);
            const double score = l2_error(phi(cand), prob.u, domain,
                                          std::min<long>(o.quad_points, 2000), o.seed ^ 0x5EED,
                                          o.threads);
            scores.push_back(score);
            if (r == 0 || score < best_score) {
                best_score = score;
                tableau = std::move(cand);
            }
        }
        selection["source"] = "best-of";
        selection["scores"] = scores;
    }

    const double l2 = l2_error(phi(tableau), prob.u, domain, o.quad_points, o.seed ^ 0xFACEu,
                               o.threads);
    const double budget_b = plan.calibrated_boundary_budget(domain);
    const double budget_s = prob.has_source ? plan.calibrated_source_budget(domain) : 0.0;
    const double budget_total = budget_b + budget_s;

    const SizeReport sr = size_report(tableau, product_net ? product_net->size() : 0,
                                      dist_net.size(), f_net ? f_net->size() : 0, g_net.size());

    const auto dir = out_dir(o);
    io::save_tableau(tableau, (dir / "tableau.json").string());
    write_text(dir / "plan.json", io::plan_to_json(plan).dump(2) + "\n");

    json report = {{"config_hash", hash},
                   {"seed", o.seed},
                   {"problem", o.problem},
                   {"domain", o.domain},
                   {"dim", o.dim},
                   {"plan", io::plan_to_json(plan)},
                   {"tableau", {{"sum_caps1", tableau.sum_caps1()},
                                {"sum_caps2", tableau.sum_caps2()},
                                {"any_capped", tableau.any_capped}}},
                   {"selection", selection},
                   {"empirical_l2_error", l2},
                   {"quad_points", o.quad_points},
                   {"budget",
                    {{"boundary", budget_b}, {"source", budget_s}, {"total", budget_total},
                     {"l2_over_total", (budget_total > 0.0) ? l2 / budget_total : 0.0}}},
                   {"size_report",
                    {{"assembled_bound", sr.assembled_bound},
                     {"boundary_part", sr.boundary_part},
                     {"note", sr.exponent_note},
                     {"component_sizes",
                      {{"dist", dist_net.size()},
                       {"g", g_net.size()},
                       {"f", f_net ? f_net->size() : 0},
                       {"product", product_net ? product_net->size() : 0}}}}}};

    if (o.do_flatten) {
        const relu::ReluNet flat =
            flatten(tableau, f_net ? &*f_net : nullptr, g_net, dist_net,
                    product_net ? &*product_net : nullptr, plan);
        RngStream rng = RngStream::substream(o.seed, 0xF1A7u);
        double worst_rel = 0.0;
        const auto virt = phi(tableau);
        for (int t = 0; t < 100; ++t) {
            const Vector x = domain.sample_uniform(rng);
            const double a = flat.eval1(x), b = virt(x);
            worst_rel = std::max(worst_rel, std::abs(a - b) / (1.0 + std::abs(b)));
        }
        io::save_network(flat, (dir / "network.json").string());
        report["flatten"] = {{"size", flat.size()},
                             {"depth", flat.depth()},
                             {"width", flat.width()},
                             {"max_rel_dev_vs_virtual", worst_rel}};
    }

    write_text(dir / "report.json", report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const Options& o) {
    VerifyOptions vo;
    vo.only = o.only;
    vo.seed = o.seed;
    vo.threads = o.threads;
    vo.sqrt_tolerance_scale = o.sqrt_tolerance_scale;
    const std::vector<CheckResult> checks = run_verification(vo);
    if (checks.empty()) throw std::invalid_argument("no check matches --only " + o.only);

    const json canonical = {{"cmd", "verify"},
                            {"only", o.only},
                            {"sqrt_tolerance_scale", o.sqrt_tolerance_scale},
                            {"seed", o.seed}};
    bool all = true;
    json jchecks = json::array();
    for (const auto& c : checks) {
        all = all && c.passed;
        jchecks.push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"measured", c.measured},
                           {"bound", c.bound},
                           {"detail", c.detail}});
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name
                  << "  measured=" << fmt_double(c.measured) << " bound=" << fmt_double(c.bound)
                  << "\n";
    }
    const json artifact = {{"config_hash", config_hash(canonical)},
                           {"seed", o.seed},
                           {"all_passed", all},
                           {"checks", jchecks}};
    write_text(out_dir(o) / "verify.json", artifact.dump(2) + "\n");
    return all ? kExitOk : kExitVerify;
}

int cmd_bench(const Options& o) {
    const json canonical = {{"cmd", "bench"}, {"dims", o.bench_dims}, {"m", o.bench_m},
                            {"seed", o.seed}};
    std::string csv = "# config_hash=" + config_hash(canonical) +
                      " seed=" + std::to_string(o.seed) + "\n";
    csv += "d,M,eps,walltime_ms,walks_per_s\n";
    for (int d : o.bench_dims) {
        const ConvexDomain ball = ConvexDomain::ball(d, 1.0);
        const double eps = default_eps(ball);
        const Vector x = Vector::Zero(d);
        const auto t0 = std::chrono::steady_clock::now();
        const WosEstimate est = estimate_boundary_term(
            ball, [](const Vector& y) { return y(0); }, x, o.bench_m, eps,
            default_cap(ball, eps), o.seed, o.threads);
        const auto t1 = std::chrono::steady_clock::now();
        (void)est;
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        csv += std::to_string(d) + "," + std::to_string(o.bench_m) + "," + fmt_double(eps) + "," +
               fmt_double(ms) + "," + fmt_double(1000.0 * o.bench_m / ms) + "\n";
    }
    write_text(out_dir(o) / "bench.csv", csv);
    std::cout << csv;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    // the config file provides defaults; explicit flags win
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") o.config_path = argv[i + 1];
    try {
        apply_config_file(o);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    CLI::App app{"walk-on-the-sphere Poisson solver and network synthesizer"};
    app.require_subcommand(1);

    auto add_shared = [&](CLI::App* c) {
        c->add_option("--config", o.config_path, "JSON config file (flags override)");
        c->add_option("--seed", o.seed, "master RNG seed");
        c->add_option("--threads", o.threads, "worker thread count");
        c->add_option("--out", o.out_dir, "output directory (default: $WOSNET_OUT or .)");
        c->add_option("--format", o.format, "stdout format: csv|json");
    };
    auto add_problem = [&](CLI::App* c) {
        c->add_option("--domain", o.domain, "ball|cube");
        c->add_option("--dim", o.dim, "space dimension");
        c->add_option("--radius", o.radius, "ball radius");
        c->add_option("--side", o.side, "cube side length");
        c->add_option("--problem", o.problem, "catalog problem name");
    };

    CLI::App* solve = app.add_subcommand("solve", "pointwise Monte Carlo solve");
    add_shared(solve);
    add_problem(solve);
    solve->add_option("--points", o.points, "origin | random:<n> | comma-separated coordinates");
    solve->add_option("--m", o.m, "outer walk count");
    solve->add_option("--m2", o.m2, "inner sample count per step");
    solve->add_option("--eps", o.eps, "boundary shell width (0: default)");
    solve->add_option("--cap", o.cap, "walk step cap (0: default)");

    CLI::App* syn = app.add_subcommand("synthesize", "freeze randomness and emit the network");
    add_shared(syn);
    add_problem(syn);
    syn->add_option("--delta-bar", o.delta_bar, "target L2 accuracy");
    syn->add_option("--m", o.syn_m, "boundary sample count override");
    syn->add_option("--m1", o.syn_m1, "source sample count override");
    syn->add_option("--m2", o.syn_m2, "inner sample count override");
    syn->add_option("--eps", o.syn_eps, "shell width override (0: 0.05 diam)");
    syn->add_option("--cap", o.syn_cap, "hard step cap override");
    syn->add_option("--delta-dist", o.delta_dist, "distance surrogate accuracy");
    syn->add_option("--g-delta", o.g_delta, "boundary surrogate accuracy");
    syn->add_option("--n-probes", o.n_probes, "probe points for step caps");
    syn->add_option("--quad-points", o.quad_points, "L2 quadrature points");
    syn->add_option("--best-of", o.best_of, "sample this many tableaux, keep the best");
    syn->add_flag("--flatten", o.do_flatten, "also emit a single flattened network");
    syn->add_option("--size-budget", o.size_budget, "flattened size guard");
    syn->add_option("--tableau-in", o.tableau_in, "reuse a saved tableau file");

    CLI::App* verify = app.add_subcommand("verify", "run the property suite");
    add_shared(verify);
    verify->add_option("--only", o.only, "run only checks with this name prefix");
    verify->add_option("--sqrt-tolerance-scale", o.sqrt_tolerance_scale,
                       "scale the sqrt check tolerance (<1: negative control)");

    CLI::App* bench = app.add_subcommand("bench", "timing table");
    add_shared(bench);
    bench->add_option("--dims", o.bench_dims, "dimensions to benchmark");
    bench->add_option("--m", o.bench_m, "walks per dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return (code == 0) ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed()) return cmd_solve(o);
        if (syn->parsed()) return cmd_synthesize(o);
        if (verify->parsed()) return cmd_verify(o);
        if (bench->parsed()) return cmd_bench(o);
    } catch (const SizeBudgetError& e) {
        std::cerr << "size budget: " << e.what() << "\n";
        return kExitSizeBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
