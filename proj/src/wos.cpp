#include "wosnet/wos.hpp"

#include <cmath>
#include <stdexcept>

#include "wosnet/parallel.hpp"

namespace wosnet {

namespace {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // unbiased (n-1 divisor)
};

MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd r;
    const auto n = static_cast<double>(v.size());
    for (double x : v) r.mean += x;
    r.mean /= n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.sd = std::sqrt(ss / (n - 1.0));
    }
    return r;
}

}  // namespace

double default_eps(const ConvexDomain& domain) { return 1e-3 * domain.diameter(); }

long default_cap(const ConvexDomain& domain, double eps) {
    const double diam = domain.diameter();
    return static_cast<long>(std::ceil(4.0 * diam * diam / (eps * eps)));
}

long WalkPath::first_index_within(const ConvexDomain& domain, double shell) const {
    for (std::size_t k = 1; k < points.size(); ++k)
        if (domain.dist_to_boundary(points[k]) <= shell) return static_cast<long>(k);
    return static_cast<long>(points.size()) - 1;
}

WalkPath run_walk(const ConvexDomain& domain, const Vector& x, double eps, long cap,
                  RngStream& rng) {
    if (eps <= 0.0 || eps >= 0.5 * domain.diameter())
        throw std::invalid_argument("run_walk: eps in (0, diam/2)");
    if (cap < 1) throw std::invalid_argument("run_walk: cap >= 1");
    WalkPath path;
    path.points.push_back(x);
    for (long k = 1; k <= cap; ++k) {
        const double r = domain.dist_to_boundary(path.points.back());
        if (r <= kBoundaryTol) {
            path.n_eps = k - 1;
            return path;
        }
        const Vector next = path.points.back() + r * sample_unit_sphere(rng, domain.dim());
        path.points.push_back(next);
        path.radii.push_back(r);
        if (domain.dist_to_boundary(next) <= eps) {
            path.n_eps = k;
            return path;
        }
    }
    path.n_eps = static_cast<long>(path.radii.size());
    path.capped = true;
    return path;
}

WosEstimate estimate_boundary_term(const ConvexDomain& domain, const ScalarField& g,
                                   const Vector& x, long M, double eps, long cap,
                                   std::uint64_t seed, int threads) {
    std::vector<double> vals(M);
    std::vector<char> capped(M, 0);
    parallel_for(M, threads, [&](long i) {
        RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
        const WalkPath path = run_walk(domain, x, eps, cap, rng);
        vals[i] = g(path.points.back());
        capped[i] = path.capped;
    });
    const MeanSd ms = mean_sd(vals);
    WosEstimate est;
    est.value = ms.mean;
    est.std_error = ms.sd / std::sqrt(static_cast<double>(M));
    est.n_outer = M;
    est.eps = eps;
    for (char c : capped) est.any_capped |= (c != 0);
    return est;
}

WosEstimate k1_estimate(const ScalarField& v, int d, long M2, RngStream& rng) {
    if (d < 3) throw std::invalid_argument("k1_estimate: d >= 3");
    if (M2 < 1) throw std::invalid_argument("k1_estimate: M2 >= 1");
    const double kappa = 1.0 / (2.0 * d);
    std::vector<double> vals(M2);
    for (long j = 0; j < M2; ++j) vals[j] = v(sample_boggio(rng, d));
    const MeanSd ms = mean_sd(vals);
    WosEstimate est;
    est.value = kappa * ms.mean;
    est.std_error = kappa * ms.sd / std::sqrt(static_cast<double>(M2));
    est.n_outer = M2;
    est.eps = 0.0;
    return est;
}

namespace {

// source statistic of one walk: sum_k r_k^2 kappa (1/M2) sum_j f(X_{k-1}+r_k y)
double walk_source_stat(const ConvexDomain& domain, const ScalarField& f, const WalkPath& path,
                        long M2, RngStream& rng) {
    const double kappa = 1.0 / (2.0 * domain.dim());
    double total = 0.0;
    for (std::size_t k = 0; k < path.radii.size(); ++k) {
        const double r = path.radii[k];
        double inner = 0.0;
        for (long j = 0; j < M2; ++j)
            inner += f(path.points[k] + r * sample_boggio(rng, domain.dim()));
        total += r * r * kappa * inner / static_cast<double>(M2);
    }
    return total;
}

}  // namespace

WosEstimate estimate_source_term(const ConvexDomain& domain, const ScalarField& f,
                                 const Vector& x, long M1, long M2, double eps, long cap,
                                 std::uint64_t seed, int threads) {
    if (domain.dim() < 3) throw std::invalid_argument("estimate_source_term: d >= 3");
    std::vector<double> vals(M1);
    std::vector<char> capped(M1, 0);
    parallel_for(M1, threads, [&](long i) {
        RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
        const WalkPath path = run_walk(domain, x, eps, cap, rng);
        vals[i] = walk_source_stat(domain, f, path, M2, rng);
        capped[i] = path.capped;
    });
    const MeanSd ms = mean_sd(vals);
    WosEstimate est;
    est.value = ms.mean;
    est.std_error = ms.sd / std::sqrt(static_cast<double>(M1));
    est.n_outer = M1;
    est.n_inner = M2;
    est.eps = eps;
    for (char c : capped) est.any_capped |= (c != 0);
    return est;
}

WosEstimate solve_point(const ConvexDomain& domain, const ScalarField* f, const ScalarField& g,
                        const Vector& x, const SolveConfig& cfg) {
    const double eps = (cfg.eps > 0.0) ? cfg.eps : default_eps(domain);
    const long cap = (cfg.cap > 0) ? cfg.cap : default_cap(domain, eps);
    if (f != nullptr && domain.dim() < 3)
        throw std::invalid_argument("solve_point: source term requires d >= 3");
    std::vector<double> vals(cfg.m);
    std::vector<char> capped(cfg.m, 0);
    parallel_for(cfg.m, cfg.threads, [&](long i) {
        RngStream rng = RngStream::substream(cfg.seed, static_cast<std::uint64_t>(i));
        const WalkPath path = run_walk(domain, x, eps, cap, rng);
        double v = g(path.points.back());
        if (f != nullptr) v += walk_source_stat(domain, *f, path, cfg.m2, rng);
        vals[i] = v;
        capped[i] = path.capped;
    });
    const MeanSd ms = mean_sd(vals);
    WosEstimate est;
    est.value = ms.mean;
    est.std_error = ms.sd / std::sqrt(static_cast<double>(cfg.m));
    est.n_outer = cfg.m;
    est.n_inner = (f != nullptr) ? cfg.m2 : 0;
    est.eps = eps;
    for (char c : capped) est.any_capped |= (c != 0);
    return est;
}

SupNepsResult estimate_sup_n_eps(const ConvexDomain& domain, double eps,
                                 const std::vector<Vector>& probes, long trials, long cap,
                                 std::uint64_t seed) {
    if (probes.empty() || trials < 1) throw std::invalid_argument("estimate_sup_n_eps: empty input");
    SupNepsResult res;
    const double diam = domain.diameter();
    res.bound = diam * diam / (eps * eps);
    double total = 0.0;
    for (long t = 0; t < trials; ++t) {
        long worst = 0;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            RngStream rng = RngStream::substream(
                seed, static_cast<std::uint64_t>(t) * probes.size() + p);
            const WalkPath path = run_walk(domain, probes[p], eps, cap, rng);
            const long n = path.capped ? cap : path.n_eps;
            res.any_capped |= path.capped;
            worst = std::max(worst, n);
        }
        total += static_cast<double>(worst);
    }
    res.empirical = total / static_cast<double>(trials);
    return res;
}

}  // namespace wosnet
