#pragma once

#include <functional>
#include <optional>

#include "wosnet/budgets.hpp"
#include "wosnet/geometry.hpp"
#include "wosnet/rng.hpp"

namespace wosnet {

using ScalarField = std::function<double(const Vector&)>;

// One walk-on-the-sphere path: X_0 = x, X_k = X_{k-1} + Y_k r_k with
// r_k = dist(X_{k-1}, dD), iterated until the eps-shell or the step cap.
struct WalkPath {
    std::vector<Vector> points;  // X_0 .. X_K
    std::vector<double> radii;   // r_1 .. r_K
    long n_eps = 0;              // first k >= 1 with dist(X_k) <= eps
    bool capped = false;         // cap hit before reaching the shell

    // first index k >= 1 with dist(X_k, dD) <= shell, or K if never
    long first_index_within(const ConvexDomain& domain, double shell) const;
};

struct WosEstimate {
    double value = 0.0;
    double std_error = 0.0;  // unbiased sample sd / sqrt(n_outer)
    long n_outer = 0;
    long n_inner = 0;  // 0 when unused
    double eps = 0.0;
    bool any_capped = false;
};

struct SolveConfig {
    long m = 10000;        // outer samples (M, and M1 when f != 0)
    long m2 = 16;          // inner Boggio samples per (i,k)
    double eps = 0.0;      // 0 -> default 1e-3 * diam
    long cap = 0;          // 0 -> ceil(4 diam^2 / eps^2)
    int threads = 1;
    std::uint64_t seed = 1;
};

double default_eps(const ConvexDomain& domain);
long default_cap(const ConvexDomain& domain, double eps);

WalkPath run_walk(const ConvexDomain& domain, const Vector& x, double eps, long cap,
                  RngStream& rng);

// (1/M) sum_i g(X^(i)_{n_eps}); bias <= (1/2) ||Dg|| diam eps
WosEstimate estimate_boundary_term(const ConvexDomain& domain, const ScalarField& g,
                                   const Vector& x, long M, double eps, long cap,
                                   std::uint64_t seed, int threads = 1);

// kappa_d * (1/M2) sum_j v(y_j), y_j ~ mu; unbiased for
// K1(v) = (1/2) E_0(int_0^{tau_B} v(X_t) dt); d >= 3
WosEstimate k1_estimate(const ScalarField& v, int d, long M2, RngStream& rng);

// (1/M1) sum_i sum_k r_k^2 kappa_d (1/M2) sum_j f(X_{k-1} + r_k y_{ijk});
// estimates (1/2) E_x(int_0^tau f); the 1/2 is carried by kappa_d. d >= 3.
WosEstimate estimate_source_term(const ConvexDomain& domain, const ScalarField& f,
                                 const Vector& x, long M1, long M2, double eps, long cap,
                                 std::uint64_t seed, int threads = 1);

// u(x) = E_x(g(X_tau)) + (1/2) E_x(int_0^tau f); boundary and source parts
// share the same walks, std errors are computed on the combined per-walk
// statistic. f may be null (pure boundary problem, any d >= 1); a non-null f
// requires d >= 3.
WosEstimate solve_point(const ConvexDomain& domain, const ScalarField* f, const ScalarField& g,
                        const Vector& x, const SolveConfig& cfg);

struct SupNepsResult {
    double empirical = 0.0;  // mean over trials of max-over-probes n_eps
    double bound = 0.0;      // diam^2 / eps^2
    bool any_capped = false;
};

SupNepsResult estimate_sup_n_eps(const ConvexDomain& domain, double eps,
                                 const std::vector<Vector>& probes, long trials, long cap,
                                 std::uint64_t seed);

}  // namespace wosnet
