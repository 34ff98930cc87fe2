#pragma once

#include <optional>
#include <stdexcept>

#include "wosnet/relu.hpp"
#include "wosnet/wos.hpp"

namespace wosnet {

// Unnamed constants of the construction; all overridable.
struct SynthesisConstants {
    double c = 1.0;
    double c_prime = 1.0;   // C' in the calibrations
    double c_dprime = 1.0;  // c'' in the delta_tilde choice
    double C = 10.0;        // path-count constant in sum N_i <= C M^2 (M + |D|)
    double C_prime2 = 1.0;  // C' in delta2 = delta_bar / (2 + 2 C' sqrt|D|)
    double c_sqrt = 64.0;   // multiplication-accuracy constant of the sqrt net
};

struct ProblemNorms {
    double f_inf = 0.0;
    double g_inf = 0.0;
    double lap_g_inf = 0.0;
    double lip_f = 0.0;
    double lip_g = 0.0;
};

struct PlanOverrides {
    std::optional<long> M, M1, M2;
    std::optional<double> eps, delta_g, delta_f, delta_tilde, delta_dist;
    std::optional<long> hard_cap;
    std::optional<double> size_budget;
};

// Calibrated accuracy/parameter set; re-derivable from
// (delta_bar, constants, norms, domain) plus any overrides.
struct SynthesisPlan {
    double delta_bar = 0.0;
    double delta1 = 0.0;  // boundary-part target
    double delta2 = 0.0;  // source-part target
    double eps = 0.0;
    double delta_g = 0.0;
    double delta_f = 0.0;
    double delta_tilde = 0.0;
    double delta_dist = 0.0;
    long M = 1, M1 = 1, M2 = 1;
    long hard_cap = 1;
    double prod_range = 1.0;
    double size_budget = 5e6;
    SynthesisConstants constants;
    ProblemNorms norms;

    // L2 budget of the boundary part after calibration: delta1 (1 + 3 sqrt|D|)
    double calibrated_boundary_budget(const ConvexDomain& domain) const;
    // Source-part analogue: delta2 (1 + C' sqrt|D|)
    double calibrated_source_budget(const ConvexDomain& domain) const;
    double calibrated_total_budget(const ConvexDomain& domain) const;
};

// Derives (delta1, delta2, eps, M, M1, M2, delta_g, delta_f, delta_tilde,
// delta_dist) from delta_bar: eps is the largest shell width for which the
// error budgets meet the calibrated per-part targets with M = M1 = M2 =
// ceil(c eps^-2). Overrides replace derived values; dependent quantities are
// then recomputed. Plans are virtual-only by default; passing
// overrides.size_budget requests flattening and rejects (SizeBudgetError)
// plans whose coarse flattened-size estimate exceeds it.
SynthesisPlan make_plan(double delta_bar, const ConvexDomain& domain, const ProblemNorms& norms,
                        const SynthesisConstants& constants = {},
                        const PlanOverrides& overrides = {});

// Frozen Monte Carlo randomness. Direction rows are shared between the
// boundary part (caps1, i < M) and the source part (caps2, i < M1);
// inner_points exist for the source part only. Regeneration from (seed, plan)
// reproduces the tableau exactly.
struct RandomTableau {
    std::uint64_t seed = 0;
    long M = 0, M1 = 0, M2 = 0;
    double eps = 0.0;
    long hard_cap = 0;
    std::vector<std::vector<Vector>> directions;              // [i][k]
    std::vector<long> caps1;                                  // N_{i,1}
    std::vector<long> caps2;                                  // N_{i,2}
    std::vector<std::vector<std::vector<Vector>>> inner_points;  // [i][k][j]
    bool any_capped = false;

    long sum_caps1() const;
    long sum_caps2() const;
};

// Caps are realized walk lengths to the eps-shell over a probe set under the
// frozen directions, bounded by the hard cap.
RandomTableau freeze_tableau(const SynthesisPlan& plan, const ConvexDomain& domain,
                             std::uint64_t seed, int n_probes = 16);

// X~_k = X~_{k-1} + Y_{i,k} sigma(dist_net(X~_{k-1})); returns X~_0 .. X~_n.
std::vector<Vector> perturbed_walk(const RandomTableau& tableau, const relu::ReluNet& dist_net,
                                   const Vector& x, long i, long n_steps);

// phi^1(x) = (1/M) sum_i g_net(X~_{N_{i,1}})
double phi1_eval(const RandomTableau& tableau, const relu::ReluNet& g_net,
                 const relu::ReluNet& dist_net, const Vector& x);

// phi^2(x) = (1/M1) sum_i sum_k prod(prod(rho, rho), kappa_d avg_j f_net(...))
double phi2_eval(const RandomTableau& tableau, const relu::ReluNet& f_net,
                 const relu::ReluNet& dist_net, const relu::ReluNet& product_net,
                 const Vector& x);

// phi_u = phi^1 + phi^2; f_net may be null for pure boundary problems.
double phi_u_eval(const RandomTableau& tableau, const relu::ReluNet* f_net,
                  const relu::ReluNet& g_net, const relu::ReluNet& dist_net,
                  const relu::ReluNet* product_net, const Vector& x);

struct SizeBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long flatten_size_estimate(const RandomTableau& tableau, long size_prod, long size_dist,
                           long size_f, long size_g);

// Materializes phi_u as a single layered net; agrees with the virtual
// evaluators to float-reassociation accuracy. Throws SizeBudgetError when the
// size estimate exceeds plan.size_budget.
relu::ReluNet flatten(const RandomTableau& tableau, const relu::ReluNet* f_net,
                      const relu::ReluNet& g_net, const relu::ReluNet& dist_net,
                      const relu::ReluNet* product_net, const SynthesisPlan& plan);

struct SizeReport {
    long assembled_bound = 0;  // sum_i sum_k size(x~) + M2 [k size(dist) + size(f)]
    long boundary_part = 0;    // M [size(g) + N_{i,1} size(dist)]
    std::string exponent_note;
};

// Term-by-term evaluation of the size-estimate chain for a concrete tableau.
// The asymptotic exponent (14+6b; a sharper bookkeeping suggests 12+8b) is
// reported verbatim, never asserted as a measurement.
SizeReport size_report(const RandomTableau& tableau, long size_prod, long size_dist,
                       long size_f, long size_g);

// sqrt(|D| * mean over >= n uniform points of (approx - reference)^2)
double l2_error(const std::function<double(const Vector&)>& approx,
                const std::function<double(const Vector&)>& reference,
                const ConvexDomain& domain, long n_points, std::uint64_t seed, int threads = 1);

// Distance surrogate for ball and cube domains (cube exact, ball within delta).
relu::ReluNet make_dist_net(const ConvexDomain& domain, double delta);

}  // namespace wosnet
