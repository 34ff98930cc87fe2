#pragma once

#include <string>
#include <vector>

#include "wosnet/geometry.hpp"

namespace wosnet {

// Closed-form mean-square error budget for one of the two estimators;
// total_sq is the sum of the named terms.
struct ErrorBudget {
    std::vector<std::pair<std::string, double>> terms;
    double total_sq = 0.0;

    double term(const std::string& name) const;
};

struct BoundaryNorms {
    double lap_g_inf = 0.0;  // ||Delta g||_inf
    double g_inf = 0.0;      // ||g||_inf
};

struct SourceNorms {
    double f_inf = 0.0;  // ||f||_inf
};

// (3/4) ||Dg||^2 diam^2 |D| eps^2 + 3|D| dg^2 + 3|D| (||g||+dg)^2 / M + diam^2 / M
ErrorBudget boundary_error_budget(long M, double eps, double delta_g, const BoundaryNorms& norms,
                                  const ConvexDomain& domain);

// 4|D| (diam^4/16)/d^2 df^2 + 4|D| diam^2 ||phi_f||^2 eps^2
//   + 4|D| (diam^4/16)/d^2 ||phi_f||^2 / M2
//   + 8|D| kappa_d ||phi_f||^2 diam^4 (2 - d/(d+2)) / M1 + diam^2 / M1,
// with ||phi_f|| = ||f|| + df.
ErrorBudget source_error_budget(long M1, long M2, double eps, double delta_f,
                                const SourceNorms& norms, const ConvexDomain& domain, int d);

}  // namespace wosnet
