#include "wosnet/budgets.hpp"

#include <cmath>
#include <stdexcept>

namespace wosnet {

double ErrorBudget::term(const std::string& name) const {
    for (const auto& [n, v] : terms)
        if (n == name) return v;
    throw std::invalid_argument("ErrorBudget: unknown term " + name);
}

namespace {

ErrorBudget finish(std::vector<std::pair<std::string, double>> terms) {
    ErrorBudget b;
    b.terms = std::move(terms);
    for (const auto& [n, v] : b.terms) b.total_sq += v;
    return b;
}

}  // namespace

ErrorBudget boundary_error_budget(long M, double eps, double delta_g, const BoundaryNorms& norms,
                                  const ConvexDomain& domain) {
    if (M < 1) throw std::invalid_argument("boundary_error_budget: M >= 1");
    const double diam = domain.diameter();
    const double vol = domain.volume();
    const double g_eff = norms.g_inf + delta_g;
    return finish({
        {"truncation", 0.75 * norms.lap_g_inf * norms.lap_g_inf * diam * diam * vol * eps * eps},
        {"surrogate", 3.0 * vol * delta_g * delta_g},
        {"outer_mc", 3.0 * vol * g_eff * g_eff / static_cast<double>(M)},
        {"path_count", diam * diam / static_cast<double>(M)},
    });
}

ErrorBudget source_error_budget(long M1, long M2, double eps, double delta_f,
                                const SourceNorms& norms, const ConvexDomain& domain, int d) {
    if (M1 < 1 || M2 < 1) throw std::invalid_argument("source_error_budget: M1, M2 >= 1");
    if (d < 3) throw std::invalid_argument("source_error_budget: d >= 3");
    const double diam = domain.diameter();
    const double vol = domain.volume();
    const double kappa = 1.0 / (2.0 * d);
    const double f_eff = norms.f_inf + delta_f;
    const double diam4_16_d2 = std::pow(diam, 4) / 16.0 / (static_cast<double>(d) * d);
    return finish({
        {"surrogate", 4.0 * vol * diam4_16_d2 * delta_f * delta_f},
        {"truncation", 4.0 * vol * diam * diam * f_eff * f_eff * eps * eps},
        {"inner_mc", 4.0 * vol * diam4_16_d2 * f_eff * f_eff / static_cast<double>(M2)},
        {"outer_mc", 8.0 * vol * kappa * f_eff * f_eff * std::pow(diam, 4) *
                         (2.0 - static_cast<double>(d) / (d + 2)) / static_cast<double>(M1)},
        {"path_count", diam * diam / static_cast<double>(M1)},
    });
}

}  // namespace wosnet
