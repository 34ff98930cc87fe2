#pragma once

#include <string>
#include <vector>

#include "wosnet/relu.hpp"
#include "wosnet/synthesis.hpp"
#include "wosnet/wos.hpp"

namespace wosnet {

// Named (u, f, g) triplet with -lap(u) = f and g = u everywhere, so the
// boundary condition holds on any domain by construction. u is the analytic
// reference. Network surrogates: f is constant (exact); g is exact when
// affine, otherwise a squaring-net approximation within delta on the domain.
struct Problem {
    std::string name;
    int dim = 0;
    bool has_source = false;
    bool g_affine = false;
    ScalarField u, f, g;

    ProblemNorms norms(const ConvexDomain& domain) const;
    relu::ReluNet f_surrogate(const ConvexDomain& domain) const;
    relu::ReluNet g_surrogate(const ConvexDomain& domain, double delta) const;
};

// Catalog: quadratic-ball (u = 1-|x|^2, f = 2d), harmonic-linear (u = x1),
// harmonic-sum (u = sum x_i), superposition (u = x1 + 1-|x|^2),
// const-source (u = (1-|x|^2)/2d, f = 1).
Problem get_problem(const std::string& name, int d);
std::vector<std::string> problem_names();

}  // namespace wosnet
