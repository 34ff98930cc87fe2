#include "wosnet/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "wosnet/relu_builders.hpp"

namespace wosnet {

using relu::Matrix;
using relu::ReluNet;

namespace {

// sum_i x_i^2 within delta for |x_i| <= m
ReluNet sum_sq_net(int d, double m, double delta) {
    const double delta2 = delta / (static_cast<double>(d) * m * m);
    const ReluNet sq = relu::build_square_sym(delta2);
    std::vector<ReluNet> terms;
    std::vector<double> coeffs;
    terms.reserve(d);
    for (int i = 0; i < d; ++i) {
        Matrix row = Matrix::Zero(1, d);
        row(0, i) = 1.0 / m;
        terms.push_back(relu::compose(sq, relu::affine_net(row)));
        coeffs.push_back(m * m);
    }
    return relu::linear_combination(coeffs, terms);
}

ReluNet constant_net(int d, double value) {
    return relu::affine_net(Matrix::Zero(1, d), relu::Vector::Constant(1, value));
}

double quad_sup(double rmax) { return std::max(1.0, rmax * rmax - 1.0); }

}  // namespace

ProblemNorms Problem::norms(const ConvexDomain& domain) const {
    const int d = domain.dim();
    const double rmax = 0.5 * domain.diameter();
    ProblemNorms n;
    if (name == "quadratic-ball") {
        n.f_inf = 2.0 * d;
        n.g_inf = quad_sup(rmax);
        n.lap_g_inf = 2.0 * d;
        n.lip_g = 2.0 * rmax;
    } else if (name == "harmonic-linear") {
        n.g_inf = rmax;
        n.lip_g = 1.0;
    } else if (name == "harmonic-sum") {
        n.g_inf = std::sqrt(static_cast<double>(d)) * rmax;
        n.lip_g = std::sqrt(static_cast<double>(d));
    } else if (name == "superposition") {
        n.f_inf = 2.0 * d;
        n.g_inf = rmax + quad_sup(rmax);
        n.lap_g_inf = 2.0 * d;
        n.lip_g = 1.0 + 2.0 * rmax;
    } else if (name == "const-source") {
        n.f_inf = 1.0;
        n.g_inf = quad_sup(rmax) / (2.0 * d);
        n.lap_g_inf = 1.0;
        n.lip_g = rmax / d;
    }
    return n;
}

ReluNet Problem::f_surrogate(const ConvexDomain& domain) const {
    if (!has_source) throw std::invalid_argument("f_surrogate: problem has no source term");
    const int d = domain.dim();
    if (name == "const-source") return constant_net(d, 1.0);
    return constant_net(d, 2.0 * d);
}

ReluNet Problem::g_surrogate(const ConvexDomain& domain, double delta) const {
    const int d = domain.dim();
    const double m = 0.5 * domain.diameter();
    if (name == "harmonic-linear") {
        Matrix row = Matrix::Zero(1, d);
        row(0, 0) = 1.0;
        return relu::affine_net(row);
    }
    if (name == "harmonic-sum") return relu::affine_net(Matrix::Ones(1, d));
    if (name == "quadratic-ball") {
        const ReluNet ss = sum_sq_net(d, m, delta);
        return relu::compose(relu::affine_net(Matrix::Constant(1, 1, -1.0),
                                              relu::Vector::Constant(1, 1.0)),
                             ss);
    }
    if (name == "superposition") {
        Matrix row = Matrix::Zero(1, d);
        row(0, 0) = 1.0;
        const ReluNet lin = relu::affine_net(row, relu::Vector::Constant(1, 1.0));
        return relu::linear_combination({1.0, -1.0}, {lin, sum_sq_net(d, m, delta)});
    }
    if (name == "const-source") {
        const ReluNet ss = sum_sq_net(d, m, delta * 2.0 * d);
        return relu::compose(relu::affine_net(Matrix::Constant(1, 1, -1.0 / (2.0 * d)),
                                              relu::Vector::Constant(1, 1.0 / (2.0 * d))),
                             ss);
    }
    throw std::invalid_argument("g_surrogate: unknown problem " + name);
}

Problem get_problem(const std::string& name, int d) {
    if (d < 1) throw std::invalid_argument("get_problem: d >= 1");
    Problem p;
    p.name = name;
    p.dim = d;
    auto quad = [](const Vector& x) { return 1.0 - x.squaredNorm(); };
    if (name == "quadratic-ball") {
        p.has_source = true;
        p.u = quad;
        p.g = quad;
        p.f = [d](const Vector&) { return 2.0 * d; };
    } else if (name == "harmonic-linear") {
        p.g_affine = true;
        p.u = [](const Vector& x) { return x(0); };
        p.g = p.u;
    } else if (name == "harmonic-sum") {
        p.g_affine = true;
        p.u = [](const Vector& x) { return x.sum(); };
        p.g = p.u;
    } else if (name == "superposition") {
        p.has_source = true;
        p.u = [quad](const Vector& x) { return x(0) + quad(x); };
        p.g = p.u;
        p.f = [d](const Vector&) { return 2.0 * d; };
    } else if (name == "const-source") {
        p.has_source = true;
        p.u = [quad, d](const Vector& x) { return quad(x) / (2.0 * d); };
        p.g = p.u;
        p.f = [](const Vector&) { return 1.0; };
    } else {
        throw std::invalid_argument("get_problem: unknown problem " + name);
    }
    return p;
}

std::vector<std::string> problem_names() {
    return {"quadratic-ball", "harmonic-linear", "harmonic-sum", "superposition", "const-source"};
}

}  // namespace wosnet
