#include "wosnet/relu_builders.hpp"

#include <cmath>
#include <stdexcept>

namespace wosnet::relu {

namespace {

Matrix row2(double a, double b) {
    Matrix m(1, 2);
    m << a, b;
    return m;
}

}  // namespace

ReluNet build_abs() {
    Matrix a1(2, 1);
    a1 << 1, -1;
    return ReluNet({Layer{a1, Vector::Zero(2)}, Layer{row2(1, 1), Vector::Zero(1)}});
}

ReluNet build_max2() {
    // channels sigma(y-z), sigma(z), sigma(-z); output u1 + u2 - u3
    Matrix a1(3, 2);
    a1 << 1, -1, 0, 1, 0, -1;
    Matrix a2(1, 3);
    a2 << 1, 1, -1;
    return ReluNet({Layer{a1, Vector::Zero(3)}, Layer{a2, Vector::Zero(1)}});
}

ReluNet build_max_n(int n) {
    if (n < 1) throw std::invalid_argument("build_max_n: n >= 1");
    if (n == 1) return identity_net(1);
    if (n == 2) return build_max2();
    const int left = n / 2;
    ReluNet stage = parallelize({build_max_n(left), build_max_n(n - left)}, false);
    return compose(build_max2(), stage);
}

ReluNet build_clamp_abs() {
    Matrix a1(4, 1);
    a1 << 1, -1, 1, -1;
    Vector b1(4);
    b1 << 0, 0, -1, -1;
    Matrix a2(1, 4);
    a2 << 1, 1, -1, -1;
    return ReluNet({Layer{a1, b1}, Layer{a2, Vector::Zero(1)}});
}

ReluNet build_relu_scalar() {
    return ReluNet({Layer{Matrix::Identity(1, 1), Vector::Zero(1)},
                    Layer{Matrix::Identity(1, 1), Vector::Zero(1)}});
}

ReluNet build_square(double delta2) {
    if (delta2 <= 0.0 || delta2 >= 1.0) throw std::invalid_argument("build_square: delta2 in (0,1)");
    const int m = static_cast<int>(std::ceil(0.5 * std::log2(1.0 / delta2))) + 1;
    // hidden layer j carries (sigma(t), sigma(t-1/2), sigma(t-1), sigma(a))
    // with t the (j-1)-fold sawtooth of x and a the partial interpolant.
    std::vector<Layer> layers;
    {
        Matrix a(4, 1);
        a << 1, 1, 1, 1;
        Vector b(4);
        b << 0, -0.5, -1, 0;
        layers.push_back(Layer{a, b});
    }
    for (int j = 2; j <= m; ++j) {
        const double q = std::pow(4.0, j - 1);
        Matrix a(4, 4);
        a << 2, -4, 2, 0,  //
            2, -4, 2, 0,   //
            2, -4, 2, 0,   //
            -2 / q, 4 / q, -2 / q, 1;
        Vector b(4);
        b << 0, -0.5, -1, 0;
        layers.push_back(Layer{a, b});
    }
    {
        const double q = std::pow(4.0, m);
        Matrix a(1, 4);
        a << -2 / q, 4 / q, -2 / q, 1;
        layers.push_back(Layer{a, Vector::Zero(1)});
    }
    return ReluNet(std::move(layers));
}

ReluNet build_square_sym(double delta2) {
    return compose(build_square(delta2), build_clamp_abs());
}

ReluNet build_product(double delta, double c) {
    if (delta <= 0.0 || delta >= 1.0 || c <= 0.0)
        throw std::invalid_argument("build_product: delta in (0,1), c > 0");
    const double delta2 = std::min(delta / (2.0 * c * c), 0.25);
    const double s = 1.0 / (2.0 * c);
    ReluNet plus = compose(build_square_sym(delta2), affine_net(row2(s, s)));
    ReluNet minus = compose(build_square_sym(delta2), affine_net(row2(s, -s)));
    return linear_combination({c * c, -c * c}, {plus, minus});
}

ReluNet build_sqrt(double delta_bar, double c_sqrt) {
    if (delta_bar <= 0.0 || delta_bar >= 1.0)
        throw std::invalid_argument("build_sqrt: delta_bar in (0,1)");
    const double delta = delta_bar / 4.0;
    const double arg = std::log(0.5) + 3.0 * std::log(1.0 / delta);
    const int n_iter =
        static_cast<int>(std::ceil((std::log(arg) + 2.0 * std::log(1.0 / delta)) / std::log(2.0)));
    const double eps = delta_bar / 2.0 * std::pow(delta / 4.0, 7) / c_sqrt;

    const ReluNet prod_unit = build_product(std::min(eps / 2.0, 0.25), 1.0);
    const ReluNet prod_two = build_product(std::min(eps, 0.25), 2.0);

    // One iteration maps (s, c+1) -> (s', c'+1); both rails stay nonnegative.
    // First block: (s, 1.5 - (c+1)/2, c*c, (c-3)/4).
    Matrix sel_c(2, 2);
    sel_c << 0, 1, 0, 1;
    Vector off_c(2);
    off_c << -1, -1;
    ReluNet keep = affine_net((Matrix(2, 2) << 1, 0, 0, -0.5).finished(), (Vector(2) << 0, 1.5).finished());
    ReluNet csq = compose(prod_unit, affine_net(sel_c, off_c));
    ReluNet cmind = affine_net((Matrix(1, 2) << 0, 0.25).finished(), Vector::Constant(1, -1.0));
    ReluNet block1 = parallelize({keep, csq, cmind}, true);

    Matrix sel01(2, 4), sel23(2, 4);
    sel01 << 1, 0, 0, 0, 0, 1, 0, 0;
    sel23 << 0, 0, 1, 0, 0, 0, 0, 1;
    ReluNet s_next = compose(prod_two, affine_net(sel01));
    ReluNet c_next = compose(prod_unit, affine_net(sel23));
    ReluNet block2 = parallelize({s_next, c_next}, true);

    ReluNet shift = affine_net(Matrix::Identity(2, 2), (Vector(2) << 0, 1).finished());
    ReluNet stage = compose(shift, compose(block2, block1));

    const double d2 = delta * delta;
    Matrix init_a(2, 1);
    init_a << 1, 1;
    ReluNet net = affine_net(init_a, (Vector(2) << d2, d2).finished());  // (s0, c0+1)
    for (int n = 0; n < n_iter; ++n) net = compose(stage, net);
    return compose(affine_net(row2(1, 0)), net);
}

ReluNet build_dist_cube(int d, double side) {
    if (d < 1 || side <= 0.0) throw std::invalid_argument("build_dist_cube: d >= 1, side > 0");
    Matrix a1(2 * d, d);
    a1.setZero();
    for (int i = 0; i < d; ++i) {
        a1(2 * i, i) = 1;
        a1(2 * i + 1, i) = -1;
    }
    Matrix a2 = Matrix::Zero(d, 2 * d);
    for (int i = 0; i < d; ++i) {
        a2(i, 2 * i) = 1;
        a2(i, 2 * i + 1) = 1;
    }
    ReluNet abs_all({Layer{a1, Vector::Zero(2 * d)}, Layer{a2, Vector::Zero(d)}});
    ReluNet negate = affine_net(-Matrix::Identity(1, 1), Vector::Constant(1, 0.5 * side));
    return compose(negate, compose(build_max_n(d), abs_all));
}

ReluNet build_dist_ball(int d, double delta) {
    if (d < 1 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("build_dist_ball: d >= 1, delta in (0,1)");
    const double delta1 = delta / 2.0;
    const double delta2 = std::min(delta * delta / (4.0 * d * d), 1.0 / d);
    std::vector<ReluNet> squares;
    std::vector<double> ones(d, 1.0);
    for (int i = 0; i < d; ++i) {
        Matrix sel = Matrix::Zero(1, d);
        sel(0, i) = 1;
        squares.push_back(compose(build_square_sym(delta2), affine_net(sel)));
    }
    ReluNet sum_sq = linear_combination(ones, squares);
    ReluNet negate = affine_net(-Matrix::Identity(1, 1), Vector::Constant(1, 1.0));
    return compose(negate, compose(build_sqrt(delta1), sum_sq));
}

}  // namespace wosnet::relu
