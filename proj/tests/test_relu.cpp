#include <doctest.h>

#include <cmath>

#include "wosnet/net_io.hpp"
#include "wosnet/relu.hpp"
#include "wosnet/relu_builders.hpp"
#include "wosnet/rng.hpp"

using namespace wosnet;
using relu::Matrix;
using relu::ReluNet;

namespace {

ReluNet random_net(RngStream& rng, int input_dim, int output_dim, int depth, int max_width) {
    std::vector<relu::Layer> layers;
    int prev = input_dim;
    for (int l = 0; l < depth; ++l) {
        const int w = (l == depth - 1) ? output_dim : 1 + static_cast<int>(rng.uniform() * max_width);
        Matrix A(w, prev);
        relu::Vector b(w);
        for (int r = 0; r < w; ++r) {
            b(r) = rng.normal();
            for (int c = 0; c < prev; ++c) A(r, c) = rng.normal();
        }
        layers.push_back({std::move(A), std::move(b)});
        prev = w;
    }
    return ReluNet(std::move(layers));
}

Vector random_point(RngStream& rng, int d) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("affine and identity nets realize their maps") {
    Matrix A(2, 3);
    A << 1, 2, 3, 4, 5, 6;
    relu::Vector b(2);
    b << -1, 1;
    const ReluNet net = relu::affine_net(A, b);
    Vector x(3);
    x << 1, -1, 2;
    CHECK((net.eval(x) - (A * x + b)).norm() == doctest::Approx(0.0));
    const ReluNet id = relu::identity_net(3);
    CHECK((id.eval(x) - x).norm() == doctest::Approx(0.0));
    Vector xn(3);
    xn << -5, 0.25, -1e6;  // identity must survive negative inputs
    CHECK((id.eval(xn) - xn).norm() == doctest::Approx(0.0));
}

TEST_CASE("depth padding preserves the realization exactly") {
    RngStream rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const ReluNet net = random_net(rng, 3, 2, 1 + trial % 3, 4);
        const int target = net.depth() + 1 + trial % 4;
        const ReluNet padded = relu::pad_to_depth(net, target);
        CHECK(padded.depth() == target);
        for (int t = 0; t < 20; ++t) {
            const Vector x = random_point(rng, 3);
            CHECK((padded.eval(x) - net.eval(x)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("composition is exact and respects the doubling size bound") {
    RngStream rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const ReluNet inner = random_net(rng, 2, 3, 1 + trial % 3, 4);
        const ReluNet outer = random_net(rng, 3, 1, 1 + (trial / 2) % 3, 4);
        const ReluNet comp = relu::compose(outer, inner);
        CHECK(comp.size() <= 2 * outer.size() + 2 * inner.size());
        for (int t = 0; t < 20; ++t) {
            const Vector x = random_point(rng, 2);
            const double ref = outer.eval1(inner.eval(x));
            CHECK(std::abs(comp.eval1(x) - ref) < 1e-12 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("linear combination is exact and within the additive size bound") {
    RngStream rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const ReluNet a = random_net(rng, 2, 1, 1 + trial % 3, 4);
        const ReluNet b = random_net(rng, 2, 1, 1 + (trial / 3) % 3, 4);
        const double ca = rng.normal(), cb = rng.normal();
        const ReluNet lc = relu::linear_combination({ca, cb}, {a, b});
        const int L = std::max(a.depth(), b.depth());
        CHECK(lc.size() <= (a.size() + a.width() + 2 * (L - a.depth()) + 1) +
                               (b.size() + b.width() + 2 * (L - b.depth()) + 1));
        for (int t = 0; t < 20; ++t) {
            const Vector x = random_point(rng, 2);
            const double ref = ca * a.eval1(x) + cb * b.eval1(x);
            CHECK(std::abs(lc.eval1(x) - ref) < 1e-12 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("parallel stacking concatenates outputs exactly") {
    RngStream rng(4);
    const ReluNet a = random_net(rng, 2, 2, 2, 4);
    const ReluNet b = random_net(rng, 2, 1, 3, 4);
    const ReluNet both = relu::parallelize({a, b}, true);
    CHECK(both.output_dim() == 3);
    for (int t = 0; t < 50; ++t) {
        const Vector x = random_point(rng, 2);
        const Vector v = both.eval(x);
        CHECK((v.head(2) - a.eval(x)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(v(2) - b.eval1(x)) < 1e-12);
    }
    const ReluNet split = relu::parallelize({a, b}, false);
    CHECK(split.input_dim() == 4);
    Vector xy(4);
    xy << 0.3, -0.7, 1.1, 0.2;
    const Vector w = split.eval(xy);
    CHECK((w.head(2) - a.eval(xy.head(2))).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(w(2) - b.eval1(xy.tail(2))) < 1e-12);
}

TEST_CASE("batched evaluation matches per-column evaluation") {
    RngStream rng(5);
    const ReluNet net = random_net(rng, 3, 2, 3, 5);
    Matrix X(3, 40);
    for (int c = 0; c < 40; ++c) X.col(c) = random_point(rng, 3);
    const Matrix Y = net.eval_batch(X);
    for (int c = 0; c < 40; ++c)
        CHECK((Y.col(c) - net.eval(X.col(c))).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("abs, max and clamp helpers are exact") {
    const ReluNet abs_net = relu::build_abs();
    const ReluNet max2 = relu::build_max2();
    const ReluNet clamp = relu::build_clamp_abs();
    Vector one(1), two(2);
    RngStream rng(6);
    for (int t = 0; t < 100; ++t) {
        const double y = 3.0 * rng.normal(), z = 3.0 * rng.normal();
        one << y;
        CHECK(abs_net.eval1(one) == doctest::Approx(std::abs(y)).epsilon(1e-14));
        CHECK(clamp.eval1(one) == doctest::Approx(std::min(std::abs(y), 1.0)).epsilon(1e-14));
        two << y, z;
        CHECK(max2.eval1(two) == doctest::Approx(std::max(y, z)).epsilon(1e-14));
    }
    for (int n : {2, 3, 5, 9}) {
        const ReluNet mx = relu::build_max_n(n);
        Vector v(n);
        for (int t = 0; t < 20; ++t) {
            for (int i = 0; i < n; ++i) v(i) = rng.normal();
            CHECK(mx.eval1(v) == doctest::Approx(v.maxCoeff()).epsilon(1e-13));
        }
    }
}

TEST_CASE("squaring net is one-sided within delta on the unit interval") {
    for (double delta2 : {1e-1, 1e-3, 1e-5}) {
        const ReluNet sq = relu::build_square(delta2);
        Vector x(1);
        for (int i = 0; i <= 1000; ++i) {
            x(0) = i / 1000.0;
            const double v = sq.eval1(x);
            CHECK(v >= x(0) * x(0) - 1e-12);
            CHECK(v <= x(0) * x(0) + delta2 + 1e-12);
        }
        // exact at the interpolation nodes
        x(0) = 0.5;
        CHECK(sq.eval1(x) == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("symmetric squaring net clamps its input range") {
    const ReluNet sq = relu::build_square_sym(1e-4);
    Vector x(1);
    x(0) = -0.3;
    CHECK(sq.eval1(x) == doctest::Approx(0.09).epsilon(1e-3));
    Vector big(1), one(1);
    big(0) = 1.7;
    one(0) = 1.0;
    CHECK(sq.eval1(big) == doctest::Approx(sq.eval1(one)).epsilon(1e-14));
}

TEST_CASE("product net meets its tolerance and annihilates zero factors") {
    for (auto [c, delta] : std::vector<std::pair<double, double>>{{1.0, 1e-2}, {2.0, 1e-3}}) {
        const ReluNet prod = relu::build_product(delta, c);
        Vector x(2);
        double worst = 0.0;
        for (int i = 0; i <= 60; ++i)
            for (int j = 0; j <= 60; ++j) {
                x << c * (2.0 * i / 60.0 - 1.0), c * (2.0 * j / 60.0 - 1.0);
                worst = std::max(worst, std::abs(prod.eval1(x) - x(0) * x(1)));
            }
        CHECK(worst <= delta);
        for (double a : {-c, -0.3 * c, 0.0, 0.7 * c}) {
            x << a, 0.0;
            CHECK(std::abs(prod.eval1(x)) <= 1e-12);
            x << 0.0, a;
            CHECK(std::abs(prod.eval1(x)) <= 1e-12);
        }
    }
}

TEST_CASE("product net size grows logarithmically in the tolerance") {
    const long s2 = relu::build_product(1e-2, 1.0).size();
    const long s4 = relu::build_product(1e-4, 1.0).size();
    const long s6 = relu::build_product(1e-6, 1.0).size();
    CHECK(s4 - s2 > 0);
    // increments per decade of accuracy stay comparable
    const double r = static_cast<double>(s6 - s4) / static_cast<double>(s4 - s2);
    CHECK(r > 0.4);
    CHECK(r < 2.5);
}

TEST_CASE("sqrt net meets its sup-norm target on [0,2]") {
    for (double delta_bar : {1e-1, 1e-2}) {
        const ReluNet sq = relu::build_sqrt(delta_bar);
        Vector x(1);
        double worst = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            x(0) = 2.0 * i / 2000.0;
            worst = std::max(worst, std::abs(sq.eval1(x) - std::sqrt(x(0))));
        }
        CHECK(worst <= delta_bar);
    }
}

TEST_CASE("cube distance net is exact with linear size") {
    RngStream rng(8);
    std::vector<long> sizes;
    for (int d : {2, 8, 32}) {
        const ConvexDomain cube = ConvexDomain::cube(d, 1.0);
        const ReluNet net = relu::build_dist_cube(d, 1.0);
        sizes.push_back(net.size());
        for (int t = 0; t < 100; ++t) {
            const Vector x = cube.sample_uniform(rng);
            CHECK(std::abs(net.eval1(x) - cube.dist_to_boundary(x)) <= 1e-12);
        }
    }
    // size(32)/size(8) within 2x of the dimension ratio
    CHECK(static_cast<double>(sizes[2]) / sizes[1] < 2.0 * 32.0 / 8.0);
}

TEST_CASE("ball distance net meets its tolerance") {
    RngStream rng(9);
    for (int d : {3, 10}) {
        const double delta = 1e-2;
        const ConvexDomain ball = ConvexDomain::ball(d, 1.0);
        const ReluNet net = relu::build_dist_ball(d, delta);
        double worst = 0.0;
        for (int t = 0; t < 300; ++t) {
            const Vector x = ball.sample_uniform(rng);
            worst = std::max(worst, std::abs(net.eval1(x) - ball.dist_to_boundary(x)));
        }
        CHECK(worst <= delta);
    }
}

TEST_CASE("network json round trip is bit exact") {
    RngStream rng(10);
    const ReluNet net = random_net(rng, 3, 2, 3, 5);
    const auto j = io::network_to_json(net);
    const ReluNet back = io::network_from_json(j);
    CHECK(back.size() == net.size());
    CHECK(back.recount_nonzeros() == net.size());
    for (int t = 0; t < 50; ++t) {
        const Vector x = random_point(rng, 3);
        const Vector a = net.eval(x), b = back.eval(x);
        for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a(i) == b(i));
    }
    // round trip through the serialized text as well
    const ReluNet back2 = io::network_from_json(io::json::parse(j.dump()));
    const Vector x = random_point(rng, 3);
    CHECK(back2.eval(x)(0) == net.eval(x)(0));
}

TEST_CASE("network json loader rejects inconsistent dimensions") {
    RngStream rng(11);
    auto j = io::network_to_json(random_net(rng, 2, 1, 2, 3));
    j["dims"][0] = 5;
    CHECK_THROWS(io::network_from_json(j));
}
