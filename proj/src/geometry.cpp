#include "wosnet/geometry.hpp"

#include <cmath>

namespace wosnet {

double RngStream::normal() {
    // Box-Muller, first coordinate only; deterministic draw order.
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double unit_ball_volume(int d) {
    return std::pow(M_PI, 0.5 * d) / std::tgamma(1.0 + 0.5 * d);
}

ConvexDomain::ConvexDomain(Kind kind, int dim, double param, GenericDomainSpec spec)
    : kind_(kind), dim_(dim), param_(param), generic_(std::move(spec)) {
    switch (kind_) {
        case Kind::UnitBall:
            diameter_ = 2.0 * param_;
            volume_ = std::pow(param_, dim_) * unit_ball_volume(dim_);
            break;
        case Kind::CenteredCube:
            diameter_ = param_ * std::sqrt(static_cast<double>(dim_));
            volume_ = std::pow(param_, dim_);
            break;
        case Kind::Generic:
            diameter_ = generic_.diameter;
            volume_ = generic_.volume;
            break;
    }
}

ConvexDomain ConvexDomain::ball(int dim, double radius) {
    if (dim < 1 || radius <= 0.0) throw std::invalid_argument("ball: need dim >= 1, radius > 0");
    return ConvexDomain(Kind::UnitBall, dim, radius, {});
}

ConvexDomain ConvexDomain::cube(int dim, double side) {
    if (dim < 1 || side <= 0.0) throw std::invalid_argument("cube: need dim >= 1, side > 0");
    return ConvexDomain(Kind::CenteredCube, dim, side, {});
}

ConvexDomain ConvexDomain::generic(int dim, GenericDomainSpec spec) {
    if (dim < 1 || !spec.dist || spec.diameter <= 0.0 || spec.volume <= 0.0 ||
        spec.box_lo.size() != dim || spec.box_hi.size() != dim)
        throw std::invalid_argument("generic: incomplete domain spec");
    return ConvexDomain(Kind::Generic, dim, 0.0, std::move(spec));
}

double ConvexDomain::signed_dist(const Vector& x) const {
    switch (kind_) {
        case Kind::UnitBall:
            return param_ - x.norm();
        case Kind::CenteredCube:
            return 0.5 * param_ - x.cwiseAbs().maxCoeff();
        case Kind::Generic:
            return generic_.dist(x);
    }
    return 0.0;
}

double ConvexDomain::dist_to_boundary(const Vector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("dist_to_boundary: dimension mismatch");
    const double d = signed_dist(x);
    if (d < -kBoundaryTol) throw std::invalid_argument("dist_to_boundary: point outside closure(D)");
    return std::max(d, 0.0);
}

Vector ConvexDomain::sample_uniform(RngStream& rng) const {
    Vector lo, hi;
    if (kind_ == Kind::Generic) {
        lo = generic_.box_lo;
        hi = generic_.box_hi;
    } else {
        const double h = (kind_ == Kind::UnitBall) ? param_ : 0.5 * param_;
        lo = Vector::Constant(dim_, -h);
        hi = Vector::Constant(dim_, h);
    }
    Vector x(dim_);
    while (true) {
        for (int i = 0; i < dim_; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
        if (signed_dist(x) > 0.0) return x;
    }
}

std::string ConvexDomain::kind_name() const {
    switch (kind_) {
        case Kind::UnitBall: return "ball";
        case Kind::CenteredCube: return "cube";
        case Kind::Generic: return "generic";
    }
    return "?";
}

Vector sample_unit_sphere(RngStream& rng, int d) {
    if (d < 1) throw std::invalid_argument("sample_unit_sphere: d >= 1");
    Vector v(d);
    while (true) {
        for (int i = 0; i < d; ++i) v[i] = rng.normal();
        const double n = v.norm();
        if (n > 0.0) return v / n;
    }
}

double boggio_radial_cdf(int d, double r) {
    if (d < 3) throw std::invalid_argument("boggio: d >= 3 required");
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    return (d * r * r - 2.0 * std::pow(r, d)) / (d - 2.0);
}

double boggio_radial_quantile(int d, double u) {
    if (d < 3) throw std::invalid_argument("boggio: d >= 3 required");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (boggio_radial_cdf(d, mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Vector sample_boggio(RngStream& rng, int d) {
    const double r = boggio_radial_quantile(d, rng.uniform());
    return r * sample_unit_sphere(rng, d);
}

}  // namespace wosnet
