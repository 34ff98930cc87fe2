#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

#include "wosnet/rng.hpp"

namespace wosnet {

using Vector = Eigen::VectorXd;

// Points within this distance of the boundary are treated as boundary points;
// walk step counts have a log singularity there.
inline constexpr double kBoundaryTol = 1e-9;

struct GenericDomainSpec {
    std::function<double(const Vector&)> dist;
    double diameter = 0.0;
    double volume = 0.0;
    Vector box_lo;  // axis-aligned bounding box, used for rejection sampling
    Vector box_hi;
};

// Bounded convex domain with exact distance-to-boundary, diameter, volume and
// membership test. Ball and cube kinds have closed forms; Generic delegates to
// caller-supplied oracles.
class ConvexDomain {
public:
    enum class Kind { UnitBall, CenteredCube, Generic };

    static ConvexDomain ball(int dim, double radius = 1.0);
    static ConvexDomain cube(int dim, double side = 1.0);
    static ConvexDomain generic(int dim, GenericDomainSpec spec);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double radius() const { return param_; }  // ball kind
    double side() const { return param_; }    // cube kind

    double diameter() const { return diameter_; }
    double volume() const { return volume_; }

    // Exact distance to the boundary; throws std::invalid_argument when x lies
    // outside closure(D) beyond kBoundaryTol (a caller bug, not a data issue).
    double dist_to_boundary(const Vector& x) const;

    // Signed variant used internally: negative outside, no validity check.
    double signed_dist(const Vector& x) const;

    bool contains(const Vector& x, double tol = kBoundaryTol) const {
        return signed_dist(x) >= -tol;
    }

    // Uniform point in D by rejection from the bounding box.
    Vector sample_uniform(RngStream& rng) const;

    std::string kind_name() const;

private:
    ConvexDomain(Kind kind, int dim, double param, GenericDomainSpec spec);

    Kind kind_;
    int dim_;
    double param_ = 0.0;
    double diameter_ = 0.0;
    double volume_ = 0.0;
    GenericDomainSpec generic_;
};

// Uniform direction on the unit sphere (Gaussian normalization, resampling
// the measure-zero all-zeros draw).
Vector sample_unit_sphere(RngStream& rng, int d);

// Radial CDF of the Boggio measure mu on the unit ball:
//   F(r) = (d r^2 - 2 r^d) / (d - 2),  r in [0, 1],  d >= 3.
double boggio_radial_cdf(int d, double r);

// Inverse by bisection to 1e-12.
double boggio_radial_quantile(int d, double u);

// Point in the closed unit ball distributed according to mu
// (uniform direction x radius from the density prop. to r - r^{d-1}).
Vector sample_boggio(RngStream& rng, int d);

double unit_ball_volume(int d);

}  // namespace wosnet
