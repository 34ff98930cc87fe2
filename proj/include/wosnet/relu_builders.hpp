#pragma once

#include "wosnet/relu.hpp"

namespace wosnet::relu {

// |y| = sigma(y) + sigma(-y), exact
ReluNet build_abs();

// max{y,z} = sigma(y-z) + z, exact
ReluNet build_max2();

// balanced binary tree of max2, exact, size O(n)
ReluNet build_max_n(int n);

// min(|y|, 1), exact; guards square-net inputs against range overflow
ReluNet build_clamp_abs();

// sigma(y) as a 1-in 1-out net; clamps a scalar at zero
ReluNet build_relu_scalar();

// Piecewise-linear interpolation of x^2 at 2^m+1 uniform nodes on [0,1],
// realized by m composed sawtooth units; one-sided:
//   x^2 <= net(x) <= x^2 + delta2.
ReluNet build_square(double delta2);

// square on [-1,1] via the clamped absolute value
ReluNet build_square_sym(double delta2);

// |ab - net(a,b)| <= delta on [-c,c]^2, size O(log(c^2/delta)).
// Polarization of squares: ab = c^2 [((a+b)/2c)^2 - ((a-b)/2c)^2].
ReluNet build_product(double delta, double c);

// sup_{x in [0,2]} |sqrt(x) - net(x)| <= delta_bar, size O(log^2(1/delta_bar)).
// Unrolled Goldschmidt-type iteration
//   s_{n+1} = s_n - s_n c_n / 2,   c_{n+1} = c_n^2 (c_n - 3)/4
// with the delta^2 input shift; multiplications realized by build_product at
// accuracy eps = delta_bar/2 * (delta/4)^7 / c_sqrt.
ReluNet build_sqrt(double delta_bar, double c_sqrt = 64.0);

// exact realization of side/2 - max_i |x_i|, size O(d)
ReluNet build_dist_cube(int d, double side);

// 1 - sqrt(sum_i sq(x_i)) with calibration delta1 = delta/2,
// delta2 = delta^2/(2d)^2; accuracy delta on the closed unit ball
ReluNet build_dist_ball(int d, double delta);

}  // namespace wosnet::relu
