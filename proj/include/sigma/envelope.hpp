#pragma once

#include "sigma/distortion.hpp"
#include "sigma/prob_core.hpp"

namespace sigma {

/// G(alpha) = int_alpha^1 F^{-1}(u) du for a nonnegative step quantile F^{-1}:
/// piecewise linear, nonincreasing, concave, G(1) = 0, G(0) = mean.
struct TailTransform {
  Eigen::VectorXd breakpoints;  // c_0 = 0 < ... < c_m = 1
  Eigen::VectorXd g;            // G(c_k), size m+1, g(m) = 0

  double at(double alpha) const;
  double mean() const { return g(0); }
};

TailTransform build_tail_transform(const StepQuantile& magnitude_quantile);

/// Vertices of the least concave majorant of the constraint points
/// (S(c_k), G(c_k)) in t = S(alpha) coordinates, where the least
/// S-concave-majorant problem becomes an ordinary upper concave hull.
///
/// The point at t = 1 carries the whole interval [0, u0] on which S == 1;
/// its constraint value is G(0) and its alpha coordinate is u0. Between
/// consecutive constraint points the reparametrized curve
/// t -> G(S^{-1}(t)) is convex (S^{-1} is concave and G decreases linearly),
/// so majorizing the constraint points majorizes the entire curve and the
/// hull is exact for every distortion family.
struct HullPoints {
  Eigen::VectorXd t;       // vertex abscissae, ascending, t(0) = 0, t(J) = 1
  Eigen::VectorXd g;       // vertex ordinates, g(0) = 0
  Eigen::VectorXd alpha;   // preimages of t under S, carried through exactly
  Eigen::VectorXd slopes;  // per-segment slopes y_j >= 0, nonincreasing

  Eigen::Index segments() const { return slopes.size(); }

  /// Hull ordinate at abscissa t in [0,1]; equals the majorant G_sigma
  /// evaluated at any alpha with S(alpha) = t.
  double value_at(double t_query) const;
};

HullPoints concave_majorant(const TailTransform& tail, const Distortion& sig);

/// Density H of the majorant: G_sigma(alpha) = int_alpha^1 H(u) sigma(u) du.
/// H is a nonnegative, nondecreasing, left-continuous step function whose
/// jumps sit on quantile breakpoints of the source variable, constant on
/// [0, u0].
struct DensityH {
  StepQuantile steps;               // H as a step function on (0,1]
  Eigen::VectorXd segment_slopes;   // y_j per hull segment (hull order)
  Eigen::VectorXd segment_measure;  // Delta t_j per hull segment

  double at(double u) const { return steps.value_at(u); }

  /// (sum_j y_j^q Delta t_j)^{1/q} = (int_0^1 H^q sigma)^{1/q}.
  double q_mean(double q) const;
};

DensityH extract_density(const HullPoints& hull);

}  // namespace sigma
