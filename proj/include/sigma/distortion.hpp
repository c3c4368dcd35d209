#pragma once

#include <Eigen/Core>

#include <string>

#include "sigma/prob_core.hpp"

namespace sigma {

/// Distortion function: a nondecreasing, nonnegative, left-continuous weight
/// density on [0,1) integrating to one. All norm code evaluates it through
/// the tail integral S(alpha) = int_alpha^1 sigma(u) du and interval
/// integrals, which are closed-form for every family.
///
/// Families:
///   Constant          sigma(u) = 1
///   Avar(beta)        sigma(u) = 1{u > beta} / (1 - beta),  beta in [0,1)
///   Power(s)          sigma(u) = s u^(s-1),                 s >= 1
///   Log               sigma(u) = -log(1 - u)
///   Step              piecewise constant, nondecreasing levels
class Distortion {
 public:
  enum class Family { Constant, Avar, Power, Log, Step };

  static Distortion constant();
  static Distortion avar(double beta);
  static Distortion power(double s);
  static Distortion log_spectrum();
  /// breakpoints 0 = b_0 < ... < b_m = 1 given without the leading zero;
  /// levels l_1 <= ... <= l_m, nonnegative, integral 1 within 1e-12
  /// (then renormalized).
  static Distortion step(Eigen::VectorXd breakpoints, Eigen::VectorXd levels);

  Family family() const { return family_; }
  double param() const { return param_; }
  const Eigen::VectorXd& step_breakpoints() const { return breaks_; }
  const Eigen::VectorXd& step_levels() const { return levels_; }

  /// Pointwise value, u in [0,1); diagnostics and dominance checks only.
  double sigma_at(double u) const;

  /// S(alpha) = int_alpha^1 sigma(u) du, closed form.
  double S_at(double alpha) const;

  /// int_a^b sigma(u) du for 0 <= a <= b <= 1.
  double integral_sigma(double a, double b) const;

  /// int_0^1 sigma(u)^r du for r >= 1, closed form per family.
  double power_integral(double r) const;

  /// inf{u > 0 : sigma(u) > 0}.
  double u0() const;

  bool is_bounded() const;

  /// sup of sigma on [0,1); +inf for the Log family.
  double sup_sigma() const;

  /// Inverse of S restricted to [u0, 1]; S_inverse(t) = alpha with
  /// S(alpha) = t, t in [0,1]. Bracketed Newton for the Log family.
  double S_inverse(double t) const;

  /// Textual form: constant | avar:<beta> | power:<s> | log |
  /// step:<b1,l1;b2,l2;...>.
  std::string to_string() const;
  static Distortion parse(const std::string& text);

 private:
  Distortion() = default;

  Family family_ = Family::Constant;
  double param_ = 0.0;          // beta for Avar, s for Power
  Eigen::VectorXd breaks_;      // Step: 0 = b_0 < ... < b_m = 1
  Eigen::VectorXd levels_;      // Step: l_1 <= ... <= l_m
  Eigen::VectorXd step_tail_;   // Step: S at b_k, precomputed
};

/// Empirical distortion sigma_Z = quantile of |Z| rescaled to integrate to
/// one; `scale` records the mean magnitude divided out.
struct SampleDistortion {
  Distortion sigma;
  double scale;
};

SampleDistortion distortion_from_sample(const RandomVector& z,
                                        double vecnorm_r = 1.0);

}  // namespace sigma
