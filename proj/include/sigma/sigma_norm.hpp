#pragma once

#include "sigma/distortion.hpp"
#include "sigma/prob_core.hpp"

namespace sigma {

/// Distortion-weighted norm ||Y||_{sigma,p}:
///   ||Y||^p = sum_k v_k^p (S(c_{k-1}) - S(c_k))
/// over the quantile steps (c_k, v_k) of the magnitude |Y|_r. Exact for every
/// distortion family; equals the comonotone value of E sigma(U)|Y|^p.
double sigma_norm(const RandomVector& y, const Distortion& sig, double p,
                  double vecnorm_r = 2.0);

/// Law-level overload on a magnitude quantile (values must be nonnegative).
double sigma_norm(const StepQuantile& magnitude_quantile, const Distortion& sig,
                  double p);

/// Objective E sigma(U)|Y|^p for the uniform variable given by `slots`:
/// (sum_i |y_i|^p int_{slot_i} sigma)^{1/p}. At most the norm, with equality
/// for comonotone slots.
double norm_via_coupling(const RandomVector& y, const Distortion& sig, double p,
                         const SlotCoupling& slots, double vecnorm_r = 2.0);

struct ExponentComparison {
  double norm_p;
  double norm_p_prime;
  bool holds;  // norm_p <= norm_p_prime + 1e-12
};

/// Monotonicity of p -> ||Y||_{sigma,p} for 1 <= p < p'.
ExponentComparison compare_p(const RandomVector& y, const Distortion& sig,
                             double p, double p_prime, double vecnorm_r = 2.0);

struct HolderBound {
  double lhs;  // ||Y||_{sigma,p}^p
  double rhs;  // (int sigma^r)^{1/r} ||Y||_{p'}^p, r = p'/(p'-p)
  bool holds;
  // The factor-free comparison ||Y||_{sigma,p} <= ||Y||_{p'} is reported for
  // inspection only; this library guarantees the factored bound above, whose
  // constant (int sigma^r)^{1/(rp)} is >= 1.
  double plain_rhs;  // ||Y||_{p'}^p
  bool plain_observed;
};

/// Embedding bound ||Y||_{sigma,p}^p <= (int sigma^r)^{1/r} (E|Y|^{p'})^{p/p'}.
HolderBound holder_bound(const RandomVector& y, const Distortion& sig, double p,
                         double p_prime, double vecnorm_r = 2.0);

/// |S(1-alpha)^{2/p} + S(alpha)^{2/p} - 1|: deviation from the parallelogram
/// identity on the two-indicator configuration. Zero for all alpha exactly
/// when sigma is constant and p = 2.
double parallelogram_residual(const Distortion& sig, double p, double alpha);

}  // namespace sigma
