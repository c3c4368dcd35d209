#pragma once

#include <vector>

#include "sigma/distortion.hpp"
#include "sigma/envelope.hpp"
#include "sigma/prob_core.hpp"

namespace sigma {

/// Self-certifying dual-norm result. The sandwich
///   pairing / ||witness||_{sigma,p}  <=  dual_value  <=  upper
/// holds to numerical tolerance with gap = upper - pairing/||witness||;
/// the envelope sigma-dominates the source variable. approximation_bound is
/// zero: the majorant construction is exact for every distortion family.
struct DualityCertificate {
  double dual_value;
  RandomVector envelope;  // optimal dominating variable, one column
  RandomVector witness;   // norm-attaining direction, atoms x d
  double pairing;         // E<Z, witness>
  double upper;           // ||envelope||_{sigma,q} (p>1) or eta (p=1)
  double gap;
  double approximation_bound;
};

/// Average value-at-risk (1/(1-alpha)) int_alpha^1 F^{-1}_{|Z|}, exact from
/// the step quantile. Scalar Z, alpha in [0,1).
double avar(const RandomVector& z, double alpha);

/// Upper-tail set E of probability 1-alpha with
/// avar(Z, alpha) = E(|Z| 1_E)/(1-alpha). When alpha cuts through an atom the
/// boundary atom is duplicated into two atoms; `variable` then lives on the
/// expanded space.
struct AvarTailSet {
  RandomVector variable;
  std::vector<Eigen::Index> members;
  double value;
};
AvarTailSet avar_superset(const RandomVector& z, double alpha);

/// Dual norm for p = 1: max over quantile breakpoints c < 1 of G(c)/S(c).
/// Endpoint evaluation is exact: G is linear and eta*S concave on each
/// segment, so G - eta*S is convex there.
double dual_norm_inf(const RandomVector& z, const Distortion& sig);

/// p = 1 certificate. The envelope is the constant eta (the least constant
/// whose sigma-weighted tails dominate those of |Z|); the witness is the
/// normalized signed indicator of the argmax upper-tail set.
DualityCertificate dual_norm_one(const RandomVector& z, const Distortion& sig);

/// Dual norm for p in (1, inf) with conjugate q: runs the majorant pipeline,
/// dual = (int H^q sigma)^{1/q}, envelope H composed with the comonotone
/// uniform, witness sign(Z) H^{q-1} composed with the same uniform.
DualityCertificate dual_norm_q(const RandomVector& z, const Distortion& sig,
                               double p);

/// Certificate for any p >= 1 (dispatches on p == 1).
DualityCertificate dual_norm_certificate(const RandomVector& z,
                                         const Distortion& sig, double p);

struct DominanceCheck {
  bool dominates;
  double margin;  // min over alpha of int_a^1 sigma F^{-1}_{|Z'|} - int_a^1 F^{-1}_{|Z|}
};

/// sigma-dominance of Z' over Z via tail integrals. The margin function is
/// concave between merged quantile/sigma breakpoints, so breakpoint
/// evaluation yields the exact minimum.
DominanceCheck sigma_dominates(const RandomVector& z_prime,
                               const RandomVector& z, const Distortion& sig);

/// E<Z, Y> with the Euclidean pairing on R^d.
double pairing(const RandomVector& z, const RandomVector& y);

/// Vector-valued dual norm |Z|*: the scalar dual norm of |Z|_{r*} (dual
/// vector norm), with the witness aligned per atom along the dual-norm
/// attaining direction of z_i.
DualityCertificate vector_dual_norm(const RandomVector& z, const Distortion& sig,
                                    double p, double vecnorm_r);

struct CoarseningContraction {
  double before;
  double after;
  bool holds;  // after <= before + 1e-9
};

/// Dual norms of Z and of its conditional expectation onto the partition.
CoarseningContraction dual_contraction_under_coarsening(const RandomVector& z,
                                                        const Distortion& sig,
                                                        double p,
                                                        const Partition& part);

}  // namespace sigma
