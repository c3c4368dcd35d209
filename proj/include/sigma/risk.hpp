#pragma once

#include <vector>

#include "sigma/distortion.hpp"
#include "sigma/prob_core.hpp"

namespace sigma {

/// sum_i w_i <z_i, y_{perm(i)}>: the pairing under a rearranged coupling.
double permuted_pairing(const RandomVector& z, const RandomVector& y,
                        const std::vector<Eigen::Index>& perm);

/// Maximal correlation of two scalar variables: int_0^1 F^{-1}_Z F^{-1}_Y du
/// by exact merged-breakpoint integration of the two (signed) step quantiles.
/// This is the supremum of E(Z Y') over Y' with the law of Y.
double rho_scalar(const RandomVector& z, const RandomVector& y);

struct AssignmentResult {
  double rho;
  std::vector<Eigen::Index> permutation;  // y-index matched to each z atom
};

/// Maximal correlation on equal-weight samples: maximizes
/// (1/n) sum_i <z_i, y_{pi(i)}> over permutations. d = 1 reduces to the
/// comonotone sort and shares the value computation with rho_scalar; d > 1
/// runs the exact assignment solver. Unequal weights are rejected.
AssignmentResult rho_assignment(const RandomVector& z, const RandomVector& y);

struct LipschitzCheck {
  double lhs;    // |rho_Z(Y1) - rho_Z(Y2)|
  double rhs;    // ||Y1 - Y2||_{sigma_Z, p} with sigma_Z from the sample
  double scale;  // E|Z|_{r*} divided out when normalizing sigma_Z
  bool holds;    // lhs <= scale * rhs + 1e-9
};

/// Lipschitz bound of the maximal correlation risk measure in direction Z.
LipschitzCheck lipschitz_check(const RandomVector& z, const RandomVector& y1,
                               const RandomVector& y2, double p,
                               double vecnorm_r = 2.0);

struct RiskReport {
  double rho;              // |E<Z,Y>| for the given coupling
  double pointwise_bound;  // E |Z|_{r*} |Y|_r
  double l1_bound;         // K * E |Z|_1 |Y|_r
  double quantile_bound;   // K * int F^{-1}_{|Z|_1} F^{-1}_{|Y|_r}
  double K;                // operator norm of the identity l_1 -> l_{r*}
  bool holds;              // rho <= pointwise <= l1 <= quantile, 1e-9 slack
};

/// The chain |E<Z,Y>| <= E|Z|_{r*}|Y|_r <= K E|Z|_1|Y|_r <= K int F^-1 F^-1.
RiskReport bound_chain(const RandomVector& z, const RandomVector& y,
                       double vecnorm_r);

}  // namespace sigma
