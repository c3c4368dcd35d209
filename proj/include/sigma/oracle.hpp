#pragma once

#include <cstdint>

#include "sigma/distortion.hpp"
#include "sigma/prob_core.hpp"

namespace sigma::oracle {

/// Brute-force checks for the fast paths. Capped at tiny atom counts by
/// contract; production code never calls these.

/// Exact maximum of the pairing over all n! rearrangements, n <= 8.
double enumerate_rho(const RandomVector& z, const RandomVector& y);

/// Lower bound for the dual norm: maximizes |E(Z Y)| over the unit ball of
/// ||.||_{sigma,p} within the comonotone family Y = sign(Z) h(U), h a
/// nondecreasing step vector on quantile segments. Scans all indicator step
/// vectors and runs projected gradient ascent from random monotone starts.
/// Deterministic for a fixed seed; n <= 8.
double search_dual_pairing(const RandomVector& z, const Distortion& sig,
                           double p, int restarts = 10000,
                           std::uint64_t seed = 1);

/// Direct double-infimum evaluation of the majorant,
///   G_sigma(alpha) = inf_{y >= 0} [ y S(alpha) - inf_beta (y S(beta) - G(beta)) ],
/// on dense beta and y grids augmented with all breakpoints and pairwise
/// constraint slopes. n <= 6.
Eigen::VectorXd grid_biconjugate(const RandomVector& z, const Distortion& sig,
                                 const Eigen::VectorXd& probe_alphas,
                                 int y_grid = 10000, int beta_grid = 2048);

}  // namespace sigma::oracle
