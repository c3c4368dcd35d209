#include "sigma/risk.hpp"

#include <cmath>
#include <stdexcept>

#include "sigma/assignment.hpp"
#include "sigma/dual_norm.hpp"
#include "sigma/sigma_norm.hpp"

namespace sigma {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool equal_weights(const FiniteSpace& space) {
  for (Eigen::Index i = 1; i < space.size(); ++i)
    if (space.weight(i) != space.weight(0)) return false;
  return true;
}

// Rank-to-rank matching of y onto z (ascending, ties by index).
std::vector<Eigen::Index> comonotone_permutation(const Eigen::VectorXd& zv,
                                                 const Eigen::VectorXd& yv) {
  const auto oz = sorted_order(zv);
  const auto oy = sorted_order(yv);
  std::vector<Eigen::Index> perm(oz.size());
  for (std::size_t k = 0; k < oz.size(); ++k)
    perm[static_cast<std::size_t>(oz[k])] = oy[k];
  return perm;
}

// int_0^1 F_a^{-1}(u) F_b^{-1}(u) du over merged breakpoints.
double quantile_product_integral(const StepQuantile& a, const StepQuantile& b) {
  double acc = 0.0;
  double lo = 0.0;
  Eigen::Index ia = 0, ib = 0;
  while (ia < a.steps() && ib < b.steps()) {
    const double hi = std::min(a.breakpoints(ia + 1), b.breakpoints(ib + 1));
    acc += a.values(ia) * b.values(ib) * (hi - lo);
    if (a.breakpoints(ia + 1) == hi) ++ia;
    if (b.breakpoints(ib + 1) == hi) ++ib;
    lo = hi;
  }
  return acc;
}

}  // namespace

double permuted_pairing(const RandomVector& z, const RandomVector& y,
                        const std::vector<Eigen::Index>& perm) {
  require(z.atoms() == y.atoms() && z.dim() == y.dim(),
          "permuted_pairing: shape mismatch");
  require(static_cast<Eigen::Index>(perm.size()) == z.atoms(),
          "permuted_pairing: permutation length mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.atoms(); ++i)
    acc += z.space().weight(i) *
           z.values().row(i).dot(y.values().row(perm[static_cast<std::size_t>(i)]));
  return acc;
}

double rho_scalar(const RandomVector& z, const RandomVector& y) {
  require(z.dim() == 1 && y.dim() == 1, "rho_scalar: scalar variables required");
  require(z.space().same_as(y.space()), "rho_scalar: variables on different spaces");
  if (equal_weights(z.space())) {
    // The comonotone permutation attains the quantile product integral.
    const auto perm =
        comonotone_permutation(z.values().col(0), y.values().col(0));
    return permuted_pairing(z, y, perm);
  }
  return quantile_product_integral(quantile(z.values().col(0), z.space()),
                                   quantile(y.values().col(0), y.space()));
}

AssignmentResult rho_assignment(const RandomVector& z, const RandomVector& y) {
  require(z.atoms() == y.atoms() && z.dim() == y.dim(),
          "rho_assignment: shape mismatch");
  require(z.space().same_as(y.space()),
          "rho_assignment: variables on different spaces");
  require(equal_weights(z.space()),
          "rho_assignment: equal weights required; use rho_scalar for d = 1, "
          "unequal weights with d > 1 are out of scope");
  if (z.dim() == 1) {
    auto perm = comonotone_permutation(z.values().col(0), y.values().col(0));
    const double rho = permuted_pairing(z, y, perm);
    return {rho, std::move(perm)};
  }
  const Eigen::MatrixXd cost = -(z.values() * y.values().transpose());
  auto perm = min_cost_assignment(cost);
  const double rho = permuted_pairing(z, y, perm);
  return {rho, std::move(perm)};
}

LipschitzCheck lipschitz_check(const RandomVector& z, const RandomVector& y1,
                               const RandomVector& y2, double p,
                               double vecnorm_r) {
  require(y1.atoms() == y2.atoms() && y1.dim() == y2.dim(),
          "lipschitz_check: portfolio shape mismatch");
  const SampleDistortion sd =
      distortion_from_sample(z, dual_exponent(vecnorm_r));
  const double rho1 = rho_assignment(z, y1).rho;
  const double rho2 = rho_assignment(z, y2).rho;
  const RandomVector diff(y1.space(), y1.values() - y2.values());
  LipschitzCheck out;
  out.lhs = std::abs(rho1 - rho2);
  out.rhs = sigma_norm(diff, sd.sigma, p, vecnorm_r);
  out.scale = sd.scale;
  out.holds = out.lhs <= out.scale * out.rhs + 1e-9;
  return out;
}

RiskReport bound_chain(const RandomVector& z, const RandomVector& y,
                       double vecnorm_r) {
  require(z.atoms() == y.atoms() && z.dim() == y.dim(),
          "bound_chain: shape mismatch");
  require(z.space().same_as(y.space()),
          "bound_chain: variables on different spaces");
  const double rstar = dual_exponent(vecnorm_r);
  const Eigen::VectorXd mz_star = z.magnitudes(rstar);
  const Eigen::VectorXd mz_one = z.magnitudes(1.0);
  const Eigen::VectorXd my = y.magnitudes(vecnorm_r);

  double K = 0.0;
  for (Eigen::Index j = 0; j < z.dim(); ++j)
    K = std::max(K, lr_norm(Eigen::VectorXd::Unit(z.dim(), j), rstar));

  RiskReport out;
  out.rho = std::abs(pairing(z, y));
  out.pointwise_bound = expectation(mz_star.cwiseProduct(my), z.space());
  out.l1_bound = K * expectation(mz_one.cwiseProduct(my), z.space());
  out.quantile_bound =
      K * quantile_product_integral(quantile(mz_one, z.space()),
                                    quantile(my, y.space()));
  out.K = K;
  out.holds = out.rho <= out.pointwise_bound + 1e-9 &&
              out.pointwise_bound <= out.l1_bound + 1e-9 &&
              out.l1_bound <= out.quantile_bound + 1e-9;
  return out;
}

}  // namespace sigma
