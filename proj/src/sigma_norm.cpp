#include "sigma/sigma_norm.hpp"

#include <cmath>
#include <stdexcept>

namespace sigma {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double sigma_norm(const StepQuantile& q, const Distortion& sig, double p) {
  require(std::isfinite(p) && p >= 1.0, "sigma_norm: p must lie in [1, inf)");
  double acc = 0.0;
  double s_hi = 1.0;  // S(c_0) = S(0)
  for (Eigen::Index k = 0; k < q.steps(); ++k) {
    const double s_lo = sig.S_at(q.breakpoints(k + 1));
    acc += std::pow(q.values(k), p) * (s_hi - s_lo);
    s_hi = s_lo;
  }
  return std::pow(acc, 1.0 / p);
}

double sigma_norm(const RandomVector& y, const Distortion& sig, double p,
                  double vecnorm_r) {
  return sigma_norm(quantile(y.magnitudes(vecnorm_r), y.space()), sig, p);
}

double norm_via_coupling(const RandomVector& y, const Distortion& sig, double p,
                         const SlotCoupling& slots, double vecnorm_r) {
  require(std::isfinite(p) && p >= 1.0,
          "norm_via_coupling: p must lie in [1, inf)");
  require(slots.atoms() == y.atoms(), "norm_via_coupling: slot/space mismatch");
  const Eigen::VectorXd m = y.magnitudes(vecnorm_r);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.atoms(); ++i)
    acc += std::pow(m(i), p) * sig.integral_sigma(slots.lower(i), slots.upper(i));
  return std::pow(acc, 1.0 / p);
}

ExponentComparison compare_p(const RandomVector& y, const Distortion& sig,
                             double p, double p_prime, double vecnorm_r) {
  require(p >= 1.0 && p < p_prime, "compare_p: need 1 <= p < p'");
  ExponentComparison out;
  out.norm_p = sigma_norm(y, sig, p, vecnorm_r);
  out.norm_p_prime = sigma_norm(y, sig, p_prime, vecnorm_r);
  out.holds = out.norm_p <= out.norm_p_prime + 1e-12;
  return out;
}

HolderBound holder_bound(const RandomVector& y, const Distortion& sig, double p,
                         double p_prime, double vecnorm_r) {
  require(p >= 1.0 && p < p_prime, "holder_bound: need 1 <= p < p'");
  const double r = p_prime / (p_prime - p);
  HolderBound out;
  out.lhs = std::pow(sigma_norm(y, sig, p, vecnorm_r), p);
  out.plain_rhs = std::pow(p_norm(y, p_prime, vecnorm_r), p);
  out.rhs = std::pow(sig.power_integral(r), 1.0 / r) * out.plain_rhs;
  out.holds = out.lhs <= out.rhs + 1e-12;
  out.plain_observed = out.lhs <= out.plain_rhs + 1e-12;
  return out;
}

double parallelogram_residual(const Distortion& sig, double p, double alpha) {
  require(alpha > 0.0 && alpha < 1.0,
          "parallelogram_residual: alpha must lie in (0,1)");
  require(std::isfinite(p) && p >= 1.0,
          "parallelogram_residual: p must lie in [1, inf)");
  const double e = 2.0 / p;
  return std::abs(std::pow(sig.S_at(1.0 - alpha), e) +
                  std::pow(sig.S_at(alpha), e) - 1.0);
}

}  // namespace sigma
