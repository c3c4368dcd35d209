#include "sigma/dual_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "sigma/sigma_norm.hpp"

namespace sigma {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

Eigen::VectorXd abs_scalar(const RandomVector& z) {
  require(z.dim() == 1, "operation requires a scalar variable");
  return z.values().col(0).cwiseAbs();
}

// int_alpha^1 sigma(u) F^{-1}(u) du for a step quantile.
double sigma_weighted_tail(const StepQuantile& q, const Distortion& sig,
                           double alpha) {
  double acc = 0.0;
  for (Eigen::Index k = q.steps() - 1; k >= 0; --k) {
    const double hi = q.breakpoints(k + 1);
    if (hi <= alpha) break;
    const double lo = std::max(alpha, q.breakpoints(k));
    acc += q.values(k) * sig.integral_sigma(lo, hi);
  }
  return acc;
}

// max_k G(c_k)/S(c_k) over breakpoints c_k < 1, with the argmax level.
std::pair<double, double> tail_ratio_max(const TailTransform& tail,
                                         const Distortion& sig) {
  double best = 0.0;
  double best_alpha = 0.0;
  for (Eigen::Index k = 0; k + 1 < tail.breakpoints.size(); ++k) {
    const double c = tail.breakpoints(k);
    const double ratio = tail.g(k) / sig.S_at(c);
    if (ratio > best) {
      best = ratio;
      best_alpha = c;
    }
  }
  return {best, best_alpha};
}

DualityCertificate verified(DualityCertificate cert, const RandomVector& z,
                            const Distortion& sig) {
  const double scale = 1.0 + std::abs(cert.dual_value);
  if (cert.gap > (1e-9 + cert.approximation_bound) * scale)
    throw std::runtime_error("duality certificate: sandwich gap too large");
  const DominanceCheck dom = sigma_dominates(cert.envelope, z, sig);
  if (dom.margin < -1e-12 * scale)
    throw std::runtime_error("duality certificate: envelope fails dominance");
  return cert;
}

}  // namespace

double avar(const RandomVector& z, double alpha) {
  require(alpha >= 0.0 && alpha < 1.0, "avar: alpha must lie in [0,1)");
  const StepQuantile q = quantile(abs_scalar(z), z.space());
  return q.tail_integral(alpha) / (1.0 - alpha);
}

AvarTailSet avar_superset(const RandomVector& z, double alpha) {
  require(alpha >= 0.0 && alpha < 1.0, "avar_superset: alpha must lie in [0,1)");
  const Eigen::VectorXd m = abs_scalar(z);
  const FiniteSpace& space = z.space();
  auto order = sorted_order(m);
  std::reverse(order.begin(), order.end());  // descending magnitude

  const double target = 1.0 - alpha;
  std::vector<Eigen::Index> members;
  double acc = 0.0;
  Eigen::Index split_atom = -1;
  double split_take = 0.0;
  for (Eigen::Index i : order) {
    const double w = space.weight(i);
    if (acc + w <= target + 1e-15) {
      members.push_back(i);
      acc += w;
      if (acc >= target - 1e-15) break;
    } else {
      split_atom = i;
      split_take = target - acc;
      break;
    }
  }

  if (split_atom < 0 || split_take <= 1e-15) {
    double mass = 0.0;
    for (Eigen::Index i : members) mass += space.weight(i) * m(i);
    return {z, std::move(members), mass / (1.0 - alpha)};
  }

  // Duplicate the boundary atom: the kept remainder stays in place, the
  // split share is appended and joins the tail set.
  const Eigen::Index n = space.size();
  Eigen::VectorXd weights(n + 1);
  Eigen::MatrixXd values(n + 1, z.dim());
  weights.head(n) = space.weights();
  values.topRows(n) = z.values();
  weights(split_atom) = space.weight(split_atom) - split_take;
  weights(n) = split_take;
  values.row(n) = z.values().row(split_atom);
  RandomVector expanded(FiniteSpace(weights), std::move(values));
  members.push_back(n);
  double mass = 0.0;
  for (Eigen::Index i : members) mass += expanded.space().weight(i) * std::abs(expanded.values()(i, 0));
  return {std::move(expanded), std::move(members), mass / (1.0 - alpha)};
}

double dual_norm_inf(const RandomVector& z, const Distortion& sig) {
  const StepQuantile q = quantile(abs_scalar(z), z.space());
  return tail_ratio_max(build_tail_transform(q), sig).first;
}

DualityCertificate dual_norm_one(const RandomVector& z, const Distortion& sig) {
  const Eigen::VectorXd m = abs_scalar(z);
  const StepQuantile q = quantile(m, z.space());
  const auto [eta, alpha_star] = tail_ratio_max(build_tail_transform(q), sig);

  const Eigen::Index n = z.atoms();
  Eigen::VectorXd witness = Eigen::VectorXd::Zero(n);
  double pair = 0.0;
  if (eta > 0.0) {
    const SlotCoupling slots = comonotone_slots(m, z.space());
    const double s_star = sig.S_at(alpha_star);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (slots.lower(i) >= alpha_star) {
        witness(i) = sgn(z.values()(i, 0)) / s_star;
        pair += z.space().weight(i) * z.values()(i, 0) * witness(i);
      }
    }
  }
  RandomVector witness_rv = RandomVector::scalar(z.space(), witness);
  const double witness_norm = sigma_norm(witness_rv, sig, 1.0);
  DualityCertificate cert{
      eta,
      RandomVector::constant(z.space(), eta),
      std::move(witness_rv),
      pair,
      eta,
      witness_norm > 0.0 ? eta - pair / witness_norm : 0.0,
      0.0};
  return verified(std::move(cert), z, sig);
}

DualityCertificate dual_norm_q(const RandomVector& z, const Distortion& sig,
                               double p) {
  require(std::isfinite(p) && p > 1.0, "dual_norm_q: p must lie in (1, inf)");
  const double q_exp = p / (p - 1.0);
  const Eigen::VectorXd m = abs_scalar(z);
  const StepQuantile q = quantile(m, z.space());
  const DensityH density = extract_density(
      concave_majorant(build_tail_transform(q), sig));
  const double dual = density.q_mean(q_exp);

  const Eigen::Index n = z.atoms();
  const SlotCoupling slots = comonotone_slots(m, z.space());
  Eigen::VectorXd env(n), wit(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = density.at(slots.upper(i));
    env(i) = h;
    wit(i) = sgn(z.values()(i, 0)) * std::pow(h, q_exp - 1.0);
  }
  RandomVector envelope = RandomVector::scalar(z.space(), env);
  RandomVector witness = RandomVector::scalar(z.space(), wit);
  const double pair = pairing(z, witness);
  const double witness_norm = sigma_norm(witness, sig, p);
  const double upper = sigma_norm(envelope, sig, q_exp);
  DualityCertificate cert{
      dual,
      std::move(envelope),
      std::move(witness),
      pair,
      upper,
      witness_norm > 0.0 ? upper - pair / witness_norm : 0.0,
      0.0};
  return verified(std::move(cert), z, sig);
}

DualityCertificate dual_norm_certificate(const RandomVector& z,
                                         const Distortion& sig, double p) {
  require(std::isfinite(p) && p >= 1.0,
          "dual_norm_certificate: p must lie in [1, inf)");
  return p == 1.0 ? dual_norm_one(z, sig) : dual_norm_q(z, sig, p);
}

DominanceCheck sigma_dominates(const RandomVector& z_prime,
                               const RandomVector& z, const Distortion& sig) {
  const StepQuantile qp = quantile(abs_scalar(z_prime), z_prime.space());
  const StepQuantile qz = quantile(abs_scalar(z), z.space());

  std::set<double> alphas{0.0, 1.0};
  for (Eigen::Index k = 0; k < qp.breakpoints.size(); ++k)
    alphas.insert(qp.breakpoints(k));
  for (Eigen::Index k = 0; k < qz.breakpoints.size(); ++k)
    alphas.insert(qz.breakpoints(k));
  // Kinks of sigma itself; between them the margin is concave in alpha.
  if (sig.family() == Distortion::Family::Avar) {
    alphas.insert(sig.u0());
  } else if (sig.family() == Distortion::Family::Step) {
    const Eigen::VectorXd& b = sig.step_breakpoints();
    for (Eigen::Index k = 1; k + 1 < b.size(); ++k) alphas.insert(b(k));
  }

  double margin = std::numeric_limits<double>::infinity();
  for (double a : alphas) {
    const double d = sigma_weighted_tail(qp, sig, a) - qz.tail_integral(a);
    margin = std::min(margin, d);
  }
  return {margin >= -1e-12, margin};
}

double pairing(const RandomVector& z, const RandomVector& y) {
  require(z.atoms() == y.atoms() && z.dim() == y.dim(),
          "pairing: shape mismatch");
  require(z.space().same_as(y.space()), "pairing: variables on different spaces");
  return (z.values().cwiseProduct(y.values())).rowwise().sum().dot(
      z.space().weights());
}

namespace {

// Unit vector u (l_r norm 1) with <z, u> equal to the l_{r*} norm of z.
Eigen::VectorXd dual_align(const Eigen::VectorXd& z, double r) {
  const Eigen::Index d = z.size();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  if (z.isZero(0.0)) {
    u(0) = 1.0;
    return u;
  }
  if (r == 1.0) {
    Eigen::Index jmax;
    z.cwiseAbs().maxCoeff(&jmax);
    u(jmax) = sgn(z(jmax));
    return u;
  }
  if (std::isinf(r)) {
    for (Eigen::Index j = 0; j < d; ++j) u(j) = sgn(z(j));
    return u;
  }
  const double rstar = dual_exponent(r);
  const double nz = lr_norm(z, rstar);
  for (Eigen::Index j = 0; j < d; ++j)
    u(j) = sgn(z(j)) * std::pow(std::abs(z(j)) / nz, rstar - 1.0);
  return u;
}

}  // namespace

DualityCertificate vector_dual_norm(const RandomVector& z, const Distortion& sig,
                                    double p, double vecnorm_r) {
  require(std::isfinite(p) && p >= 1.0,
          "vector_dual_norm: p must lie in [1, inf)");
  const double rstar = dual_exponent(vecnorm_r);
  RandomVector mag = RandomVector::scalar(z.space(), z.magnitudes(rstar));
  DualityCertificate scalar_cert = dual_norm_certificate(mag, sig, p);

  Eigen::MatrixXd wit(z.atoms(), z.dim());
  for (Eigen::Index i = 0; i < z.atoms(); ++i) {
    const double wmag = std::abs(scalar_cert.witness.values()(i, 0));
    wit.row(i) = wmag * dual_align(z.values().row(i).transpose(), vecnorm_r);
  }
  RandomVector witness(z.space(), std::move(wit));
  const double pair = pairing(z, witness);
  const double witness_norm = sigma_norm(witness, sig, p, vecnorm_r);
  return DualityCertificate{
      scalar_cert.dual_value,
      std::move(scalar_cert.envelope),
      std::move(witness),
      pair,
      scalar_cert.upper,
      witness_norm > 0.0 ? scalar_cert.upper - pair / witness_norm : 0.0,
      scalar_cert.approximation_bound};
}

CoarseningContraction dual_contraction_under_coarsening(const RandomVector& z,
                                                        const Distortion& sig,
                                                        double p,
                                                        const Partition& part) {
  require(std::isfinite(p) && p >= 1.0,
          "dual_contraction_under_coarsening: p must lie in [1, inf)");
  require(z.dim() == 1, "dual_contraction_under_coarsening: scalar variable required");
  const RandomVector zc = coarsen(z, part);
  const double before = p == 1.0 ? dual_norm_inf(z, sig)
                                 : dual_norm_q(z, sig, p).dual_value;
  const double after = p == 1.0 ? dual_norm_inf(zc, sig)
                                : dual_norm_q(zc, sig, p).dual_value;
  return {before, after, after <= before + 1e-9};
}

}  // namespace sigma
