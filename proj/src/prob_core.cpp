#include "sigma/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sigma {

namespace {

constexpr double kWeightSumTol = 1e-12;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

FiniteSpace::FiniteSpace(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  require(weights_.size() > 0, "FiniteSpace: needs at least one atom");
  require(all_finite(weights_), "FiniteSpace: weights must be finite");
  require((weights_.array() > 0.0).all(), "FiniteSpace: weights must be positive");
  const double total = weights_.sum();
  require(std::abs(total - 1.0) <= kWeightSumTol,
          "FiniteSpace: weights must sum to 1 within 1e-12");
  // Skip the division for sums already at machine precision: renormalizing
  // twice must be the identity.
  if (std::abs(total - 1.0) > 1e-15 * static_cast<double>(weights_.size()))
    weights_ /= total;
}

FiniteSpace FiniteSpace::uniform(Eigen::Index n) {
  require(n > 0, "FiniteSpace: needs at least one atom");
  return FiniteSpace(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

bool FiniteSpace::same_as(const FiniteSpace& other) const {
  return weights_.size() == other.weights_.size() && weights_ == other.weights_;
}

RandomVector::RandomVector(FiniteSpace space, Eigen::MatrixXd values)
    : space_(std::move(space)), values_(std::move(values)) {
  require(values_.rows() == space_.size(),
          "RandomVector: row count must equal atom count");
  require(values_.cols() >= 1, "RandomVector: dimension must be at least 1");
  require(all_finite(values_), "RandomVector: values must be finite");
}

RandomVector RandomVector::scalar(FiniteSpace space, Eigen::VectorXd values) {
  return RandomVector(std::move(space), values);
}

RandomVector RandomVector::constant(FiniteSpace space, double value) {
  const Eigen::Index n = space.size();
  return RandomVector(std::move(space), Eigen::MatrixXd::Constant(n, 1, value));
}

Eigen::VectorXd RandomVector::scalar_values() const {
  require(dim() == 1, "RandomVector: scalar access on vector-valued variable");
  return values_.col(0);
}

Eigen::VectorXd RandomVector::magnitudes(double r) const {
  Eigen::VectorXd out(atoms());
  for (Eigen::Index i = 0; i < atoms(); ++i)
    out(i) = lr_norm(values_.row(i).transpose(), r);
  return out;
}

double StepQuantile::value_at(double u) const {
  require(u >= 0.0 && u <= 1.0, "StepQuantile: argument outside [0,1]");
  if (u <= breakpoints(0)) return values(0);
  // first k with u <= c_{k+1}
  const double* begin = breakpoints.data() + 1;
  const double* end = breakpoints.data() + breakpoints.size();
  const double* it = std::lower_bound(begin, end, u);
  return values(static_cast<Eigen::Index>(it - begin));
}

double StepQuantile::tail_integral(double alpha) const {
  require(alpha >= 0.0 && alpha <= 1.0, "StepQuantile: argument outside [0,1]");
  double acc = 0.0;
  for (Eigen::Index k = steps() - 1; k >= 0; --k) {
    const double hi = breakpoints(k + 1);
    if (hi <= alpha) break;
    const double lo = std::max(alpha, breakpoints(k));
    acc += values(k) * (hi - lo);
  }
  return acc;
}

SlotCoupling::SlotCoupling(const FiniteSpace& space, Eigen::VectorXd lower,
                           Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  const Eigen::Index n = space.size();
  require(lower_.size() == n && upper_.size() == n,
          "SlotCoupling: one interval per atom required");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index a, Eigen::Index b) { return lower_(a) < lower_(b); });
  double cursor = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index i = idx[static_cast<std::size_t>(r)];
    require(std::abs(lower_(i) - cursor) <= 1e-9,
            "SlotCoupling: intervals must tile (0,1] without gaps");
    require(std::abs((upper_(i) - lower_(i)) - space.weight(i)) <= 1e-9,
            "SlotCoupling: interval length must equal atom weight");
    cursor = upper_(i);
  }
  require(std::abs(cursor - 1.0) <= 1e-9, "SlotCoupling: total length must be 1");
}

SlotCoupling SlotCoupling::from_order(const FiniteSpace& space,
                                      const std::vector<Eigen::Index>& order) {
  const Eigen::Index n = space.size();
  require(static_cast<Eigen::Index>(order.size()) == n,
          "SlotCoupling: order must list every atom");
  Eigen::VectorXd lower(n), upper(n);
  double cum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const Eigen::Index i = order[r];
    lower(i) = cum;
    cum += space.weight(i);
    upper(i) = cum;
  }
  upper(order.back()) = 1.0;  // absorb cumulative rounding at the right end
  return SlotCoupling(space, std::move(lower), std::move(upper));
}

Partition Partition::single_block(Eigen::Index n) {
  Partition p;
  p.block_of.assign(static_cast<std::size_t>(n), 0);
  p.blocks = 1;
  return p;
}

Partition Partition::identity(Eigen::Index n) {
  Partition p;
  p.block_of.resize(static_cast<std::size_t>(n));
  std::iota(p.block_of.begin(), p.block_of.end(), 0);
  p.blocks = n;
  return p;
}

void Partition::validate(Eigen::Index n_atoms) const {
  require(static_cast<Eigen::Index>(block_of.size()) == n_atoms,
          "Partition: every atom must be assigned");
  require(blocks > 0, "Partition: needs at least one block");
  std::vector<bool> seen(static_cast<std::size_t>(blocks), false);
  for (Eigen::Index b : block_of) {
    require(b >= 0 && b < blocks, "Partition: block index out of range");
    seen[static_cast<std::size_t>(b)] = true;
  }
  for (bool s : seen) require(s, "Partition: empty block");
}

std::vector<Eigen::Index> sorted_order(const Eigen::VectorXd& values) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values(a) != values(b)) return values(a) < values(b);
    return a < b;
  });
  return idx;
}

StepQuantile quantile(const Eigen::VectorXd& values, const FiniteSpace& space) {
  require(values.size() == space.size(),
          "quantile: value/weight length mismatch");
  require(values.allFinite(), "quantile: values must be finite");
  const auto order = sorted_order(values);
  std::vector<double> breaks{0.0};
  std::vector<double> vals;
  double cum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const Eigen::Index i = order[r];
    cum += space.weight(i);
    if (!vals.empty() && vals.back() == values(i)) {
      breaks.back() = cum;  // merge tied values into one step
    } else {
      vals.push_back(values(i));
      breaks.push_back(cum);
    }
  }
  breaks.back() = 1.0;
  StepQuantile q;
  q.breakpoints = Eigen::Map<Eigen::VectorXd>(breaks.data(),
                                              static_cast<Eigen::Index>(breaks.size()));
  q.values = Eigen::Map<Eigen::VectorXd>(vals.data(),
                                         static_cast<Eigen::Index>(vals.size()));
  return q;
}

SlotCoupling comonotone_slots(const Eigen::VectorXd& values,
                              const FiniteSpace& space) {
  require(values.size() == space.size(),
          "comonotone_slots: value/weight length mismatch");
  require(values.allFinite(), "comonotone_slots: values must be finite");
  return SlotCoupling::from_order(space, sorted_order(values));
}

double expectation(const Eigen::VectorXd& values, const FiniteSpace& space) {
  require(values.size() == space.size(),
          "expectation: value/weight length mismatch");
  return space.weights().dot(values);
}

double p_norm(const RandomVector& y, double p, double vecnorm_r) {
  const Eigen::VectorXd m = y.magnitudes(vecnorm_r);
  if (std::isinf(p)) return m.maxCoeff();
  require(p >= 1.0, "p_norm: p must be in [1, inf]");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i)
    acc += y.space().weight(i) * std::pow(m(i), p);
  return std::pow(acc, 1.0 / p);
}

RandomVector coarsen(const RandomVector& z, const Partition& part) {
  part.validate(z.atoms());
  Eigen::VectorXd block_weight = Eigen::VectorXd::Zero(part.blocks);
  Eigen::MatrixXd block_sum = Eigen::MatrixXd::Zero(part.blocks, z.dim());
  for (Eigen::Index i = 0; i < z.atoms(); ++i) {
    const Eigen::Index b = part.block_of[static_cast<std::size_t>(i)];
    block_weight(b) += z.space().weight(i);
    block_sum.row(b) += z.space().weight(i) * z.values().row(i);
  }
  for (Eigen::Index b = 0; b < part.blocks; ++b)
    block_sum.row(b) /= block_weight(b);
  return RandomVector(FiniteSpace(block_weight), std::move(block_sum));
}

double lr_norm(const Eigen::VectorXd& x, double r) {
  if (std::isinf(r)) return x.cwiseAbs().maxCoeff();
  require(r >= 1.0, "lr_norm: r must be in [1, inf]");
  if (r == 1.0) return x.cwiseAbs().sum();
  if (r == 2.0) return x.norm();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    acc += std::pow(std::abs(x(j)), r);
  return std::pow(acc, 1.0 / r);
}

double dual_exponent(double r) {
  if (std::isinf(r)) return 1.0;
  require(r >= 1.0, "dual_exponent: r must be in [1, inf]");
  if (r == 1.0) return std::numeric_limits<double>::infinity();
  return r / (r - 1.0);
}

}  // namespace sigma
