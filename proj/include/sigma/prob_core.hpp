#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace sigma {

/// Probability space on finitely many atoms. Weights are strictly positive,
/// must sum to one within 1e-12 on input, and are renormalized once at
/// construction; downstream code relies on the normalized sum.
class FiniteSpace {
 public:
  explicit FiniteSpace(Eigen::VectorXd weights);

  static FiniteSpace uniform(Eigen::Index n);

  Eigen::Index size() const { return weights_.size(); }
  double weight(Eigen::Index i) const { return weights_(i); }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Element-wise equality of the normalized weights.
  bool same_as(const FiniteSpace& other) const;

 private:
  Eigen::VectorXd weights_;
};

/// An R^d-valued random variable given by one value row per atom.
class RandomVector {
 public:
  RandomVector(FiniteSpace space, Eigen::MatrixXd values);

  static RandomVector scalar(FiniteSpace space, Eigen::VectorXd values);
  static RandomVector constant(FiniteSpace space, double value);

  Eigen::Index atoms() const { return values_.rows(); }
  Eigen::Index dim() const { return values_.cols(); }
  const FiniteSpace& space() const { return space_; }
  const Eigen::MatrixXd& values() const { return values_; }

  /// Values as a column; requires dim() == 1.
  Eigen::VectorXd scalar_values() const;

  /// Row-wise l_r norms, r in [1, inf].
  Eigen::VectorXd magnitudes(double r) const;

 private:
  FiniteSpace space_;
  Eigen::MatrixXd values_;
};

/// Left-continuous nondecreasing step function on (0,1]:
/// value_at(u) = values[k] for u in (breakpoints[k], breakpoints[k+1]].
struct StepQuantile {
  Eigen::VectorXd breakpoints;  // 0 = c_0 < c_1 < ... < c_m = 1
  Eigen::VectorXd values;       // v_1 <= ... <= v_m

  Eigen::Index steps() const { return values.size(); }
  double value_at(double u) const;

  /// Integral of the step function over (alpha, 1].
  double tail_integral(double alpha) const;
  double mean() const { return tail_integral(0.0); }
};

/// Disjoint half-open subintervals (lower_i, upper_i] of (0,1], one per atom,
/// with length equal to the atom weight. Represents a [0,1]-uniform variable
/// exactly as interval mass instead of sampled points.
class SlotCoupling {
 public:
  SlotCoupling(const FiniteSpace& space, Eigen::VectorXd lower,
               Eigen::VectorXd upper);

  /// Slots laid out consecutively in the given atom order.
  static SlotCoupling from_order(const FiniteSpace& space,
                                 const std::vector<Eigen::Index>& order);

  Eigen::Index atoms() const { return lower_.size(); }
  double lower(Eigen::Index i) const { return lower_(i); }
  double upper(Eigen::Index i) const { return upper_(i); }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// Assignment of each atom to one of `blocks` non-empty blocks.
struct Partition {
  std::vector<Eigen::Index> block_of;
  Eigen::Index blocks = 0;

  static Partition single_block(Eigen::Index n);
  static Partition identity(Eigen::Index n);
  void validate(Eigen::Index n_atoms) const;
};

/// Atom indices sorted ascending by value, ties broken by atom index.
std::vector<Eigen::Index> sorted_order(const Eigen::VectorXd& values);

/// Quantile function of the weighted empirical law of `values`.
/// Tied values are merged into a single step.
StepQuantile quantile(const Eigen::VectorXd& values, const FiniteSpace& space);

/// Slot coupling comonotone with `values` (ascending, ties by atom index).
SlotCoupling comonotone_slots(const Eigen::VectorXd& values,
                              const FiniteSpace& space);

double expectation(const Eigen::VectorXd& values, const FiniteSpace& space);

/// L^p norm (sum_i w_i |y_i|_r^p)^(1/p); p = inf gives the max magnitude.
double p_norm(const RandomVector& y, double p, double vecnorm_r = 2.0);

/// Conditional expectation onto the partition: block-averaged values on the
/// coarsened space whose atom weights are the block weights.
RandomVector coarsen(const RandomVector& z, const Partition& part);

/// l_r norm of a vector, r in [1, inf].
double lr_norm(const Eigen::VectorXd& x, double r);

/// Conjugate exponent r* with 1/r + 1/r* = 1 (inf and 1 are dual).
double dual_exponent(double r);

}  // namespace sigma
