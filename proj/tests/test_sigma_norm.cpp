#include <doctest.h>

#include <cmath>

#include "sigma/sigma_norm.hpp"
#include "support/test_support.hpp"

using namespace sigma;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

RandomVector random_variable(std::mt19937_64& rng, Eigen::Index n,
                             Eigen::Index d) {
  return {testsup::random_space(rng, n), testsup::random_matrix(rng, n, d, -4.0, 4.0)};
}

}  // namespace

TEST_CASE("constant distortion reduces to the plain p-norm") {
  auto rng = testsup::make_rng(31);
  std::uniform_real_distribution<double> pdist(1.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(trial % 3);
    const RandomVector y = random_variable(rng, n, d);
    const double p = pdist(rng);
    CHECK(std::abs(sigma_norm(y, Distortion::constant(), p) - p_norm(y, p)) <=
          1e-12);
  }
}

TEST_CASE("indicator variable against the power family") {
  // one atom of probability 0.3 carrying a vector of euclidean length 2
  Eigen::MatrixXd values(2, 2);
  values << 0.0, 0.0, 1.2, 1.6;
  const RandomVector y(FiniteSpace(vec({0.7, 0.3})), values);
  CHECK(sigma_norm(y, Distortion::power(2), 1.0) == doctest::Approx(1.02));
}

TEST_CASE("tail spectrum picks the top quantile") {
  const RandomVector y =
      RandomVector::scalar(FiniteSpace::uniform(4), vec({1, 2, 3, 4}));
  CHECK(sigma_norm(y, Distortion::avar(0.5), 1.0) == doctest::Approx(3.5));
}

TEST_CASE("coupling objective is maximized by the comonotone slots") {
  auto rng = testsup::make_rng(32);
  std::uniform_real_distribution<double> pdist(1.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    const RandomVector y = random_variable(rng, n, 1);
    const Distortion sig = testsup::random_distortion(rng);
    const double p = pdist(rng);
    const double norm = sigma_norm(y, sig, p);

    const SlotCoupling como = comonotone_slots(y.magnitudes(2.0), y.space());
    CHECK(std::abs(norm_via_coupling(y, sig, p, como) - norm) <= 1e-12);

    const SlotCoupling random_slots =
        SlotCoupling::from_order(y.space(), testsup::random_permutation(rng, n));
    CHECK(norm_via_coupling(y, sig, p, random_slots) <= norm + 1e-12);
  }
}

TEST_CASE("anti-comonotone coupling is strictly worse for a strict spectrum") {
  const RandomVector y =
      RandomVector::scalar(FiniteSpace::uniform(3), vec({1, 2, 5}));
  const Distortion sig = Distortion::power(2);
  auto order = sorted_order(y.magnitudes(2.0));
  std::reverse(order.begin(), order.end());
  const SlotCoupling anti = SlotCoupling::from_order(y.space(), order);
  CHECK(norm_via_coupling(y, sig, 1.0, anti) < sigma_norm(y, sig, 1.0) - 1e-6);

  // a flat spectrum cannot tell couplings apart
  const SlotCoupling como = comonotone_slots(y.magnitudes(2.0), y.space());
  CHECK(norm_via_coupling(y, Distortion::constant(), 1.0, anti) ==
        doctest::Approx(norm_via_coupling(y, Distortion::constant(), 1.0, como))
            .epsilon(1e-14));
}

TEST_CASE("coupling rejects mismatched spaces") {
  const RandomVector y =
      RandomVector::scalar(FiniteSpace::uniform(3), vec({1, 2, 5}));
  const SlotCoupling wrong =
      comonotone_slots(vec({1, 2}), FiniteSpace::uniform(2));
  CHECK_THROWS_AS(norm_via_coupling(y, Distortion::constant(), 1.0, wrong),
                  std::invalid_argument);
}

TEST_CASE("norm grows with the exponent") {
  auto rng = testsup::make_rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    const RandomVector y = random_variable(rng, n, 2);
    const Distortion sig = testsup::random_distortion(rng);
    const auto cmp = compare_p(y, sig, 1.0 + (trial % 3), 2.0 + (trial % 3), 2.0);
    CHECK(cmp.holds);
  }
  // constant variables are fixed points of every exponent
  const RandomVector c = RandomVector::constant(FiniteSpace::uniform(3), 2.5);
  const auto cmp = compare_p(c, Distortion::power(2), 1.0, 3.0);
  CHECK(cmp.norm_p == doctest::Approx(2.5));
  CHECK(cmp.norm_p_prime == doctest::Approx(2.5));

  // spectrum mass sitting on the top atom makes both exponents agree
  const RandomVector y13 =
      RandomVector::scalar(FiniteSpace::uniform(2), vec({1, 3}));
  const auto cmp13 = compare_p(y13, Distortion::avar(0.5), 1.0, 2.0);
  CHECK(cmp13.norm_p == doctest::Approx(3.0));
  CHECK(cmp13.norm_p_prime == doctest::Approx(3.0));

  CHECK_THROWS_AS(compare_p(c, Distortion::constant(), 2.0, 2.0),
                  std::invalid_argument);
}

TEST_CASE("embedding bound via the spectrum's power integral") {
  const RandomVector c = RandomVector::constant(FiniteSpace::uniform(3), 2.0);
  const auto hb = holder_bound(c, Distortion::constant(), 1.0, 2.0);
  CHECK(hb.lhs == doctest::Approx(2.0));
  CHECK(hb.rhs == doctest::Approx(2.0));
  CHECK(hb.holds);
  CHECK(hb.plain_rhs == doctest::Approx(2.0));
  CHECK(hb.plain_observed);  // factor-free form coincides for a flat spectrum

  auto rng = testsup::make_rng(34);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    const RandomVector y = random_variable(rng, n, 1);
    const auto bound = holder_bound(y, Distortion::power(2), 1.0, 2.0);
    CHECK(bound.holds);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    const RandomVector y = random_variable(rng, n, 2);
    const Distortion sig = testsup::random_distortion(rng);
    const auto bound = holder_bound(y, sig, 1.0 + (trial % 2), 2.5 + (trial % 2));
    CHECK(bound.holds);
  }
}

TEST_CASE("parallelogram residual singles out the flat spectrum at p = 2") {
  for (double alpha = 0.05; alpha < 1.0; alpha += 0.05)
    CHECK(parallelogram_residual(Distortion::constant(), 2.0, alpha) <= 1e-12);

  // S(alpha) = 1 - alpha^2: residual |S(1-a) + S(a) - 1| = |a - a^2 + a ... |
  CHECK(parallelogram_residual(Distortion::power(2), 2.0, 0.5) ==
        doctest::Approx(0.5));
  CHECK(parallelogram_residual(Distortion::power(2), 2.0, 0.3) ==
        doctest::Approx(0.42));
  CHECK(parallelogram_residual(Distortion::constant(), 1.0, 0.5) ==
        doctest::Approx(0.5));
}

TEST_CASE("norm axioms hold numerically") {
  auto rng = testsup::make_rng(35);
  std::uniform_real_distribution<double> pdist(1.0, 3.0);
  std::uniform_real_distribution<double> cdist(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    const FiniteSpace space = testsup::random_space(rng, n);
    const RandomVector y1(space, testsup::random_matrix(rng, n, 2, -3.0, 3.0));
    const RandomVector y2(space, testsup::random_matrix(rng, n, 2, -3.0, 3.0));
    const Distortion sig = testsup::random_distortion(rng);
    const double p = pdist(rng);
    const double c = cdist(rng);

    // absolute homogeneity
    const RandomVector cy1(space, c * y1.values());
    CHECK(sigma_norm(cy1, sig, p) ==
          doctest::Approx(std::abs(c) * sigma_norm(y1, sig, p)).epsilon(1e-13));

    // triangle inequality
    const RandomVector sum(space, y1.values() + y2.values());
    CHECK(sigma_norm(sum, sig, p) <=
          sigma_norm(y1, sig, p) + sigma_norm(y2, sig, p) + 1e-12);

    // contraction chain between the plain p-norm and the sup norm
    const double nrm = sigma_norm(y1, sig, p);
    CHECK(p_norm(y1, p) <= nrm + 1e-12);
    CHECK(nrm <= y1.magnitudes(2.0).maxCoeff() + 1e-12);

    // multiplying by a bounded per-atom factor scales by its sup at most
    const Eigen::VectorXd factor = testsup::random_values(rng, n, -2.0, 2.0);
    const RandomVector modulated(space,
                                 factor.asDiagonal() * y1.values());
    CHECK(sigma_norm(modulated, sig, p) <=
          factor.cwiseAbs().maxCoeff() * nrm + 1e-12);
  }
}

TEST_CASE("norm is rearrangement invariant") {
  auto rng = testsup::make_rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(trial % 5);
    const Eigen::VectorXd w = testsup::random_dyadic_weights(rng, n);
    const Eigen::MatrixXd values = testsup::random_matrix(rng, n, 2, -3.0, 3.0);
    const auto perm = testsup::random_permutation(rng, n);
    Eigen::VectorXd wp(n);
    Eigen::MatrixXd vp(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      wp(i) = w(perm[static_cast<std::size_t>(i)]);
      vp.row(i) = values.row(perm[static_cast<std::size_t>(i)]);
    }
    const Distortion sig = testsup::random_distortion(rng);
    const double p = 1.0 + (trial % 3);
    CHECK(sigma_norm(RandomVector(FiniteSpace(w), values), sig, p) ==
          sigma_norm(RandomVector(FiniteSpace(wp), vp), sig, p));
  }
}

TEST_CASE("unbounded spectrum separates the norm from L^p") {
  const double n = 1e4;
  const FiniteSpace space(vec({1.0 - 1.0 / n, 1.0 / n}));
  const RandomVector indicator = RandomVector::scalar(space, vec({0.0, 1.0}));
  const Distortion lg = Distortion::log_spectrum();
  const double ratio =
      sigma_norm(indicator, lg, 1.0) / p_norm(indicator, 1.0);
  CHECK(ratio > 10.0);
}
