#include <doctest.h>

#include <cmath>

#include "sigma/oracle.hpp"
#include "sigma/risk.hpp"
#include "support/test_support.hpp"

using namespace sigma;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("scalar maximal correlation is the sorted product") {
  const FiniteSpace half = FiniteSpace::uniform(2);
  CHECK(rho_scalar(RandomVector::scalar(half, vec({1, 2})),
                   RandomVector::scalar(half, vec({3, 4}))) ==
        doctest::Approx(5.5));
  CHECK(rho_scalar(RandomVector::scalar(half, vec({1, 3})),
                   RandomVector::scalar(half, vec({0, 0}))) == 0.0);
  CHECK(rho_scalar(RandomVector::scalar(half, vec({1, 3})),
                   RandomVector::scalar(half, vec({1, 3}))) ==
        doctest::Approx(5.0));

  // anti-sorted inputs still couple comonotonically
  const FiniteSpace w = FiniteSpace(vec({0.25, 0.75}));
  CHECK(rho_scalar(RandomVector::scalar(w, vec({5, 1})),
                   RandomVector::scalar(w, vec({-1, 2}))) ==
        doctest::Approx(0.25 * 5 * 2 + 0.5 * 1 * 2 + 0.25 * 1 * -1));
}

TEST_CASE("assignment solver recovers hand optima") {
  Eigen::MatrixXd z(2, 2), y(2, 2);
  z << 1, 0, 0, 1;
  y << 1, 0, 0, 1;
  const AssignmentResult res =
      rho_assignment(RandomVector(FiniteSpace::uniform(2), z),
                     RandomVector(FiniteSpace::uniform(2), y));
  CHECK(res.rho == doctest::Approx(1.0));
  CHECK(res.permutation[0] == 0);
  CHECK(res.permutation[1] == 1);

  const RandomVector single =
      RandomVector::scalar(FiniteSpace::uniform(1), vec({3}));
  CHECK(rho_assignment(single, single).rho == doctest::Approx(9.0));
}

TEST_CASE("one-dimensional assignment matches the scalar path bit for bit") {
  auto rng = testsup::make_rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(trial % 8);
    const FiniteSpace space = FiniteSpace::uniform(n);
    const RandomVector z =
        RandomVector::scalar(space, testsup::random_values(rng, n, -4.0, 4.0));
    const RandomVector y =
        RandomVector::scalar(space, testsup::random_values(rng, n, -4.0, 4.0));
    CHECK(rho_assignment(z, y).rho == rho_scalar(z, y));
  }
}

TEST_CASE("assignment equals exhaustive enumeration") {
  auto rng = testsup::make_rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(trial % 3);
    const FiniteSpace space = FiniteSpace::uniform(n);
    const RandomVector z(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    const RandomVector y(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    CHECK(rho_assignment(z, y).rho == oracle::enumerate_rho(z, y));
  }
}

TEST_CASE("assignment rejects unequal weights") {
  const FiniteSpace skew(vec({0.25, 0.75}));
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, 1;
  const RandomVector z(skew, m), y(skew, m);
  CHECK_THROWS_AS(rho_assignment(z, y), std::invalid_argument);
}

TEST_CASE("maximal correlation is law invariant and homogeneous") {
  auto rng = testsup::make_rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(trial % 3);
    const FiniteSpace space = FiniteSpace::uniform(n);
    const RandomVector z(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    const RandomVector y(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    const double rho = rho_assignment(z, y).rho;

    const auto perm = testsup::random_permutation(rng, n);
    Eigen::MatrixXd yp(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
      yp.row(i) = y.values().row(perm[static_cast<std::size_t>(i)]);
    CHECK(rho_assignment(z, RandomVector(space, yp)).rho == rho);

    std::uniform_real_distribution<double> lam(0.1, 4.0);
    const double l = lam(rng);
    CHECK(rho_assignment(z, RandomVector(space, l * y.values())).rho ==
          doctest::Approx(l * rho).epsilon(1e-12));

    const RandomVector y2(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    const RandomVector sum(space, y.values() + y2.values());
    CHECK(rho_assignment(z, sum).rho <=
          rho + rho_assignment(z, y2).rho + 1e-9);
  }
}

TEST_CASE("risk measure is Lipschitz in the sample norm") {
  auto rng = testsup::make_rng(64);

  // identical portfolios
  const FiniteSpace s4 = FiniteSpace::uniform(4);
  const RandomVector z(s4, testsup::random_matrix(rng, 4, 2, 0.5, 3.0));
  const RandomVector y(s4, testsup::random_matrix(rng, 4, 2, -2.0, 2.0));
  const LipschitzCheck same = lipschitz_check(z, y, y, 2.0, 2.0);
  CHECK(same.lhs == 0.0);
  CHECK(same.holds);

  // one-sided bound against the zero portfolio
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(trial % 3);
    const FiniteSpace space = FiniteSpace::uniform(n);
    const RandomVector zr(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    if (zr.magnitudes(1.0).maxCoeff() <= 0.0) continue;
    const RandomVector yr(space, testsup::random_matrix(rng, n, d, -3.0, 3.0));
    const RandomVector zero(space, Eigen::MatrixXd::Zero(n, d));
    const double p = (trial % 2) ? 1.0 : 2.0;
    const LipschitzCheck check = lipschitz_check(zr, yr, zero, p, 2.0);
    CHECK(check.holds);
  }

  // scaling the direction only rescales the bound
  const RandomVector z2(s4, 10.0 * z.values());
  const RandomVector y1(s4, testsup::random_matrix(rng, 4, 2, -2.0, 2.0));
  const LipschitzCheck scaled = lipschitz_check(z2, y1, y, 2.0, 2.0);
  CHECK(scaled.scale == doctest::Approx(10.0 * lipschitz_check(z, y1, y, 2.0, 2.0).scale));
  CHECK(scaled.holds);
}

TEST_CASE("pairing bound chain") {
  // comonotone nonnegative scalars collapse the chain
  const FiniteSpace half = FiniteSpace::uniform(2);
  const RiskReport flat = bound_chain(RandomVector::scalar(half, vec({1, 2})),
                                      RandomVector::scalar(half, vec({3, 4})),
                                      2.0);
  CHECK(flat.rho == doctest::Approx(flat.pointwise_bound));
  CHECK(flat.pointwise_bound == doctest::Approx(flat.l1_bound));
  CHECK(flat.l1_bound == doctest::Approx(flat.quantile_bound));
  CHECK(flat.K == doctest::Approx(1.0));
  CHECK(flat.holds);

  const RiskReport zero = bound_chain(
      RandomVector::scalar(half, vec({1, 2})),
      RandomVector::scalar(half, vec({0, 0})), 2.0);
  CHECK(zero.rho == 0.0);
  CHECK(zero.quantile_bound == 0.0);
  CHECK(zero.holds);

  auto rng = testsup::make_rng(65);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    const FiniteSpace space = testsup::random_space(rng, n);
    const RandomVector z(space, testsup::random_matrix(rng, n, 3, -3.0, 3.0));
    const RandomVector y(space, testsup::random_matrix(rng, n, 3, -3.0, 3.0));
    const double r = std::vector<double>{
        1.0, 2.0, std::numeric_limits<double>::infinity()}[trial % 3];
    CHECK(bound_chain(z, y, r).holds);
  }
}
