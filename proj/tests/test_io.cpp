#include <doctest.h>

#include <sstream>

#include "sigma/dual_norm.hpp"
#include "sigma/io.hpp"
#include "support/test_support.hpp"

using namespace sigma;

TEST_CASE("csv ingestion with and without weights") {
  std::istringstream plain("1\n2\n3\n");
  const RandomVector a = io::ingest_csv(plain);
  CHECK(a.atoms() == 3);
  CHECK(a.dim() == 1);
  CHECK(a.space().weight(0) == doctest::Approx(1.0 / 3));

  std::istringstream weighted("y1,y2,w\n1,2,0.25\n3,4,0.75\n");
  const RandomVector b = io::ingest_csv(weighted);
  CHECK(b.atoms() == 2);
  CHECK(b.dim() == 2);
  CHECK(b.space().weight(1) == doctest::Approx(0.75));
  CHECK(b.values()(1, 0) == 3.0);

  std::istringstream relative("y1,w\n1,2\n2,6\n");
  const RandomVector c = io::ingest_csv(relative);
  CHECK(c.space().weight(0) == doctest::Approx(0.25));
}

TEST_CASE("csv ingestion rejects bad rows with their index") {
  std::istringstream nan_row("y1\n1\nnan\n");
  CHECK_THROWS_WITH_AS(io::ingest_csv(nan_row),
                       doctest::Contains("row 3"), std::invalid_argument);

  std::istringstream ragged("y1,y2\n1,2\n3\n");
  CHECK_THROWS_WITH_AS(io::ingest_csv(ragged),
                       doctest::Contains("row 3"), std::invalid_argument);

  std::istringstream negw("y1,w\n1,0\n2,1\n");
  CHECK_THROWS_AS(io::ingest_csv(negw), std::invalid_argument);
}

TEST_CASE("json ingestion") {
  std::istringstream doc(
      R"({"weights": [0.25, 0.75], "values": [[1, 2], [3, 4]]})");
  const RandomVector a = io::ingest_json(doc);
  CHECK(a.atoms() == 2);
  CHECK(a.dim() == 2);
  CHECK(a.space().weight(0) == doctest::Approx(0.25));

  std::istringstream flat(R"({"values": [1, 5, 9]})");
  const RandomVector b = io::ingest_json(flat);
  CHECK(b.dim() == 1);
  CHECK(b.values()(2, 0) == 9.0);

  std::istringstream bad(R"({"values": [[1], [2, 3]]})");
  CHECK_THROWS_AS(io::ingest_json(bad), std::invalid_argument);
  std::istringstream nan_doc(R"({"values": [[1], [null]]})");
  CHECK_THROWS_AS(io::ingest_json(nan_doc), std::invalid_argument);
}

TEST_CASE("emitted datasets re-ingest to identical values") {
  auto rng = testsup::make_rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 6);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(trial % 3);
    const RandomVector v(testsup::random_space(rng, n),
                         testsup::random_matrix(rng, n, d, -5.0, 5.0));
    std::istringstream back(io::dataset_json(v));
    const RandomVector again = io::ingest_json(back);
    CHECK(again.space().weights() == v.space().weights());
    CHECK(again.values() == v.values());
  }
}

TEST_CASE("certificate serialization carries the fixed field order") {
  const Eigen::VectorXd vals = (Eigen::VectorXd(2) << 1.0, 3.0).finished();
  const RandomVector z = RandomVector::scalar(FiniteSpace::uniform(2), vals);
  const DualityCertificate cert =
      dual_norm_q(z, Distortion::avar(0.5), 2.0);
  const std::string json = io::certificate_json(cert);
  const std::vector<std::string> keys = {
      "\"dual_value\"", "\"pairing\"", "\"upper\"",   "\"gap\"",
      "\"approximation_bound\"",       "\"envelope\"", "\"witness\""};
  std::size_t pos = 0;
  for (const auto& key : keys) {
    const std::size_t found = json.find(key);
    REQUIRE(found != std::string::npos);
    CHECK(found > pos);
    pos = found;
  }
  CHECK(json.find("\"dual_value\": 2") != std::string::npos);
}
