#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "cssc/kdtree.hpp"
#include "cssc/random.hpp"

using namespace cssc;

namespace {

FeatureVector vec1d(double x0) {
  FeatureVector v{};
  v[0] = x0;
  return v;
}

}  // namespace

TEST_CASE("nearest point by inspection") {
  KdTree tree({vec1d(0), vec1d(1), vec1d(2)},
              {{Label::Normal, 1}, {Label::Fraud, 1}, {Label::Normal, 1}});
  const auto out = tree.query(vec1d(0.9), 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0].index == 1);
  CHECK(out[0].payload.label == Label::Fraud);
}

TEST_CASE("k larger than the point count returns everything") {
  KdTree tree({vec1d(0), vec1d(1), vec1d(2)},
              {{Label::Normal, 1}, {Label::Fraud, 1}, {Label::Normal, 1}});
  const auto out = tree.query(vec1d(5), 5);
  REQUIRE(out.size() == 3);
  CHECK(out[0].index == 2);  // ascending by distance
  CHECK(out[1].index == 1);
  CHECK(out[2].index == 0);
}

TEST_CASE("empty tree and bad k are rejected") {
  KdTree empty;
  CHECK_THROWS_AS(empty.query(vec1d(0), 1), std::invalid_argument);
  KdTree one({vec1d(0)}, {{Label::Normal, 1}});
  CHECK_THROWS_AS(one.query(vec1d(0), 0), std::invalid_argument);
}

TEST_CASE("kd queries equal brute force on random data") {
  auto eng = rng::make_engine(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng::uniform_index(eng, 200);
    std::vector<FeatureVector> points(n);
    std::vector<KdPayload> payloads(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : points[i]) v = 4.0 * (rng::uniform_real(eng) - 0.5);
      payloads[i] = {rng::uniform_real(eng) < 0.3 ? Label::Fraud : Label::Normal,
                     rng::uniform_real(eng)};
    }
    const KdTree tree(points, payloads);

    FeatureVector q;
    for (auto& v : q) v = 4.0 * (rng::uniform_real(eng) - 0.5);
    const std::size_t k = 1 + rng::uniform_index(eng, n);

    const auto got = tree.query(q, k);
    const auto want = brute_force_knn(points, payloads, q, k);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].index == want[i].index);
      REQUIRE(got[i].dist2 == want[i].dist2);
    }
  }
}

TEST_CASE("distance ties break by insertion order, matching brute force") {
  // Lattice points produce many exactly-equal distances.
  auto eng = rng::make_engine(314);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng::uniform_index(eng, 60);
    std::vector<FeatureVector> points(n);
    std::vector<KdPayload> payloads(n, {Label::Normal, 1});
    for (std::size_t i = 0; i < n; ++i)
      for (auto& v : points[i])
        v = static_cast<double>(rng::uniform_index(eng, 3));
    const KdTree tree(points, payloads);

    FeatureVector q;
    for (auto& v : q) v = static_cast<double>(rng::uniform_index(eng, 3));
    const std::size_t k = 1 + rng::uniform_index(eng, n);

    const auto got = tree.query(q, k);
    const auto want = brute_force_knn(points, payloads, q, k);
    for (std::size_t i = 0; i < got.size(); ++i) REQUIRE(got[i].index == want[i].index);
  }
}
