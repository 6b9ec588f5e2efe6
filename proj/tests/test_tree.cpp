#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cssc/decision_tree.hpp"
#include "test_util.hpp"

using namespace cssc;

namespace {

Instance point1d(double x0, Label label, int serial) {
  Instance inst;
  inst.bidder_id = "b" + std::to_string(serial);
  inst.auction_id = "a" + std::to_string(serial);
  inst.features.fill(0.5);
  inst.features[0] = x0;
  inst.label = label;
  return inst;
}

// Exhaustive gain-ratio split search on feature 0, written independently of
// the tree builder.
struct OracleSplit {
  double threshold = 0;
  double gain_ratio = -1;
  double left_max = 0, right_min = 0;  // the midpoint gap around the split
};

double entropy_of(double a, double b) {
  const double n = a + b;
  double h = 0;
  if (a > 0) h -= a / n * std::log2(a / n);
  if (b > 0) h -= b / n * std::log2(b / n);
  return h;
}

OracleSplit oracle_best_split(std::vector<Instance> data, int min_leaf) {
  std::sort(data.begin(), data.end(), [](const Instance& a, const Instance& b) {
    return a.features[0] < b.features[0];
  });
  double total_n = 0, total_f = 0;
  for (const auto& inst : data) (inst.label == Label::Fraud ? total_f : total_n) += 1;
  const double parent = entropy_of(total_n, total_f);

  OracleSplit best;
  double left_n = 0, left_f = 0;
  for (std::size_t i = 0; i + 1 < data.size(); ++i) {
    (data[i].label == Label::Fraud ? left_f : left_n) += 1;
    const double lo = data[i].features[0];
    const double hi = data[i + 1].features[0];
    if (lo == hi) continue;
    const double nl = left_n + left_f;
    const double nr = static_cast<double>(data.size()) - nl;
    if (nl < min_leaf || nr < min_leaf) continue;
    const double n = static_cast<double>(data.size());
    const double gain = parent - (nl / n) * entropy_of(left_n, left_f) -
                        (nr / n) * entropy_of(total_n - left_n, total_f - left_f);
    if (gain <= 1e-12) continue;
    const double ratio = gain / entropy_of(nl, nr);
    if (ratio > best.gain_ratio) best = {0.5 * (lo + hi), ratio, lo, hi};
  }
  return best;
}

}  // namespace

TEST_CASE("pure one-class data collapses to a single leaf") {
  std::vector<Instance> train;
  for (int i = 0; i < 8; ++i) train.push_back(point1d(i, Label::Normal, i));
  const TreeModel m = tree_train(train, {});
  CHECK(m.nodes.size() == 1);
  CHECK(m.single_class);
  const ClassDistribution d = tree_predict(m, point1d(3, Label::Unlabeled, 99));
  CHECK(d.p_normal == 1.0);
}

TEST_CASE("separable 1-D data splits inside the separating gap") {
  // Normal mass at 0..9, fraud at 11..20: any consistent split lies in (9, 11).
  std::vector<Instance> train;
  for (int i = 0; i < 10; ++i) train.push_back(point1d(i, Label::Normal, i));
  for (int i = 0; i < 10; ++i) train.push_back(point1d(11 + i, Label::Fraud, 10 + i));

  const OracleSplit oracle = oracle_best_split(train, 2);
  REQUIRE(oracle.gain_ratio > 0);
  CHECK(oracle.left_max == 9.0);
  CHECK(oracle.right_min == 11.0);

  const TreeModel m = tree_train(train, {});
  REQUIRE_FALSE(m.nodes[0].is_leaf());
  CHECK(m.nodes[0].feature == 0);
  CHECK(m.nodes[0].threshold > oracle.left_max);
  CHECK(m.nodes[0].threshold < oracle.right_min);
  CHECK_THAT(m.nodes[0].threshold, Catch::Matchers::WithinAbs(oracle.threshold, 1e-12));

  // Both sides classify correctly.
  CHECK(argmax_label(tree_predict(m, point1d(4, Label::Unlabeled, 90))) == Label::Normal);
  CHECK(argmax_label(tree_predict(m, point1d(17, Label::Unlabeled, 91))) == Label::Fraud);
}

TEST_CASE("tree root agrees with the exhaustive oracle on random 1-D sets") {
  auto eng = rng::make_engine(616);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Instance> train;
    const std::size_t n = 6 + rng::uniform_index(eng, 15);  // <= 20 points
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(rng::uniform_index(eng, 12));
      const Label l = rng::uniform_real(eng) < 0.5 ? Label::Fraud : Label::Normal;
      train.push_back(point1d(x, l, static_cast<int>(i)));
    }
    const OracleSplit oracle = oracle_best_split(train, 2);
    TreeConfig cfg;
    cfg.prune = false;
    const TreeModel m = tree_train(train, cfg);
    if (oracle.gain_ratio <= 0) {
      CHECK(m.nodes[0].is_leaf());
    } else {
      REQUIRE_FALSE(m.nodes[0].is_leaf());
      CHECK(m.nodes[0].feature == 0);
      CHECK(m.nodes[0].threshold > oracle.left_max);
      CHECK(m.nodes[0].threshold <= oracle.right_min);
      CHECK_THAT(m.nodes[0].threshold,
                 Catch::Matchers::WithinAbs(oracle.threshold, 1e-12));
    }
  }
}

TEST_CASE("min_leaf larger than the data forces a majority leaf") {
  std::vector<Instance> train;
  for (int i = 0; i < 6; ++i) train.push_back(point1d(i, Label::Normal, i));
  for (int i = 0; i < 3; ++i) train.push_back(point1d(10 + i, Label::Fraud, 6 + i));
  TreeConfig cfg;
  cfg.min_leaf = 20;
  const TreeModel m = tree_train(train, cfg);
  CHECK(m.nodes.size() == 1);
  CHECK(argmax_label(tree_predict(m, point1d(12, Label::Unlabeled, 99))) == Label::Normal);
  // Laplace-corrected leaf frequency: (6+1)/(9+2).
  CHECK_THAT(tree_predict(m, point1d(12, Label::Unlabeled, 99)).p_normal,
             Catch::Matchers::WithinAbs(7.0 / 11.0, 1e-12));
}

TEST_CASE("every leaf keeps at least min_leaf training instances") {
  auto eng = rng::make_engine(717);
  for (int trial = 0; trial < 30; ++trial) {
    const auto train = testutil::make_labeled(10 + rng::uniform_index(eng, 60),
                                              10 + rng::uniform_index(eng, 40),
                                              5000 + trial, 1.0);
    TreeConfig cfg;
    cfg.min_leaf = 1 + static_cast<int>(rng::uniform_index(eng, 5));
    cfg.prune = trial % 2 == 0;
    const TreeModel m = tree_train(train, cfg);
    for (const auto& node : m.nodes) {
      if (node.is_leaf())
        CHECK(node.n_normal + node.n_fraud >= static_cast<double>(cfg.min_leaf));
      CHECK(std::isfinite(node.threshold));
    }
  }
}

TEST_CASE("a small confidence factor prunes at least as hard as none") {
  const auto train = testutil::make_labeled(60, 40, 4242, 0.8);
  TreeConfig unpruned;
  unpruned.prune = false;
  TreeConfig heavy;
  heavy.prune = true;
  heavy.confidence_factor = 0.05;
  TreeConfig paper;
  paper.prune = true;
  paper.confidence_factor = 0.75;

  const std::size_t n_unpruned = tree_train(train, unpruned).nodes.size();
  const std::size_t n_heavy = tree_train(train, heavy).nodes.size();
  const std::size_t n_paper = tree_train(train, paper).nodes.size();
  CHECK(n_heavy <= n_paper);
  CHECK(n_paper <= n_unpruned);
}

TEST_CASE("tree training is deterministic") {
  const auto train = testutil::make_labeled(40, 30, 2424, 1.2);
  const TreeModel a = tree_train(train, {});
  const TreeModel b = tree_train(train, {});
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].feature == b.nodes[i].feature);
    CHECK(a.nodes[i].threshold == b.nodes[i].threshold);
  }
}

TEST_CASE("tree precondition errors") {
  CHECK_THROWS_AS(tree_train({}, {}), std::invalid_argument);
}
