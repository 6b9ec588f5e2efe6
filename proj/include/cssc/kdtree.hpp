#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cssc/core.hpp"

namespace cssc {

struct KdPayload {
  Label label = Label::Normal;
  double weight = 1.0;

  bool operator==(const KdPayload&) const = default;
};

struct KdNeighbor {
  std::size_t index = 0;  // insertion order in the reference set
  double dist2 = 0;
  KdPayload payload;
};

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double s = 0;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const double d = a[f] - b[f];
    s += d * d;
  }
  return s;
}

// Balanced k-d tree over 9-dimensional points with (label, weight) payloads.
// Exact search: query results equal a brute-force scan, distance ties broken
// by insertion order.
class KdTree {
 public:
  KdTree() = default;

  KdTree(std::vector<FeatureVector> points, std::vector<KdPayload> payloads)
      : points_(std::move(points)), payloads_(std::move(payloads)) {
    if (points_.size() != payloads_.size())
      throw std::invalid_argument("KdTree: point/payload count mismatch");
    nodes_.reserve(points_.size());
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (!order.empty()) build(order, 0, order.size(), 0);
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<FeatureVector>& points() const { return points_; }
  const std::vector<KdPayload>& payloads() const { return payloads_; }

  // The k nearest payloads by Euclidean distance, ascending (ties by
  // insertion order). k > size() returns everything.
  std::vector<KdNeighbor> query(const FeatureVector& x, std::size_t k) const {
    if (empty()) throw std::invalid_argument("KdTree::query: empty tree");
    if (k < 1) throw std::invalid_argument("KdTree::query: k must be >= 1");
    k = std::min(k, size());

    // Max-heap of (dist2, index): top is the current worst candidate.
    std::priority_queue<std::pair<double, std::size_t>> heap;
    search(0, x, k, heap);

    std::vector<KdNeighbor> out(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
      const auto [d2, idx] = heap.top();
      heap.pop();
      out[i] = {idx, d2, payloads_[idx]};
    }
    return out;
  }

 private:
  struct Node {
    std::size_t point = 0;
    int axis = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::vector<std::size_t>& order, std::size_t begin,
                     std::size_t end, int depth) {
    if (begin >= end) return -1;
    const int axis = depth % static_cast<int>(kNumFeatures);
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [this, axis](std::size_t a, std::size_t b) {
                       const double va = points_[a][static_cast<std::size_t>(axis)];
                       const double vb = points_[b][static_cast<std::size_t>(axis)];
                       return va < vb || (va == vb && a < b);
                     });
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{order[mid], axis, -1, -1});
    const std::int32_t l = build(order, begin, mid, depth + 1);
    const std::int32_t r = build(order, mid + 1, end, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  void search(std::int32_t id, const FeatureVector& x, std::size_t k,
              std::priority_queue<std::pair<double, std::size_t>>& heap) const {
    if (id < 0) return;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    const std::size_t p = node.point;

    const std::pair<double, std::size_t> cand{squared_distance(points_[p], x), p};
    if (heap.size() < k) {
      heap.push(cand);
    } else if (cand < heap.top()) {
      heap.pop();
      heap.push(cand);
    }

    const double diff =
        x[static_cast<std::size_t>(node.axis)] -
        points_[p][static_cast<std::size_t>(node.axis)];
    const std::int32_t near = diff <= 0 ? node.left : node.right;
    const std::int32_t far = diff <= 0 ? node.right : node.left;
    search(near, x, k, heap);
    // The far side can still hold an equal-distance, lower-index point, so
    // the boundary case must be visited too.
    if (heap.size() < k || diff * diff <= heap.top().first) search(far, x, k, heap);
  }

  std::vector<FeatureVector> points_;
  std::vector<KdPayload> payloads_;
  std::vector<Node> nodes_;
};

// Test/reference oracle shape: brute-force k nearest with the same tie rule.
inline std::vector<KdNeighbor> brute_force_knn(
    const std::vector<FeatureVector>& points,
    const std::vector<KdPayload>& payloads, const FeatureVector& x,
    std::size_t k) {
  std::vector<KdNeighbor> all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    all[i] = {i, squared_distance(points[i], x), payloads[i]};
  std::sort(all.begin(), all.end(), [](const KdNeighbor& a, const KdNeighbor& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  });
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace cssc
