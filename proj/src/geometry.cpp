#include "nnct/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace nnct {

namespace {

double dist2(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

void check_finite(std::span<const Point> pts) {
  for (const Point& p : pts)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw data_error("pattern contains a non-finite coordinate");
}

void check_no_duplicates(std::span<const Point> pts) {
  struct Hash {
    std::size_t operator()(const Point& p) const {
      std::hash<double> h;
      return h(p.x) * 1000003u ^ h(p.y);
    }
  };
  struct Eq {
    bool operator()(const Point& a, const Point& b) const { return a.x == b.x && a.y == b.y; }
  };
  std::unordered_set<Point, Hash, Eq> seen;
  seen.reserve(pts.size());
  for (const Point& p : pts)
    if (!seen.insert(p).second)
      throw data_error("duplicate coordinates: nearest neighbor is undefined at zero distance");
}

// Static kd-tree over point indices; exact NN with the smallest-index tie
// rule. Subtrees at squared distance equal to the current best must still be
// visited: they may hold an equidistant point with a smaller index.
class KdTree {
 public:
  explicit KdTree(std::span<const Point> pts) : pts_(pts), idx_(pts.size()) {
    std::iota(idx_.begin(), idx_.end(), 0);
    nodes_.reserve(pts.size());
    root_ = build(0, static_cast<int>(pts.size()), 0);
  }

  // best NN of query point qi, excluding qi itself
  int nearest(int qi) const {
    best_d2_ = std::numeric_limits<double>::infinity();
    best_idx_ = -1;
    query_ = qi;
    search(root_);
    return best_idx_;
  }

  double best_dist() const { return std::sqrt(best_d2_); }

 private:
  struct Node {
    int point = -1;
    int left = -1, right = -1;
    int axis = 0;
  };

  int build(int lo, int hi, int axis) {
    if (lo >= hi) return -1;
    const int mid = (lo + hi) / 2;
    auto cmp = [&](int a, int b) {
      const double va = axis == 0 ? pts_[a].x : pts_[a].y;
      const double vb = axis == 0 ? pts_[b].x : pts_[b].y;
      if (va != vb) return va < vb;
      return a < b;
    };
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi, cmp);
    Node node;
    node.point = idx_[mid];
    node.axis = axis;
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    nodes_[self].left = build(lo, mid, 1 - axis);
    nodes_[self].right = build(mid + 1, hi, 1 - axis);
    return self;
  }

  void consider(int i) const {
    if (i == query_) return;
    const double d2 = dist2(pts_[i], pts_[query_]);
    if (d2 < best_d2_ || (d2 == best_d2_ && i < best_idx_)) {
      best_d2_ = d2;
      best_idx_ = i;
    }
  }

  void search(int node) const {
    if (node < 0) return;
    const Node& nd = nodes_[node];
    consider(nd.point);
    const Point& q = pts_[query_];
    const double qv = nd.axis == 0 ? q.x : q.y;
    const double sv = nd.axis == 0 ? pts_[nd.point].x : pts_[nd.point].y;
    const double delta = qv - sv;
    const int near = delta <= 0 ? nd.left : nd.right;
    const int far = delta <= 0 ? nd.right : nd.left;
    search(near);
    if (delta * delta <= best_d2_) search(far);
  }

  std::span<const Point> pts_;
  std::vector<int> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;
  mutable double best_d2_ = 0.0;
  mutable int best_idx_ = -1;
  mutable int query_ = -1;
};

}  // namespace

StudyRegion StudyRegion::bounding_box(std::span<const Point> pts) {
  if (pts.empty()) throw data_error("bounding_box: empty point set");
  StudyRegion r{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
  for (const Point& p : pts) {
    r.xmin = std::min(r.xmin, p.x);
    r.xmax = std::max(r.xmax, p.x);
    r.ymin = std::min(r.ymin, p.y);
    r.ymax = std::max(r.ymax, p.y);
  }
  return r;
}

void StudyRegion::validate() const {
  if (!(xmax > xmin) || !(ymax > ymin)) throw data_error("study region has non-positive extent");
  if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(ymin) || !std::isfinite(ymax))
    throw data_error("study region has non-finite bounds");
}

MarkedPattern::MarkedPattern(std::vector<Point> points, const std::vector<std::string>& label_names,
                             StudyRegion region)
    : points_(std::move(points)), region_(region) {
  labels_.reserve(label_names.size());
  std::unordered_map<std::string, int> ids;
  for (const std::string& name : label_names) {
    auto [it, inserted] = ids.try_emplace(name, static_cast<int>(classes_.size()));
    if (inserted) classes_.push_back(name);
    labels_.push_back(it->second);
  }
  validate();
}

MarkedPattern::MarkedPattern(std::vector<Point> points, std::vector<int> label_ids,
                             std::vector<std::string> classes, StudyRegion region)
    : points_(std::move(points)),
      labels_(std::move(label_ids)),
      classes_(std::move(classes)),
      region_(region) {
  validate();
}

void MarkedPattern::validate() const {
  region_.validate();
  if (points_.size() != labels_.size()) throw data_error("pattern: point/label count mismatch");
  if (points_.size() < 2) throw data_error("pattern: at least 2 points required");
  check_finite(points_);
  for (int l : labels_)
    if (l < 0 || l >= q()) throw data_error("pattern: label id out of range");
  std::unordered_set<std::string> names(classes_.begin(), classes_.end());
  if (names.size() != classes_.size()) throw data_error("pattern: duplicate class name");
}

std::vector<long long> MarkedPattern::class_sizes() const {
  std::vector<long long> sizes(q(), 0);
  for (int l : labels_) ++sizes[l];
  return sizes;
}

MarkedPattern MarkedPattern::with_labels(std::vector<int> label_ids) const {
  return MarkedPattern(points_, std::move(label_ids), classes_, region_);
}

long long NnGraph::q_count(int k) const {
  long long c = 0;
  for (int d : in_degree)
    if (d == k) ++c;
  return c;
}

int NnGraph::max_in_degree() const {
  int m = 0;
  for (int d : in_degree) m = std::max(m, d);
  return m;
}

NnGraph build_nn_graph(std::span<const Point> pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 2) throw data_error("build_nn_graph: at least 2 points required");
  check_finite(pts);
  check_no_duplicates(pts);

  NnGraph g;
  g.nn_index.resize(n);
  g.nn_distance.resize(n);
  g.in_degree.assign(n, 0);

  if (n <= 64) {
    // brute force; ascending j plus the == check reproduces the tie rule
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int bi = -1;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d2 = dist2(pts[i], pts[j]);
        if (d2 < best) {
          best = d2;
          bi = j;
        }
      }
      g.nn_index[i] = bi;
      g.nn_distance[i] = std::sqrt(best);
    }
  } else {
    KdTree tree(pts);
    for (int i = 0; i < n; ++i) {
      g.nn_index[i] = tree.nearest(i);
      g.nn_distance[i] = tree.best_dist();
    }
  }

  for (int i = 0; i < n; ++i) ++g.in_degree[g.nn_index[i]];
  for (int i = 0; i < n; ++i) {
    const long long d = g.in_degree[i];
    g.Q += d * (d - 1);
    if (g.nn_index[g.nn_index[i]] == i) ++g.R;
  }
  return g;
}

NnGraph build_nn_graph(const MarkedPattern& pattern) { return build_nn_graph(pattern.points()); }

}  // namespace nnct
