#pragma once

#include <span>
#include <string>
#include <vector>

#include "nnct/errors.hpp"

namespace nnct {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangular study region.
struct StudyRegion {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Point& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }

  static StudyRegion unit_square() { return {0.0, 1.0, 0.0, 1.0}; }
  static StudyRegion bounding_box(std::span<const Point> pts);
  void validate() const;
};

/// Planar point pattern with class labels. Classes keep first-appearance
/// order unless an explicit ordered class list is supplied; all reports are
/// keyed by class name, never by bare index.
class MarkedPattern {
 public:
  MarkedPattern(std::vector<Point> points, const std::vector<std::string>& label_names,
                StudyRegion region);
  MarkedPattern(std::vector<Point> points, std::vector<int> label_ids,
                std::vector<std::string> classes, StudyRegion region);

  int n() const { return static_cast<int>(points_.size()); }
  int q() const { return static_cast<int>(classes_.size()); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const StudyRegion& region() const { return region_; }
  std::vector<long long> class_sizes() const;

  /// Same locations, new labels (used by the randomization engine).
  MarkedPattern with_labels(std::vector<int> label_ids) const;

 private:
  void validate() const;

  std::vector<Point> points_;
  std::vector<int> labels_;
  std::vector<std::string> classes_;
  StudyRegion region_;
};

/// Nearest-neighbor digraph plus the join-count quantities every RL moment
/// depends on. R is twice the number of reflexive pairs; Q counts ordered
/// pairs of points sharing a NN, Q = sum_k indegree_k (indegree_k - 1).
struct NnGraph {
  std::vector<int> nn_index;
  std::vector<double> nn_distance;
  std::vector<int> in_degree;
  long long Q = 0;
  long long R = 0;

  /// Number of points serving as NN exactly k times (k <= 6 for generic
  /// planar configurations).
  long long q_count(int k) const;
  int max_in_degree() const;
};

/// Exact nearest neighbor of every point, ties broken toward the smallest
/// point index (documented choice: the source material never states a rule,
/// and Q and R depend on it). Throws on duplicate coordinates or n < 2.
NnGraph build_nn_graph(std::span<const Point> pts);
NnGraph build_nn_graph(const MarkedPattern& pattern);

}  // namespace nnct
