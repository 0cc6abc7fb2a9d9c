#include <doctest.h>

#include <cmath>
#include <numeric>

#include "nnct/geometry.hpp"
#include "nnct/oracle.hpp"
#include "test_helpers.hpp"

using namespace nnct;

TEST_CASE("two points are mutual nearest neighbors") {
  std::vector<Point> pts{{0, 0}, {1, 0}};
  const NnGraph g = build_nn_graph(pts);
  CHECK(g.nn_index == std::vector<int>{1, 0});
  CHECK(g.R == 2);
  CHECK(g.Q == 0);
  CHECK(g.in_degree == std::vector<int>{1, 1});
  CHECK(g.nn_distance[0] == doctest::Approx(1.0));
}

TEST_CASE("collinear x = 0, 1, 3") {
  std::vector<Point> pts{{0, 0}, {1, 0}, {3, 0}};
  const NnGraph g = build_nn_graph(pts);
  CHECK(g.nn_index == std::vector<int>{1, 0, 1});
  CHECK(g.R == 2);   // reflexive pair {0,1}
  CHECK(g.Q == 2);   // point 1 serves twice: Q_2 = 1
  CHECK(g.q_count(2) == 1);
}

TEST_CASE("exact distance tie breaks toward the smallest index") {
  // right isosceles triangle: point 0 is exactly 1.0 from both others
  std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}};
  const NnGraph g = build_nn_graph(pts);
  CHECK(g.nn_index == std::vector<int>{1, 0, 0});
  CHECK(g.R == 2);
  CHECK(g.Q == 2);  // point 0 has in-degree 2
}

TEST_CASE("duplicate coordinates are rejected") {
  std::vector<Point> pts{{0.5, 0.5}, {0.5, 0.5}, {1, 1}};
  CHECK_THROWS_AS(build_nn_graph(pts), data_error);
}

TEST_CASE("fewer than two points is an error") {
  std::vector<Point> pts{{0, 0}};
  CHECK_THROWS_AS(build_nn_graph(pts), data_error);
}

TEST_CASE("non-finite coordinates are rejected") {
  std::vector<Point> pts{{0, 0}, {std::nan(""), 1}};
  CHECK_THROWS_AS(build_nn_graph(pts), data_error);
}

TEST_CASE("in-degrees sum to n and Q matches both formulas") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 10 + static_cast<int>(seed) * 13;
    const auto pts = testing::random_points(n, seed);
    const NnGraph g = build_nn_graph(pts);
    CHECK(std::accumulate(g.in_degree.begin(), g.in_degree.end(), 0) == n);
    CHECK(g.R % 2 == 0);
    long long q_from_indeg = 0;
    for (int d : g.in_degree) q_from_indeg += static_cast<long long>(d) * (d - 1);
    CHECK(g.Q == q_from_indeg);
    // coefficient form 2(Q2 + 3 Q3 + 6 Q4 + 10 Q5 + 15 Q6)
    CHECK(g.max_in_degree() <= 6);
    const long long q_coeff = 2 * (g.q_count(2) + 3 * g.q_count(3) + 6 * g.q_count(4) +
                                   10 * g.q_count(5) + 15 * g.q_count(6));
    CHECK(g.Q == q_coeff);
  }
}

TEST_CASE("kd path agrees with the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 3 + static_cast<int>(seed % 7) * 60;  // crosses the kd threshold
    const auto pts = testing::random_points(n, seed * 77 + 5);
    const NnGraph g = build_nn_graph(pts);
    CHECK(g.nn_index == brute_nn(pts));
  }
}

TEST_CASE("NN relations are similarity invariant") {
  const auto pts = testing::random_points(120, 42);
  const NnGraph base = build_nn_graph(pts);

  const double angle = 0.7;
  const double scale = 3.25;
  std::vector<Point> moved(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].x * std::cos(angle) - pts[i].y * std::sin(angle);
    const double y = pts[i].x * std::sin(angle) + pts[i].y * std::cos(angle);
    moved[i] = {scale * x + 11.0, scale * y - 4.0};
  }
  const NnGraph g = build_nn_graph(moved);
  CHECK(g.nn_index == base.nn_index);
  CHECK(g.Q == base.Q);
  CHECK(g.R == base.R);
}

TEST_CASE("study region validation") {
  CHECK_THROWS_AS((StudyRegion{1, 0, 0, 1}.validate()), data_error);
  const StudyRegion r{0, 2, 0, 3};
  CHECK(r.area() == doctest::Approx(6.0));
  CHECK(r.contains({1, 1}));
  CHECK_FALSE(r.contains({-0.1, 1}));
}

TEST_CASE("pattern construction orders classes by first appearance") {
  std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const MarkedPattern p(pts, {"oak", "pine", "oak", "birch"}, StudyRegion::unit_square());
  CHECK(p.classes() == std::vector<std::string>{"oak", "pine", "birch"});
  CHECK(p.class_sizes() == std::vector<long long>{2, 1, 1});
  CHECK(p.labels() == std::vector<int>{0, 1, 0, 2});
}
