#include "nnct/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "nnct/moments.hpp"

namespace nnct {

namespace {

long long multinomial_count(const std::vector<long long>& sizes) {
  long long n = 0;
  for (long long s : sizes) n += s;
  // n! / prod n_i! built factor by factor; bails out early on overflow risk
  long double acc = 1.0L;
  long long remaining = n;
  for (long long s : sizes) {
    for (long long t = 1; t <= s; ++t) {
      acc = acc * static_cast<long double>(remaining) / static_cast<long double>(t);
      --remaining;
      if (acc > 4e18L) return std::numeric_limits<long long>::max();
    }
  }
  return static_cast<long long>(std::llround(static_cast<double>(acc)));
}

}  // namespace

ExactMoments exhaustive_rl_moments(const NnGraph& graph,
                                   const std::vector<long long>& class_sizes) {
  const int n = static_cast<int>(graph.nn_index.size());
  const int q = static_cast<int>(class_sizes.size());
  long long total = 0;
  for (long long s : class_sizes) {
    if (s < 0) throw data_error("exhaustive_rl_moments: negative class size");
    total += s;
  }
  if (total != n) throw data_error("exhaustive_rl_moments: class sizes must sum to n");
  const long long count = multinomial_count(class_sizes);
  if (count > 1000000) throw data_error("exhaustive_rl_moments: enumeration bound (1e6) exceeded");

  std::vector<int> labels;
  labels.reserve(n);
  for (int c = 0; c < q; ++c) labels.insert(labels.end(), class_sizes[c], c);
  std::sort(labels.begin(), labels.end());

  const int m = q * q;
  std::vector<long long> sum1(m, 0);
  std::vector<long long> sum2(static_cast<std::size_t>(m) * m, 0);
  std::vector<long long> cells(m);
  long long labelings = 0;
  do {
    std::fill(cells.begin(), cells.end(), 0);
    for (int i = 0; i < n; ++i) ++cells[labels[i] * q + labels[graph.nn_index[i]]];
    for (int a = 0; a < m; ++a) {
      sum1[a] += cells[a];
      for (int b = a; b < m; ++b) sum2[static_cast<std::size_t>(a) * m + b] += cells[a] * cells[b];
    }
    ++labelings;
  } while (std::next_permutation(labels.begin(), labels.end()));

  ExactMoments out;
  out.labelings = labelings;
  out.expected.resize(m);
  out.covariance.resize(m, m);
  const double denom = static_cast<double>(labelings);
  for (int a = 0; a < m; ++a) out.expected[a] = static_cast<double>(sum1[a]) / denom;
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const double second = static_cast<double>(sum2[static_cast<std::size_t>(a) * m + b]) / denom;
      const double cov = second - out.expected[a] * out.expected[b];
      out.covariance(a, b) = cov;
      out.covariance(b, a) = cov;
    }

  // derived T moments: T = M N is a definitional linear map, so conjugating
  // the enumerated covariance keeps the result implementation-independent
  Eigen::MatrixXd tmap = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      tmap(i * q + j, i * q + j) += 1.0;
      const double c = t_coefficient(class_sizes, i, j);
      for (int k = 0; k < q; ++k) tmap(i * q + j, k * q + j) -= c;
    }
  out.t_covariance = tmap * out.covariance * tmap.transpose();
  return out;
}

std::vector<int> brute_nn(std::span<const Point> pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 2) throw data_error("brute_nn: at least 2 points required");
  std::vector<int> nn(n, -1);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0) throw data_error("brute_nn: duplicate coordinates");
      if (d2 < best) {
        best = d2;
        nn[i] = j;
      }
    }
  }
  return nn;
}

}  // namespace nnct
