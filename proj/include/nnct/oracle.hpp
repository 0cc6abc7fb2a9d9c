#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "nnct/geometry.hpp"

namespace nnct {

/// Exact random-labeling moments by complete enumeration of all labelings of
/// a fixed NN graph. Independent reference for the analytic formulas; shipped
/// (not test-only) so users can verify any small configuration themselves.
struct ExactMoments {
  Eigen::VectorXd expected;      // q^2, row-wise
  Eigen::MatrixXd covariance;    // q^2 x q^2 cell-count covariance
  Eigen::MatrixXd t_covariance;  // q^2 x q^2 covariance of the T statistics
  long long labelings = 0;
};

/// Enumerates multiset permutations in lexicographic order with exact integer
/// accumulation (one final division). Refuses jobs beyond 1e6 labelings.
ExactMoments exhaustive_rl_moments(const NnGraph& graph, const std::vector<long long>& class_sizes);

/// O(n^2) scan with the same smallest-index tie rule as build_nn_graph.
std::vector<int> brute_nn(std::span<const Point> pts);

}  // namespace nnct
