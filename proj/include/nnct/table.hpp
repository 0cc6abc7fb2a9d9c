#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nnct/geometry.hpp"

namespace nnct {

/// q x q nearest-neighbor contingency table. Row sums (class sizes) are fixed
/// by design; column sums and cell counts are the random quantities.
struct Nnct {
  std::vector<std::string> classes;
  Eigen::MatrixXd counts;  // N_ij, integer-valued

  int q() const { return static_cast<int>(classes.size()); }
  long long n() const { return static_cast<long long>(counts.sum()); }
  std::vector<long long> row_sums() const;
  std::vector<long long> col_sums() const;

  /// Direct construction from known counts (table-only analyses where raw
  /// coordinates are unavailable). Rejects empty classes and negative cells.
  static Nnct from_counts(std::vector<std::string> classes, Eigen::MatrixXd counts);
};

/// N_ij = number of class-i points whose NN has class j.
Nnct build_nnct(const MarkedPattern& pattern, const NnGraph& graph);

struct PielouResult {
  double statistic;
  int df;
  double p;
};

/// Pearson chi-square of independence on the NNCT, df (q-1)^2. Kept for
/// comparison only: cell counts are dependent under RL/CSR, so this test is
/// inappropriate for completely mapped data and is flagged as such in reports.
PielouResult pielou_chisq(const Nnct& table);

}  // namespace nnct
