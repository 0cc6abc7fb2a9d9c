#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nnct/errors.hpp"

namespace nnct {

/// Mean fractions Q/n and R/n of a homogeneous planar Poisson process,
/// estimated by large-scale simulation on the unit square. Exposed for
/// unconditional experimentation only; all supported inference conditions on
/// the observed Q and R.
inline constexpr double kPoissonMeanQOverN = 0.632786;
inline constexpr double kPoissonMeanROverN = 0.621120;

/// Probabilities that a randomly picked pair / triplet / quartet of points
/// (sampled without replacement from n labeled points) carries the indicated
/// class labels. Evaluated as factor-by-factor ratio products, never raw
/// factorials, so they stay finite for n up to 1e5 and beyond.
class PairProbabilities {
 public:
  PairProbabilities(std::vector<long long> class_sizes);

  int q() const { return static_cast<int>(sizes_.size()); }
  long long n() const { return n_; }

  double p_ii(int i) const { return pair(i, i); }
  double p_ij(int i, int j) const { return pair(i, j); }
  double p_iii(int i) const { return triple(i, i, i); }
  double p_iij(int i, int j) const { return triple(i, i, j); }
  double p_iiii(int i) const { return quad(i, i, i, i); }
  double p_iijj(int i, int j) const { return quad(i, i, j, j); }

  /// General multiset label probabilities (2, 3, and 4 points).
  double pair(int a, int b) const;
  double triple(int a, int b, int c) const;
  double quad(int a, int b, int c, int d) const;

 private:
  std::vector<long long> sizes_;
  long long n_ = 0;
};

PairProbabilities pair_probabilities(const std::vector<long long>& class_sizes);

/// E[N_ij] under random labeling: n_i(n_i-1)/(n-1) on the diagonal,
/// n_i n_j/(n-1) off it. Column sums of the result equal the class sizes.
Eigen::MatrixXd expected_counts(const std::vector<long long>& class_sizes);

/// First and second moments of the NNCT cell counts under random labeling,
/// conditional on the join-count quantities Q and R.
struct CellMoments {
  std::vector<long long> class_sizes;
  Eigen::MatrixXd expected;  // q x q
  Eigen::MatrixXd sigma_d;   // q^2 x q^2, cells concatenated row-wise
  long long Q = 0;
  long long R = 0;

  int q() const { return static_cast<int>(class_sizes.size()); }
};

/// Builds E[N] and the full cell-count covariance matrix. Q and R may come
/// from an NnGraph or be supplied directly (table-only analyses). A negative
/// computed variance signals Q/R values impossible for the given n and is
/// reported as an error, never as a silent NaN.
CellMoments cell_cov_matrix(const std::vector<long long>& class_sizes, long long Q, long long R);

/// Moments of the column-sum-adjusted statistics T_ij.
struct TMoments {
  std::vector<long long> class_sizes;
  Eigen::MatrixXd sigma_n;          // q^2 x q^2, row-wise like sigma_d
  Eigen::MatrixXd colsum_cov;       // q x q: Cov[C_i, C_j]
  Eigen::MatrixXd cell_colsum_cov;  // q^2 x q: Cov[N_ij, C_l], rows row-wise

  int q() const { return static_cast<int>(class_sizes.size()); }
};

/// Var[T_ij] and Cov[T_ij, T_kl] assembled from the cell covariances via
/// Cov[N_ij, C_l] = sum_k Cov[N_ij, N_kl] and
/// Cov[C_i, C_j] = sum_k sum_l Cov[N_ki, N_lj].
TMoments t_cov_matrix(const std::vector<long long>& class_sizes, const CellMoments& cell);

/// T-statistic coefficient: (n_i-1)/(n-1) on the diagonal, n_i/(n-1) off it.
/// The off-diagonal coefficient is the one that makes E[T_ij] vanish.
double t_coefficient(const std::vector<long long>& class_sizes, int i, int j);

}  // namespace nnct
