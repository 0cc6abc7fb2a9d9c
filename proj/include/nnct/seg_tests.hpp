#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "nnct/moments.hpp"
#include "nnct/table.hpp"

namespace nnct {

enum class TestMethod { kDixon, kNew };

/// Cell-specific z-scores with asymptotic p-values. Cells whose variance is
/// not positive carry NaN and defined(i,j) == false; they are never dropped
/// by row deletion, the overall quadratic form handles them through the
/// generalized inverse.
struct CellTests {
  TestMethod method;
  Eigen::MatrixXd z;
  Eigen::MatrixXd p_two_sided;
  Eigen::MatrixXd p_one_sided_greater;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> defined;

  int q() const { return static_cast<int>(z.rows()); }
};

struct OverallTest {
  TestMethod method;
  double statistic = 0.0;
  int df = 0;
  double p = 1.0;
  int rank = 0;  // numerical rank of the inverted covariance
};

/// Z^D_ij = (N_ij - E[N_ij]) / sqrt(Var[N_ij]).
CellTests dixon_cell_tests(const Nnct& table, const CellMoments& moments);

/// T_ij = N_ij - c_ij C_j with c from t_coefficient; Z^N_ij = T_ij / sd.
CellTests new_cell_tests(const Nnct& table, const TMoments& tmoments);

/// Quadratic form (N - E[N])' Sigma_D^- (N - E[N]); chi-square with q(q-1) df.
OverallTest dixon_overall(const Nnct& table, const CellMoments& moments);

/// Quadratic form T' Sigma_N^- T; chi-square with (q-1)^2 df. The inverse is
/// taken on the (q-1)^2-dimensional support: column sums of T vanish
/// identically and row sums carry variance of relative order 1/n^2 which is
/// asymptotically null, so both index-indicator families are projected out
/// before the spectral inverse. This keeps the statistic label-permutation
/// invariant and the reference distribution consistent with the rank of the
/// support.
OverallTest new_overall(const Nnct& table, const TMoments& tmoments);

/// The T matrix of Eq-style column-adjusted differences.
Eigen::MatrixXd t_statistics(const Nnct& table);

/// Two-class closed forms; must agree with the general quadratic form.
double dixon_overall_2x2_closed_form(const Nnct& table, const CellMoments& moments);
double dixon_overall_2x2_correlation_form(const Nnct& table, const CellMoments& moments);

namespace detail {
/// Real-valued entry points used by tests (synthetic non-integer tables).
OverallTest dixon_overall_stat(const Eigen::MatrixXd& counts, const CellMoments& moments);
OverallTest new_overall_stat(const Eigen::MatrixXd& counts, const std::vector<long long>& sizes,
                             const TMoments& tmoments);
/// Projector onto the orthocomplement of row- and column-indicator directions.
Eigen::MatrixXd support_projector(int q);
}  // namespace detail

/// One full analysis: table, join counts, Pielou comparison and all four
/// NNCT tests. Everything needed to reproduce the numbers is carried along.
struct TestBattery {
  Nnct table;
  long long Q = 0;
  long long R = 0;
  PielouResult pielou;
  CellTests dixon_cells;
  CellTests new_cells;
  OverallTest dixon;
  OverallTest neww;
};

TestBattery run_battery(const Nnct& table, long long Q, long long R);
TestBattery run_battery(const MarkedPattern& pattern, const NnGraph& graph);

}  // namespace nnct
