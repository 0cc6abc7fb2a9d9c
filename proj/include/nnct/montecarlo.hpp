#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nnct/generators.hpp"
#include "nnct/seg_tests.hpp"

namespace nnct {

enum class NullModel { rl_permutation, csr_simulation };

struct McConfig {
  long long n_mc = 10000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  NullModel null_model = NullModel::rl_permutation;
  std::optional<StudyRegion> region;  // csr_simulation only; defaults to the pattern's
  int workers = 1;
  bool retain_statistics = false;  // needed for critical values, costs q^2 * n_mc reals
};

/// Identifier for one scalar statistic of the battery: "ZD(i,j)", "ZN(i,j)"
/// (1-based cells), "CD", "CN".
std::vector<std::string> statistic_names(int q);

struct McTestReport {
  TestBattery observed;
  long long n_mc = 0;
  std::uint64_t seed = 0;
  NullModel null_model = NullModel::rl_permutation;
  /// Monte Carlo p-values: cells two-sided via |Z*| >= |Z|, overall via
  /// C* >= C, both with the (1 + count) / (1 + n_mc) convention.
  std::map<std::string, double> p_mc;
  /// (1-alpha) order-statistic critical values of the recorded statistics.
  std::map<std::string, double> critical_values;
  /// Per-replication statistics (row r = replication r), kept on request.
  std::vector<std::map<std::string, double>> replication_statistics;
};

/// Labels permuted uniformly on the fixed locations; Q and R are computed
/// once (they do not depend on labels and stay constant across replications).
McTestReport randomization_test(const MarkedPattern& pattern, const McConfig& config);

/// Fresh CSR coordinates with the observed class sizes each replication;
/// Q and R are recomputed per replication.
McTestReport csr_mc_test(const MarkedPattern& pattern, const McConfig& config);

/// ceil((1-alpha) * n) order statistic, the Monte-Carlo-critical-value rule.
double order_statistic_quantile(std::vector<double> values, double alpha);

/// Critical values of every statistic under the null spec: the one-sided
/// (1-alpha) order statistic of the raw recorded statistics.
std::map<std::string, double> mc_critical_values(const ProcessSpec& null_spec,
                                                 const McConfig& config);

enum class CriticalSource { asymptotic, monte_carlo };

enum class SizeFlag { ok, conservative, liberal };

struct RateRow {
  std::string statistic;
  double rate = 0.0;
  SizeFlag flag = SizeFlag::ok;
};

struct RateTable {
  std::vector<RateRow> rows;
  double threshold_low = 0.0;   // below: conservative
  double threshold_high = 0.0;  // above: liberal
  long long n_mc = 0;

  const RateRow& row(const std::string& name) const;
};

/// Empirical size / power experiment. Generates a pattern per replication,
/// runs the full battery and tabulates rejection proportions.
///
/// Rejection rules: with asymptotic criticals, cell tests are two-sided
/// (|Z| > z_{1-alpha/2}) and overall tests one-sided (C > chi2 quantile) --
/// the convention behind the published size and power tables. With Monte
/// Carlo criticals, every statistic is compared one-sided against its
/// simulated (1-alpha) quantile under CSR with the same class sizes.
RateTable rate_experiment(const ProcessSpec& spec, const McConfig& config, CriticalSource source);

/// Conservative/liberal thresholds of the one-sided .05-level normal
/// proportion test around the nominal level.
std::pair<double, double> proportion_test_thresholds(double alpha, long long n_mc);

std::string rate_table_csv(const RateTable& table);

}  // namespace nnct
