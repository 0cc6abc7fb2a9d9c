#include "nnct/table.hpp"

#include <cmath>

#include "nnct/numerics.hpp"

namespace nnct {

std::vector<long long> Nnct::row_sums() const {
  std::vector<long long> r(q());
  for (int i = 0; i < q(); ++i) r[i] = static_cast<long long>(std::llround(counts.row(i).sum()));
  return r;
}

std::vector<long long> Nnct::col_sums() const {
  std::vector<long long> c(q());
  for (int j = 0; j < q(); ++j) c[j] = static_cast<long long>(std::llround(counts.col(j).sum()));
  return c;
}

Nnct Nnct::from_counts(std::vector<std::string> classes, Eigen::MatrixXd counts) {
  const int q = static_cast<int>(classes.size());
  if (counts.rows() != q || counts.cols() != q) throw data_error("nnct: counts must be q x q");
  if (q < 1) throw data_error("nnct: at least one class required");
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (counts(i, j) < 0) throw data_error("nnct: negative cell count");
  Nnct t{std::move(classes), std::move(counts)};
  for (long long r : t.row_sums())
    if (r == 0) throw data_error("nnct: empty class (zero row sum)");
  return t;
}

Nnct build_nnct(const MarkedPattern& pattern, const NnGraph& graph) {
  const int n = pattern.n();
  if (static_cast<int>(graph.nn_index.size()) != n)
    throw data_error("build_nnct: pattern/graph length mismatch");
  const int q = pattern.q();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(q, q);
  const auto& labels = pattern.labels();
  for (int i = 0; i < n; ++i) counts(labels[i], labels[graph.nn_index[i]]) += 1.0;
  return Nnct::from_counts(pattern.classes(), std::move(counts));
}

PielouResult pielou_chisq(const Nnct& table) {
  const int q = table.q();
  const auto rows = table.row_sums();
  const auto cols = table.col_sums();
  const double n = static_cast<double>(table.n());
  for (int i = 0; i < q; ++i)
    if (rows[i] == 0 || cols[i] == 0) throw data_error("pielou_chisq: zero marginal");
  double stat = 0.0;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const double expect = rows[i] * cols[j] / n;
      const double d = table.counts(i, j) - expect;
      stat += d * d / expect;
    }
  const int df = (q - 1) * (q - 1);
  const double p = df >= 1 ? chi2_sf(stat, df) : 1.0;
  return PielouResult{stat, df, p};
}

}  // namespace nnct
