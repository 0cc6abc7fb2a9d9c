#include "nnct/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nnct {

namespace {

void check_sizes(const std::vector<long long>& sizes, long long min_n) {
  if (sizes.empty()) throw data_error("moments: empty class list");
  long long n = 0;
  for (long long s : sizes) {
    if (s < 1) throw data_error("moments: every class size must be >= 1");
    n += s;
  }
  if (n < min_n) throw data_error("moments: total sample size too small");
}

}  // namespace

PairProbabilities::PairProbabilities(std::vector<long long> class_sizes)
    : sizes_(std::move(class_sizes)) {
  check_sizes(sizes_, 4);
  for (long long s : sizes_) n_ += s;
}

PairProbabilities pair_probabilities(const std::vector<long long>& class_sizes) {
  return PairProbabilities(class_sizes);
}

// P(k distinct points have the given labels) = prod_c (n_c)_(m_c) / (n)_k,
// evaluated as a product of ratios numerator-factor by denominator-factor.
namespace {

template <std::size_t K>
double multiset_prob(const std::vector<long long>& sizes, long long n, std::array<int, K> labels) {
  std::sort(labels.begin(), labels.end());
  double prob = 1.0;
  long long taken_of_class = 0;
  for (std::size_t t = 0; t < K; ++t) {
    taken_of_class = (t > 0 && labels[t] == labels[t - 1]) ? taken_of_class + 1 : 0;
    const double num = static_cast<double>(sizes[labels[t]] - taken_of_class);
    const double den = static_cast<double>(n - static_cast<long long>(t));
    prob *= (num > 0.0 ? num : 0.0) / den;
  }
  return prob;
}

}  // namespace

double PairProbabilities::pair(int a, int b) const {
  return multiset_prob<2>(sizes_, n_, {a, b});
}
double PairProbabilities::triple(int a, int b, int c) const {
  return multiset_prob<3>(sizes_, n_, {a, b, c});
}
double PairProbabilities::quad(int a, int b, int c, int d) const {
  return multiset_prob<4>(sizes_, n_, {a, b, c, d});
}

Eigen::MatrixXd expected_counts(const std::vector<long long>& class_sizes) {
  check_sizes(class_sizes, 2);
  const int q = static_cast<int>(class_sizes.size());
  long long n = 0;
  for (long long s : class_sizes) n += s;
  Eigen::MatrixXd e(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const double ni = static_cast<double>(class_sizes[i]);
      const double nj = static_cast<double>(class_sizes[j]);
      e(i, j) = (i == j ? ni * (ni - 1.0) : ni * nj) / static_cast<double>(n - 1);
    }
  return e;
}

CellMoments cell_cov_matrix(const std::vector<long long>& class_sizes, long long Q, long long R) {
  check_sizes(class_sizes, 4);
  const int q = static_cast<int>(class_sizes.size());
  const PairProbabilities p(class_sizes);
  const double n = static_cast<double>(p.n());

  if (Q < 0 || R < 0) throw data_error("cell_cov_matrix: Q and R must be nonnegative");

  // Cov[N_ab, N_cd] from the decomposition of E[N_ab N_cd] over ordered pairs
  // of NN edges: identical edges (n), reflexive pairs (R), edge into the other
  // base point (n-R twice), shared NN (Q), and four distinct points
  // (n^2 - 3n - Q + R). Specializes to the published Var[N_ii]/Var[N_ij]
  // forms and to the cross-cell closed forms.
  const double nR = n - static_cast<double>(R);
  const double quadCount = n * n - 3.0 * n - static_cast<double>(Q) + static_cast<double>(R);
  auto cov = [&](int a, int b, int c, int d) {
    double v = 0.0;
    const double p_ab = p.pair(a, b);
    if (a == c && b == d) v += n * p_ab;
    if (a == d && b == c) v += static_cast<double>(R) * p_ab;
    if (a == d) v += nR * p.triple(a, b, c);
    if (b == c) v += nR * p.triple(a, b, d);
    if (b == d) v += static_cast<double>(Q) * p.triple(a, c, b);
    v += quadCount * p.quad(a, b, c, d);
    v -= n * n * p_ab * p.pair(c, d);
    return v;
  };

  CellMoments m;
  m.class_sizes = class_sizes;
  m.expected = expected_counts(class_sizes);
  m.Q = Q;
  m.R = R;
  m.sigma_d.resize(q * q, q * q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) m.sigma_d(a * q + b, c * q + d) = cov(a, b, c, d);

  const double scale = std::max(1.0, m.sigma_d.cwiseAbs().maxCoeff());
  for (int k = 0; k < q * q; ++k)
    if (m.sigma_d(k, k) < -1e-9 * scale)
      throw numeric_error(
          "cell_cov_matrix: negative variance; the supplied Q/R are inconsistent with n");
  return m;
}

double t_coefficient(const std::vector<long long>& class_sizes, int i, int j) {
  long long n = 0;
  for (long long s : class_sizes) n += s;
  const double ni = static_cast<double>(class_sizes[i]);
  return (i == j ? ni - 1.0 : ni) / static_cast<double>(n - 1);
}

TMoments t_cov_matrix(const std::vector<long long>& class_sizes, const CellMoments& cell) {
  const int q = static_cast<int>(class_sizes.size());
  if (cell.q() != q) throw data_error("t_cov_matrix: class size mismatch");
  TMoments t;
  t.class_sizes = class_sizes;

  // Cov[N_ij, C_l] = sum_k Cov[N_ij, N_kl]
  t.cell_colsum_cov = Eigen::MatrixXd::Zero(q * q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int l = 0; l < q; ++l) {
        double s = 0.0;
        for (int k = 0; k < q; ++k) s += cell.sigma_d(i * q + j, k * q + l);
        t.cell_colsum_cov(i * q + j, l) = s;
      }

  // Cov[C_i, C_j] = sum_k sum_l Cov[N_ki, N_lj]
  t.colsum_cov = Eigen::MatrixXd::Zero(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      double s = 0.0;
      for (int k = 0; k < q; ++k) s += t.cell_colsum_cov(k * q + i, j);
      t.colsum_cov(i, j) = s;
    }

  // Var[T_ij] and the four cross-cell cases share one bilinear expansion of
  // Cov[N_ij - c_ij C_j, N_kl - c_kl C_l].
  t.sigma_n.resize(q * q, q * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const double cij = t_coefficient(class_sizes, i, j);
      for (int k = 0; k < q; ++k)
        for (int l = 0; l < q; ++l) {
          const double ckl = t_coefficient(class_sizes, k, l);
          double v = cell.sigma_d(i * q + j, k * q + l);
          v -= ckl * t.cell_colsum_cov(i * q + j, l);
          v -= cij * t.cell_colsum_cov(k * q + l, j);
          v += cij * ckl * t.colsum_cov(j, l);
          t.sigma_n(i * q + j, k * q + l) = v;
        }
    }

  const double scale = std::max(1.0, t.sigma_n.cwiseAbs().maxCoeff());
  for (int k = 0; k < q * q; ++k)
    if (t.sigma_n(k, k) < -1e-9 * scale)
      throw numeric_error("t_cov_matrix: negative variance; inconsistent inputs");
  return t;
}

}  // namespace nnct
