#pragma once

#include <Eigen/Dense>

#include "nnct/errors.hpp"

namespace nnct {

/// Dense symmetric matrix, validated at construction (1e-12 relative).
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Eigen::MatrixXd m);

  int order() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& entries() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

struct GeneralizedInverse {
  SymmetricMatrix pinv;
  int rank;
};

/// Moore-Penrose pseudoinverse by spectral decomposition. Eigenvalues with
/// magnitude below tol_rel times the largest magnitude are treated as zero;
/// rank is the number retained.
GeneralizedInverse generalized_inverse(const SymmetricMatrix& m, double tol_rel = 1e-9);

/// Upper-tail probability of the chi-square distribution.
double chi2_sf(double x, int df);

/// (1-p)-quantile inverse of chi2_sf: smallest x with chi2_sf(x, df) <= 1 - p.
double chi2_quantile(double p, int df);

double std_normal_cdf(double z);

/// Inverse standard normal CDF (absolute accuracy ~1e-9).
double std_normal_quantile(double p);

}  // namespace nnct
