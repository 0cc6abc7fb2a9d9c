#include "nnct/numerics.hpp"

#include <cmath>
#include <limits>

namespace nnct {

SymmetricMatrix::SymmetricMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw numeric_error("SymmetricMatrix: input is not square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw numeric_error("SymmetricMatrix: input is not symmetric");
  // exact symmetry downstream (eigen solvers read one triangle)
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

GeneralizedInverse generalized_inverse(const SymmetricMatrix& m, double tol_rel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.entries());
  if (es.info() != Eigen::Success) throw numeric_error("generalized_inverse: eigendecomposition failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  const Eigen::MatrixXd& v = es.eigenvectors();
  const double wmax = w.cwiseAbs().maxCoeff();
  const double tol = tol_rel * wmax;
  Eigen::VectorXd winv = Eigen::VectorXd::Zero(w.size());
  int rank = 0;
  for (int i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > tol && wmax > 0.0) {
      winv[i] = 1.0 / w[i];
      ++rank;
    }
  }
  Eigen::MatrixXd pinv = v * winv.asDiagonal() * v.transpose();
  return GeneralizedInverse{SymmetricMatrix((pinv + pinv.transpose()) / 2.0), rank};
}

namespace {

// Regularized incomplete gamma P(a, x) by series, Q(a, x) by Lentz continued
// fraction; the usual split at x < a + 1 keeps both rapidly convergent.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_sf(double x, int df) {
  if (df < 1) throw numeric_error("chi2_sf: df must be >= 1");
  if (x < 0.0) throw numeric_error("chi2_sf: x must be >= 0");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * df;
  const double xx = 0.5 * x;
  if (xx < a + 1.0) return 1.0 - gamma_p_series(a, xx);
  return gamma_q_contfrac(a, xx);
}

double chi2_quantile(double p, int df) {
  if (df < 1) throw numeric_error("chi2_quantile: df must be >= 1");
  if (!(p >= 0.0 && p < 1.0)) throw numeric_error("chi2_quantile: p must be in [0,1)");
  if (p == 0.0) return 0.0;
  double lo = 0.0, hi = df + 10.0;
  while (chi2_sf(hi, df) > 1.0 - p) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_sf(mid, df) > 1.0 - p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw numeric_error("std_normal_quantile: p must be in (0,1)");
  // Acklam's rational approximation followed by one Halley refinement step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01,  -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = std_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace nnct
