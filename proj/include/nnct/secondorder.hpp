#pragma once

#include <vector>

#include "nnct/generators.hpp"
#include "nnct/geometry.hpp"

namespace nnct {

struct DistanceGrid {
  std::vector<double> t;

  /// count equally spaced values from 0 to tmax inclusive.
  static DistanceGrid regular(double tmax, int count = 128);
  /// Default grid for a region: 0 .. (smaller side)/4.
  static DistanceGrid for_region(const StudyRegion& region, int count = 128);
  double spacing() const;
};

struct KEstimate {
  DistanceGrid grid;
  std::vector<double> k_hat;
  std::vector<double> l_minus_t;  // sqrt(K/pi) - t
  int class_i = -1;
  int class_j = -1;  // == class_i for the univariate estimate
};

struct PcfEstimate {
  DistanceGrid grid;
  std::vector<double> g_hat;  // NaN where undefined (endpoints, t below spacing)
  double bandwidth = 0.0;
};

struct Envelope {
  DistanceGrid grid;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.95;
  int n_sim = 0;
};

/// Fraction of the circumference of the circle centered inside the rectangle
/// that lies within the rectangle; the boundary-effect weight of the K
/// estimators. Exact circle-rectangle arc computation.
double edge_weight(const Point& center, double d, const StudyRegion& region);

/// Ripley's univariate K for one class with the circumference edge
/// correction, lambda_hat = N/A; L - t is derived alongside.
KEstimate k_univariate(const MarkedPattern& pattern, int class_id, const DistanceGrid& grid);

/// Bivariate K. Edge weights are evaluated symmetrically (average of the two
/// single-center weights), which makes L_ij == L_ji hold exactly.
KEstimate k_bivariate(const MarkedPattern& pattern, int class_i, int class_j,
                      const DistanceGrid& grid);

/// Pair correlation g = K'/(2 pi t): centered differences on the grid, box
/// kernel smoothing of the given bandwidth; undefined (NaN) at the endpoints
/// and below the smallest grid spacing.
PcfEstimate pcf(const KEstimate& k, double bandwidth);

/// Default pcf bandwidth 0.15 / sqrt(lambda_hat).
double default_pcf_bandwidth(const MarkedPattern& pattern, int class_id);

enum class SecondOrderStatistic { k_uni, k_biv, pcf };

struct EnvelopeRequest {
  SecondOrderStatistic statistic = SecondOrderStatistic::k_uni;
  int class_i = 0;
  int class_j = 1;          // k_biv only
  double bandwidth = 0.05;  // pcf only
  double level = 0.95;
};

/// Pointwise simulation envelope of L - t (k_uni / k_biv) or g (pcf) under
/// the null spec: order-statistic quantiles at (1 -/+ level)/2.
Envelope envelope(const ProcessSpec& null_spec, const EnvelopeRequest& request,
                  const DistanceGrid& grid, int n_sim, std::uint64_t seed);

}  // namespace nnct
