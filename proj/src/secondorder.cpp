#include "nnct/secondorder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nnct {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<int> class_members(const MarkedPattern& p, int cls) {
  std::vector<int> idx;
  for (int i = 0; i < p.n(); ++i)
    if (p.labels()[i] == cls) idx.push_back(i);
  return idx;
}

// cumulative weighted pair counts on the grid: for each pair contribute its
// weight to every t > d, via a per-bin histogram and prefix sum
class GridAccumulator {
 public:
  explicit GridAccumulator(const DistanceGrid& grid) : grid_(grid), bins_(grid.t.size(), 0.0) {}

  void add(double d, double weight) {
    // strict inequality d < t: first grid index with t > d
    const auto it = std::upper_bound(grid_.t.begin(), grid_.t.end(), d);
    if (it == grid_.t.end()) return;
    bins_[static_cast<std::size_t>(it - grid_.t.begin())] += weight;
  }

  std::vector<double> cumulative() const {
    std::vector<double> out(bins_.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < bins_.size(); ++i) {
      acc += bins_[i];
      out[i] = acc;
    }
    return out;
  }

 private:
  const DistanceGrid& grid_;
  std::vector<double> bins_;
};

KEstimate finish_k(const DistanceGrid& grid, std::vector<double> sums, double norm, int ci,
                   int cj) {
  KEstimate k;
  k.grid = grid;
  k.k_hat.resize(sums.size());
  k.l_minus_t.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    k.k_hat[i] = sums[i] * norm;
    k.l_minus_t[i] = std::sqrt(k.k_hat[i] / M_PI) - grid.t[i];
  }
  k.class_i = ci;
  k.class_j = cj;
  return k;
}

}  // namespace

DistanceGrid DistanceGrid::regular(double tmax, int count) {
  if (!(tmax > 0.0) || count < 2) throw data_error("distance grid: need tmax > 0 and count >= 2");
  DistanceGrid g;
  g.t.resize(count);
  for (int i = 0; i < count; ++i) g.t[i] = tmax * static_cast<double>(i) / (count - 1);
  return g;
}

DistanceGrid DistanceGrid::for_region(const StudyRegion& region, int count) {
  return regular(std::min(region.width(), region.height()) / 4.0, count);
}

double DistanceGrid::spacing() const {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.size(); ++i) s = std::min(s, t[i] - t[i - 1]);
  return s;
}

double edge_weight(const Point& center, double d, const StudyRegion& region) {
  if (!(d > 0.0)) throw data_error("edge_weight: distance must be positive");
  if (!region.contains(center)) throw data_error("edge_weight: center outside the study region");
  // Each side the circle crosses excludes one angular interval; the exterior
  // arc is the measure of their union, which stays exact even when arcs from
  // different sides overlap (large d near a corner).
  const double dl = center.x - region.xmin;
  const double dr = region.xmax - center.x;
  const double db = center.y - region.ymin;
  const double dt = region.ymax - center.y;
  std::vector<std::pair<double, double>> arcs;  // split at the 0/2pi seam
  auto push = [&arcs](double lo, double hi) {
    if (hi <= lo) return;
    arcs.emplace_back(lo, hi);
  };
  const double two_pi = 2.0 * M_PI;
  if (dr < d) {  // cos(theta) > dr/d, interval centered at 0: split across the seam
    const double b = std::acos(std::clamp(dr / d, -1.0, 1.0));
    push(0.0, b);
    push(two_pi - b, two_pi);
  }
  if (dl < d) {  // cos(theta) < -dl/d, centered at pi
    const double a = std::acos(std::clamp(-dl / d, -1.0, 1.0));
    push(a, two_pi - a);
  }
  if (dt < d) {  // sin(theta) > dt/d, centered at pi/2
    const double g = std::asin(std::clamp(dt / d, -1.0, 1.0));
    push(g, M_PI - g);
  }
  if (db < d) {  // sin(theta) < -db/d, centered at 3pi/2
    const double g = std::asin(std::clamp(db / d, -1.0, 1.0));
    push(M_PI + g, two_pi - g);
  }
  std::sort(arcs.begin(), arcs.end());
  double exterior = 0.0;
  double cur_lo = 0.0, cur_hi = -1.0;
  for (const auto& [lo, hi] : arcs) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) exterior += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) exterior += cur_hi - cur_lo;
  const double w = 1.0 - exterior / two_pi;
  return std::clamp(w, 0.0, 1.0);
}

KEstimate k_univariate(const MarkedPattern& pattern, int class_id, const DistanceGrid& grid) {
  const auto idx = class_members(pattern, class_id);
  const long long m = static_cast<long long>(idx.size());
  if (m < 2) throw data_error("k_univariate: class needs at least 2 points");
  const StudyRegion& region = pattern.region();
  GridAccumulator acc(grid);
  const auto& pts = pattern.points();
  for (long long a = 0; a < m; ++a)
    for (long long b = 0; b < m; ++b) {
      if (a == b) continue;
      const Point& pa = pts[idx[a]];
      const Point& pb = pts[idx[b]];
      const double d = std::hypot(pa.x - pb.x, pa.y - pb.y);
      // isotropic correction: each observed pair stands for 1/w pairs
      acc.add(d, 1.0 / edge_weight(pa, d, region));
    }
  // lambda^{-1} * sum / N = A * sum / N^2
  const double norm = region.area() / (static_cast<double>(m) * static_cast<double>(m));
  return finish_k(grid, acc.cumulative(), norm, class_id, class_id);
}

KEstimate k_bivariate(const MarkedPattern& pattern, int class_i, int class_j,
                      const DistanceGrid& grid) {
  if (class_i == class_j) throw data_error("k_bivariate: classes must differ");
  // canonical class order makes the accumulation order (and therefore the
  // result) bit-identical for (i,j) and (j,i)
  const auto ia = class_members(pattern, std::min(class_i, class_j));
  const auto ib = class_members(pattern, std::max(class_i, class_j));
  if (ia.empty() || ib.empty()) throw data_error("k_bivariate: empty class");
  const StudyRegion& region = pattern.region();
  GridAccumulator acc(grid);
  const auto& pts = pattern.points();
  for (int a : ia)
    for (int b : ib) {
      const double d = std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y);
      // symmetric isotropic correction keeps L_ij == L_ji exact
      const double w = 0.5 * (1.0 / edge_weight(pts[a], d, region) +
                              1.0 / edge_weight(pts[b], d, region));
      acc.add(d, w);
    }
  // (lambda_i lambda_j A)^{-1} * sum = A * sum / (N_i N_j)
  const double norm =
      region.area() / (static_cast<double>(ia.size()) * static_cast<double>(ib.size()));
  return finish_k(grid, acc.cumulative(), norm, class_i, class_j);
}

PcfEstimate pcf(const KEstimate& k, double bandwidth) {
  if (!(bandwidth > 0.0)) throw data_error("pcf: bandwidth must be positive");
  const auto& t = k.grid.t;
  const std::size_t m = t.size();
  if (m < 3) throw data_error("pcf: grid too small");
  if (!(k.grid.spacing() < bandwidth))
    throw data_error("pcf: grid spacing must be below the bandwidth");

  const double min_spacing = k.grid.spacing();
  std::vector<double> raw(m, kNan);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (t[i] < min_spacing) continue;  // estimator variance blows up near 0
    const double deriv = (k.k_hat[i + 1] - k.k_hat[i - 1]) / (t[i + 1] - t[i - 1]);
    raw[i] = deriv / (2.0 * M_PI * t[i]);
  }

  PcfEstimate out;
  out.grid = k.grid;
  out.bandwidth = bandwidth;
  out.g_hat.assign(m, kNan);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::isnan(raw[i])) continue;
    double sum = 0.0;
    int cnt = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::isnan(raw[j]) || std::abs(t[j] - t[i]) > bandwidth) continue;
      sum += raw[j];
      ++cnt;
    }
    out.g_hat[i] = sum / cnt;
  }
  return out;
}

double default_pcf_bandwidth(const MarkedPattern& pattern, int class_id) {
  const auto idx = class_members(pattern, class_id);
  const double lambda = static_cast<double>(idx.size()) / pattern.region().area();
  return 0.15 / std::sqrt(lambda);
}

Envelope envelope(const ProcessSpec& null_spec, const EnvelopeRequest& request,
                  const DistanceGrid& grid, int n_sim, std::uint64_t seed) {
  if (n_sim < 2) throw data_error("envelope: n_sim must be >= 2");
  if (!(request.level > 0.0 && request.level <= 1.0))
    throw data_error("envelope: level must be in (0,1]");
  // both order statistics must exist strictly inside the sample, e.g. 40
  // simulations for a 95% band
  if (request.level < 1.0 && n_sim < static_cast<int>(std::ceil(2.0 / (1.0 - request.level))))
    throw data_error("envelope: n_sim too small for the requested level");
  const std::size_t m = grid.t.size();
  std::vector<std::vector<double>> curves(n_sim);
  for (int s = 0; s < n_sim; ++s) {
    RngStream rng(seed, static_cast<std::uint64_t>(s) + 1);
    const MarkedPattern pat = generate(null_spec, rng);
    switch (request.statistic) {
      case SecondOrderStatistic::k_uni:
        curves[s] = k_univariate(pat, request.class_i, grid).l_minus_t;
        break;
      case SecondOrderStatistic::k_biv:
        curves[s] = k_bivariate(pat, request.class_i, request.class_j, grid).l_minus_t;
        break;
      case SecondOrderStatistic::pcf:
        curves[s] = pcf(k_univariate(pat, request.class_i, grid), request.bandwidth).g_hat;
        break;
    }
  }

  Envelope env;
  env.grid = grid;
  env.level = request.level;
  env.n_sim = n_sim;
  env.lower.assign(m, kNan);
  env.upper.assign(m, kNan);
  const double alpha = 1.0 - request.level;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> vals;
    vals.reserve(n_sim);
    for (int s = 0; s < n_sim; ++s)
      if (!std::isnan(curves[s][i])) vals.push_back(curves[s][i]);
    if (vals.empty()) continue;
    std::sort(vals.begin(), vals.end());
    const long long n = static_cast<long long>(vals.size());
    const long long lo =
        std::clamp<long long>(static_cast<long long>(std::ceil(alpha / 2.0 * n)), 1, n);
    const long long hi =
        std::clamp<long long>(static_cast<long long>(std::ceil((1.0 - alpha / 2.0) * n)), 1, n);
    env.lower[i] = vals[lo - 1];
    env.upper[i] = vals[hi - 1];
  }
  return env;
}

}  // namespace nnct
