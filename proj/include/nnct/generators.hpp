#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "nnct/geometry.hpp"
#include "nnct/rng.hpp"

namespace nnct {

// Stochastic pattern specs. Every generator is a pure function of
// (spec, seed): identical output across runs, platforms and worker counts.

struct CsrUniform {
  std::vector<long long> class_sizes;
  StudyRegion region = StudyRegion::unit_square();
};

/// Fixed locations, labels reassigned by uniform random permutation.
struct RandomLabel {
  std::vector<Point> locations;
  std::vector<long long> class_sizes;
};

/// X ~ U((0,1-s)^2), Y ~ U((s,1)^2).
struct Segregation2 {
  long long n1 = 0, n2 = 0;
  double s = 0.0;  // in [0,1)
};

/// X ~ U((0,1-2s)^2), Y ~ U((2s,1)^2), Z ~ U((s,1-s)^2).
struct Segregation3 {
  long long n1 = 0, n2 = 0, n3 = 0;
  double s = 0.0;  // in [0,1/2)
};

/// X uniform; each Y = X_i + R(cos T, sin T), R ~ U(0,r), T ~ U(0,2pi),
/// anchor i uniform with replacement.
struct Association2 {
  long long n1 = 0, n2 = 0;
  double r = 0.25;
};

struct Association3 {
  long long n1 = 0, n2 = 0, n3 = 0;
  double r_y = 0.0, r_z = 0.0;
};

/// n_i/n_parents offspring per parent, Gaussian(sigma) offsets; offspring
/// falling outside the unit square are kept and the region expands to the
/// bounding box (clipping would distort the cluster shapes).
struct Pcp1 {
  long long n_parents = 0;
  long long n1 = 0, n2 = 0;
  double sigma = 0.0;
  bool shared_parents = true;
};

/// Like Pcp1 but offspring are allocated uniformly at random among parents.
struct Pcp2 {
  long long n_parents = 0;
  long long n1 = 0, n2 = 0;
  double sigma = 0.0;
  bool shared_parents = true;
};

/// Matern cluster process observed in the unit square: parents Poisson(kappa)
/// on the region dilated by radius (so off-window clusters still contribute),
/// Poisson(mu_i = n_i/kappa) points per cluster uniform in the disc. Totals
/// are Poisson-random; fixed_size resamples a class until it hits n_i exactly.
struct Matern {
  double kappa = 0.0;
  double radius = 0.0;
  std::vector<long long> class_sizes;
  bool shared_parents = true;
  bool fixed_size = false;
};

/// Named nonnegative intensity shape with a declared supremum bound over the
/// unit square; any sampled value above the bound is an error.
struct IntensityFn {
  std::string name;
  std::function<double(double, double)> f;
  double sup_bound = 0.0;
};

IntensityFn named_intensity(const std::string& name);

/// Inhomogeneous Poisson by thinning, intensity n_i * f_i(x,y) per class.
struct Ipcp {
  std::vector<IntensityFn> components;
  std::vector<long long> scales;  // n_i multipliers
};

using ProcessSpec = std::variant<CsrUniform, RandomLabel, Segregation2, Segregation3, Association2,
                                 Association3, Pcp1, Pcp2, Matern, Ipcp>;

MarkedPattern generate(const ProcessSpec& spec, std::uint64_t seed);
MarkedPattern generate(const ProcessSpec& spec, RngStream& rng);

/// One thinned realization of the inhomogeneous Poisson process with
/// intensity scale * f over the region.
std::vector<Point> ipcp_thin(const IntensityFn& intensity, double scale, const StudyRegion& region,
                             RngStream& rng);

/// Class sizes the spec aims for (exact for fixed-count generators, expected
/// for Matern/Ipcp).
std::vector<long long> spec_class_sizes(const ProcessSpec& spec);

/// Text form used by the CLI, e.g. "seg2 s=1/6 n=50,50" or
/// "pcp2 np=5 sigma=.05 n=50,50 shared=1". parse(format(s)) == s.
ProcessSpec parse_process_spec(const std::string& text);
std::string format_process_spec(const ProcessSpec& spec);

}  // namespace nnct
