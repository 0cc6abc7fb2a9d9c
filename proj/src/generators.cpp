#include "nnct/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nnct {

namespace {

std::vector<std::string> default_class_names(int q) {
  if (q <= 3) {
    static const std::vector<std::string> xyz{"X", "Y", "Z"};
    return {xyz.begin(), xyz.begin() + q};
  }
  std::vector<std::string> names;
  for (int i = 1; i <= q; ++i) names.push_back("C" + std::to_string(i));
  return names;
}

std::vector<int> block_labels(const std::vector<long long>& sizes) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    labels.insert(labels.end(), static_cast<std::size_t>(sizes[c]), static_cast<int>(c));
  return labels;
}

void append_uniform(std::vector<Point>& pts, long long count, double x0, double x1, double y0,
                    double y1, RngStream& rng) {
  for (long long i = 0; i < count; ++i) pts.push_back({rng.uniform(x0, x1), rng.uniform(y0, y1)});
}

MarkedPattern finish(std::vector<Point> pts, const std::vector<long long>& sizes,
                     StudyRegion region) {
  return MarkedPattern(std::move(pts), block_labels(sizes), default_class_names(sizes.size()),
                       region);
}

MarkedPattern finish_bbox(std::vector<Point> pts, const std::vector<long long>& sizes) {
  // some constructions can leave the unit square; the effective region is the
  // bounding box, widened to the unit square when the points sit inside it
  StudyRegion r = StudyRegion::bounding_box(pts);
  r.xmin = std::min(r.xmin, 0.0);
  r.ymin = std::min(r.ymin, 0.0);
  r.xmax = std::max(r.xmax, 1.0);
  r.ymax = std::max(r.ymax, 1.0);
  return finish(std::move(pts), sizes, r);
}

void require(bool ok, const char* msg) {
  if (!ok) throw data_error(msg);
}

struct Generator {
  RngStream& rng;

  MarkedPattern operator()(const CsrUniform& s) {
    require(!s.class_sizes.empty(), "csr: class sizes required");
    s.region.validate();
    std::vector<Point> pts;
    for (long long c : s.class_sizes) {
      require(c >= 1, "csr: class sizes must be >= 1");
      append_uniform(pts, c, s.region.xmin, s.region.xmax, s.region.ymin, s.region.ymax, rng);
    }
    return finish(std::move(pts), s.class_sizes, s.region);
  }

  MarkedPattern operator()(const RandomLabel& s) {
    long long n = std::accumulate(s.class_sizes.begin(), s.class_sizes.end(), 0LL);
    require(n == static_cast<long long>(s.locations.size()),
            "rl: class sizes must sum to the number of locations");
    std::vector<int> labels = block_labels(s.class_sizes);
    rng.shuffle(std::span<int>(labels));
    return MarkedPattern(s.locations, std::move(labels),
                         default_class_names(static_cast<int>(s.class_sizes.size())),
                         StudyRegion::bounding_box(s.locations));
  }

  MarkedPattern operator()(const Segregation2& s) {
    require(s.s >= 0.0 && s.s < 1.0, "seg2: s must be in [0,1)");
    std::vector<Point> pts;
    append_uniform(pts, s.n1, 0.0, 1.0 - s.s, 0.0, 1.0 - s.s, rng);
    append_uniform(pts, s.n2, s.s, 1.0, s.s, 1.0, rng);
    return finish(std::move(pts), {s.n1, s.n2}, StudyRegion::unit_square());
  }

  MarkedPattern operator()(const Segregation3& s) {
    require(s.s >= 0.0 && s.s < 0.5, "seg3: s must be in [0,1/2)");
    std::vector<Point> pts;
    append_uniform(pts, s.n1, 0.0, 1.0 - 2 * s.s, 0.0, 1.0 - 2 * s.s, rng);
    append_uniform(pts, s.n2, 2 * s.s, 1.0, 2 * s.s, 1.0, rng);
    append_uniform(pts, s.n3, s.s, 1.0 - s.s, s.s, 1.0 - s.s, rng);
    return finish(std::move(pts), {s.n1, s.n2, s.n3}, StudyRegion::unit_square());
  }

  std::vector<Point> satellites(const std::vector<Point>& anchors, long long count, double radius) {
    std::vector<Point> pts;
    for (long long j = 0; j < count; ++j) {
      const Point& a = anchors[rng.uniform_int(anchors.size())];
      const double r = rng.uniform(0.0, radius);
      const double t = rng.uniform(0.0, 2.0 * M_PI);
      pts.push_back({a.x + r * std::cos(t), a.y + r * std::sin(t)});
    }
    return pts;
  }

  MarkedPattern operator()(const Association2& s) {
    require(s.r > 0.0 && s.r < 1.0, "assoc2: r must be in (0,1)");
    std::vector<Point> x;
    append_uniform(x, s.n1, 0.0, 1.0, 0.0, 1.0, rng);
    std::vector<Point> pts = x;
    auto y = satellites(x, s.n2, s.r);
    pts.insert(pts.end(), y.begin(), y.end());
    return finish_bbox(std::move(pts), {s.n1, s.n2});
  }

  MarkedPattern operator()(const Association3& s) {
    require(s.r_y > 0.0 && s.r_y < 1.0 && s.r_z > 0.0 && s.r_z < 1.0,
            "assoc3: radii must be in (0,1)");
    std::vector<Point> x;
    append_uniform(x, s.n1, 0.0, 1.0, 0.0, 1.0, rng);
    std::vector<Point> pts = x;
    auto y = satellites(x, s.n2, s.r_y);
    auto z = satellites(x, s.n3, s.r_z);
    pts.insert(pts.end(), y.begin(), y.end());
    pts.insert(pts.end(), z.begin(), z.end());
    return finish_bbox(std::move(pts), {s.n1, s.n2, s.n3});
  }

  std::vector<Point> gaussian_offspring(const std::vector<Point>& parents,
                                        const std::vector<int>& parent_of, double sigma) {
    std::vector<Point> pts;
    pts.reserve(parent_of.size());
    for (int pi : parent_of) {
      pts.push_back({parents[pi].x + rng.normal(0.0, sigma), parents[pi].y + rng.normal(0.0, sigma)});
    }
    return pts;
  }

  std::vector<Point> parents_on_unit_square(long long np) {
    std::vector<Point> par;
    append_uniform(par, np, 0.0, 1.0, 0.0, 1.0, rng);
    return par;
  }

  template <typename P>
  MarkedPattern poisson_cluster(const P& s, bool even_allocation) {
    require(s.n_parents >= 1, "pcp: n_parents must be >= 1");
    require(s.sigma > 0.0, "pcp: sigma must be > 0");
    require(s.n1 % s.n_parents == 0 && s.n2 % s.n_parents == 0,
            "pcp: class sizes must be divisible by n_parents");
    auto par1 = parents_on_unit_square(s.n_parents);
    auto par2 = s.shared_parents ? par1 : parents_on_unit_square(s.n_parents);
    auto allocate = [&](long long count) {
      std::vector<int> owner(count);
      if (even_allocation) {
        const long long per = count / s.n_parents;
        for (long long i = 0; i < count; ++i) owner[i] = static_cast<int>(i / per);
      } else {
        for (auto& o : owner) o = static_cast<int>(rng.uniform_int(s.n_parents));
      }
      return owner;
    };
    std::vector<Point> pts = gaussian_offspring(par1, allocate(s.n1), s.sigma);
    auto y = gaussian_offspring(par2, allocate(s.n2), s.sigma);
    pts.insert(pts.end(), y.begin(), y.end());
    return finish_bbox(std::move(pts), {s.n1, s.n2});
  }

  MarkedPattern operator()(const Pcp1& s) { return poisson_cluster(s, true); }
  MarkedPattern operator()(const Pcp2& s) { return poisson_cluster(s, false); }

  std::vector<Point> matern_class(const std::vector<Point>& parents, double mu, double radius,
                                  const StudyRegion& window) {
    std::vector<Point> pts;
    for (const Point& par : parents) {
      const long long k = rng.poisson(mu);
      for (long long i = 0; i < k; ++i) {
        // uniform in the disc: sqrt-radius transform
        const double r = radius * std::sqrt(rng.uniform01());
        const double t = rng.uniform(0.0, 2.0 * M_PI);
        const Point p{par.x + r * std::cos(t), par.y + r * std::sin(t)};
        if (window.contains(p)) pts.push_back(p);
      }
    }
    return pts;
  }

  std::vector<Point> matern_parents(double kappa, double radius, const StudyRegion& window) {
    // parents live on the window dilated by the cluster radius: the minimal
    // domain whose clusters can reach the window
    StudyRegion dil{window.xmin - radius, window.xmax + radius, window.ymin - radius,
                    window.ymax + radius};
    auto reaches_window = [&](const Point& p) {
      const double dx = std::max({window.xmin - p.x, p.x - window.xmax, 0.0});
      const double dy = std::max({window.ymin - p.y, p.y - window.ymax, 0.0});
      return dx * dx + dy * dy < radius * radius;
    };
    // a parent set whose discs all miss the window could never yield a point;
    // redraw (probability ~ exp(-kappa area), but it would hang the retries)
    for (;;) {
      const long long np = rng.poisson(kappa * dil.area());
      std::vector<Point> par;
      append_uniform(par, np, dil.xmin, dil.xmax, dil.ymin, dil.ymax, rng);
      for (const Point& p : par)
        if (reaches_window(p)) return par;
    }
  }

  MarkedPattern operator()(const Matern& s) {
    require(s.kappa > 0.0, "matern: kappa must be > 0");
    require(s.radius > 0.0, "matern: radius must be > 0");
    require(!s.class_sizes.empty(), "matern: class sizes required");
    const StudyRegion window = StudyRegion::unit_square();
    std::vector<Point> pts;
    std::vector<long long> realized;
    std::vector<Point> shared;
    if (s.shared_parents) shared = matern_parents(s.kappa, s.radius, window);
    for (long long target : s.class_sizes) {
      require(target >= 1, "matern: class sizes must be >= 1");
      const double mu = static_cast<double>(target) / s.kappa;
      for (;;) {
        const auto& parents =
            s.shared_parents ? shared : (shared = matern_parents(s.kappa, s.radius, window));
        auto cls = matern_class(parents, mu, s.radius, window);
        if (!s.fixed_size && cls.size() >= 1) {
          realized.push_back(static_cast<long long>(cls.size()));
          pts.insert(pts.end(), cls.begin(), cls.end());
          break;
        }
        if (s.fixed_size && static_cast<long long>(cls.size()) == target) {
          realized.push_back(target);
          pts.insert(pts.end(), cls.begin(), cls.end());
          break;
        }
      }
    }
    return finish(std::move(pts), realized, window);
  }

  MarkedPattern operator()(const Ipcp& s) {
    require(!s.components.empty() && s.components.size() == s.scales.size(),
            "ipcp: one intensity per class required");
    const StudyRegion window = StudyRegion::unit_square();
    std::vector<Point> pts;
    std::vector<long long> realized;
    for (std::size_t c = 0; c < s.components.size(); ++c) {
      for (;;) {
        auto cls = ipcp_thin(s.components[c], static_cast<double>(s.scales[c]), window, rng);
        if (!cls.empty()) {
          realized.push_back(static_cast<long long>(cls.size()));
          pts.insert(pts.end(), cls.begin(), cls.end());
          break;
        }
      }
    }
    return finish(std::move(pts), realized, window);
  }
};

}  // namespace

std::vector<Point> ipcp_thin(const IntensityFn& intensity, double scale, const StudyRegion& region,
                             RngStream& rng) {
  if (!(intensity.sup_bound > 0.0)) throw data_error("ipcp_thin: supremum bound must be positive");
  const double lmax = scale * intensity.sup_bound;
  const long long total = rng.poisson(lmax * region.area());
  std::vector<Point> out;
  for (long long i = 0; i < total; ++i) {
    const Point p{rng.uniform(region.xmin, region.xmax), rng.uniform(region.ymin, region.ymax)};
    const double f = intensity.f(p.x, p.y);
    if (f < 0.0) throw data_error("ipcp_thin: negative intensity value");
    if (f > intensity.sup_bound * (1.0 + 1e-12))
      throw data_error("ipcp_thin: intensity exceeds its declared supremum bound");
    if (rng.uniform01() < f / intensity.sup_bound) out.push_back(p);
  }
  return out;
}

MarkedPattern generate(const ProcessSpec& spec, RngStream& rng) {
  return std::visit(Generator{rng}, spec);
}

MarkedPattern generate(const ProcessSpec& spec, std::uint64_t seed) {
  RngStream rng(seed, 0);
  return generate(spec, rng);
}

std::vector<long long> spec_class_sizes(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::vector<long long> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CsrUniform> || std::is_same_v<T, Matern>)
          return s.class_sizes;
        else if constexpr (std::is_same_v<T, RandomLabel>)
          return s.class_sizes;
        else if constexpr (std::is_same_v<T, Segregation2> || std::is_same_v<T, Association2> ||
                           std::is_same_v<T, Pcp1> || std::is_same_v<T, Pcp2>)
          return {s.n1, s.n2};
        else if constexpr (std::is_same_v<T, Segregation3>)
          return {s.n1, s.n2, s.n3};
        else if constexpr (std::is_same_v<T, Association3>)
          return {s.n1, s.n2, s.n3};
        else
          return s.scales;
      },
      spec);
}

IntensityFn named_intensity(const std::string& name) {
  if (name == "sqrt_sum")
    return {name, [](double x, double y) { return std::sqrt(x + y); }, std::sqrt(2.0)};
  if (name == "sqrt_prod")
    return {name, [](double x, double y) { return std::sqrt(x * y); }, 1.0};
  if (name == "absdiff")
    return {name, [](double x, double y) { return std::abs(x - y); }, 1.0};
  if (name == "const")
    return {name, [](double, double) { return 1.0; }, 1.0};
  throw data_error("unknown intensity name: " + name +
                   " (known: sqrt_sum, sqrt_prod, absdiff, const)");
}

// ---- text grammar ----------------------------------------------------------

namespace {

double parse_real(const std::string& tok) {
  // accepts plain reals and simple fractions like 1/6
  const auto slash = tok.find('/');
  try {
    if (slash != std::string::npos)
      return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
    return std::stod(tok);
  } catch (const std::exception&) {
    throw data_error("process spec: cannot parse number '" + tok + "'");
  }
}

std::vector<long long> parse_sizes(const std::string& tok) {
  std::vector<long long> out;
  std::stringstream ss(tok);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::exception&) {
      throw data_error("process spec: cannot parse count '" + part + "'");
    }
  }
  if (out.empty()) throw data_error("process spec: empty size list");
  return out;
}

}  // namespace

ProcessSpec parse_process_spec(const std::string& text) {
  std::stringstream ss(text);
  std::string kind;
  ss >> kind;
  std::vector<std::pair<std::string, std::string>> kvs;
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw data_error("process spec: expected key=value, got '" + tok + "'");
    kvs.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  auto find = [&](const std::string& key) -> const std::string* {
    for (const auto& [k, v] : kvs)
      if (k == key) return &v;
    return nullptr;
  };
  auto need = [&](const std::string& key) -> const std::string& {
    const std::string* v = find(key);
    if (!v) throw data_error("process spec: missing '" + key + "=' in '" + text + "'");
    return *v;
  };
  auto sizes2 = [&](long long& a, long long& b) {
    auto v = parse_sizes(need("n"));
    if (v.size() != 2) throw data_error("process spec: expected n=n1,n2");
    a = v[0];
    b = v[1];
  };
  auto sizes3 = [&](long long& a, long long& b, long long& c) {
    auto v = parse_sizes(need("n"));
    if (v.size() != 3) throw data_error("process spec: expected n=n1,n2,n3");
    a = v[0];
    b = v[1];
    c = v[2];
  };
  auto flag = [&](const std::string& key, bool dflt) {
    const std::string* v = find(key);
    if (!v) return dflt;
    return *v == "1" || *v == "true" || *v == "yes";
  };

  if (kind == "csr") {
    CsrUniform s;
    s.class_sizes = parse_sizes(need("n"));
    if (const std::string* r = find("region")) {
      std::stringstream rs(*r);
      std::string part;
      std::vector<double> vals;
      while (std::getline(rs, part, ',')) vals.push_back(parse_real(part));
      if (vals.size() != 4) throw data_error("process spec: region=xmin,xmax,ymin,ymax");
      s.region = {vals[0], vals[1], vals[2], vals[3]};
    }
    return s;
  }
  if (kind == "rl") {
    // locations are not expressible in text; the caller (CLI) fills them in
    // from a pattern file before generating
    RandomLabel s;
    s.class_sizes = parse_sizes(need("n"));
    return s;
  }
  if (kind == "seg2") {
    Segregation2 s;
    s.s = parse_real(need("s"));
    sizes2(s.n1, s.n2);
    return s;
  }
  if (kind == "seg3") {
    Segregation3 s;
    s.s = parse_real(need("s"));
    sizes3(s.n1, s.n2, s.n3);
    return s;
  }
  if (kind == "assoc2") {
    Association2 s;
    s.r = parse_real(need("r"));
    sizes2(s.n1, s.n2);
    return s;
  }
  if (kind == "assoc3") {
    Association3 s;
    s.r_y = parse_real(need("ry"));
    s.r_z = parse_real(need("rz"));
    sizes3(s.n1, s.n2, s.n3);
    return s;
  }
  if (kind == "pcp1" || kind == "pcp2") {
    long long np = std::llround(parse_real(need("np")));
    double sigma = parse_real(need("sigma"));
    long long n1, n2;
    sizes2(n1, n2);
    const bool shared = flag("shared", true);
    if (kind == "pcp1") return Pcp1{np, n1, n2, sigma, shared};
    return Pcp2{np, n1, n2, sigma, shared};
  }
  if (kind == "matern") {
    Matern s;
    s.kappa = parse_real(need("kappa"));
    s.radius = parse_real(need("r"));
    s.class_sizes = parse_sizes(need("n"));
    s.shared_parents = flag("shared", true);
    s.fixed_size = flag("fixed", false);
    return s;
  }
  if (kind == "ipcp") {
    Ipcp s;
    std::stringstream fs(need("f"));
    std::string part;
    while (std::getline(fs, part, ',')) s.components.push_back(named_intensity(part));
    s.scales = parse_sizes(need("n"));
    if (s.components.size() != s.scales.size())
      throw data_error("process spec: ipcp needs one intensity per class size");
    return s;
  }
  throw data_error("process spec: unknown kind '" + kind + "'");
}

namespace {

std::string fmt_real(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string fmt_sizes(const std::vector<long long>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string format_process_spec(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CsrUniform>) {
          std::string out = "csr n=" + fmt_sizes(s.class_sizes);
          const StudyRegion u = StudyRegion::unit_square();
          if (s.region.xmin != u.xmin || s.region.xmax != u.xmax || s.region.ymin != u.ymin ||
              s.region.ymax != u.ymax)
            out += " region=" + fmt_real(s.region.xmin) + "," + fmt_real(s.region.xmax) + "," +
                   fmt_real(s.region.ymin) + "," + fmt_real(s.region.ymax);
          return out;
        } else if constexpr (std::is_same_v<T, RandomLabel>) {
          return "rl n=" + fmt_sizes(s.class_sizes);
        } else if constexpr (std::is_same_v<T, Segregation2>) {
          return "seg2 s=" + fmt_real(s.s) + " n=" + std::to_string(s.n1) + "," +
                 std::to_string(s.n2);
        } else if constexpr (std::is_same_v<T, Segregation3>) {
          return "seg3 s=" + fmt_real(s.s) + " n=" + std::to_string(s.n1) + "," +
                 std::to_string(s.n2) + "," + std::to_string(s.n3);
        } else if constexpr (std::is_same_v<T, Association2>) {
          return "assoc2 r=" + fmt_real(s.r) + " n=" + std::to_string(s.n1) + "," +
                 std::to_string(s.n2);
        } else if constexpr (std::is_same_v<T, Association3>) {
          return "assoc3 ry=" + fmt_real(s.r_y) + " rz=" + fmt_real(s.r_z) + " n=" +
                 std::to_string(s.n1) + "," + std::to_string(s.n2) + "," + std::to_string(s.n3);
        } else if constexpr (std::is_same_v<T, Pcp1> || std::is_same_v<T, Pcp2>) {
          const char* kind = std::is_same_v<T, Pcp1> ? "pcp1" : "pcp2";
          return std::string(kind) + " np=" + std::to_string(s.n_parents) + " sigma=" +
                 fmt_real(s.sigma) + " n=" + std::to_string(s.n1) + "," + std::to_string(s.n2) +
                 " shared=" + (s.shared_parents ? "1" : "0");
        } else if constexpr (std::is_same_v<T, Matern>) {
          std::string out = "matern kappa=" + fmt_real(s.kappa) + " r=" + fmt_real(s.radius) +
                            " n=" + fmt_sizes(s.class_sizes) + " shared=" +
                            (s.shared_parents ? "1" : "0");
          if (s.fixed_size) out += " fixed=1";
          return out;
        } else {
          std::string out = "ipcp f=";
          for (std::size_t i = 0; i < s.components.size(); ++i) {
            if (i) out += ',';
            out += s.components[i].name;
          }
          out += " n=" + fmt_sizes(s.scales);
          return out;
        }
      },
      spec);
}

}  // namespace nnct
