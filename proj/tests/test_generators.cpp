#include <doctest.h>

#include <cmath>

#include "nnct/generators.hpp"
#include "nnct/table.hpp"

using namespace nnct;

namespace {

bool patterns_identical(const MarkedPattern& a, const MarkedPattern& b) {
  if (a.n() != b.n() || a.labels() != b.labels() || a.classes() != b.classes()) return false;
  for (int i = 0; i < a.n(); ++i)
    if (a.points()[i].x != b.points()[i].x || a.points()[i].y != b.points()[i].y) return false;
  return true;
}

}  // namespace

TEST_CASE("generation is bit-deterministic in (spec, seed)") {
  const std::vector<ProcessSpec> specs{
      CsrUniform{{20, 30}, StudyRegion::unit_square()},
      Segregation2{15, 15, 1.0 / 6.0},
      Association2{10, 20, 0.25},
      Pcp2{5, 20, 20, 0.05, true},
      Matern{5.0, 0.1, {30, 30}, true, false},
  };
  for (const auto& spec : specs) {
    const MarkedPattern a = generate(spec, 99);
    const MarkedPattern b = generate(spec, 99);
    CHECK(patterns_identical(a, b));
    const MarkedPattern c = generate(spec, 100);
    CHECK_FALSE(patterns_identical(a, c));
  }
}

TEST_CASE("fixed-count generators return exactly the requested sizes") {
  CHECK(generate(CsrUniform{{11, 22, 33}, StudyRegion::unit_square()}, 1).class_sizes() ==
        std::vector<long long>{11, 22, 33});
  CHECK(generate(Segregation2{40, 25, 0.25}, 2).class_sizes() == std::vector<long long>{40, 25});
  CHECK(generate(Association3{10, 20, 30, 0.2, 0.1}, 3).class_sizes() ==
        std::vector<long long>{10, 20, 30});
}

TEST_CASE("segregation supports: X below 1-s, Y above s") {
  const double s = 1.0 / 6.0;
  const MarkedPattern p = generate(Segregation2{50, 50, s}, 7);
  for (int i = 0; i < p.n(); ++i) {
    const Point& pt = p.points()[i];
    if (p.labels()[i] == 0) {
      CHECK(pt.x < 1.0 - s);
      CHECK(pt.y < 1.0 - s);
    } else {
      CHECK(pt.x > s);
      CHECK(pt.y > s);
    }
  }
}

TEST_CASE("three-class segregation nests its three squares") {
  const double s = 1.0 / 8.0;
  const MarkedPattern p = generate(Segregation3{30, 30, 30, s}, 11);
  for (int i = 0; i < p.n(); ++i) {
    const Point& pt = p.points()[i];
    switch (p.labels()[i]) {
      case 0:
        CHECK(pt.x < 1.0 - 2 * s);
        CHECK(pt.y < 1.0 - 2 * s);
        break;
      case 1:
        CHECK(pt.x > 2 * s);
        CHECK(pt.y > 2 * s);
        break;
      default:
        CHECK(pt.x > s);
        CHECK(pt.x < 1.0 - s);
        CHECK(pt.y > s);
        CHECK(pt.y < 1.0 - s);
    }
  }
}

TEST_CASE("association: every satellite is within r of an anchor") {
  const double r = 0.25;
  const MarkedPattern p = generate(Association2{20, 60, r}, 13);
  std::vector<Point> anchors;
  for (int i = 0; i < p.n(); ++i)
    if (p.labels()[i] == 0) anchors.push_back(p.points()[i]);
  for (int i = 0; i < p.n(); ++i) {
    if (p.labels()[i] != 1) continue;
    double best = 1e9;
    for (const Point& a : anchors)
      best = std::min(best, std::hypot(a.x - p.points()[i].x, a.y - p.points()[i].y));
    CHECK(best <= r + 1e-12);
  }
}

TEST_CASE("three-class association: satellites stay within their radii") {
  const double ry = 0.2, rz = 0.05;
  const MarkedPattern p = generate(Association3{15, 30, 30, ry, rz}, 19);
  std::vector<Point> anchors;
  for (int i = 0; i < p.n(); ++i)
    if (p.labels()[i] == 0) anchors.push_back(p.points()[i]);
  auto nearest_anchor = [&](const Point& pt) {
    double best = 1e9;
    for (const Point& a : anchors) best = std::min(best, std::hypot(a.x - pt.x, a.y - pt.y));
    return best;
  };
  for (int i = 0; i < p.n(); ++i) {
    if (p.labels()[i] == 1) CHECK(nearest_anchor(p.points()[i]) <= ry + 1e-12);
    if (p.labels()[i] == 2) CHECK(nearest_anchor(p.points()[i]) <= rz + 1e-12);
  }
}

TEST_CASE("segregation with s = 0 degenerates to CSR supports") {
  const MarkedPattern p = generate(Segregation2{30, 30, 0.0}, 17);
  for (const Point& pt : p.points()) {
    CHECK(pt.x >= 0.0);
    CHECK(pt.x <= 1.0);
    CHECK(pt.y >= 0.0);
    CHECK(pt.y <= 1.0);
  }
}

TEST_CASE("random labeling keeps locations fixed and sizes exact") {
  std::vector<Point> locs;
  RngStream rng(5);
  for (int i = 0; i < 40; ++i) locs.push_back({rng.uniform01(), rng.uniform01()});
  const MarkedPattern p = generate(RandomLabel{locs, {10, 30}}, 3);
  CHECK(p.class_sizes() == std::vector<long long>{10, 30});
  for (int i = 0; i < 40; ++i) {
    CHECK(p.points()[i].x == locs[i].x);
    CHECK(p.points()[i].y == locs[i].y);
  }
  // label sets differ across seeds, locations never do
  const MarkedPattern p2 = generate(RandomLabel{locs, {10, 30}}, 4);
  CHECK(p.labels() != p2.labels());
}

TEST_CASE("pcp rejects sizes not divisible by the parent count") {
  CHECK_THROWS_AS(generate(Pcp1{7, 30, 30, 0.05, true}, 1), data_error);
  CHECK_THROWS_AS(generate(Pcp2{7, 30, 30, 0.05, true}, 1), data_error);
}

TEST_CASE("pcp region expands to cover strays") {
  const MarkedPattern p = generate(Pcp1{5, 50, 50, 0.2, false}, 23);
  for (const Point& pt : p.points()) CHECK(p.region().contains(pt));
}

TEST_CASE("matern totals are Poisson-random unless fixed_size") {
  bool varied = false;
  long long first = -1;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const MarkedPattern p = generate(Matern{5.0, 0.1, {40, 40}, true, false}, seed);
    const long long total = p.n();
    if (first < 0)
      first = total;
    else
      varied |= (total != first);
  }
  CHECK(varied);
  const MarkedPattern fixed = generate(Matern{5.0, 0.1, {40, 40}, true, true}, 9);
  CHECK(fixed.class_sizes() == std::vector<long long>{40, 40});
}

TEST_CASE("ipcp with constant intensity keeps every generated point") {
  RngStream rng(31);
  const IntensityFn f = named_intensity("const");
  const auto pts = ipcp_thin(f, 200.0, StudyRegion::unit_square(), rng);
  // retention probability is exactly 1, so the count is the raw Poisson draw;
  // the draw itself is deterministic given the stream
  RngStream rng2(31);
  const long long expected = rng2.poisson(200.0);
  CHECK(static_cast<long long>(pts.size()) == expected);
}

TEST_CASE("ipcp rejects intensities that exceed their declared bound") {
  RngStream rng(33);
  IntensityFn bad{"lying", [](double x, double y) { return std::sqrt(x + y); }, 0.5};
  CHECK_THROWS_AS(ipcp_thin(bad, 100.0, StudyRegion::unit_square(), rng), data_error);
}

TEST_CASE("ipcp absdiff density vanishes near the diagonal") {
  // histogram of |x-y| samples against the normalized target, L1 < 0.05
  RngStream rng(35);
  const IntensityFn f = named_intensity("absdiff");
  std::vector<Point> all;
  while (all.size() < 100000) {
    auto pts = ipcp_thin(f, 2000.0, StudyRegion::unit_square(), rng);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  const int bins = 10;
  std::vector<double> hist(bins, 0.0), target(bins, 0.0);
  const int grid = 400;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double x = (i + 0.5) / grid, y = (j + 0.5) / grid;
      target[static_cast<int>(std::abs(x - y) * bins * 0.999)] += std::abs(x - y);
    }
  double tsum = 0.0;
  for (double t : target) tsum += t;
  for (const Point& p : all) ++hist[static_cast<int>(std::abs(p.x - p.y) * bins * 0.999)];
  double l1 = 0.0;
  for (int b = 0; b < bins; ++b) l1 += std::abs(hist[b] / all.size() - target[b] / tsum);
  CHECK(l1 < 0.05);
  CHECK(hist[0] / all.size() < 0.04);  // mass near the diagonal nearly vanishes
}

TEST_CASE("csr coordinates pass a coarse uniformity smoke test") {
  // 4x4 grid chi-square at alpha = .01 over 100 seeds; expect ~1 failure
  const double crit = 30.5779;  // chi2 quantile .99, df 15
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const MarkedPattern p = generate(CsrUniform{{80, 80}, StudyRegion::unit_square()}, seed);
    double counts[16] = {0};
    for (const Point& pt : p.points()) {
      const int gx = std::min(3, static_cast<int>(pt.x * 4.0));
      const int gy = std::min(3, static_cast<int>(pt.y * 4.0));
      counts[gx * 4 + gy] += 1.0;
    }
    const double expect = 160.0 / 16.0;
    double stat = 0.0;
    for (double c : counts) stat += (c - expect) * (c - expect) / expect;
    if (stat > crit) ++failures;
  }
  CHECK(failures <= 8);
}

TEST_CASE("process spec text grammar round-trips") {
  const std::vector<std::string> texts{
      "csr n=50,50",
      "csr n=10,20,30 region=0,2,0,3",
      "seg2 s=0.25 n=50,50",
      "seg3 s=0.125 n=10,20,30",
      "assoc2 r=0.1 n=30,50",
      "assoc3 ry=0.1 rz=0.05 n=10,20,30",
      "pcp1 np=5 sigma=0.05 n=50,50 shared=1",
      "pcp2 np=5 sigma=0.1 n=30,50 shared=0",
      "matern kappa=5 r=0.1 n=50,50 shared=1",
      "ipcp f=sqrt_sum,absdiff n=50,100",
  };
  for (const auto& t : texts) CHECK(format_process_spec(parse_process_spec(t)) == t);
}

TEST_CASE("fractions are accepted in spec parameters") {
  const ProcessSpec s = parse_process_spec("seg2 s=1/6 n=50,50");
  CHECK(std::get<Segregation2>(s).s == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("spec parse errors are informative") {
  CHECK_THROWS_AS(parse_process_spec("seg2 n=50,50"), data_error);         // missing s
  CHECK_THROWS_AS(parse_process_spec("warp n=1,2"), data_error);           // unknown kind
  CHECK_THROWS_AS(parse_process_spec("seg2 s=x n=50,50"), data_error);     // bad number
  CHECK_THROWS_AS(parse_process_spec("ipcp f=warp n=50"), data_error);     // unknown intensity
}
