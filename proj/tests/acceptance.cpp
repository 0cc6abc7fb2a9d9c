// Acceptance suite: one test case per criterion, one PASS/FAIL line each.
//
// Criterion 1 carries one sub-check that is expected to stay red: the
// published two-class overall statistic C_N = 13.11 is reproducible only with
// an unsymmetric covariance assembly (see docs/reproduction.md); the
// symmetric-covariance value is 13.0869, just outside the +-0.02 window. The
// check is implemented as stated rather than loosened.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "nnct/montecarlo.hpp"
#include "nnct/numerics.hpp"
#include "nnct/oracle.hpp"
#include "nnct/secondorder.hpp"
#include "test_helpers.hpp"

using namespace nnct;

namespace {

struct Criterion {
  int id;
  const char* what;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& note) {
    if (!cond) {
      ok = false;
      notes.push_back(note);
    }
    CHECK_MESSAGE(cond, note);
  }

  ~Criterion() {
    std::printf("[criterion %2d] %s - %s\n", id, ok ? "PASS" : "FAIL", what);
    for (const auto& n : notes) std::printf("              %s\n", n.c_str());
    std::fflush(stdout);
  }
};

std::string window_note(const char* name, double got, double want, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s = %.4f, want %.4f +- %.3f", name, got, want, tol);
  return buf;
}

Nnct pielou_table() {
  Eigen::MatrixXd counts(2, 2);
  counts << 137, 23, 38, 30;
  return Nnct::from_counts({"DF", "PP"}, counts);
}

Nnct swamp_table() {
  Eigen::MatrixXd counts(5, 5);
  counts << 112, 40, 29, 20, 14, 38, 117, 26, 16, 8, 23, 23, 82, 22, 6, 19, 29, 29, 14, 7, 7, 8,
      5, 7, 33;
  return Nnct::from_counts({"W.T.", "B.G.", "C.A.", "B.C.", "O.T."}, counts);
}

double rate_of(const RateTable& t, const char* name) { return t.row(name).rate; }

}  // namespace

TEST_CASE("criterion 1: published two-class regression") {
  Criterion c{1, "two-class regression (z, C_D, C_N, runtime)"};
  const Nnct table = pielou_table();

  run_battery(table, 162, 134);  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  const TestBattery b = run_battery(table, 162, 134);
  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  c.expect(std::abs(b.dixon_cells.z(0, 0) - 4.36) <= 0.01,
           window_note("Z_D(1,1)", b.dixon_cells.z(0, 0), 4.36, 0.01));
  c.expect(std::abs(b.dixon_cells.z(1, 1) - 2.29) <= 0.01,
           window_note("Z_D(2,2)", b.dixon_cells.z(1, 1), 2.29, 0.01));
  c.expect(std::abs(b.dixon.statistic - 19.67) <= 0.02,
           window_note("C_D", b.dixon.statistic, 19.67, 0.02));
  c.expect(std::abs(b.dixon.p - 0.0001) < 0.0002,
           window_note("p(C_D)", b.dixon.p, 0.0001, 0.0002));
  c.expect(std::abs(b.new_cells.z(0, 0) - 3.63) <= 0.01,
           window_note("Z_N(1,1)", b.new_cells.z(0, 0), 3.63, 0.01));
  c.expect(std::abs(b.new_cells.z(0, 1) + 3.61) <= 0.01,
           window_note("Z_N(1,2)", b.new_cells.z(0, 1), -3.61, 0.01));
  c.expect(std::abs(b.neww.statistic - 13.11) <= 0.02,
           window_note("C_N", b.neww.statistic, 13.11, 0.02) +
               " [known red: symmetric-covariance value, see docs/reproduction.md]");
  c.expect(std::abs(b.neww.p - 0.0003) < 0.0003,
           window_note("p(C_N)", b.neww.p, 0.0003, 0.0003));
  c.expect(ms < 1.0, "runtime " + std::to_string(ms) + " ms, want < 1 ms");
}

TEST_CASE("criterion 2: published five-class regression") {
  Criterion c{2, "five-class regression (C_D, C_N, diagonal spot cells)"};
  const TestBattery b = run_battery(swamp_table(), 472, 454);

  c.expect(std::abs(b.dixon.statistic - 275.64) <= 0.05,
           window_note("C_D", b.dixon.statistic, 275.64, 0.05));
  c.expect(std::abs(b.neww.statistic - 263.10) <= 0.05,
           window_note("C_N", b.neww.statistic, 263.10, 0.05));

  const double zd_want[4] = {6.39, 8.05, 8.08, 10.77};
  const double zn_want[4] = {7.55, 8.16, 7.96, 10.71};
  const int cells[4] = {0, 1, 2, 4};  // diagonal spot cells
  for (int k = 0; k < 4; ++k) {
    const int i = cells[k];
    c.expect(std::abs(b.dixon_cells.z(i, i) - zd_want[k]) <= 0.02,
             window_note("Z_D diag", b.dixon_cells.z(i, i), zd_want[k], 0.02));
    c.expect(std::abs(b.new_cells.z(i, i) - zn_want[k]) <= 0.02,
             window_note("Z_N diag", b.new_cells.z(i, i), zn_want[k], 0.02));
  }
}

TEST_CASE("criterion 3: analytic moments match exhaustive enumeration") {
  Criterion c{3, "oracle equivalence at 1e-12 on 50 random configurations"};
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::vector<long long>> combos{{2, 2}, {3, 3}, {2, 2, 2}, {4, 4}};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& sizes = combos[trial % combos.size()];
    long long n = 0;
    for (long long s : sizes) n += s;
    const auto pts = testing::random_points(static_cast<int>(n), 7000 + trial);
    const NnGraph g = build_nn_graph(pts);
    const ExactMoments exact = exhaustive_rl_moments(g, sizes);
    const CellMoments cm = cell_cov_matrix(sizes, g.Q, g.R);
    const TMoments tm = t_cov_matrix(sizes, cm);
    const int q = static_cast<int>(sizes.size());
    for (int a = 0; a < q * q; ++a) {
      worst = std::max(worst, std::abs(cm.expected(a / q, a % q) - exact.expected[a]));
      for (int bb = 0; bb < q * q; ++bb) {
        worst = std::max(worst, std::abs(cm.sigma_d(a, bb) - exact.covariance(a, bb)));
        worst = std::max(worst, std::abs(tm.sigma_n(a, bb) - exact.t_covariance(a, bb)));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(worst < 1e-12, "worst |analytic - exhaustive| = " + std::to_string(worst));
  c.expect(secs < 30.0, "runtime " + std::to_string(secs) + " s, want < 30 s");
}

TEST_CASE("criterion 4: empirical size at the published (50,50) row") {
  Criterion c{4, "CSR (50,50) sizes within 0.015 of the published row, n_mc = 2000"};
  const auto t0 = std::chrono::steady_clock::now();
  McConfig mc;
  mc.n_mc = 2000;
  mc.seed = 1;
  mc.workers = 8;
  const RateTable t =
      rate_experiment(CsrUniform{{50, 50}, StudyRegion::unit_square()}, mc,
                      CriticalSource::asymptotic);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::pair<const char*, double> want[6] = {{"ZD(1,1)", 0.0465}, {"ZD(2,2)", 0.0469},
                                                  {"ZN(1,1)", 0.0500}, {"ZN(2,2)", 0.0502},
                                                  {"CD", 0.0508},      {"CN", 0.0506}};
  for (const auto& [name, target] : want)
    c.expect(std::abs(rate_of(t, name) - target) <= 0.015,
             window_note(name, rate_of(t, name), target, 0.015));
  c.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s, want < 60 s");
}

TEST_CASE("criterion 5: power at the published segregation and association rows") {
  Criterion c{5, "power: strong segregation (100,100) and association (30,50)"};
  McConfig mc;
  mc.n_mc = 1000;
  mc.seed = 11;
  mc.workers = 8;

  const RateTable seg = rate_experiment(Segregation2{100, 100, 1.0 / 6.0}, mc,
                                        CriticalSource::asymptotic);
  const std::pair<const char*, double> seg_want[4] = {
      {"ZD(1,1)", 0.8761}, {"ZN(1,1)", 0.9564}, {"CD", 0.9121}, {"CN", 0.9568}};
  for (const auto& [name, target] : seg_want)
    c.expect(std::abs(rate_of(seg, name) - target) <= 0.03,
             window_note(name, rate_of(seg, name), target, 0.03));
  c.expect(rate_of(seg, "ZN(1,1)") > rate_of(seg, "ZD(1,1)"),
           "new cell power must exceed Dixon cell power under segregation");
  c.expect(rate_of(seg, "CN") > rate_of(seg, "CD"),
           "new overall power must exceed Dixon overall power under segregation");

  const RateTable assoc =
      rate_experiment(Association2{30, 50, 0.1}, mc, CriticalSource::asymptotic);
  c.expect(std::abs(rate_of(assoc, "ZN(1,1)") - 0.9052) <= 0.04,
           window_note("ZN(1,1)", rate_of(assoc, "ZN(1,1)"), 0.9052, 0.04));
  c.expect(std::abs(rate_of(assoc, "ZD(1,1)") - 0.7211) <= 0.04,
           window_note("ZD(1,1)", rate_of(assoc, "ZD(1,1)"), 0.7211, 0.04));
}

TEST_CASE("criterion 6: cluster-process rejection rates") {
  Criterion c{6, "PCP2 shared parents ~ nominal size; different parents ~ full rejection"};
  McConfig mc;
  mc.n_mc = 1000;
  mc.seed = 22;
  mc.workers = 8;

  const char* six[6] = {"ZD(1,1)", "ZD(2,2)", "ZN(1,1)", "ZN(2,2)", "CD", "CN"};
  const RateTable same =
      rate_experiment(Pcp2{5, 50, 50, 0.05, true}, mc, CriticalSource::asymptotic);
  for (const char* name : six) {
    const double r = rate_of(same, name);
    c.expect(r >= 0.035 && r <= 0.065, window_note(name, r, 0.05, 0.015));
  }
  const RateTable diff =
      rate_experiment(Pcp2{5, 50, 50, 0.05, false}, mc, CriticalSource::asymptotic);
  for (const char* name : six) {
    const double r = rate_of(diff, name);
    c.expect(r >= 0.99, std::string(name) + " = " + std::to_string(r) + ", want >= 0.99");
  }
}

TEST_CASE("criterion 7: Poisson join-count constants") {
  Criterion c{7, "mean Q/n and R/n over 1e4 CSR patterns of n = 100"};
  const int reps = 10000;
  const int threads = 8;
  std::vector<double> qsum(threads, 0.0), rsum(threads, 0.0);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w]() {
      for (int r = w; r < reps; r += threads) {
        RngStream rng(777, static_cast<std::uint64_t>(r) + 1);
        std::vector<Point> pts(100);
        for (Point& p : pts) p = {rng.uniform01(), rng.uniform01()};
        const NnGraph g = build_nn_graph(pts);
        qsum[w] += static_cast<double>(g.Q) / 100.0;
        rsum[w] += static_cast<double>(g.R) / 100.0;
      }
    });
  for (auto& t : pool) t.join();
  double qm = 0.0, rm = 0.0;
  for (int w = 0; w < threads; ++w) {
    qm += qsum[w];
    rm += rsum[w];
  }
  qm /= reps;
  rm /= reps;
  c.expect(std::abs(qm - kPoissonMeanQOverN) <= 0.005,
           window_note("mean Q/n", qm, kPoissonMeanQOverN, 0.005));
  c.expect(std::abs(rm - kPoissonMeanROverN) <= 0.005,
           window_note("mean R/n", rm, kPoissonMeanROverN, 0.005));
}

TEST_CASE("criterion 8: covariance ranks at the 1e-9 eigen tolerance") {
  Criterion c{8, "rank(Sigma_D) = q(q-1), rank(Sigma_N support) = (q-1)^2, 100 CSR configs"};
  const std::vector<std::vector<long long>> size_sets{
      {15, 25}, {10, 15, 20}, {10, 12, 15, 18, 20}};
  int trial = 0;
  bool all_ok = true;
  for (int rep = 0; rep < 100; ++rep) {
    const auto& sizes = size_sets[rep % 3];
    const int q = static_cast<int>(sizes.size());
    const MarkedPattern p = testing::random_pattern(sizes, 2500 + rep);
    const NnGraph g = build_nn_graph(p);
    const CellMoments cm = cell_cov_matrix(sizes, g.Q, g.R);
    const TMoments tm = t_cov_matrix(sizes, cm);
    const int rank_d = generalized_inverse(SymmetricMatrix(cm.sigma_d)).rank;
    const Eigen::MatrixXd proj = detail::support_projector(q);
    Eigen::MatrixXd sn = proj * tm.sigma_n * proj;
    sn = ((sn + sn.transpose()) / 2.0).eval();
    const int rank_n = generalized_inverse(SymmetricMatrix(sn)).rank;
    if (rank_d != q * (q - 1) || rank_n != (q - 1) * (q - 1)) {
      all_ok = false;
      c.expect(false, "config " + std::to_string(trial) + ": rank_D = " + std::to_string(rank_d) +
                          ", rank_N = " + std::to_string(rank_n) + " for q = " + std::to_string(q));
    }
    ++trial;
  }
  c.expect(all_ok, "every configuration must hit the theoretical ranks");
}

TEST_CASE("criterion 9: second-order properties") {
  Criterion c{9, "K oracle, exact L symmetry, CSR mean, interaction signs, analytic pcf"};

  // exact bivariate symmetry
  bool symmetric = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const MarkedPattern p = testing::random_pattern({35, 45}, seed * 13);
    const DistanceGrid grid = DistanceGrid::for_region(p.region(), 24);
    const KEstimate kij = k_bivariate(p, 0, 1, grid);
    const KEstimate kji = k_bivariate(p, 1, 0, grid);
    for (std::size_t i = 0; i < grid.t.size(); ++i)
      symmetric &= (kij.l_minus_t[i] == kji.l_minus_t[i]);
  }
  c.expect(symmetric, "L_ij must equal L_ji exactly");

  // naive oracle at 1e-12
  {
    const MarkedPattern p = testing::random_pattern({50}, 321);
    const DistanceGrid grid = DistanceGrid::for_region(p.region(), 32);
    const KEstimate k = k_univariate(p, 0, grid);
    double worst = 0.0;
    for (std::size_t gi = 0; gi < grid.t.size(); ++gi) {
      double sum = 0.0;
      for (int i = 0; i < p.n(); ++i)
        for (int j = 0; j < p.n(); ++j) {
          if (i == j) continue;
          const double d = std::hypot(p.points()[i].x - p.points()[j].x,
                                      p.points()[i].y - p.points()[j].y);
          if (d < grid.t[gi]) sum += 1.0 / edge_weight(p.points()[i], d, p.region());
        }
      worst = std::max(worst, std::abs(k.k_hat[gi] - sum / (50.0 * 50.0)));
    }
    c.expect(worst < 1e-12, "K vs naive oracle, worst diff " + std::to_string(worst));
  }

  // CSR mean of L - t within 0.01 of zero (200 simulations, n = 100)
  {
    const DistanceGrid grid = DistanceGrid::regular(0.25, 26);
    std::vector<double> mean(grid.t.size(), 0.0);
    for (int s = 0; s < 200; ++s) {
      const MarkedPattern p = generate(CsrUniform{{100}, StudyRegion::unit_square()},
                                       40000 + static_cast<std::uint64_t>(s));
      const KEstimate k = k_univariate(p, 0, grid);
      for (std::size_t i = 0; i < grid.t.size(); ++i) mean[i] += k.l_minus_t[i];
    }
    double worst = 0.0;
    for (std::size_t i = 1; i < grid.t.size(); ++i)
      worst = std::max(worst, std::abs(mean[i] / 200.0));
    c.expect(worst < 0.01, "CSR mean |L - t| peak " + std::to_string(worst));
  }

  // interaction signs at small t
  {
    const DistanceGrid grid = DistanceGrid::regular(0.1, 11);
    double assoc = 0.0, seg = 0.0;
    for (int s = 0; s < 100; ++s) {
      assoc += k_bivariate(generate(Association2{30, 30, 0.1},
                                    50000 + static_cast<std::uint64_t>(s)),
                           0, 1, grid)
                   .l_minus_t.back();
      seg += k_bivariate(generate(Segregation2{30, 30, 1.0 / 3.0},
                                  60000 + static_cast<std::uint64_t>(s)),
                         0, 1, grid)
                 .l_minus_t.back();
    }
    c.expect(assoc / 100.0 > 0.0, "association mean L - t must be positive at small t");
    c.expect(seg / 100.0 < 0.0, "segregation mean L - t must be negative at small t");
  }

  // analytic pcf
  {
    const DistanceGrid grid = DistanceGrid::regular(0.25, 64);
    KEstimate k;
    k.grid = grid;
    k.k_hat.resize(grid.t.size());
    k.l_minus_t.assign(grid.t.size(), 0.0);
    for (std::size_t i = 0; i < grid.t.size(); ++i) k.k_hat[i] = M_PI * grid.t[i] * grid.t[i];
    const PcfEstimate g = pcf(k, 0.02);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.t.size(); ++i)
      if (!std::isnan(g.g_hat[i])) worst = std::max(worst, std::abs(g.g_hat[i] - 1.0));
    c.expect(worst < 1e-6, "pcf of pi t^2 deviates from 1 by " + std::to_string(worst));
  }
}

TEST_CASE("criterion 10: worker-count invariance of experiment reports") {
  Criterion c{10, "byte-identical experiment output for 1, 4 and 8 workers"};
  const ProcessSpec spec = Segregation2{30, 30, 0.25};
  std::string first;
  for (int workers : {1, 4, 8}) {
    McConfig mc;
    mc.n_mc = 500;
    mc.seed = 9;
    mc.workers = workers;
    const std::string csv = rate_table_csv(rate_experiment(spec, mc, CriticalSource::asymptotic));
    if (first.empty())
      first = csv;
    else
      c.expect(csv == first, "workers=" + std::to_string(workers) + " output differs");
  }
  c.expect(!first.empty(), "experiment must produce output");

  // the Monte Carlo test reports follow the same contract
  const MarkedPattern p = testing::random_pattern({25, 30}, 123);
  McConfig mc;
  mc.n_mc = 299;
  mc.seed = 5;
  mc.null_model = NullModel::rl_permutation;
  mc.workers = 1;
  const McTestReport r1 = randomization_test(p, mc);
  mc.workers = 8;
  const McTestReport r8 = randomization_test(p, mc);
  c.expect(r1.p_mc == r8.p_mc && r1.critical_values == r8.critical_values,
           "randomization report must not depend on the worker count");
}
