#include "nnct/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "nnct/numerics.hpp"

namespace nnct {

namespace {

std::string cell_name(const char* prefix, int i, int j) {
  std::ostringstream os;
  os << prefix << "(" << (i + 1) << "," << (j + 1) << ")";
  return os.str();
}

// flattened statistic vector of a battery: q^2 Dixon cells, q^2 new cells,
// then CD, CN; NaN for undefined cells
std::vector<double> battery_statistics(const TestBattery& b) {
  const int q = b.table.q();
  std::vector<double> v;
  v.reserve(2 * q * q + 2);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) v.push_back(b.dixon_cells.z(i, j));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) v.push_back(b.new_cells.z(i, j));
  v.push_back(b.dixon.statistic);
  v.push_back(b.neww.statistic);
  return v;
}

// Runs body(replication, worker, rng) for every replication. Each replication
// owns the stream (seed, replication + 1), so results cannot depend on the
// worker count or on scheduling.
void run_replications(long long n_mc, int workers,
                      const std::function<void(long long, int, RngStream&)>& body,
                      std::uint64_t seed) {
  workers = std::max(1, workers);
  if (workers == 1) {
    for (long long r = 0; r < n_mc; ++r) {
      RngStream rng(seed, static_cast<std::uint64_t>(r) + 1);
      body(r, 0, rng);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const long long lo = n_mc * w / workers;
    const long long hi = n_mc * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi]() {
      for (long long r = lo; r < hi; ++r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r) + 1);
        body(r, w, rng);
      }
    });
  }
  for (auto& t : pool) t.join();
}

McTestReport mc_engine(const MarkedPattern& pattern, const McConfig& config, NullModel model) {
  if (config.n_mc < 1) throw data_error("monte carlo: n_mc must be >= 1");
  const int q = pattern.q();
  const auto names = statistic_names(q);
  const int nstat = static_cast<int>(names.size());

  const NnGraph graph = build_nn_graph(pattern);
  const TestBattery observed = run_battery(pattern, graph);
  const std::vector<double> obs = battery_statistics(observed);

  StudyRegion region = config.region.value_or(pattern.region());
  region.validate();
  const auto sizes = pattern.class_sizes();
  const auto classes = pattern.classes();

  // replication-indexed storage keeps aggregation independent of worker count
  std::vector<double> stats(static_cast<std::size_t>(config.n_mc) * nstat, 0.0);

  run_replications(
      config.n_mc, config.workers,
      [&](long long r, int, RngStream& rng) {
        TestBattery b = [&]() {
          if (model == NullModel::rl_permutation) {
            std::vector<int> labels = pattern.labels();
            rng.shuffle(std::span<int>(labels));
            MarkedPattern perm = pattern.with_labels(std::move(labels));
            // Q and R are label-free: reuse the observed graph
            return run_battery(build_nnct(perm, graph), graph.Q, graph.R);
          }
          std::vector<Point> pts;
          pts.reserve(pattern.n());
          for (long long c : sizes)
            for (long long k = 0; k < c; ++k)
              pts.push_back({rng.uniform(region.xmin, region.xmax),
                             rng.uniform(region.ymin, region.ymax)});
          std::vector<int> labels;
          for (std::size_t c = 0; c < sizes.size(); ++c)
            labels.insert(labels.end(), static_cast<std::size_t>(sizes[c]), static_cast<int>(c));
          MarkedPattern sim(std::move(pts), std::move(labels), classes, region);
          const NnGraph g = build_nn_graph(sim);
          return run_battery(sim, g);
        }();
        const std::vector<double> v = battery_statistics(b);
        std::copy(v.begin(), v.end(), stats.begin() + static_cast<std::size_t>(r) * nstat);
      },
      config.seed);

  McTestReport report;
  report.observed = observed;
  report.n_mc = config.n_mc;
  report.seed = config.seed;
  report.null_model = model;

  for (int s = 0; s < nstat; ++s) {
    const bool overall = s >= 2 * q * q;
    long long count = 0;
    std::vector<double> column(config.n_mc);
    for (long long r = 0; r < config.n_mc; ++r) {
      const double x = stats[static_cast<std::size_t>(r) * nstat + s];
      column[r] = x;
      if (overall ? (x >= obs[s]) : (std::abs(x) >= std::abs(obs[s]))) ++count;
    }
    report.p_mc[names[s]] =
        static_cast<double>(1 + count) / static_cast<double>(1 + config.n_mc);
    report.critical_values[names[s]] = order_statistic_quantile(column, config.alpha);
  }

  if (config.retain_statistics) {
    report.replication_statistics.resize(config.n_mc);
    for (long long r = 0; r < config.n_mc; ++r)
      for (int s = 0; s < nstat; ++s)
        report.replication_statistics[r][names[s]] =
            stats[static_cast<std::size_t>(r) * nstat + s];
  }
  return report;
}

}  // namespace

std::vector<std::string> statistic_names(int q) {
  std::vector<std::string> names;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) names.push_back(cell_name("ZD", i, j));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) names.push_back(cell_name("ZN", i, j));
  names.push_back("CD");
  names.push_back("CN");
  return names;
}

McTestReport randomization_test(const MarkedPattern& pattern, const McConfig& config) {
  if (config.null_model != NullModel::rl_permutation)
    throw data_error("randomization_test: null_model must be rl_permutation");
  return mc_engine(pattern, config, NullModel::rl_permutation);
}

McTestReport csr_mc_test(const MarkedPattern& pattern, const McConfig& config) {
  if (config.null_model != NullModel::csr_simulation)
    throw data_error("csr_mc_test: null_model must be csr_simulation");
  return mc_engine(pattern, config, NullModel::csr_simulation);
}

double order_statistic_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw data_error("order_statistic_quantile: empty sample");
  std::sort(values.begin(), values.end());
  const long long n = static_cast<long long>(values.size());
  long long k = static_cast<long long>(std::ceil((1.0 - alpha) * static_cast<double>(n)));
  k = std::clamp(k, 1LL, n);
  return values[k - 1];
}

std::map<std::string, double> mc_critical_values(const ProcessSpec& null_spec,
                                                 const McConfig& config) {
  if (config.n_mc < 100) throw data_error("mc_critical_values: n_mc must be >= 100");
  const auto sizes = spec_class_sizes(null_spec);
  const int q = static_cast<int>(sizes.size());
  const auto names = statistic_names(q);
  const int nstat = static_cast<int>(names.size());
  std::vector<double> stats(static_cast<std::size_t>(config.n_mc) * nstat, 0.0);
  run_replications(
      config.n_mc, config.workers,
      [&](long long r, int, RngStream& rng) {
        const MarkedPattern pat = generate(null_spec, rng);
        const NnGraph g = build_nn_graph(pat);
        const std::vector<double> v = battery_statistics(run_battery(pat, g));
        std::copy(v.begin(), v.end(), stats.begin() + static_cast<std::size_t>(r) * nstat);
      },
      config.seed);
  std::map<std::string, double> out;
  for (int s = 0; s < nstat; ++s) {
    std::vector<double> column(config.n_mc);
    for (long long r = 0; r < config.n_mc; ++r)
      column[r] = stats[static_cast<std::size_t>(r) * nstat + s];
    out[names[s]] = order_statistic_quantile(column, config.alpha);
  }
  return out;
}

const RateRow& RateTable::row(const std::string& name) const {
  for (const RateRow& r : rows)
    if (r.statistic == name) return r;
  throw data_error("rate table: no statistic named " + name);
}

std::pair<double, double> proportion_test_thresholds(double alpha, long long n_mc) {
  const double z = std_normal_quantile(0.95);
  const double half = z * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(n_mc));
  return {alpha - half, alpha + half};
}

RateTable rate_experiment(const ProcessSpec& spec, const McConfig& config, CriticalSource source) {
  if (config.n_mc < 1) throw data_error("rate_experiment: n_mc must be >= 1");
  const auto sizes = spec_class_sizes(spec);
  const int q = static_cast<int>(sizes.size());
  const auto names = statistic_names(q);
  const int nstat = static_cast<int>(names.size());

  // critical values per statistic
  std::vector<double> crit(nstat, 0.0);
  bool two_sided_cells = false;
  if (source == CriticalSource::asymptotic) {
    two_sided_cells = true;
    if (config.alpha <= 0.0) {
      std::fill(crit.begin(), crit.end(), std::numeric_limits<double>::infinity());
    } else {
      const double zc = std_normal_quantile(1.0 - config.alpha / 2.0);
      for (int s = 0; s < 2 * q * q; ++s) crit[s] = zc;
      crit[2 * q * q] = chi2_quantile(1.0 - config.alpha, q * (q - 1));
      crit[2 * q * q + 1] = chi2_quantile(1.0 - config.alpha, (q - 1) * (q - 1));
    }
  } else {
    // Monte Carlo criticals under CSR with the same class sizes; derived seed
    // keeps the calibration stream distinct from the experiment stream
    McConfig cal = config;
    cal.seed = config.seed ^ 0xC5EBCA5EULL;
    const auto cv = mc_critical_values(CsrUniform{sizes, StudyRegion::unit_square()}, cal);
    for (int s = 0; s < nstat; ++s) crit[s] = cv.at(names[s]);
  }

  std::vector<long long> rejects(nstat, 0);
  std::vector<std::vector<long long>> worker_rejects;

  const int workers = std::max(1, config.workers);
  worker_rejects.assign(workers, std::vector<long long>(nstat, 0));
  run_replications(
      config.n_mc, workers,
      [&](long long, int w, RngStream& rng) {
        const MarkedPattern pat = generate(spec, rng);
        const NnGraph g = build_nn_graph(pat);
        const std::vector<double> v = battery_statistics(run_battery(pat, g));
        auto& local = worker_rejects[w];
        for (int s = 0; s < nstat; ++s) {
          const bool cell = s < 2 * q * q;
          const double x = (cell && two_sided_cells) ? std::abs(v[s]) : v[s];
          if (x > crit[s]) ++local[s];
        }
      },
      config.seed);
  for (const auto& local : worker_rejects)
    for (int s = 0; s < nstat; ++s) rejects[s] += local[s];

  RateTable table;
  table.n_mc = config.n_mc;
  std::tie(table.threshold_low, table.threshold_high) =
      proportion_test_thresholds(config.alpha, config.n_mc);
  for (int s = 0; s < nstat; ++s) {
    RateRow row;
    row.statistic = names[s];
    row.rate = static_cast<double>(rejects[s]) / static_cast<double>(config.n_mc);
    row.flag = row.rate < table.threshold_low
                   ? SizeFlag::conservative
                   : (row.rate > table.threshold_high ? SizeFlag::liberal : SizeFlag::ok);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string rate_table_csv(const RateTable& table) {
  std::ostringstream os;
  os << "statistic,rate,flag\n";
  for (const RateRow& r : table.rows) {
    const char* flag = r.flag == SizeFlag::ok ? "ok"
                       : r.flag == SizeFlag::conservative ? "conservative" : "liberal";
    os << r.statistic << "," << r.rate << "," << flag << "\n";
  }
  return os.str();
}

}  // namespace nnct
