#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "nnct/fixtures.hpp"
#include "nnct/montecarlo.hpp"
#include "nnct/oracle.hpp"
#include "nnct/pattern_io.hpp"
#include "nnct/secondorder.hpp"

namespace nnct::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";
constexpr const char* kReportSchema = "nnct-report/1";

int default_workers() {
  if (const char* env = std::getenv("NNCT_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

std::optional<StudyRegion> parse_region_flag(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::stringstream ss(text);
  std::string part;
  std::vector<double> vals;
  while (std::getline(ss, part, ',')) vals.push_back(std::stod(part));
  if (vals.size() != 4) throw data_error("--region expects xmin,xmax,ymin,ymax");
  StudyRegion r{vals[0], vals[1], vals[2], vals[3]};
  r.validate();
  return r;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (std::isnan(v))
        row.push_back(nullptr);
      else
        row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json cell_tests_to_json(const CellTests& c) {
  return json{{"z", matrix_to_json(c.z)},
              {"p_two_sided", matrix_to_json(c.p_two_sided)},
              {"p_one_sided_greater", matrix_to_json(c.p_one_sided_greater)}};
}

json battery_to_json(const TestBattery& b) {
  json j;
  j["classes"] = b.table.classes;
  j["counts"] = matrix_to_json(b.table.counts);
  j["class_sizes"] = b.table.row_sums();
  j["Q"] = b.Q;
  j["R"] = b.R;
  j["pielou"] = {{"statistic", b.pielou.statistic},
                 {"df", b.pielou.df},
                 {"p", b.pielou.p},
                 {"note", "inappropriate for completely mapped data; comparison only"}};
  j["dixon_cell"] = cell_tests_to_json(b.dixon_cells);
  j["new_cell"] = cell_tests_to_json(b.new_cells);
  j["dixon_overall"] = {{"statistic", b.dixon.statistic},
                        {"df", b.dixon.df},
                        {"p_asy", b.dixon.p},
                        {"rank", b.dixon.rank}};
  j["new_overall"] = {{"statistic", b.neww.statistic},
                      {"df", b.neww.df},
                      {"p_asy", b.neww.p},
                      {"rank", b.neww.rank}};
  return j;
}

std::string fmt_p(double p) {
  std::ostringstream os;
  if (p < 0.0001)
    os << "<.0001";
  else
    os << std::fixed << std::setprecision(4) << p;
  std::string s = os.str();
  if (s.size() > 1 && s[0] == '0') s.erase(0, 1);  // table style: .0221
  return s;
}

void render_cells_text(std::ostream& out, const TestBattery& b, const CellTests& c) {
  const int q = b.table.q();
  out << "  cell-specific z (two-sided p):\n";
  for (int i = 0; i < q; ++i) {
    out << "    " << std::setw(10) << b.table.classes[i] << " |";
    for (int j = 0; j < q; ++j) {
      if (!c.defined(i, j)) {
        out << "  undefined";
        continue;
      }
      out << " " << std::showpos << std::fixed << std::setprecision(2) << c.z(i, j)
          << std::noshowpos << " (" << fmt_p(c.p_two_sided(i, j)) << ")";
    }
    out << "\n";
  }
}

void render_battery_text(std::ostream& out, const TestBattery& b, const McTestReport* rand_report,
                         const McTestReport* mc_report) {
  const int q = b.table.q();
  out << "NNCT (" << q << " classes, n = " << b.table.n() << ", Q = " << b.Q << ", R = " << b.R
      << ")\n";
  out << "  base \\ NN";
  for (const auto& c : b.table.classes) out << "  " << c;
  out << "\n";
  for (int i = 0; i < q; ++i) {
    out << "  " << std::setw(9) << b.table.classes[i];
    for (int j = 0; j < q; ++j)
      out << "  " << std::setw(static_cast<int>(b.table.classes[j].size())) << std::fixed
          << std::setprecision(0) << b.table.counts(i, j);
    out << "\n";
  }

  auto mc_p = [&](const McTestReport* rep, const char* tag, const std::string& key) {
    if (!rep) return std::string();
    std::ostringstream os;
    os << ", " << tag << " " << fmt_p(rep->p_mc.at(key));
    return os.str();
  };

  out << "\nDixon's NNCT tests\n";
  out << "  overall: C_D = " << std::fixed << std::setprecision(2) << b.dixon.statistic
      << " (df " << b.dixon.df << ", p_asy " << fmt_p(b.dixon.p) << mc_p(mc_report, "p_mc", "CD")
      << mc_p(rand_report, "p_rand", "CD") << ")\n";
  render_cells_text(out, b, b.dixon_cells);

  out << "\nNew NNCT tests\n";
  out << "  overall: C_N = " << std::fixed << std::setprecision(2) << b.neww.statistic << " (df "
      << b.neww.df << ", p_asy " << fmt_p(b.neww.p) << mc_p(mc_report, "p_mc", "CN")
      << mc_p(rand_report, "p_rand", "CN") << ")\n";
  render_cells_text(out, b, b.new_cells);

  out << "\nPielou chi-square (comparison only; inappropriate for completely mapped data): "
      << std::fixed << std::setprecision(2) << b.pielou.statistic << " (df " << b.pielou.df
      << ", p " << fmt_p(b.pielou.p) << ")\n";
}

void render_battery_csv(std::ostream& out, const TestBattery& b, const McTestReport* rand_report,
                        const McTestReport* mc_report) {
  const int q = b.table.q();
  out << "statistic,value,df,p_asy,p_mc,p_rand\n";
  auto emit = [&](const std::string& name, double value, int df, double p_asy,
                  const std::string& key) {
    out << name << "," << value << ",";
    if (df >= 0) out << df;
    out << "," << p_asy << ",";
    if (mc_report) out << mc_report->p_mc.at(key);
    out << ",";
    if (rand_report) out << rand_report->p_mc.at(key);
    out << "\n";
  };
  const auto names = statistic_names(q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (b.dixon_cells.defined(i, j))
        emit(names[i * q + j], b.dixon_cells.z(i, j), -1, b.dixon_cells.p_two_sided(i, j),
             names[i * q + j]);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (b.new_cells.defined(i, j))
        emit(names[q * q + i * q + j], b.new_cells.z(i, j), -1, b.new_cells.p_two_sided(i, j),
             names[q * q + i * q + j]);
  emit("CD", b.dixon.statistic, b.dixon.df, b.dixon.p, "CD");
  emit("CN", b.neww.statistic, b.neww.df, b.neww.p, "CN");
}

// ---- subcommands -----------------------------------------------------------

struct TestArgs {
  std::string input;
  std::string table;
  std::string region_text;
  bool jitter = false;
  long long q_stat = -1;
  long long r_stat = -1;
  std::vector<long long> sizes;
  std::string null_model = "csr";
  long long n_mc = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "text";
  std::string output;
  int workers = default_workers();
};

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<TestBattery> battery;
  std::optional<MarkedPattern> pattern;
  std::optional<McTestReport> rand_report, mc_report;

  if (!a.table.empty()) {
    // table-only mode: published NNCT plus Q and R, no coordinates, so no
    // Monte Carlo or randomization p-values
    if (a.q_stat < 0 || a.r_stat < 0) {
      err << "error: --table requires --q and --r\n";
      return 1;
    }
    const Nnct table = read_nnct_csv_file(a.table);
    if (!a.sizes.empty() && a.sizes != table.row_sums())
      throw data_error("--sizes does not match the table row sums");
    battery = run_battery(table, a.q_stat, a.r_stat);
    if (a.n_mc > 0) err << "note: --nmc ignored in table-only mode (no coordinates)\n";
  } else if (!a.input.empty()) {
    PatternReadOptions opt;
    opt.region = parse_region_flag(a.region_text);
    opt.jitter = a.jitter;
    opt.jitter_seed = a.seed;
    pattern = read_pattern_csv_file(a.input, opt);
    const NnGraph graph = build_nn_graph(*pattern);
    battery = run_battery(*pattern, graph);
    if (a.n_mc > 0) {
      if (!a.seed_set) {
        err << "error: --nmc requires --seed (reproducibility over convenience)\n";
        return 1;
      }
      McConfig mc;
      mc.n_mc = a.n_mc;
      mc.seed = a.seed;
      mc.workers = a.workers;
      if (a.null_model == "rl") {
        mc.null_model = NullModel::rl_permutation;
        rand_report = randomization_test(*pattern, mc);
      } else if (a.null_model == "csr") {
        mc.null_model = NullModel::csr_simulation;
        mc_report = csr_mc_test(*pattern, mc);
      } else {
        err << "error: --null must be csr or rl\n";
        return 1;
      }
    }
  } else {
    err << "error: provide --input (coordinates) or --table (NNCT counts)\n";
    return 1;
  }

  std::ostringstream body;
  if (a.format == "json") {
    json j;
    j["schema"] = kReportSchema;
    j["tool"] = {{"name", "nnct"}, {"version", kVersion}};
    j["inputs"] = {{"input", a.input}, {"table", a.table}, {"null", a.null_model},
                   {"nmc", a.n_mc},   {"seed", a.seed},    {"jitter", a.jitter}};
    j["report"] = battery_to_json(*battery);
    if (rand_report) {
      j["p_rand"] = rand_report->p_mc;
      j["report"]["n_mc"] = rand_report->n_mc;
    }
    if (mc_report) {
      j["p_mc"] = mc_report->p_mc;
      j["report"]["n_mc"] = mc_report->n_mc;
    }
    body << j.dump(2) << "\n";
  } else if (a.format == "csv") {
    render_battery_csv(body, *battery, rand_report ? &*rand_report : nullptr,
                       mc_report ? &*mc_report : nullptr);
  } else {
    render_battery_text(body, *battery, rand_report ? &*rand_report : nullptr,
                        mc_report ? &*mc_report : nullptr);
  }

  if (a.output.empty()) {
    out << body.str();
  } else {
    std::ofstream f(a.output);
    if (!f) throw data_error("cannot open output file: " + a.output);
    f << body.str();
  }
  return 0;
}

ProcessSpec spec_with_locations(const std::string& spec_text, const std::string& input,
                                const std::optional<StudyRegion>& region) {
  ProcessSpec spec = parse_process_spec(spec_text);
  if (auto* rl = std::get_if<RandomLabel>(&spec)) {
    if (input.empty())
      throw data_error("rl spec needs fixed locations: pass --input with a pattern file");
    PatternReadOptions opt;
    opt.region = region;
    const MarkedPattern pat = read_pattern_csv_file(input, opt);
    rl->locations = pat.points();
    long long n = 0;
    for (long long s : rl->class_sizes) n += s;
    if (n != pat.n())
      throw data_error("rl spec class sizes must sum to the pattern size " +
                       std::to_string(pat.n()));
  }
  return spec;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NNCT spatial segregation/association tests and experiment harness"};
  app.require_subcommand(1);
  app.footer(
      "Process spec grammar (fractions like 1/6 are accepted):\n"
      "  csr n=50,50 [region=0,1,0,1]   rl n=50,50   (rl locations via --input)\n"
      "  seg2 s=1/6 n=50,50             seg3 s=1/12 n=30,30,30\n"
      "  assoc2 r=1/4 n=30,50           assoc3 ry=1/7 rz=1/10 n=30,30,30\n"
      "  pcp1|pcp2 np=5 sigma=.05 n=50,50 shared=1\n"
      "  matern kappa=5 r=.1 n=50,50 shared=1 [fixed=1]\n"
      "  ipcp f=sqrt_sum,absdiff n=50,100   (sqrt_sum, sqrt_prod, absdiff, const)\n"
      "Experiments require --seed; replication k draws from stream (seed,k), so\n"
      "output is identical for any --workers (default from NNCT_WORKERS).");

  // --- test ---
  TestArgs ta;
  CLI::App* test = app.add_subcommand(
      "test", "Run the NNCT test battery on a pattern file or a published table");
  test->add_option("--input", ta.input, "pattern CSV with header x,y,class");
  test->add_option("--table", ta.table, "NNCT counts CSV (table-only mode)");
  test->add_option("--region", ta.region_text, "study region xmin,xmax,ymin,ymax");
  test->add_flag("--jitter", ta.jitter, "break duplicate coordinates (+-1e-9, seeded)");
  test->add_option("--q", ta.q_stat, "shared-NN statistic Q (table-only mode)");
  test->add_option("--r", ta.r_stat, "reflexive-pair statistic R (table-only mode)");
  test->add_option("--sizes", ta.sizes, "class sizes (validated against table rows)")
      ->delimiter(',');
  test->add_option("--null", ta.null_model, "null model for MC p-values: csr or rl")
      ->default_val("csr");
  test->add_option("--nmc", ta.n_mc, "Monte Carlo replications (0 = asymptotic only)");
  test->add_option("--seed", ta.seed, "RNG seed")->each([&](const std::string&) {
    ta.seed_set = true;
  });
  test->add_option("--format", ta.format, "json, csv or text")->default_val("text");
  test->add_option("--out", ta.output, "write the report to a file instead of stdout");
  test->add_option("--workers", ta.workers, "parallel replications");

  // --- gen ---
  std::string g_spec, g_out, g_input, g_region;
  std::uint64_t g_seed = 0;
  bool g_seed_set = false;
  CLI::App* gen = app.add_subcommand("gen", "Generate a pattern from a process spec");
  gen->add_option("--spec", g_spec, "process spec, e.g. \"seg2 s=1/6 n=50,50\"")->required();
  gen->add_option("--seed", g_seed, "RNG seed")->each([&](const std::string&) {
    g_seed_set = true;
  });
  gen->add_option("--out", g_out, "output pattern CSV")->required();
  gen->add_option("--input", g_input, "fixed locations for rl specs");
  gen->add_option("--region", g_region, "region for rl input");

  // --- size / power ---
  struct RateArgs {
    std::string spec, criticals = "asy", out_csv, input, region;
    long long n_mc = 1000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double alpha = 0.05;
    int workers = default_workers();
  };
  RateArgs ra;
  auto add_rate = [&](const char* name, const char* desc) {
    CLI::App* c = app.add_subcommand(name, desc);
    c->add_option("--spec", ra.spec, "process spec for the null or alternative")->required();
    c->add_option("--nmc", ra.n_mc, "replications");
    c->add_option("--seed", ra.seed, "RNG seed")->each([&](const std::string&) {
      ra.seed_set = true;
    });
    c->add_option("--alpha", ra.alpha, "nominal level")->default_val(0.05);
    c->add_option("--criticals", ra.criticals, "asy or mc")->default_val("asy");
    c->add_option("--out", ra.out_csv, "output CSV (default stdout)");
    c->add_option("--input", ra.input, "fixed locations for rl specs");
    c->add_option("--region", ra.region, "region for rl input");
    c->add_option("--workers", ra.workers, "parallel replications");
    return c;
  };
  CLI::App* size_cmd = add_rate("size", "Empirical size experiment under a null spec");
  CLI::App* power_cmd = add_rate("power", "Empirical power experiment under an alternative spec");

  // --- kfun / pcf / envelope ---
  struct KArgs {
    std::string input, classes, out_csv, region;
    double tmax = 0.0;
    int bins = 128;
  };
  KArgs ka;
  CLI::App* kfun = app.add_subcommand("kfun", "Ripley K/L estimates as CSV");
  kfun->add_option("--input", ka.input, "pattern CSV")->required();
  kfun->add_option("--classes", ka.classes, "one class (univariate) or i,j (bivariate)")
      ->required();
  kfun->add_option("--tmax", ka.tmax, "max distance (default smaller side / 4)");
  kfun->add_option("--bins", ka.bins, "grid size")->default_val(128);
  kfun->add_option("--region", ka.region, "study region xmin,xmax,ymin,ymax");
  kfun->add_option("--out", ka.out_csv, "output CSV (default stdout)");

  struct PcfArgs {
    std::string input, cls, out_csv, region;
    double bandwidth = 0.0, tmax = 0.0;
    int bins = 128;
    bool all_distances = false;
  };
  PcfArgs pa;
  CLI::App* pcf_cmd = app.add_subcommand("pcf", "Pair correlation estimate as CSV");
  pcf_cmd->add_option("--input", pa.input, "pattern CSV")->required();
  pcf_cmd->add_option("--class", pa.cls, "class name")->required();
  pcf_cmd->add_option("--bandwidth", pa.bandwidth, "box kernel bandwidth (default 0.15/sqrt(lambda))");
  pcf_cmd->add_option("--tmax", pa.tmax, "max distance");
  pcf_cmd->add_option("--bins", pa.bins, "grid size")->default_val(128);
  pcf_cmd->add_option("--region", pa.region, "study region");
  pcf_cmd->add_flag("--all-distances", pa.all_distances,
                    "keep t below the mean NN distance (masked by default: the "
                    "estimator variance is large there)");
  pcf_cmd->add_option("--out", pa.out_csv, "output CSV (default stdout)");

  struct EnvArgs {
    std::string spec, stat = "kuni", classes = "1", out_csv;
    int n_sim = 99;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double level = 0.95, bandwidth = 0.05, tmax = 0.25;
    int bins = 128;
  };
  EnvArgs ea;
  CLI::App* env_cmd = app.add_subcommand("envelope", "Pointwise Monte Carlo envelope as CSV");
  env_cmd->add_option("--spec", ea.spec, "null process spec")->required();
  env_cmd->add_option("--stat", ea.stat, "kuni, kbiv or pcf")->default_val("kuni");
  env_cmd->add_option("--classes", ea.classes, "class index (1-based) or i,j for kbiv");
  env_cmd->add_option("--nsim", ea.n_sim, "simulations")->default_val(99);
  env_cmd->add_option("--seed", ea.seed, "RNG seed")->each([&](const std::string&) {
    ea.seed_set = true;
  });
  env_cmd->add_option("--level", ea.level, "pointwise level")->default_val(0.95);
  env_cmd->add_option("--bandwidth", ea.bandwidth, "pcf bandwidth");
  env_cmd->add_option("--tmax", ea.tmax, "max distance")->default_val(0.25);
  env_cmd->add_option("--bins", ea.bins, "grid size")->default_val(128);
  env_cmd->add_option("--out", ea.out_csv, "output CSV (default stdout)");

  std::vector<std::string> argv_copy = args;
  std::reverse(argv_copy.begin(), argv_copy.end());
  try {
    app.parse(argv_copy);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  auto write_csv = [&](const std::string& path, const std::string& content) {
    if (path.empty()) {
      out << content;
      return;
    }
    std::ofstream f(path);
    if (!f) throw data_error("cannot open output file: " + path);
    f << content;
  };

  try {
    if (test->parsed()) return cmd_test(ta, out, err);

    if (gen->parsed()) {
      if (!g_seed_set) {
        err << "error: gen requires --seed\n";
        return 1;
      }
      const ProcessSpec spec = spec_with_locations(g_spec, g_input, parse_region_flag(g_region));
      write_pattern_csv_file(g_out, generate(spec, g_seed));
      return 0;
    }

    if (size_cmd->parsed() || power_cmd->parsed()) {
      if (!ra.seed_set) {
        err << "error: experiment commands require --seed\n";
        return 1;
      }
      const ProcessSpec spec = spec_with_locations(ra.spec, ra.input, parse_region_flag(ra.region));
      McConfig mc;
      mc.n_mc = ra.n_mc;
      mc.seed = ra.seed;
      mc.alpha = ra.alpha;
      mc.workers = ra.workers;
      const CriticalSource src =
          ra.criticals == "mc" ? CriticalSource::monte_carlo : CriticalSource::asymptotic;
      const RateTable table = rate_experiment(spec, mc, src);
      std::ostringstream os;
      os.precision(10);
      os << rate_table_csv(table);
      write_csv(ra.out_csv, os.str());
      err << "thresholds: conservative < " << table.threshold_low << ", liberal > "
          << table.threshold_high << "\n";
      return 0;
    }

    if (kfun->parsed()) {
      PatternReadOptions opt;
      opt.region = parse_region_flag(ka.region);
      const MarkedPattern pat = read_pattern_csv_file(ka.input, opt);
      const DistanceGrid grid = ka.tmax > 0.0 ? DistanceGrid::regular(ka.tmax, ka.bins)
                                              : DistanceGrid::for_region(pat.region(), ka.bins);
      std::stringstream cs(ka.classes);
      std::vector<std::string> cls;
      std::string part;
      while (std::getline(cs, part, ',')) cls.push_back(part);
      auto class_id = [&](const std::string& name) {
        for (int c = 0; c < pat.q(); ++c)
          if (pat.classes()[c] == name) return c;
        throw data_error("unknown class: " + name);
      };
      KEstimate k = cls.size() == 1 ? k_univariate(pat, class_id(cls[0]), grid)
                                    : k_bivariate(pat, class_id(cls[0]), class_id(cls[1]), grid);
      std::ostringstream os;
      os.precision(12);
      os << "t,k_hat,l_minus_t\n";
      for (std::size_t i = 0; i < grid.t.size(); ++i)
        os << grid.t[i] << "," << k.k_hat[i] << "," << k.l_minus_t[i] << "\n";
      write_csv(ka.out_csv, os.str());
      return 0;
    }

    if (pcf_cmd->parsed()) {
      PatternReadOptions opt;
      opt.region = parse_region_flag(pa.region);
      const MarkedPattern pat = read_pattern_csv_file(pa.input, opt);
      int cid = -1;
      for (int c = 0; c < pat.q(); ++c)
        if (pat.classes()[c] == pa.cls) cid = c;
      if (cid < 0) throw data_error("unknown class: " + pa.cls);
      const DistanceGrid grid = pa.tmax > 0.0 ? DistanceGrid::regular(pa.tmax, pa.bins)
                                              : DistanceGrid::for_region(pat.region(), pa.bins);
      const double bw = pa.bandwidth > 0.0 ? pa.bandwidth : default_pcf_bandwidth(pat, cid);
      const PcfEstimate g = pcf(k_univariate(pat, cid, grid), bw);
      double min_t = 0.0;
      if (!pa.all_distances) {
        // g is unreliable below the mean NN distance; mask it by default
        const NnGraph nng = build_nn_graph(pat);
        for (double d : nng.nn_distance) min_t += d;
        min_t /= pat.n();
      }
      std::ostringstream os;
      os.precision(12);
      os << "t,g_hat\n";
      for (std::size_t i = 0; i < grid.t.size(); ++i) {
        os << grid.t[i] << ",";
        if (!std::isnan(g.g_hat[i]) && grid.t[i] >= min_t) os << g.g_hat[i];
        os << "\n";
      }
      write_csv(pa.out_csv, os.str());
      return 0;
    }

    if (env_cmd->parsed()) {
      if (!ea.seed_set) {
        err << "error: envelope requires --seed\n";
        return 1;
      }
      const ProcessSpec spec = parse_process_spec(ea.spec);
      EnvelopeRequest req;
      req.level = ea.level;
      req.bandwidth = ea.bandwidth;
      std::stringstream cs(ea.classes);
      std::string part;
      std::vector<int> cls;
      while (std::getline(cs, part, ',')) cls.push_back(std::stoi(part) - 1);
      req.class_i = cls.empty() ? 0 : cls[0];
      req.class_j = cls.size() > 1 ? cls[1] : (req.class_i == 0 ? 1 : 0);
      if (ea.stat == "kuni")
        req.statistic = SecondOrderStatistic::k_uni;
      else if (ea.stat == "kbiv")
        req.statistic = SecondOrderStatistic::k_biv;
      else if (ea.stat == "pcf")
        req.statistic = SecondOrderStatistic::pcf;
      else
        throw data_error("--stat must be kuni, kbiv or pcf");
      const DistanceGrid grid = DistanceGrid::regular(ea.tmax, ea.bins);
      const Envelope env = envelope(spec, req, grid, ea.n_sim, ea.seed);
      std::ostringstream os;
      os.precision(12);
      os << "t,lower,upper\n";
      for (std::size_t i = 0; i < grid.t.size(); ++i) {
        os << grid.t[i] << ",";
        if (!std::isnan(env.lower[i])) os << env.lower[i];
        os << ",";
        if (!std::isnan(env.upper[i])) os << env.upper[i];
        os << "\n";
      }
      write_csv(ea.out_csv, os.str());
      return 0;
    }
  } catch (const numeric_error& e) {
    err << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const data_error& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace nnct::cli
