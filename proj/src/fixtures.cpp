#include "nnct/fixtures.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace nnct {

namespace {

using nlohmann::json;

void compare(FixtureResult& result, const std::string& quantity, double expected, double actual,
             double tol) {
  if (!(std::abs(expected - actual) <= tol))
    result.diffs.push_back({quantity, expected, actual, tol});
}

// expected entries are either plain numbers (default tolerance) or
// [value, tolerance] pairs
std::pair<double, double> value_tol(const json& j, double default_tol) {
  if (j.is_array()) return {j.at(0).get<double>(), j.at(1).get<double>()};
  return {j.get<double>(), default_tol};
}

void compare_matrix(FixtureResult& result, const std::string& name, const json& expected,
                    const Eigen::MatrixXd& actual, double default_tol) {
  const int q = static_cast<int>(actual.rows());
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      const auto [val, tol] = value_tol(expected.at(i).at(j), default_tol);
      compare(result, name + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", val,
              actual(i, j), tol);
    }
}

}  // namespace

FixtureResult run_fixture(const std::string& fixture_path) {
  std::ifstream in(fixture_path);
  if (!in) throw data_error("missing fixture: " + fixture_path);
  json doc = json::parse(in);

  FixtureResult result;
  result.name = doc.at("name").get<std::string>();

  std::vector<std::string> classes = doc.at("classes").get<std::vector<std::string>>();
  const int q = static_cast<int>(classes.size());
  Eigen::MatrixXd counts(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) counts(i, j) = doc.at("counts").at(i).at(j).get<double>();

  const Nnct table = Nnct::from_counts(std::move(classes), std::move(counts));
  const TestBattery battery =
      run_battery(table, doc.at("Q").get<long long>(), doc.at("R").get<long long>());

  const json& exp = doc.at("expected");
  const double ztol = exp.value("z_tolerance", 0.01);
  const double ctol = exp.value("c_tolerance", 0.02);
  if (exp.contains("dixon_z")) compare_matrix(result, "ZD", exp.at("dixon_z"), battery.dixon_cells.z, ztol);
  if (exp.contains("new_z")) compare_matrix(result, "ZN", exp.at("new_z"), battery.new_cells.z, ztol);
  if (exp.contains("C_D")) {
    const auto [val, tol] = value_tol(exp.at("C_D"), ctol);
    compare(result, "C_D", val, battery.dixon.statistic, tol);
  }
  if (exp.contains("C_N")) {
    const auto [val, tol] = value_tol(exp.at("C_N"), ctol);
    compare(result, "C_N", val, battery.neww.statistic, tol);
  }
  if (exp.contains("pielou_chisq")) {
    const auto [val, tol] = value_tol(exp.at("pielou_chisq"), ctol);
    compare(result, "pielou_chisq", val, battery.pielou.statistic, tol);
  }
  result.passed = result.diffs.empty();
  return result;
}

}  // namespace nnct
