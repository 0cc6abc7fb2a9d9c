#pragma once

#include <string>
#include <vector>

#include "nnct/seg_tests.hpp"

namespace nnct {

/// One out-of-tolerance value of a fixture comparison.
struct FixtureDiff {
  std::string quantity;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
};

struct FixtureResult {
  std::string name;
  bool passed = false;
  std::vector<FixtureDiff> diffs;
};

/// Loads fixtures/<name>.json (table + Q + R + expected statistics with
/// per-value tolerances), reruns the analysis and diffs every expectation.
FixtureResult run_fixture(const std::string& fixture_path);

}  // namespace nnct
