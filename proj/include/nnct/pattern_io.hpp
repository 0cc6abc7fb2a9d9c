#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nnct/geometry.hpp"
#include "nnct/table.hpp"

namespace nnct {

struct PatternReadOptions {
  std::optional<StudyRegion> region;  // default: bounding box of the points
  bool jitter = false;                // resolve duplicate coordinates (seeded)
  std::uint64_t jitter_seed = 0;
};

/// CSV with header `x,y,class`; classes ordered by first appearance. Parse
/// errors name the 1-based line.
MarkedPattern read_pattern_csv(std::istream& in, const PatternReadOptions& options = {});
MarkedPattern read_pattern_csv_file(const std::string& path, const PatternReadOptions& options = {});

void write_pattern_csv(std::ostream& out, const MarkedPattern& pattern);
void write_pattern_csv_file(const std::string& path, const MarkedPattern& pattern);

/// NNCT counts for table-only analyses: header `class,<name1>,...`, one row
/// per base class.
Nnct read_nnct_csv(std::istream& in);
Nnct read_nnct_csv_file(const std::string& path);

}  // namespace nnct
