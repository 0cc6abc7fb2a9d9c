#include "nnct/pattern_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "nnct/rng.hpp"

namespace nnct {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, int line_no, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw data_error("line " + std::to_string(line_no) + ": non-numeric " + what + " '" + s + "'");
  }
}

}  // namespace

MarkedPattern read_pattern_csv(std::istream& in, const PatternReadOptions& options) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw data_error("empty pattern file");
  ++line_no;
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "x" || header[1] != "y" || header[2] != "class")
    throw data_error("line 1: expected header 'x,y,class'");

  struct H {
    std::size_t operator()(const Point& p) const {
      return std::hash<double>()(p.x) * 1000003u ^ std::hash<double>()(p.y);
    }
  };
  struct E {
    bool operator()(const Point& a, const Point& b) const { return a.x == b.x && a.y == b.y; }
  };
  std::unordered_set<Point, H, E> seen;
  RngStream jitter_rng(options.jitter_seed, 0);

  std::vector<Point> pts;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw data_error("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                       std::to_string(fields.size()));
    const double x = parse_double(fields[0], line_no, "x coordinate");
    const double y = parse_double(fields[1], line_no, "y coordinate");
    if (fields[2].empty()) throw data_error("line " + std::to_string(line_no) + ": empty class");
    Point p{x, y};
    while (!seen.insert(p).second) {
      if (!options.jitter)
        throw data_error("line " + std::to_string(line_no) +
                         ": duplicate coordinates (rerun with --jitter to break ties)");
      // +-1e-9 region units, seeded
      p.x += jitter_rng.uniform(-1e-9, 1e-9);
      p.y += jitter_rng.uniform(-1e-9, 1e-9);
    }
    pts.push_back(p);
    labels.push_back(fields[2]);
  }
  if (pts.size() < 2) throw data_error("pattern file needs at least 2 rows");

  StudyRegion region = options.region.value_or(StudyRegion::bounding_box(pts));
  return MarkedPattern(std::move(pts), labels, region);
}

MarkedPattern read_pattern_csv_file(const std::string& path, const PatternReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open pattern file: " + path);
  return read_pattern_csv(in, options);
}

void write_pattern_csv(std::ostream& out, const MarkedPattern& pattern) {
  out << "x,y,class\n";
  out.precision(17);
  for (int i = 0; i < pattern.n(); ++i) {
    const Point& p = pattern.points()[i];
    out << p.x << "," << p.y << "," << pattern.classes()[pattern.labels()[i]] << "\n";
  }
}

void write_pattern_csv_file(const std::string& path, const MarkedPattern& pattern) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open output file: " + path);
  write_pattern_csv(out, pattern);
}

Nnct read_nnct_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty table file");
  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "class")
    throw data_error("line 1: expected header 'class,<name>,...'");
  std::vector<std::string> classes(header.begin() + 1, header.end());
  const int q = static_cast<int>(classes.size());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(q, q);
  int row = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (row >= q) throw data_error("line " + std::to_string(line_no) + ": too many rows");
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != q + 1)
      throw data_error("line " + std::to_string(line_no) + ": expected " + std::to_string(q + 1) +
                       " fields");
    if (fields[0] != classes[row])
      throw data_error("line " + std::to_string(line_no) + ": row label '" + fields[0] +
                       "' does not match column order");
    for (int j = 0; j < q; ++j)
      counts(row, j) = parse_double(fields[j + 1], line_no, "cell count");
    ++row;
  }
  if (row != q) throw data_error("table file: expected " + std::to_string(q) + " rows");
  return Nnct::from_counts(std::move(classes), std::move(counts));
}

Nnct read_nnct_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open table file: " + path);
  return read_nnct_csv(in);
}

}  // namespace nnct
