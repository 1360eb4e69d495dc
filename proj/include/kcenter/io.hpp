#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "kcenter/common.hpp"
#include "kcenter/metric.hpp"

namespace kcenter {

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw GuardError("float formatting failed");
  return std::string(buf, p);
}

inline double parse_double(const std::string& s, const char* context) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw UsageError(std::string(context) + ": not a number: '" + s + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') { out.push_back(cur); cur.clear(); }
    else if (ch != '\r') cur.push_back(ch);
  }
  out.push_back(cur);
  for (auto& f : out) {
    std::size_t a = f.find_first_not_of(" \t");
    std::size_t b = f.find_last_not_of(" \t");
    f = (a == std::string::npos) ? std::string() : f.substr(a, b - a + 1);
  }
  return out;
}

inline bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

// CSV of coordinates, one point per row. A first row whose fields are not all
// numeric is treated as a header and skipped. Blank lines are ignored.
inline PointSet read_points_csv(std::istream& in) {
  PointSet ps;
  std::string line;
  bool first = true;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (first) {
      first = false;
      bool all_numeric = true;
      for (const auto& f : fields)
        if (!looks_numeric(f)) { all_numeric = false; break; }
      if (!all_numeric) continue;  // header row
    }
    if (ps.dim == 0) ps.dim = fields.size();
    if (fields.size() != ps.dim)
      throw UsageError("points csv: row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(ps.dim));
    for (const auto& f : fields) ps.coords.push_back(parse_double(f, "points csv"));
  }
  if (ps.size() == 0) throw UsageError("points csv: no data rows");
  return ps;
}

inline PointSet read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file: " + path);
  return read_points_csv(in);
}

inline void write_points_csv(std::ostream& out, const PointSet& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto p = ps.point(i);
    for (std::size_t d = 0; d < ps.dim; ++d) {
      if (d) out << ',';
      out << format_double(p[d]);
    }
    out << '\n';
  }
}

inline void write_points_csv_file(const std::string& path, const PointSet& ps) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open output file: " + path);
  write_points_csv(out, ps);
}

// Whitespace-separated square matrix, n rows of n entries.
inline MetricSpace read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open matrix file: " + path);
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  std::size_t n = 0;
  while (n * n < vals.size()) ++n;
  if (n * n != vals.size())
    throw UsageError("matrix file: " + std::to_string(vals.size()) +
                     " entries do not form a square matrix");
  return MetricSpace::from_matrix(std::move(vals), n);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file: " + path);
  out << text;
}

}  // namespace kcenter
