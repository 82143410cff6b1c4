#include "besselhardy/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace bh::io {

CsvError::CsvError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

double parse(const std::string& tok, const std::string& path, std::size_t line) {
  double v = 0.0;
  const char* b = tok.data();
  const char* e = b + tok.size();
  if (!tok.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw CsvError(path, line, "cannot parse number '" + tok + "'");
  if (!std::isfinite(v)) throw CsvError(path, line, "non-finite value '" + tok + "'");
  return v;
}

struct Rows {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> lines;
};

Rows load(const std::string& path, const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, "cannot open file");
  std::string line;
  std::size_t no = 0;
  bool have_header = false;
  Rows r;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cols = split(t);
    if (!have_header) {
      if (cols != header) {
        std::string want;
        for (std::size_t i = 0; i < header.size(); ++i) want += (i ? "," : "") + header[i];
        throw CsvError(path, no, "malformed header, expected '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (cols.size() != header.size())
      throw CsvError(path, no, "expected " + std::to_string(header.size()) + " columns");
    std::vector<double> v;
    for (const auto& c : cols) v.push_back(parse(c, path, no));
    r.rows.push_back(std::move(v));
    r.lines.push_back(no);
  }
  if (!have_header) throw CsvError(path, no, "missing header");
  if (r.rows.size() < 2) throw CsvError(path, no, "need at least two data rows");
  return r;
}

std::string header_of(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, "cannot open file");
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (!t.empty()) return t;
  }
  throw CsvError(path, no, "missing header");
}

}  // namespace

SampledFunction1D read_function_1d(const std::string& path) {
  const Rows r = load(path, {"x", "value"});
  std::vector<double> x, v;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double xi = r.rows[i][0];
    if (xi <= 0.0) throw CsvError(path, r.lines[i], "x must be positive");
    if (!x.empty() && !(xi > x.back())) throw CsvError(path, r.lines[i], "non-monotone x");
    x.push_back(xi);
    v.push_back(r.rows[i][1]);
  }
  return SampledFunction1D(HalfLineGrid::from_points(std::move(x)), std::move(v));
}

SampledFunction2D read_function_2d(const std::string& path) {
  const Rows r = load(path, {"x1", "x2", "value"});
  std::vector<double> x1, x2;
  std::vector<double> vals;
  std::size_t j = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const double a = r.rows[i][0], b = r.rows[i][1];
    if (a <= 0.0 || b <= 0.0) throw CsvError(path, r.lines[i], "coordinates must be positive");
    if (x1.empty() || a != x1.back()) {
      if (!x1.empty()) {
        if (!(a > x1.back())) throw CsvError(path, r.lines[i], "non-monotone x1");
        if (j != x2.size()) throw CsvError(path, r.lines[i], "ragged block: x2 grid incomplete");
      }
      x1.push_back(a);
      j = 0;
    }
    if (x1.size() == 1) {
      if (!x2.empty() && !(b > x2.back())) throw CsvError(path, r.lines[i], "non-monotone x2");
      x2.push_back(b);
    } else if (j >= x2.size() || b != x2[j]) {
      throw CsvError(path, r.lines[i], "x2 grid differs from the first block");
    }
    ++j;
    vals.push_back(r.rows[i][2]);
  }
  if (j != x2.size()) throw CsvError(path, r.lines.back(), "ragged block: x2 grid incomplete");
  if (x1.size() < 2 || x2.size() < 2) throw CsvError(path, r.lines.back(), "2D grid needs >= 2 points per axis");
  Eigen::MatrixXd m(x1.size(), x2.size());
  for (std::size_t a = 0; a < x1.size(); ++a)
    for (std::size_t b = 0; b < x2.size(); ++b) m(a, b) = vals[a * x2.size() + b];
  return SampledFunction2D(HalfLineGrid::from_points(std::move(x1)),
                           HalfLineGrid::from_points(std::move(x2)), std::move(m));
}

std::variant<SampledFunction1D, SampledFunction2D> read_function(const std::string& path) {
  const auto cols = split(header_of(path));
  if (cols.size() == 3) return read_function_2d(path);
  return read_function_1d(path);
}

std::string format_double(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_function(const std::string& path, const SampledFunction1D& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,value\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i)
    out << format_double(f.grid[i]) << ',' << format_double(f.values[i]) << '\n';
}

void write_function(const std::string& path, const SampledFunction2D& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x1,x2,value\n";
  for (std::size_t i = 0; i < f.grid1.size(); ++i)
    for (std::size_t j = 0; j < f.grid2.size(); ++j)
      out << format_double(f.grid1[i]) << ',' << format_double(f.grid2[j]) << ','
          << format_double(f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
}

}  // namespace bh::io
