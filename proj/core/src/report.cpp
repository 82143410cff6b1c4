#include "besselhardy/report.hpp"

#include "besselhardy/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bh {

void VerificationReport::add(std::string check, std::string parameter, double value, double bound,
                             bool pass) {
  rows_.push_back({std::move(check), std::move(parameter), value, bound, pass && std::isfinite(value)});
}

void VerificationReport::record(std::string check, std::string parameter, double value) {
  rows_.push_back({std::move(check), std::move(parameter), value, std::nullopt, std::isfinite(value)});
}

void VerificationReport::record(std::string check, std::string parameter, double value, bool pass) {
  rows_.push_back({std::move(check), std::move(parameter), value, std::nullopt, pass});
}

void VerificationReport::merge(const VerificationReport& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

bool VerificationReport::all_pass() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const ReportRow& r) { return r.pass; });
}

std::string VerificationReport::to_csv() const {
  std::vector<ReportRow> sorted = rows_;
  std::stable_sort(sorted.begin(), sorted.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.check != b.check) return a.check < b.check;
    return a.parameter < b.parameter;
  });
  std::ostringstream out;
  out << "check,parameter,value,bound,pass\n";
  for (const auto& r : sorted) {
    out << r.check << ',' << r.parameter << ',' << io::format_double(r.value, 12) << ','
        << (r.bound ? io::format_double(*r.bound, 12) : std::string("recorded")) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

void VerificationReport::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_csv();
}

}  // namespace bh
