#ifndef BESSELHARDY_REPORT_HPP
#define BESSELHARDY_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

namespace bh {

struct ReportRow {
  std::string check;
  std::string parameter;
  double value = 0.0;
  std::optional<double> bound;  // empty -> "recorded"
  bool pass = true;
};

class VerificationReport {
 public:
  void add(std::string check, std::string parameter, double value, double bound, bool pass);
  // A measured quantity with no a-priori bound; passes iff finite unless told otherwise.
  void record(std::string check, std::string parameter, double value);
  void record(std::string check, std::string parameter, double value, bool pass);
  void merge(const VerificationReport& other);

  const std::vector<ReportRow>& rows() const { return rows_; }
  bool all_pass() const;
  bool empty() const { return rows_.empty(); }
  // Rows sorted by (check, parameter); the sort is stable so duplicates keep insertion order.
  std::string to_csv() const;
  void write(const std::string& path) const;

 private:
  std::vector<ReportRow> rows_;
};

}  // namespace bh

#endif
