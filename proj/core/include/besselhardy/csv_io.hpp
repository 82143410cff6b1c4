#ifndef BESSELHARDY_CSV_IO_HPP
#define BESSELHARDY_CSV_IO_HPP

#include "besselhardy/grids.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>

namespace bh::io {

class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// 1D files: header "x,value"; 2D files: header "x1,x2,value", row-major, x1 outer.
SampledFunction1D read_function_1d(const std::string& path);
SampledFunction2D read_function_2d(const std::string& path);
std::variant<SampledFunction1D, SampledFunction2D> read_function(const std::string& path);

// Values are written with 17 significant digits, so write -> read is bit-exact.
void write_function(const std::string& path, const SampledFunction1D& f);
void write_function(const std::string& path, const SampledFunction2D& f);

std::string format_double(double v, int digits = 17);

}  // namespace bh::io

#endif
