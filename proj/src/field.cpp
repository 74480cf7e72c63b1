#include "ptycho/field.hpp"

#include <cmath>
#include <string>

namespace ptycho {

namespace {

void check_shape(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw DimensionError("field dimensions must be >= 1, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

void check_length(int rows, int cols, std::size_t n) {
  const std::size_t want = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (n != want) {
    throw DimensionError("field data length " + std::to_string(n) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

std::size_t checked_size(int rows, int cols) {
  check_shape(rows, cols);
  return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

}  // namespace

ComplexField::ComplexField(int rows, int cols)
    : rows_(rows), cols_(cols), values_(checked_size(rows, cols)) {}

ComplexField::ComplexField(int rows, int cols, std::vector<cdouble> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  check_shape(rows, cols);
  check_length(rows, cols, values_.size());
  require_finite("complex field");
}

ComplexField ComplexField::constant(int rows, int cols, cdouble value) {
  ComplexField f(rows, cols);
  for (auto& v : f.values_) v = value;
  return f;
}

bool ComplexField::all_finite() const {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void ComplexField::require_finite(const char* what) const {
  if (!all_finite()) throw ValidationError(std::string(what) + " contains non-finite values");
}

RealField::RealField(int rows, int cols)
    : rows_(rows), cols_(cols), values_(checked_size(rows, cols)) {}

RealField::RealField(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  check_shape(rows, cols);
  check_length(rows, cols, values_.size());
  require_finite("real field");
}

RealField RealField::constant(int rows, int cols, double value) {
  RealField f(rows, cols);
  for (auto& v : f.values_) v = value;
  return f;
}

double RealField::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

bool RealField::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void RealField::require_finite(const char* what) const {
  if (!all_finite()) throw ValidationError(std::string(what) + " contains non-finite values");
}

void RealField::require_nonnegative(const char* what) const {
  require_finite(what);
  for (double v : values_) {
    if (v < 0.0) throw ValidationError(std::string(what) + " contains negative values");
  }
}

void RealField::require_unit_range(const char* what) const {
  require_finite(what);
  for (double v : values_) {
    if (v < 0.0 || v > 1.0) {
      throw ValidationError(std::string(what) + " contains values outside [0, 1]");
    }
  }
}

}  // namespace ptycho
