#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ptycho/errors.hpp"

namespace ptycho {

using cdouble = std::complex<double>;

/// Dense row-major complex field (object, probe, or exit wave).
///
/// Finiteness is enforced whenever a field is built from external data;
/// in-place edits through operator() are the caller's responsibility.
class ComplexField {
 public:
  ComplexField() = default;
  ComplexField(int rows, int cols);  // zero-filled
  ComplexField(int rows, int cols, std::vector<cdouble> values);

  static ComplexField constant(int rows, int cols, cdouble value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  cdouble& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
  const cdouble& operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  cdouble* data() { return values_.data(); }
  const cdouble* data() const { return values_.data(); }
  std::vector<cdouble>& values() { return values_; }
  const std::vector<cdouble>& values() const { return values_; }

  bool all_finite() const;
  void require_finite(const char* what) const;  // throws ValidationError

  bool operator==(const ComplexField&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cdouble> values_;
};

/// Dense row-major real image (grayscale ground truth, intensity pattern).
class RealField {
 public:
  RealField() = default;
  RealField(int rows, int cols);  // zero-filled
  RealField(int rows, int cols, std::vector<double> values);

  static RealField constant(int rows, int cols, double value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
  const double& operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double sum() const;
  bool all_finite() const;
  void require_finite(const char* what) const;
  void require_nonnegative(const char* what) const;
  void require_unit_range(const char* what) const;  // values in [0, 1]

  bool operator==(const RealField&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

}  // namespace ptycho
