#include <string>
#include <variant>
#include <vector>

#include "binary_io.hpp"
#include "ptycho/io.hpp"

namespace ptycho {

namespace {

constexpr std::uint16_t kPtaVersion = 1;
constexpr std::uint16_t kDtypeReal = 1;
constexpr std::uint16_t kDtypeComplex = 2;

std::string pta_header(std::uint16_t dtype, int rows, int cols) {
  std::string out;
  out += "PTYA";
  detail::put_u16(out, kPtaVersion);
  detail::put_u16(out, dtype);
  detail::put_u16(out, 2);  // ndim
  detail::put_u16(out, 0);  // pad
  detail::put_u64(out, static_cast<std::uint64_t>(rows));
  detail::put_u64(out, static_cast<std::uint64_t>(cols));
  return out;
}

}  // namespace

void write_pta(const std::string& path, const RealField& field) {
  std::string out = pta_header(kDtypeReal, field.rows(), field.cols());
  out.reserve(out.size() + field.size() * 8);
  for (double v : field.values()) detail::put_f64(out, v);
  detail::write_file(path, out);
}

void write_pta(const std::string& path, const ComplexField& field) {
  std::string out = pta_header(kDtypeComplex, field.rows(), field.cols());
  out.reserve(out.size() + field.size() * 16);
  for (const cdouble& v : field.values()) {
    detail::put_f64(out, v.real());
    detail::put_f64(out, v.imag());
  }
  detail::write_file(path, out);
}

std::variant<RealField, ComplexField> read_pta(const std::string& path) {
  detail::Reader r(detail::read_file(path), path);
  r.expect_magic("PTYA");
  if (r.get_u16() != kPtaVersion) r.fail("unsupported PTA version");
  const std::uint16_t dtype = r.get_u16();
  if (dtype != kDtypeReal && dtype != kDtypeComplex) r.fail("unknown PTA dtype");
  const std::uint16_t ndim = r.get_u16();
  if (ndim != 2) r.fail("only 2-d PTA arrays are supported");
  if (r.get_u16() != 0) r.fail("nonzero pad field");
  const std::uint64_t rows = r.get_u64();
  const std::uint64_t cols = r.get_u64();
  if (rows < 1 || cols < 1 || rows > (1u << 20) || cols > (1u << 20)) r.fail("bad dimensions");
  const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);

  try {
    if (dtype == kDtypeReal) {
      std::vector<double> values(n);
      for (auto& v : values) v = r.get_f64();
      r.expect_end();
      return RealField(static_cast<int>(rows), static_cast<int>(cols), std::move(values));
    }
    std::vector<cdouble> values(n);
    for (auto& v : values) {
      const double re = r.get_f64();
      const double im = r.get_f64();
      v = cdouble(re, im);
    }
    r.expect_end();
    return ComplexField(static_cast<int>(rows), static_cast<int>(cols), std::move(values));
  } catch (const ValidationError& e) {
    throw IoError(path + ": " + e.what());
  }
}

RealField read_pta_real(const std::string& path) {
  auto v = read_pta(path);
  if (!std::holds_alternative<RealField>(v)) {
    throw IoError(path + ": expected a real PTA array");
  }
  return std::get<RealField>(std::move(v));
}

ComplexField read_pta_complex(const std::string& path) {
  auto v = read_pta(path);
  if (!std::holds_alternative<ComplexField>(v)) {
    throw IoError(path + ": expected a complex PTA array");
  }
  return std::get<ComplexField>(std::move(v));
}

}  // namespace ptycho
