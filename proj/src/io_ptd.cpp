#include <string>
#include <vector>

#include "binary_io.hpp"
#include "ptycho/io.hpp"

namespace ptycho {

namespace {

constexpr std::uint16_t kPtdVersion = 1;

}  // namespace

void write_ptd(const std::string& path, const DiffractionStack& stack) {
  const int S = stack.patch_size();
  std::string out;
  out += "PTYD";
  detail::put_u16(out, kPtdVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(S));
  detail::put_u64(out, static_cast<std::uint64_t>(stack.size()));
  out.reserve(out.size() + stack.size() * (12 + static_cast<std::size_t>(S) * S * 8));
  for (const DiffractionRecord& rec : stack) {
    detail::put_i32(out, rec.position.row);
    detail::put_i32(out, rec.position.col);
    out.push_back(static_cast<char>(rec.provenance));
    out.append(3, '\0');
    for (double v : rec.intensity.values()) detail::put_f64(out, v);
  }
  detail::write_file(path, out);
}

DiffractionStack read_ptd(const std::string& path) {
  detail::Reader r(detail::read_file(path), path);
  r.expect_magic("PTYD");
  if (r.get_u16() != kPtdVersion) r.fail("unsupported PTD version");
  const std::uint32_t S = r.get_u32();
  if (S < 1 || S > (1u << 16)) r.fail("bad patch size");
  const std::uint64_t count = r.get_u64();

  DiffractionStack stack(static_cast<int>(S));
  const std::size_t pixels = static_cast<std::size_t>(S) * S;
  for (std::uint64_t i = 0; i < count; ++i) {
    DiffractionRecord rec;
    rec.position.row = r.get_i32();
    rec.position.col = r.get_i32();
    const std::uint8_t prov = r.get_u8();
    if (prov > 1) r.fail("unknown provenance tag");
    rec.provenance = static_cast<Provenance>(prov);
    r.get_bytes(3);  // pad
    std::vector<double> values(pixels);
    for (auto& v : values) v = r.get_f64();
    try {
      rec.intensity = RealField(static_cast<int>(S), static_cast<int>(S), std::move(values));
    } catch (const ValidationError& e) {
      throw IoError(path + ": " + e.what());
    }
    rec.intensity.require_finite("intensity");
    for (double v : rec.intensity.values()) {
      if (v < 0.0) r.fail("negative intensity value");
    }
    stack.push_back(std::move(rec));
  }
  r.expect_end();
  return stack;
}

}  // namespace ptycho
