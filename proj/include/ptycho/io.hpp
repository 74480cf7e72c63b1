#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ptycho/field.hpp"
#include "ptycho/forward.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/remix.hpp"
#include "ptycho/stack.hpp"

namespace ptycho {

// PTA array container: "PTYA" | u16 version=1 | u16 dtype (1 real float64,
// 2 complex float64 interleaved re,im) | u16 ndim | u16 pad=0 |
// ndim x u64 dims | row-major little-endian payload.
void write_pta(const std::string& path, const RealField& field);
void write_pta(const std::string& path, const ComplexField& field);
std::variant<RealField, ComplexField> read_pta(const std::string& path);
RealField read_pta_real(const std::string& path);
ComplexField read_pta_complex(const std::string& path);

// PTD diffraction stack: "PTYD" | u16 version=1 | u32 S | u64 count | per
// record { i32 row, i32 col, u8 provenance (0 Real, 1 Simulated), 3 pad
// bytes, S*S float64 little-endian intensities }.
void write_ptd(const std::string& path, const DiffractionStack& stack);
DiffractionStack read_ptd(const std::string& path);

// Positions as CSV with header "index,row,col".
void write_positions_csv(const std::string& path, const std::vector<Position>& positions);
std::vector<Position> read_positions_csv(const std::string& path);

// Grayscale PNG. Reading accepts 8/16-bit gray (alpha stripped) and scales
// to [0, 1] by 1/255 or 1/65535; writing clamps to [0, 1] first.
RealField read_png_gray(const std::string& path);
void write_png_gray(const std::string& path, const RealField& image, int bit_depth = 8);

/// JSON run description consumed by the remix and sweep commands. Unknown
/// keys are rejected so typos cannot silently change a run.
struct RunConfig {
  RemixConfig remix;
  std::optional<NoiseSpec> noise;  ///< applied when a sweep re-simulates data
  std::string init_path;
  std::string probe_path;
  std::string data_path;
  std::optional<std::string> truth_path;
  std::string output_path;
  int step = 0;  ///< real scan step in pixels
  double phase_max = 1.0;
};

RunConfig load_run_config(const std::string& path);

}  // namespace ptycho
