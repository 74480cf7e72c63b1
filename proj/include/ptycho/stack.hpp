#pragma once

#include <cstdint>
#include <vector>

#include "ptycho/field.hpp"
#include "ptycho/geometry.hpp"

namespace ptycho {

/// Where a diffraction record came from.
enum class Provenance : std::uint8_t {
  Real = 0,       ///< measured (or treated as measured)
  Simulated = 1,  ///< synthesized from a reconstruction
};

/// One diffraction pattern together with its scan position and origin.
struct DiffractionRecord {
  Position position;
  Provenance provenance = Provenance::Real;
  RealField intensity;  ///< S x S nonnegative intensity
};

/// An ordered collection of diffraction records sharing one patch size.
class DiffractionStack {
 public:
  DiffractionStack() = default;
  explicit DiffractionStack(int patch_size) : patch_size_(patch_size) {}

  int patch_size() const { return patch_size_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const DiffractionRecord& operator[](std::size_t i) const { return records_[i]; }
  DiffractionRecord& operator[](std::size_t i) { return records_[i]; }

  const std::vector<DiffractionRecord>& records() const { return records_; }

  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  /// Appends a record; adopts its patch size if the stack is still empty.
  void push_back(DiffractionRecord record);

  /// Scan positions in record order.
  std::vector<Position> positions() const;

  /// Records matching one provenance, preserving order.
  DiffractionStack with_provenance(Provenance p) const;

  /// Number of records with the given provenance.
  std::size_t count(Provenance p) const;

  /// Checks patch sizes, nonnegative finite intensities, and in-bounds
  /// positions against the geometry implied by object_size.
  void validate(int object_size) const;

 private:
  int patch_size_ = 0;
  std::vector<DiffractionRecord> records_;
};

}  // namespace ptycho
