#include "ptycho/stack.hpp"

#include <string>

namespace ptycho {

void DiffractionStack::push_back(DiffractionRecord record) {
  if (record.intensity.rows() != record.intensity.cols()) {
    throw DimensionError("diffraction record must be square, got " +
                         std::to_string(record.intensity.rows()) + "x" +
                         std::to_string(record.intensity.cols()));
  }
  if (patch_size_ == 0) {
    patch_size_ = record.intensity.rows();
  } else if (record.intensity.rows() != patch_size_) {
    throw DimensionError("record size " + std::to_string(record.intensity.rows()) +
                         " does not match stack patch size " + std::to_string(patch_size_));
  }
  records_.push_back(std::move(record));
}

std::vector<Position> DiffractionStack::positions() const {
  std::vector<Position> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.position);
  return out;
}

DiffractionStack DiffractionStack::with_provenance(Provenance p) const {
  DiffractionStack out(patch_size_);
  for (const auto& r : records_) {
    if (r.provenance == p) out.push_back(r);
  }
  return out;
}

std::size_t DiffractionStack::count(Provenance p) const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.provenance == p) ++n;
  }
  return n;
}

void DiffractionStack::validate(int object_size) const {
  const int limit = object_size - patch_size_;
  if (limit < 0) {
    throw GeometryError("patch size " + std::to_string(patch_size_) + " exceeds object size " +
                        std::to_string(object_size));
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.intensity.rows() != patch_size_ || r.intensity.cols() != patch_size_) {
      throw DimensionError("record " + std::to_string(i) + " has wrong shape");
    }
    r.intensity.require_nonnegative("diffraction intensity");
    if (r.position.row < 0 || r.position.col < 0 || r.position.row > limit ||
        r.position.col > limit) {
      throw GeometryError("record " + std::to_string(i) + " position (" +
                          std::to_string(r.position.row) + ", " + std::to_string(r.position.col) +
                          ") leaves the object");
    }
  }
}

}  // namespace ptycho
