#include "ptycho/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <utility>

namespace ptycho {

namespace {

// Planning is not thread safe in FFTW; execution is. Plans are cached per
// thread and created under a global lock, always with FFTW_ESTIMATE so the
// chosen algorithm does not depend on runtime measurements.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanKey {
  int rows;
  int cols;
  int sign;

  bool operator<(const PlanKey& o) const {
    return std::tie(rows, cols, sign) < std::tie(o.rows, o.cols, o.sign);
  }
};

class PlanCache {
 public:
  fftw_plan get(int rows, int cols, int sign) {
    const PlanKey key{rows, cols, sign};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* buf =
        fftw_alloc_complex(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    fftw_plan plan =
        fftw_plan_dft_2d(rows, cols, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::map<PlanKey, fftw_plan> plans_;
};

thread_local PlanCache plan_cache;

void transform(const ComplexField& in, ComplexField& out, int sign) {
  if (out.rows() != in.rows() || out.cols() != in.cols()) {
    throw DimensionError("fft output shape does not match input");
  }
  if (&out != &in) out.values() = in.values();

  fftw_plan plan = plan_cache.get(in.rows(), in.cols(), sign);
  auto* data = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, data, data);

  const double scale =
      1.0 / std::sqrt(static_cast<double>(in.rows()) * static_cast<double>(in.cols()));
  for (auto& v : out.values()) v *= scale;
}

}  // namespace

ComplexField fft2(const ComplexField& in) {
  ComplexField out(in.rows(), in.cols());
  transform(in, out, FFTW_FORWARD);
  return out;
}

ComplexField ifft2(const ComplexField& in) {
  ComplexField out(in.rows(), in.cols());
  transform(in, out, FFTW_BACKWARD);
  return out;
}

void fft2_into(const ComplexField& in, ComplexField& out) { transform(in, out, FFTW_FORWARD); }

void ifft2_into(const ComplexField& in, ComplexField& out) { transform(in, out, FFTW_BACKWARD); }

}  // namespace ptycho
