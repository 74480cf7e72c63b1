#include "ptycho/epie.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ptycho/fft.hpp"

namespace ptycho {

void EpieOptions::validate() const {
  if (sweeps < 1) throw ValidationError("sweeps must be >= 1");
  if (!(zero_guard > 0.0)) throw ValidationError("zero_guard must be > 0");
  if (stop_tol < 0.0) throw ValidationError("stop_tol must be >= 0");
  if (!std::isfinite(alpha_real) || !std::isfinite(alpha_sim)) {
    throw ValidationError("alpha values must be finite");
  }
}

namespace {

double max_probe_power(const ComplexField& probe) {
  double m = 0.0;
  for (const auto& p : probe.values()) m = std::max(m, std::norm(p));
  if (m == 0.0) throw ValidationError("degenerate probe: max |P|^2 is zero");
  return m;
}

void check_window(const ComplexField& x, int S, Position pos) {
  if (pos.row < 0 || pos.col < 0 || pos.row + S > x.rows() || pos.col + S > x.cols()) {
    throw GeometryError("probe window at (" + std::to_string(pos.row) + ", " +
                        std::to_string(pos.col) + ") leaves the object");
  }
}

// The update touches the S x S patch only; buffers are caller-provided so a
// sweep reuses them across records.
void update_in_place(ComplexField& x, const ComplexField& probe, double max_p2,
                     const DiffractionRecord& rec, double alpha, double eps, ComplexField& psi,
                     ComplexField& work) {
  const int S = probe.rows();
  const int r0 = rec.position.row;
  const int c0 = rec.position.col;

  for (int u = 0; u < S; ++u) {
    for (int v = 0; v < S; ++v) {
      psi(u, v) = probe(u, v) * x(r0 + u, c0 + v);
    }
  }

  fft2_into(psi, work);
  const std::vector<double>& d = rec.intensity.values();
  for (std::size_t k = 0; k < work.size(); ++k) {
    // sqrt(norm) rather than abs: bitwise-matches sqrt(d) on consistent data
    const double modulus = std::sqrt(std::norm(work.values()[k]));
    work.values()[k] *= std::sqrt(d[k]) / (modulus + eps);
  }
  ifft2_into(work, work);

  const double scale = alpha / max_p2;
  for (int u = 0; u < S; ++u) {
    for (int v = 0; v < S; ++v) {
      x(r0 + u, c0 + v) += scale * std::conj(probe(u, v)) * (work(u, v) - psi(u, v));
    }
  }
}

void check_shapes(const ComplexField& x, const ComplexField& probe,
                  const DiffractionStack& stack) {
  if (probe.rows() != probe.cols()) throw DimensionError("probe must be square");
  if (x.rows() != x.cols()) throw DimensionError("object must be square");
  if (stack.patch_size() != probe.rows()) {
    throw DimensionError("stack patch size " + std::to_string(stack.patch_size()) +
                         " does not match probe size " + std::to_string(probe.rows()));
  }
}

}  // namespace

ComplexField epie_pattern_update(const ComplexField& x, const ComplexField& probe,
                                 const DiffractionRecord& record, const EpieOptions& opts) {
  opts.validate();
  if (probe.rows() != probe.cols()) throw DimensionError("probe must be square");
  if (record.intensity.rows() != probe.rows() || record.intensity.cols() != probe.cols()) {
    throw DimensionError("record intensity shape does not match probe");
  }
  record.intensity.require_nonnegative("diffraction intensity");
  check_window(x, probe.rows(), record.position);

  const double max_p2 = max_probe_power(probe);
  const double alpha = record.provenance == Provenance::Real ? opts.alpha_real : opts.alpha_sim;

  ComplexField out = x;
  ComplexField psi(probe.rows(), probe.cols());
  ComplexField work(probe.rows(), probe.cols());
  update_in_place(out, probe, max_p2, record, alpha, opts.zero_guard, psi, work);
  return out;
}

EpieState make_epie_state(const ComplexField& x0, const EpieOptions& opts) {
  opts.validate();
  EpieState state;
  state.object = x0;
  state.rng.seed(opts.seed);
  return state;
}

void epie_sweep(EpieState& state, const ComplexField& probe, const DiffractionStack& stack,
                const EpieOptions& opts) {
  check_shapes(state.object, probe, stack);
  if (stack.empty()) throw ValidationError("diffraction stack is empty");

  const double max_p2 = max_probe_power(probe);
  std::vector<std::size_t> order(stack.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (opts.order == SweepOrder::RandomShuffle) {
    std::shuffle(order.begin(), order.end(), state.rng);
  }

  const ComplexField before = state.object;
  ComplexField psi(probe.rows(), probe.cols());
  ComplexField work(probe.rows(), probe.cols());
  for (std::size_t idx : order) {
    const DiffractionRecord& rec = stack[idx];
    check_window(state.object, probe.rows(), rec.position);
    const double alpha = rec.provenance == Provenance::Real ? opts.alpha_real : opts.alpha_sim;
    update_in_place(state.object, probe, max_p2, rec, alpha, opts.zero_guard, psi, work);
  }

  double diff2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    diff2 += std::norm(state.object.values()[i] - before.values()[i]);
    ref2 += std::norm(before.values()[i]);
  }
  state.last_update_norm = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
  state.sweep += 1;

  if (!state.object.all_finite()) {
    throw NumericError("object estimate became non-finite at sweep " +
                       std::to_string(state.sweep));
  }
}

EpieResult run_epie(const ComplexField& x0, const ComplexField& probe,
                    const DiffractionStack& stack, const EpieOptions& opts) {
  opts.validate();
  check_shapes(x0, probe, stack);
  if (stack.empty()) throw ValidationError("diffraction stack is empty");
  stack.validate(x0.rows());
  x0.require_finite("initial object");

  EpieState state = make_epie_state(x0, opts);
  while (state.sweep < opts.sweeps) {
    epie_sweep(state, probe, stack, opts);
    if (opts.stop_tol > 0.0 && state.last_update_norm < opts.stop_tol) break;
  }
  return {std::move(state.object), state.sweep, state.last_update_norm};
}

}  // namespace ptycho
