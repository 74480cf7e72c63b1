#pragma once

#include <cstdint>
#include <random>

#include "ptycho/field.hpp"
#include "ptycho/stack.hpp"

namespace ptycho {

enum class SweepOrder {
  Raster,         ///< record order as stored in the stack
  RandomShuffle,  ///< seeded shuffle, redrawn every sweep
};

struct EpieOptions {
  int sweeps = 2000;
  SweepOrder order = SweepOrder::RandomShuffle;
  std::uint64_t seed = 0;
  double alpha_real = 1.0;
  double alpha_sim = 1.0;
  double zero_guard = 1e-12;  ///< added to |F psi| before dividing
  double stop_tol = 0.0;      ///< relative object change per sweep; 0 disables

  void validate() const;
};

struct EpieState {
  ComplexField object;
  int sweep = 0;
  double last_update_norm = 0.0;  ///< relative Frobenius change of the last sweep
  std::mt19937_64 rng;
};

struct EpieResult {
  ComplexField x_hat;
  int sweeps_run = 0;
  double final_update_norm = 0.0;
};

/// One object update from one pattern: psi = P (.) patch,
/// psi' = F^-1{ sqrt(d) * F psi / (|F psi| + eps) }, then
/// patch += alpha * (P* / max|P|^2) (.) (psi' - psi). Pixels outside the
/// window are untouched. alpha is alpha_real or alpha_sim per provenance.
ComplexField epie_pattern_update(const ComplexField& x, const ComplexField& probe,
                                 const DiffractionRecord& record, const EpieOptions& opts);

/// Seeds the sweep state; the object is copied as the running estimate.
EpieState make_epie_state(const ComplexField& x0, const EpieOptions& opts);

/// One full pass over the stack, in raster or freshly shuffled order.
void epie_sweep(EpieState& state, const ComplexField& probe, const DiffractionStack& stack,
                const EpieOptions& opts);

/// Runs up to opts.sweeps passes, stopping early once the relative object
/// change drops below stop_tol (when nonzero). Deterministic given the seed.
EpieResult run_epie(const ComplexField& x0, const ComplexField& probe,
                    const DiffractionStack& stack, const EpieOptions& opts);

}  // namespace ptycho
