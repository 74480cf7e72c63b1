#include "ptycho/remix.hpp"

#include <map>
#include <string>
#include <utility>

#include "ptycho/forward.hpp"
#include "ptycho/metrics.hpp"
#include "ptycho/rng.hpp"

namespace ptycho {

void RemixConfig::validate() const {
  if (oversample < 1) throw ConfigError("oversample must be >= 1");
  if (!(weight > 0.0)) throw ConfigError("weight must be > 0");
  if (!(w_decay > 0.0) || w_decay > 1.0) throw ConfigError("w_decay must lie in (0, 1]");
  if (outer_iters < 1) throw ConfigError("outer_iters must be >= 1");
  if (epie_sweeps < 1) throw ConfigError("epie_sweeps must be >= 1");
  if (!(zero_guard > 0.0)) throw ConfigError("zero_guard must be > 0");
  if (!(alpha_base > 0.0)) throw ConfigError("alpha_base must be > 0");
}

ScanGeometry oversampled_geometry(const ScanGeometry& real_geom, int oversample) {
  real_geom.validate();
  if (oversample < 1) throw ConfigError("oversample must be >= 1");
  if (real_geom.step % oversample != 0) {
    throw ConfigError("real step " + std::to_string(real_geom.step) +
                      " is not divisible by oversample " + std::to_string(oversample));
  }
  return raster_geometry(real_geom.object_size, real_geom.probe_size,
                         real_geom.step / oversample);
}

DiffractionStack splice(const DiffractionStack& real, const DiffractionStack& simulated) {
  if (!real.empty() && real.patch_size() != simulated.patch_size()) {
    throw DimensionError("real and simulated stacks have different patch sizes");
  }

  std::map<std::pair<int, int>, std::size_t> real_at;
  for (std::size_t i = 0; i < real.size(); ++i) {
    const Position p = real[i].position;
    if (!real_at.emplace(std::make_pair(p.row, p.col), i).second) {
      throw SpliceError("duplicate real position (" + std::to_string(p.row) + ", " +
                        std::to_string(p.col) + ")");
    }
  }

  DiffractionStack out(simulated.patch_size());
  std::size_t matched = 0;
  for (const DiffractionRecord& rec : simulated) {
    const auto it = real_at.find({rec.position.row, rec.position.col});
    if (it == real_at.end()) {
      DiffractionRecord sim = rec;
      sim.provenance = Provenance::Simulated;
      out.push_back(std::move(sim));
    } else {
      DiffractionRecord sub;
      sub.position = rec.position;
      sub.provenance = Provenance::Real;
      sub.intensity = real[it->second].intensity;
      out.push_back(std::move(sub));
      ++matched;
    }
  }
  if (matched != real.size()) {
    throw SpliceError("some real positions are missing from the simulated grid");
  }
  return out;
}

namespace {

EpieResult remix_round(const ComplexField& init, const ComplexField& probe,
                       const DiffractionStack& real, const ScanGeometry& real_geom,
                       const RemixConfig& cfg) {
  const ScanGeometry dense = oversampled_geometry(real_geom, cfg.oversample);
  const DiffractionStack high = simulate_scan(init, probe, dense, Provenance::Simulated);
  const DiffractionStack mixed = splice(real, high);

  EpieOptions opts;
  opts.sweeps = cfg.epie_sweeps;
  opts.order = cfg.epie_order;
  opts.seed = cfg.seed;
  opts.alpha_real = cfg.alpha_base;
  opts.alpha_sim = cfg.alpha_base / cfg.weight;
  opts.zero_guard = cfg.zero_guard;

  const ComplexField x0 =
      ComplexField::constant(real_geom.object_size, real_geom.object_size, cdouble(1.0, 0.0));
  return run_epie(x0, probe, mixed, opts);
}

}  // namespace

ComplexField remix_once(const ComplexField& init, const ComplexField& probe,
                        const DiffractionStack& real, const ScanGeometry& real_geom,
                        const RemixConfig& cfg) {
  cfg.validate();
  return remix_round(init, probe, real, real_geom, cfg).x_hat;
}

RemixResult remix_pipeline(const ComplexField& init, const ComplexField& probe,
                           const DiffractionStack& real, const ScanGeometry& real_geom,
                           const RemixConfig& cfg, const ComplexField* truth, double phase_max) {
  cfg.validate();

  RemixResult result{init, {}};
  RemixConfig round_cfg = cfg;
  for (int round = 0; round < cfg.outer_iters; ++round) {
    round_cfg.seed = round == 0 ? cfg.seed : derive_seed(cfg.seed, static_cast<std::uint64_t>(round));
    EpieResult epie = remix_round(result.x_hat, probe, real, real_geom, round_cfg);
    result.x_hat = std::move(epie.x_hat);

    RemixRound entry;
    entry.weight = round_cfg.weight;
    entry.sweeps_run = epie.sweeps_run;
    entry.final_update_norm = epie.final_update_norm;
    if (truth != nullptr) entry.aligned_mse = aligned_field_mse(result.x_hat, *truth, phase_max);
    entry.real_misfit = l1_misfit(result.x_hat, probe, real);
    result.report.rounds.push_back(entry);

    round_cfg.weight *= cfg.w_decay;
  }
  return result;
}

}  // namespace ptycho
