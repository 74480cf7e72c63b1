#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptycho/epie.hpp"
#include "ptycho/field.hpp"
#include "ptycho/forward.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/io.hpp"
#include "ptycho/metrics.hpp"
#include "ptycho/remix.hpp"
#include "ptycho/stack.hpp"

namespace {

using nlohmann::json;
using namespace ptycho;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

SweepOrder parse_order(const std::string& s) {
  if (s == "raster") return SweepOrder::Raster;
  if (s == "shuffle") return SweepOrder::RandomShuffle;
  throw ConfigError("order must be \"raster\" or \"shuffle\", got \"" + s + "\"");
}

ProbeProfile parse_profile(const std::string& s) {
  if (s == "tophat") return ProbeProfile::TopHat;
  if (s == "gaussian") return ProbeProfile::GaussianEdge;
  throw ConfigError("profile must be \"tophat\" or \"gaussian\", got \"" + s + "\"");
}

Provenance parse_provenance(const std::string& s) {
  if (s == "real") return Provenance::Real;
  if (s == "simulated") return Provenance::Simulated;
  throw ConfigError("provenance must be \"real\" or \"simulated\", got \"" + s + "\"");
}

/// Truth arrays may be stored as a complex object or as its gray map.
RealField truth_gray_from_pta(const std::string& path, double phase_max) {
  auto v = read_pta(path);
  if (std::holds_alternative<RealField>(v)) {
    RealField gray = std::get<RealField>(std::move(v));
    gray.require_unit_range("truth gray image");
    return gray;
  }
  const ComplexField& truth = std::get<ComplexField>(v);
  RealField gray(truth.rows(), truth.cols());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double g = std::arg(truth.values()[i]) / phase_max;
    g = g < 0.0 ? 0.0 : (g > 1.0 ? 1.0 : g);
    gray.values()[i] = g;
  }
  return gray;
}

ComplexField truth_complex_from_pta(const std::string& path, double phase_max) {
  auto v = read_pta(path);
  if (std::holds_alternative<ComplexField>(v)) return std::get<ComplexField>(std::move(v));
  return make_phantom(std::get<RealField>(v), phase_max);
}

ScanGeometry geometry_from_stack(int object_size, const DiffractionStack& stack, int step) {
  ScanGeometry geom;
  geom.object_size = object_size;
  geom.probe_size = stack.patch_size();
  geom.step = step;
  geom.positions = stack.positions();
  geom.validate();
  return geom;
}

json remix_report_json(const RemixReport& report) {
  json rounds = json::array();
  for (const RemixRound& r : report.rounds) {
    json entry;
    entry["weight"] = r.weight;
    entry["sweeps_run"] = r.sweeps_run;
    entry["final_update_norm"] = r.final_update_norm;
    entry["aligned_mse"] = r.aligned_mse ? json(*r.aligned_mse) : json(nullptr);
    entry["real_misfit"] = r.real_misfit;
    rounds.push_back(entry);
  }
  return json{{"rounds", rounds}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

// ---- phantom ----

struct PhantomArgs {
  std::string image;
  double phase_max = 1.0;
  std::string output;
};

void cmd_phantom(const PhantomArgs& a) {
  RealField gray(1, 1);
  try {
    gray = read_png_gray(a.image);
  } catch (const IoError& e) {
    // the input image is user configuration; undecodable input is a usage error
    throw ConfigError(e.what());
  }
  write_pta(a.output, make_phantom(gray, a.phase_max));
  std::cout << "phantom " << gray.rows() << "x" << gray.cols() << " -> " << a.output << "\n";
}

// ---- probe ----

struct ProbeArgs {
  ProbeSpec spec;
  std::string profile = "tophat";
  std::string output;
};

void cmd_probe(ProbeArgs& a) {
  a.spec.profile = parse_profile(a.profile);
  write_pta(a.output, make_probe(a.spec));
  std::cout << "probe " << a.spec.size << "x" << a.spec.size << " diameter " << a.spec.diameter
            << " -> " << a.output << "\n";
}

// ---- scan ----

struct ScanArgs {
  int object_size = 0;
  int probe_size = 0;
  int step = 0;
  std::string output;
};

void cmd_scan(const ScanArgs& a) {
  const ScanGeometry geom = raster_geometry(a.object_size, a.probe_size, a.step);
  write_positions_csv(a.output, geom.positions);
  std::cout << geom.positions.size() << " positions, overlap "
            << overlap_percent(a.probe_size, a.step) << "% -> " << a.output << "\n";
}

// ---- simulate ----

struct SimulateArgs {
  std::string object;
  std::string probe;
  std::string positions;
  int step = 0;
  std::string provenance = "real";
  std::string output;
};

void cmd_simulate(const SimulateArgs& a) {
  const ComplexField object = read_pta_complex(a.object);
  const ComplexField probe = read_pta_complex(a.probe);
  if (object.rows() != object.cols()) throw ConfigError("object PTA must be square");
  if (probe.rows() != probe.cols()) throw ConfigError("probe PTA must be square");

  ScanGeometry geom;
  if (!a.positions.empty()) {
    geom.object_size = object.rows();
    geom.probe_size = probe.rows();
    geom.step = a.step > 0 ? a.step : 1;
    geom.positions = read_positions_csv(a.positions);
    geom.validate();
  } else {
    geom = raster_geometry(object.rows(), probe.rows(), a.step);
  }

  const DiffractionStack stack =
      simulate_scan(object, probe, geom, parse_provenance(a.provenance));
  write_ptd(a.output, stack);
  std::cout << stack.size() << " patterns -> " << a.output << "\n";
}

// ---- noise ----

struct NoiseArgs {
  std::string input;
  NoiseSpec spec;
  std::string output;
};

void cmd_noise(const NoiseArgs& a) {
  const DiffractionStack noisy = add_poisson_noise(read_ptd(a.input), a.spec);
  write_ptd(a.output, noisy);
  std::cout << noisy.size() << " noisy patterns -> " << a.output << "\n";
}

// ---- epie ----

struct EpieArgs {
  std::string data;
  std::string probe;
  std::string init;
  int object_size = 0;
  EpieOptions opts;
  std::string order = "shuffle";
  std::string output;
};

void cmd_epie(EpieArgs& a) {
  const DiffractionStack stack = read_ptd(a.data);
  const ComplexField probe = read_pta_complex(a.probe);
  a.opts.order = parse_order(a.order);

  ComplexField x0(1, 1);
  if (!a.init.empty()) {
    x0 = read_pta_complex(a.init);
  } else if (a.object_size > 0) {
    x0 = ComplexField::constant(a.object_size, a.object_size, cdouble(1.0, 0.0));
  } else {
    throw ConfigError("provide --init or --object-size");
  }

  const EpieResult res = run_epie(x0, probe, stack, a.opts);
  res.x_hat.require_finite("reconstruction");
  write_pta(a.output, res.x_hat);
  std::cout << "epie: " << res.sweeps_run << " sweeps, final update norm "
            << res.final_update_norm << " -> " << a.output << "\n";
}

// ---- remix ----

struct RemixArgs {
  std::string init;
  std::string probe;
  std::string data;
  int step = 0;
  RemixConfig cfg;
  std::string order = "shuffle";
  std::string truth;
  double phase_max = 1.0;
  std::string output;
  std::string report;
};

void cmd_remix(RemixArgs& a) {
  const ComplexField init = read_pta_complex(a.init);
  const ComplexField probe = read_pta_complex(a.probe);
  const DiffractionStack real = read_ptd(a.data);
  if (init.rows() != init.cols()) throw ConfigError("init PTA must be square");
  a.cfg.epie_order = parse_order(a.order);

  const ScanGeometry geom = geometry_from_stack(init.rows(), real, a.step);

  std::optional<ComplexField> truth;
  if (!a.truth.empty()) truth = truth_complex_from_pta(a.truth, a.phase_max);

  const RemixResult res = remix_pipeline(init, probe, real, geom, a.cfg,
                                         truth ? &*truth : nullptr, a.phase_max);
  res.x_hat.require_finite("reconstruction");
  write_pta(a.output, res.x_hat);
  if (!a.report.empty()) write_text_file(a.report, remix_report_json(res.report).dump(2) + "\n");

  for (std::size_t i = 0; i < res.report.rounds.size(); ++i) {
    const RemixRound& r = res.report.rounds[i];
    std::cout << "round " << i + 1 << ": w " << r.weight << ", " << r.sweeps_run << " sweeps";
    if (r.aligned_mse) std::cout << ", aligned mse " << *r.aligned_mse;
    std::cout << ", real misfit " << r.real_misfit << "\n";
  }
  std::cout << "remix -> " << a.output << "\n";
}

// ---- metrics ----

struct MetricsArgs {
  std::string recon;
  std::string truth;
  double phase_max = 1.0;
  std::string data;
  std::string probe;
  double zero_guard = 1e-12;
  std::string output;
};

void cmd_metrics(const MetricsArgs& a) {
  const ComplexField recon = read_pta_complex(a.recon);

  json report;
  report["tv"] = total_variation(recon);
  report["aligned_mse"] = nullptr;
  report["l1_misfit"] = nullptr;
  report["poisson_nll"] = nullptr;
  report["coverage_fraction"] = nullptr;

  if (!a.truth.empty()) {
    const RealField gray = truth_gray_from_pta(a.truth, a.phase_max);
    report["aligned_mse"] = aligned_mse(recon, gray, a.phase_max);
  }
  if (!a.data.empty()) {
    if (a.probe.empty()) throw ConfigError("--data requires --probe for the misfit terms");
    const DiffractionStack stack = read_ptd(a.data);
    const ComplexField probe = read_pta_complex(a.probe);
    report["l1_misfit"] = l1_misfit(recon, probe, stack);
    report["poisson_nll"] = poisson_nll(recon, probe, stack, a.zero_guard);
    report["coverage_fraction"] = coverage_fraction(geometry_from_stack(recon.rows(), stack, 1));
  }

  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!a.output.empty()) write_text_file(a.output, text);
}

// ---- render ----

struct RenderArgs {
  std::string input;
  std::string mode = "phase";
  int bits = 8;
  std::string output;
};

void cmd_render(const RenderArgs& a) {
  if (a.mode != "phase" && a.mode != "amplitude") {
    throw ConfigError("mode must be \"phase\" or \"amplitude\"");
  }
  const ComplexField field = read_pta_complex(a.input);
  RealField image(field.rows(), field.cols());
  if (a.mode == "phase") {
    // [-pi, pi] maps onto the full gray range
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < field.size(); ++i) {
      image.values()[i] = (std::arg(field.values()[i]) + std::numbers::pi) / two_pi;
    }
  } else {
    // amplitudes above 1 saturate
    for (std::size_t i = 0; i < field.size(); ++i) {
      image.values()[i] = std::abs(field.values()[i]);
    }
  }
  write_png_gray(a.output, image, a.bits);
  std::cout << a.mode << " -> " << a.output << "\n";
}

// ---- sweep ----

struct SweepArgs {
  std::string config;
  std::string param;
  std::vector<double> values;
  std::string output;
};

struct SweepRow {
  double value = 0.0;
  double aligned_mse = std::numeric_limits<double>::quiet_NaN();
  double runtime_s = 0.0;
  std::string status = "ok";
};

SweepRow sweep_one(const RunConfig& base, const std::string& param, double value, int index,
                   const ComplexField& init, const ComplexField& probe,
                   const DiffractionStack& data, const std::optional<ComplexField>& truth,
                   const std::optional<RealField>& truth_gray) {
  SweepRow row;
  row.value = value;
  const auto start = std::chrono::steady_clock::now();
  try {
    RunConfig cfg = base;
    DiffractionStack real = data;
    if (param == "weight") {
      cfg.remix.weight = value;
    } else if (param == "oversample") {
      if (value < 1.0 || value != std::floor(value)) {
        throw ConfigError("oversample values must be positive integers");
      }
      cfg.remix.oversample = static_cast<int>(value);
    } else if (param == "overlap") {
      if (value < 1.0 || value != std::floor(value)) {
        throw ConfigError("overlap step values must be positive integers");
      }
      if (!truth) throw ConfigError("overlap sweeps need \"truth\" in the run config");
      cfg.step = static_cast<int>(value);
      const ScanGeometry geom = raster_geometry(init.rows(), probe.rows(), cfg.step);
      real = simulate_scan(*truth, probe, geom, Provenance::Real);
      if (cfg.noise) real = add_poisson_noise(real, *cfg.noise);
    } else {
      throw ConfigError("param must be weight, oversample, or overlap");
    }

    const ScanGeometry geom = geometry_from_stack(init.rows(), real, cfg.step);
    const RemixResult res = remix_pipeline(init, probe, real, geom, cfg.remix,
                                           truth ? &*truth : nullptr, cfg.phase_max);
    res.x_hat.require_finite("reconstruction");
    write_pta(cfg.output_path + "." + param + "." + std::to_string(index) + ".pta", res.x_hat);
    if (truth_gray) row.aligned_mse = aligned_mse(res.x_hat, *truth_gray, cfg.phase_max);
  } catch (const Error& e) {
    std::string what = e.what();
    for (char& c : what) {
      if (c == ',' || c == '\n') c = ';';
    }
    row.status = "error: " + what;
  }
  row.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

void cmd_sweep(const SweepArgs& a) {
  if (a.values.empty()) throw ConfigError("--values must not be empty");
  const RunConfig base = load_run_config(a.config);
  const ComplexField init = read_pta_complex(base.init_path);
  const ComplexField probe = read_pta_complex(base.probe_path);
  const DiffractionStack data = read_ptd(base.data_path);
  std::optional<ComplexField> truth;
  std::optional<RealField> truth_gray;
  if (base.truth_path) {
    truth = truth_complex_from_pta(*base.truth_path, base.phase_max);
    truth_gray = truth_gray_from_pta(*base.truth_path, base.phase_max);
  }

  std::ostringstream csv;
  csv << "value,aligned_mse,runtime_s,status\n";
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const SweepRow row = sweep_one(base, a.param, a.values[i], static_cast<int>(i), init, probe,
                                   data, truth, truth_gray);
    csv << row.value << ',' << row.aligned_mse << ',' << row.runtime_s << ',' << row.status
        << '\n';
    std::cout << a.param << " = " << row.value << ": "
              << (row.status == "ok" ? "aligned mse " + std::to_string(row.aligned_mse)
                                     : row.status)
              << " (" << row.runtime_s << " s)\n";
  }
  write_text_file(a.output, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ptychography toolkit: simulation, ePIE reconstruction, remix pipeline"};
  app.require_subcommand(1);

  PhantomArgs phantom_args;
  auto* phantom = app.add_subcommand("phantom", "Build a phase-only object from a grayscale PNG");
  phantom->add_option("--image", phantom_args.image, "8/16-bit grayscale PNG")->required();
  phantom->add_option("--phase-max", phantom_args.phase_max, "phase at gray level 1.0 (radians)");
  phantom->add_option("-o,--output", phantom_args.output, "output PTA")->required();
  phantom->callback([&] { cmd_phantom(phantom_args); });

  ProbeArgs probe_args;
  auto* probe = app.add_subcommand("probe", "Generate a flat-phase disk probe");
  probe->add_option("--size", probe_args.spec.size, "grid size S");
  probe->add_option("--diameter", probe_args.spec.diameter, "disk diameter in pixels");
  probe->add_option("--profile", probe_args.profile, "tophat or gaussian");
  probe->add_option("--edge-sigma", probe_args.spec.edge_sigma, "Gaussian rim width");
  probe->add_option("--amplitude", probe_args.spec.amplitude, "disk amplitude");
  probe->add_option("-o,--output", probe_args.output, "output PTA")->required();
  probe->callback([&] { cmd_probe(probe_args); });

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Write raster scan positions as CSV");
  scan->add_option("--object-size", scan_args.object_size, "object size T")->required();
  scan->add_option("--probe-size", scan_args.probe_size, "probe size S")->required();
  scan->add_option("--step", scan_args.step, "raster step in pixels")->required();
  scan->add_option("-o,--output", scan_args.output, "output CSV")->required();
  scan->callback([&] { cmd_scan(scan_args); });

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Simulate diffraction patterns for a scan");
  sim->add_option("--object", sim_args.object, "object PTA (complex)")->required();
  sim->add_option("--probe", sim_args.probe, "probe PTA (complex)")->required();
  sim->add_option("--positions", sim_args.positions, "positions CSV");
  sim->add_option("--step", sim_args.step, "raster step (alternative to --positions)");
  sim->add_option("--provenance", sim_args.provenance, "real or simulated");
  sim->add_option("-o,--output", sim_args.output, "output PTD")->required();
  sim->callback([&] {
    if (sim_args.positions.empty() && sim_args.step <= 0) {
      throw ConfigError("provide --positions or --step");
    }
    cmd_simulate(sim_args);
  });

  NoiseArgs noise_args;
  auto* noise = app.add_subcommand("noise", "Add Poisson photon noise to a stack");
  noise->add_option("--input", noise_args.input, "input PTD")->required();
  noise->add_option("--photon-scale", noise_args.spec.photon_scale,
                    "expected photons per unit intensity")
      ->required();
  noise->add_option("--seed", noise_args.spec.seed, "noise seed");
  noise->add_option("-o,--output", noise_args.output, "output PTD")->required();
  noise->callback([&] { cmd_noise(noise_args); });

  EpieArgs epie_args;
  auto* epie = app.add_subcommand("epie", "Reconstruct with ePIE");
  epie->add_option("--data", epie_args.data, "diffraction PTD")->required();
  epie->add_option("--probe", epie_args.probe, "probe PTA")->required();
  epie->add_option("--init", epie_args.init, "initial object PTA (default flat ones)");
  epie->add_option("--object-size", epie_args.object_size, "object size T for the flat start");
  epie->add_option("--sweeps", epie_args.opts.sweeps, "max full passes");
  epie->add_option("--order", epie_args.order, "raster or shuffle");
  epie->add_option("--seed", epie_args.opts.seed, "shuffle seed");
  epie->add_option("--alpha-real", epie_args.opts.alpha_real, "step size for real records");
  epie->add_option("--alpha-sim", epie_args.opts.alpha_sim, "step size for simulated records");
  epie->add_option("--zero-guard", epie_args.opts.zero_guard, "modulus division guard");
  epie->add_option("--stop-tol", epie_args.opts.stop_tol, "relative-change early stop");
  epie->add_option("-o,--output", epie_args.output, "output PTA")->required();
  epie->callback([&] { cmd_epie(epie_args); });

  RemixArgs remix_args;
  auto* remix = app.add_subcommand("remix", "Oversample-and-splice reconstruction pipeline");
  remix->add_option("--init", remix_args.init, "initial reconstruction PTA")->required();
  remix->add_option("--probe", remix_args.probe, "probe PTA")->required();
  remix->add_option("--data", remix_args.data, "real diffraction PTD")->required();
  remix->add_option("--step", remix_args.step, "real scan step in pixels")->required();
  remix->add_option("--oversample", remix_args.cfg.oversample, "oversampling ratio Y");
  remix->add_option("--weight", remix_args.cfg.weight, "simulated-data down-weight w");
  remix->add_option("--w-decay", remix_args.cfg.w_decay, "w multiplier per outer round");
  remix->add_option("--outer", remix_args.cfg.outer_iters, "outer rounds");
  remix->add_option("--sweeps", remix_args.cfg.epie_sweeps, "ePIE sweeps per round");
  remix->add_option("--order", remix_args.order, "raster or shuffle");
  remix->add_option("--seed", remix_args.cfg.seed, "seed");
  remix->add_option("--zero-guard", remix_args.cfg.zero_guard, "modulus division guard");
  remix->add_option("--alpha-base", remix_args.cfg.alpha_base, "base ePIE step size");
  remix->add_option("--truth", remix_args.truth, "ground truth PTA for per-round metrics");
  remix->add_option("--phase-max", remix_args.phase_max, "gray-to-phase scale");
  remix->add_option("-o,--output", remix_args.output, "output PTA")->required();
  remix->add_option("--report", remix_args.report, "per-round report JSON");
  remix->callback([&] { cmd_remix(remix_args); });

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Evaluate reconstruction quality metrics");
  metrics->add_option("--recon", metrics_args.recon, "reconstruction PTA")->required();
  metrics->add_option("--truth", metrics_args.truth, "ground truth PTA (real or complex)");
  metrics->add_option("--phase-max", metrics_args.phase_max, "gray-to-phase scale");
  metrics->add_option("--data", metrics_args.data, "diffraction PTD for misfit terms");
  metrics->add_option("--probe", metrics_args.probe, "probe PTA (needed with --data)");
  metrics->add_option("--zero-guard", metrics_args.zero_guard, "Poisson NLL log guard");
  metrics->add_option("-o,--output", metrics_args.output, "also write the JSON here");
  metrics->callback([&] { cmd_metrics(metrics_args); });

  RenderArgs render_args;
  auto* render = app.add_subcommand("render", "Render a complex PTA as a grayscale PNG");
  render->add_option("--input", render_args.input, "input PTA (complex)")->required();
  render->add_option("--mode", render_args.mode, "phase or amplitude");
  render->add_option("--bits", render_args.bits, "8 or 16");
  render->add_option("-o,--output", render_args.output, "output PNG")->required();
  render->callback([&] { cmd_render(render_args); });

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run the remix pipeline over a parameter grid");
  sweep->add_option("--config", sweep_args.config, "base run-config JSON")->required();
  sweep->add_option("--param", sweep_args.param, "weight, oversample, or overlap")->required();
  sweep->add_option("--values", sweep_args.values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--output", sweep_args.output, "output CSV")->required();
  sweep->callback([&] { cmd_sweep(sweep_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
