#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>

#include <cstring>
#include <string>
#include <vector>

#include "ptycho/epie.hpp"
#include "ptycho/field.hpp"
#include "ptycho/forward.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/io.hpp"
#include "ptycho/metrics.hpp"
#include "ptycho/remix.hpp"
#include "ptycho/stack.hpp"

namespace py = pybind11;

namespace {

using ptycho::cdouble;
using ptycho::ComplexField;
using ptycho::DiffractionStack;
using ptycho::Position;
using ptycho::Provenance;
using ptycho::RealField;
using ptycho::ScanGeometry;

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IArray = py::array_t<long long, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

ComplexField to_complex(const CArray& a, const char* name) {
  if (a.ndim() != 2) throw py::value_error(std::string(name) + " must be a 2-d array");
  std::vector<cdouble> values(a.data(), a.data() + a.size());
  return ComplexField(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                      std::move(values));
}

RealField to_real(const DArray& a, const char* name) {
  if (a.ndim() != 2) throw py::value_error(std::string(name) + " must be a 2-d array");
  std::vector<double> values(a.data(), a.data() + a.size());
  return RealField(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                   std::move(values));
}

py::array_t<std::complex<double>> from_complex(const ComplexField& f) {
  py::array_t<std::complex<double>> out({f.rows(), f.cols()});
  std::memcpy(out.mutable_data(), f.data(), f.size() * sizeof(cdouble));
  return out;
}

py::array_t<double> from_real(const RealField& f) {
  py::array_t<double> out({f.rows(), f.cols()});
  std::memcpy(out.mutable_data(), f.values().data(), f.size() * sizeof(double));
  return out;
}

std::vector<Position> to_positions(const IArray& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) {
    throw py::value_error("positions must be an (N, 2) integer array");
  }
  std::vector<Position> out(static_cast<std::size_t>(a.shape(0)));
  auto view = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    out[static_cast<std::size_t>(i)] = {static_cast<int>(view(i, 0)),
                                        static_cast<int>(view(i, 1))};
  }
  return out;
}

py::array_t<long long> from_positions(const std::vector<Position>& positions) {
  py::array_t<long long> out({static_cast<py::ssize_t>(positions.size()), py::ssize_t{2}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    view(static_cast<py::ssize_t>(i), 0) = positions[i].row;
    view(static_cast<py::ssize_t>(i), 1) = positions[i].col;
  }
  return out;
}

DiffractionStack to_stack(const IArray& positions, const DArray& intensities,
                          const py::object& provenance) {
  if (intensities.ndim() != 3 || intensities.shape(1) != intensities.shape(2)) {
    throw py::value_error("intensities must be an (N, S, S) array");
  }
  const std::vector<Position> pos = to_positions(positions);
  if (static_cast<py::ssize_t>(pos.size()) != intensities.shape(0)) {
    throw py::value_error("positions and intensities disagree on record count");
  }
  std::vector<std::uint8_t> tags(pos.size(), 0);
  if (!provenance.is_none()) {
    U8Array p = U8Array::ensure(provenance);
    if (!p || p.ndim() != 1 || static_cast<std::size_t>(p.shape(0)) != pos.size()) {
      throw py::value_error("provenance must be an (N,) uint8 array of 0/1");
    }
    for (py::ssize_t i = 0; i < p.shape(0); ++i) {
      const std::uint8_t t = p.unchecked<1>()(i);
      if (t > 1) throw py::value_error("provenance values must be 0 (real) or 1 (simulated)");
      tags[static_cast<std::size_t>(i)] = t;
    }
  }

  const int S = static_cast<int>(intensities.shape(1));
  const std::size_t pixels = static_cast<std::size_t>(S) * S;
  DiffractionStack stack(S);
  const double* base = intensities.data();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    ptycho::DiffractionRecord rec;
    rec.position = pos[i];
    rec.provenance = static_cast<Provenance>(tags[i]);
    rec.intensity =
        RealField(S, S, std::vector<double>(base + i * pixels, base + (i + 1) * pixels));
    stack.push_back(std::move(rec));
  }
  return stack;
}

py::array_t<double> from_stack_intensities(const DiffractionStack& stack) {
  const py::ssize_t n = static_cast<py::ssize_t>(stack.size());
  const py::ssize_t s = stack.patch_size();
  py::array_t<double> out({n, s, s});
  double* base = out.mutable_data();
  const std::size_t pixels = static_cast<std::size_t>(s) * s;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    std::memcpy(base + i * pixels, stack[i].intensity.values().data(), pixels * sizeof(double));
  }
  return out;
}

ptycho::SweepOrder parse_order(const std::string& order) {
  if (order == "raster") return ptycho::SweepOrder::Raster;
  if (order == "shuffle") return ptycho::SweepOrder::RandomShuffle;
  throw py::value_error("order must be \"raster\" or \"shuffle\"");
}

ptycho::ProbeProfile parse_profile(const std::string& profile) {
  if (profile == "tophat") return ptycho::ProbeProfile::TopHat;
  if (profile == "gaussian") return ptycho::ProbeProfile::GaussianEdge;
  throw py::value_error("profile must be \"tophat\" or \"gaussian\"");
}

ScanGeometry geometry_for(int object_size, int probe_size, int step,
                          std::vector<Position> positions) {
  ScanGeometry geom;
  geom.object_size = object_size;
  geom.probe_size = probe_size;
  geom.step = step;
  geom.positions = std::move(positions);
  geom.validate();
  return geom;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ptychography core: forward model, ePIE, remix pipeline, metrics, file formats";
  m.attr("__version__") = "0.1.0";

  m.def(
      "raster_positions",
      [](int object_size, int probe_size, int step) {
        return from_positions(ptycho::raster_geometry(object_size, probe_size, step).positions);
      },
      py::arg("object_size"), py::arg("probe_size"), py::arg("step"),
      "Row-major raster scan positions as an (N, 2) array of (row, col).");

  m.def("overlap_percent", &ptycho::overlap_percent, py::arg("probe_size"), py::arg("step"),
        "Linear overlap between adjacent probe windows, in percent.");

  m.def(
      "make_probe",
      [](int size, int diameter, const std::string& profile, double edge_sigma,
         double amplitude) {
        ptycho::ProbeSpec spec;
        spec.size = size;
        spec.diameter = diameter;
        spec.profile = parse_profile(profile);
        spec.edge_sigma = edge_sigma;
        spec.amplitude = amplitude;
        return from_complex(ptycho::make_probe(spec));
      },
      py::arg("size") = 60, py::arg("diameter") = 60, py::arg("profile") = "tophat",
      py::arg("edge_sigma") = 2.0, py::arg("amplitude") = 1.0,
      "Flat-phase disk probe; profile \"tophat\" or \"gaussian\".");

  m.def(
      "make_phantom",
      [](const DArray& gray, double phase_max) {
        return from_complex(ptycho::make_phantom(to_real(gray, "gray"), phase_max));
      },
      py::arg("gray"), py::arg("phase_max") = 1.0,
      "Phase-only object exp(j * gray * phase_max) from a [0, 1] grayscale image.");

  m.def(
      "exit_wave",
      [](const CArray& object, const CArray& probe, int row, int col) {
        return from_complex(ptycho::exit_wave(to_complex(object, "object"),
                                              to_complex(probe, "probe"), {row, col}));
      },
      py::arg("object"), py::arg("probe"), py::arg("row"), py::arg("col"));

  m.def(
      "diffract",
      [](const CArray& psi) { return from_real(ptycho::diffract(to_complex(psi, "psi"))); },
      py::arg("psi"), "Far-field intensity |F psi|^2 under the unitary DFT.");

  m.def(
      "simulate_scan",
      [](const CArray& object, const CArray& probe, const IArray& positions) {
        const ComplexField obj = to_complex(object, "object");
        const ComplexField prb = to_complex(probe, "probe");
        const ScanGeometry geom =
            geometry_for(obj.rows(), prb.rows(), 1, to_positions(positions));
        return from_stack_intensities(
            ptycho::simulate_scan(obj, prb, geom, Provenance::Real));
      },
      py::arg("object"), py::arg("probe"), py::arg("positions"),
      "Diffraction intensities as an (N, S, S) array, one per position.");

  m.def(
      "add_poisson_noise",
      [](const DArray& intensities, double photon_scale, std::uint64_t seed) {
        if (intensities.ndim() != 3 || intensities.shape(1) != intensities.shape(2)) {
          throw py::value_error("intensities must be an (N, S, S) array");
        }
        const py::ssize_t n = intensities.shape(0);
        std::vector<Position> dummy(static_cast<std::size_t>(n));
        for (py::ssize_t i = 0; i < n; ++i) dummy[static_cast<std::size_t>(i)] = {0, 0};
        // Positions do not affect sampling; records are keyed by index.
        DiffractionStack stack(static_cast<int>(intensities.shape(1)));
        const std::size_t pixels =
            static_cast<std::size_t>(intensities.shape(1)) * intensities.shape(2);
        for (py::ssize_t i = 0; i < n; ++i) {
          ptycho::DiffractionRecord rec;
          rec.position = {0, 0};
          rec.intensity = RealField(
              static_cast<int>(intensities.shape(1)), static_cast<int>(intensities.shape(2)),
              std::vector<double>(intensities.data() + i * pixels,
                                  intensities.data() + (i + 1) * pixels));
          stack.push_back(std::move(rec));
        }
        ptycho::NoiseSpec noise;
        noise.photon_scale = photon_scale;
        noise.seed = seed;
        return from_stack_intensities(ptycho::add_poisson_noise(stack, noise));
      },
      py::arg("intensities"), py::arg("photon_scale"), py::arg("seed") = 0,
      "Per-pixel Poisson(d * photon_scale) / photon_scale, keyed by (seed, record, pixel).");

  m.def(
      "run_epie",
      [](const CArray& x0, const CArray& probe, const IArray& positions,
         const DArray& intensities, const py::object& provenance, int sweeps,
         const std::string& order, std::uint64_t seed, double alpha_real, double alpha_sim,
         double zero_guard, double stop_tol) {
        ptycho::EpieOptions opts;
        opts.sweeps = sweeps;
        opts.order = parse_order(order);
        opts.seed = seed;
        opts.alpha_real = alpha_real;
        opts.alpha_sim = alpha_sim;
        opts.zero_guard = zero_guard;
        opts.stop_tol = stop_tol;
        const ptycho::EpieResult res =
            ptycho::run_epie(to_complex(x0, "x0"), to_complex(probe, "probe"),
                             to_stack(positions, intensities, provenance), opts);
        py::dict out;
        out["x_hat"] = from_complex(res.x_hat);
        out["sweeps_run"] = res.sweeps_run;
        out["final_update_norm"] = res.final_update_norm;
        return out;
      },
      py::arg("x0"), py::arg("probe"), py::arg("positions"), py::arg("intensities"),
      py::arg("provenance") = py::none(), py::arg("sweeps") = 2000, py::arg("order") = "shuffle",
      py::arg("seed") = 0, py::arg("alpha_real") = 1.0, py::arg("alpha_sim") = 1.0,
      py::arg("zero_guard") = 1e-12, py::arg("stop_tol") = 0.0,
      "ePIE object reconstruction; provenance 0/1 selects alpha_real/alpha_sim per record.");

  m.def(
      "remix_pipeline",
      [](const CArray& init, const CArray& probe, const IArray& positions,
         const DArray& intensities, int step, int oversample, double weight, double w_decay,
         int outer_iters, int epie_sweeps, const std::string& order, std::uint64_t seed,
         double zero_guard, double alpha_base, const py::object& truth, double phase_max) {
        const ComplexField init_f = to_complex(init, "init");
        const ComplexField probe_f = to_complex(probe, "probe");
        const DiffractionStack real = to_stack(positions, intensities, py::none());
        const ScanGeometry geom =
            geometry_for(init_f.rows(), probe_f.rows(), step, to_positions(positions));

        ptycho::RemixConfig cfg;
        cfg.oversample = oversample;
        cfg.weight = weight;
        cfg.w_decay = w_decay;
        cfg.outer_iters = outer_iters;
        cfg.epie_sweeps = epie_sweeps;
        cfg.epie_order = parse_order(order);
        cfg.seed = seed;
        cfg.zero_guard = zero_guard;
        cfg.alpha_base = alpha_base;

        ComplexField truth_f(1, 1);
        const ComplexField* truth_ptr = nullptr;
        if (!truth.is_none()) {
          truth_f = to_complex(CArray::ensure(truth), "truth");
          truth_ptr = &truth_f;
        }

        const ptycho::RemixResult res =
            ptycho::remix_pipeline(init_f, probe_f, real, geom, cfg, truth_ptr, phase_max);
        py::list rounds;
        for (const ptycho::RemixRound& r : res.report.rounds) {
          py::dict entry;
          entry["weight"] = r.weight;
          entry["sweeps_run"] = r.sweeps_run;
          entry["final_update_norm"] = r.final_update_norm;
          entry["aligned_mse"] = r.aligned_mse ? py::cast(*r.aligned_mse) : py::none();
          entry["real_misfit"] = r.real_misfit;
          rounds.append(entry);
        }
        py::dict out;
        out["x_hat"] = from_complex(res.x_hat);
        out["rounds"] = rounds;
        return out;
      },
      py::arg("init"), py::arg("probe"), py::arg("positions"), py::arg("intensities"),
      py::arg("step"), py::arg("oversample") = 3, py::arg("weight") = 20.0,
      py::arg("w_decay") = 1.0, py::arg("outer_iters") = 1, py::arg("epie_sweeps") = 2000,
      py::arg("order") = "shuffle", py::arg("seed") = 0, py::arg("zero_guard") = 1e-12,
      py::arg("alpha_base") = 1.0, py::arg("truth") = py::none(), py::arg("phase_max") = 1.0,
      "Oversample-and-splice pipeline over the given real records.");

  m.def(
      "total_variation",
      [](const py::array& x) {
        if (x.dtype().kind() == 'c') {
          return ptycho::total_variation(to_complex(CArray::ensure(x), "x"));
        }
        return ptycho::total_variation(to_real(DArray::ensure(x), "x"));
      },
      py::arg("x"),
      "Anisotropic TV; complex arrays use the phase map, real arrays the values.");

  m.def(
      "l1_misfit",
      [](const CArray& x, const CArray& probe, const IArray& positions,
         const DArray& intensities) {
        return ptycho::l1_misfit(to_complex(x, "x"), to_complex(probe, "probe"),
                                 to_stack(positions, intensities, py::none()));
      },
      py::arg("x"), py::arg("probe"), py::arg("positions"), py::arg("intensities"));

  m.def(
      "poisson_nll",
      [](const CArray& x, const CArray& probe, const IArray& positions,
         const DArray& intensities, double zero_guard) {
        return ptycho::poisson_nll(to_complex(x, "x"), to_complex(probe, "probe"),
                                   to_stack(positions, intensities, py::none()), zero_guard);
      },
      py::arg("x"), py::arg("probe"), py::arg("positions"), py::arg("intensities"),
      py::arg("zero_guard") = 1e-12);

  m.def(
      "aligned_mse",
      [](const CArray& recon, const DArray& truth_gray, double phase_max) {
        return ptycho::aligned_mse(to_complex(recon, "recon"), to_real(truth_gray, "truth_gray"),
                                   phase_max);
      },
      py::arg("recon"), py::arg("truth_gray"), py::arg("phase_max") = 1.0,
      "Phase MSE vs a grayscale truth after global-phase alignment, in gray units.");

  m.def(
      "aligned_field_mse",
      [](const CArray& a, const CArray& b, double phase_max) {
        return ptycho::aligned_field_mse(to_complex(a, "a"), to_complex(b, "b"), phase_max);
      },
      py::arg("a"), py::arg("b"), py::arg("phase_max") = 1.0);

  m.def(
      "write_pta",
      [](const std::string& path, const py::array& array) {
        if (array.dtype().kind() == 'c') {
          ptycho::write_pta(path, to_complex(CArray::ensure(array), "array"));
        } else {
          ptycho::write_pta(path, to_real(DArray::ensure(array), "array"));
        }
      },
      py::arg("path"), py::arg("array"),
      "Writes a 2-d array as PTA (complex128 -> complex, anything else -> real).");

  m.def(
      "read_pta",
      [](const std::string& path) -> py::object {
        auto v = ptycho::read_pta(path);
        if (std::holds_alternative<RealField>(v)) return from_real(std::get<RealField>(v));
        return from_complex(std::get<ComplexField>(v));
      },
      py::arg("path"));

  m.def(
      "write_ptd",
      [](const std::string& path, const IArray& positions, const py::object& provenance,
         const DArray& intensities) {
        ptycho::write_ptd(path, to_stack(positions, intensities, provenance));
      },
      py::arg("path"), py::arg("positions"), py::arg("provenance"), py::arg("intensities"));

  m.def(
      "read_ptd",
      [](const std::string& path) {
        const DiffractionStack stack = ptycho::read_ptd(path);
        // The shape-container constructor computes strides from sizeof(T) at
        // compile time; the count overload asks the numpy descriptor at run
        // time, which pybind11 builds older than 2.12 misread under numpy 2.
        py::array_t<std::uint8_t> tags(
            py::array::ShapeContainer{static_cast<py::ssize_t>(stack.size())});
        for (std::size_t i = 0; i < stack.size(); ++i) {
          tags.mutable_unchecked<1>()(static_cast<py::ssize_t>(i)) =
              static_cast<std::uint8_t>(stack[i].provenance);
        }
        return py::make_tuple(from_positions(stack.positions()), tags,
                              from_stack_intensities(stack));
      },
      py::arg("path"), "Returns (positions, provenance, intensities).");
}
