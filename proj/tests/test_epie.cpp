#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ptycho/epie.hpp"
#include "ptycho/forward.hpp"
#include "ptycho/metrics.hpp"
#include "support/phantoms.hpp"

using namespace ptycho;

namespace {

ComplexField disk_probe(int size, int diameter) {
  ProbeSpec spec;
  spec.size = size;
  spec.diameter = diameter;
  return make_probe(spec);
}

ComplexField small_phantom(int size, std::uint64_t seed) {
  return make_phantom(testsupport::blob_phantom(size, 2, seed, 3), 1.0);
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("pattern update is a fixed point on consistent data") {
  const ComplexField truth = small_phantom(16, 21);
  const ComplexField probe = disk_probe(8, 8);
  const Position pos{4, 6};

  DiffractionRecord rec;
  rec.position = pos;
  rec.intensity = diffract(exit_wave(truth, probe, pos));

  EpieOptions opts;
  opts.zero_guard = 1e-15;  // keep the guard's own bias below the tolerance
  const ComplexField out = epie_pattern_update(truth, probe, rec, opts);
  CHECK(max_abs_diff(out, truth) < 1e-12);
}

TEST_CASE("alpha zero leaves the object untouched") {
  const ComplexField truth = small_phantom(16, 22);
  const ComplexField probe = disk_probe(8, 6);

  DiffractionRecord rec;
  rec.position = {2, 3};
  rec.intensity = diffract(exit_wave(small_phantom(16, 23), probe, rec.position));

  EpieOptions opts;
  opts.alpha_real = 0.0;
  const ComplexField out = epie_pattern_update(truth, probe, rec, opts);
  CHECK(out == truth);
}

TEST_CASE("pattern update only touches the probe window") {
  const ComplexField x = small_phantom(20, 24);
  const ComplexField probe = disk_probe(6, 6);
  const Position pos{7, 9};

  DiffractionRecord rec;
  rec.position = pos;
  rec.intensity = diffract(exit_wave(small_phantom(20, 25), probe, pos));

  const ComplexField out = epie_pattern_update(x, probe, rec, {});
  for (int r = 0; r < x.rows(); ++r) {
    for (int c = 0; c < x.cols(); ++c) {
      const bool inside =
          r >= pos.row && r < pos.row + 6 && c >= pos.col && c < pos.col + 6;
      if (!inside) CHECK(out(r, c) == x(r, c));
    }
  }
}

TEST_CASE("update delta is linear in alpha") {
  const ComplexField x = small_phantom(16, 26);
  const ComplexField probe = disk_probe(8, 7);

  DiffractionRecord rec;
  rec.position = {5, 1};
  rec.intensity = diffract(exit_wave(small_phantom(16, 27), probe, rec.position));

  EpieOptions opts;
  opts.alpha_real = 0.4;
  const ComplexField once = epie_pattern_update(x, probe, rec, opts);
  opts.alpha_real = 0.8;
  const ComplexField twice = epie_pattern_update(x, probe, rec, opts);

  for (std::size_t i = 0; i < x.size(); ++i) {
    const cdouble d1 = once.values()[i] - x.values()[i];
    const cdouble d2 = twice.values()[i] - x.values()[i];
    CHECK(std::abs(d2 - 2.0 * d1) < 1e-12);
  }
}

TEST_CASE("pattern update matches the step-by-step oracle") {
  // 2x2 instance, diagonal probe, data from a perturbed object
  const ComplexField probe(2, 2, {cdouble(1, 0), cdouble(0, 0), cdouble(0, 0), cdouble(1, 0)});
  const ComplexField x = ComplexField::constant(2, 2, cdouble(1.0, 0.0));
  const ComplexField perturbed(
      2, 2, {cdouble(0.9, 0.1), cdouble(1.0, -0.2), cdouble(1.1, 0.0), cdouble(0.8, 0.3)});

  DiffractionRecord rec;
  rec.position = {0, 0};
  rec.intensity = diffract(exit_wave(perturbed, probe, {0, 0}));

  EpieOptions opts;
  const ComplexField out = epie_pattern_update(x, probe, rec, opts);

  // hand evaluation; the 2x2 DFT kernel is (-1)^(ur+vc)/2, written out exactly
  // so zero spectrum bins stay exactly zero under the modulus substitution
  const auto dft2x2 = [](const ComplexField& in) {
    ComplexField out2(2, 2);
    for (int u = 0; u < 2; ++u) {
      for (int v = 0; v < 2; ++v) {
        cdouble acc = 0.0;
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            const double sign = ((u * r + v * c) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * in(r, c);
          }
        }
        out2(u, v) = acc / 2.0;
      }
    }
    return out2;
  };

  ComplexField psi(2, 2);
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) psi(u, v) = probe(u, v) * x(u, v);
  }
  ComplexField spectrum = dft2x2(psi);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double modulus = std::abs(spectrum.values()[k]);
    spectrum.values()[k] *= std::sqrt(rec.intensity.values()[k]) / (modulus + opts.zero_guard);
  }
  const ComplexField psi_proj = dft2x2(spectrum);

  double max_p2 = 0.0;
  for (const auto& p : probe.values()) max_p2 = std::max(max_p2, std::norm(p));
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      const cdouble expected =
          x(u, v) + std::conj(probe(u, v)) / max_p2 * (psi_proj(u, v) - psi(u, v));
      CHECK(std::abs(out(u, v) - expected) < 1e-12);
    }
  }
}

TEST_CASE("run_epie is a fixed point from the ground truth") {
  const ComplexField truth = small_phantom(16, 28);
  const ComplexField probe = disk_probe(8, 8);
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(16, 8, 8), Provenance::Real);

  EpieOptions opts;
  opts.sweeps = 3;
  const EpieResult res = run_epie(truth, probe, stack, opts);
  CHECK(res.sweeps_run == 3);
  CHECK(max_abs_diff(res.x_hat, truth) < 1e-10);
}

TEST_CASE("run_epie is deterministic per seed") {
  const ComplexField truth = small_phantom(16, 29);
  const ComplexField probe = disk_probe(8, 7);
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(16, 8, 4), Provenance::Real);
  const ComplexField x0 = ComplexField::constant(16, 16, cdouble(1.0, 0.0));

  EpieOptions opts;
  opts.sweeps = 5;
  opts.seed = 99;
  const EpieResult a = run_epie(x0, probe, stack, opts);
  const EpieResult b = run_epie(x0, probe, stack, opts);
  CHECK(a.x_hat == b.x_hat);
  CHECK(a.final_update_norm == b.final_update_norm);

  opts.seed = 100;
  const EpieResult c = run_epie(x0, probe, stack, opts);
  CHECK(max_abs_diff(a.x_hat, c.x_hat) > 0.0);
}

TEST_CASE("reconstruction is equivariant under a global phase on x0") {
  const ComplexField truth = small_phantom(16, 30);
  const ComplexField probe = disk_probe(8, 7);
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(16, 8, 2), Provenance::Real);

  const cdouble rot = std::polar(1.0, 0.7);
  ComplexField x0 = ComplexField::constant(16, 16, cdouble(1.0, 0.0));
  ComplexField x0_rot = x0;
  for (auto& v : x0_rot.values()) v *= rot;

  EpieOptions opts;
  opts.sweeps = 10;
  opts.order = SweepOrder::Raster;
  const EpieResult plain = run_epie(x0, probe, stack, opts);
  const EpieResult rotated = run_epie(x0_rot, probe, stack, opts);

  ComplexField expected = plain.x_hat;
  for (auto& v : expected.values()) v *= rot;
  CHECK(max_abs_diff(rotated.x_hat, expected) < 1e-10);
}

TEST_CASE("run_epie converges on a small well-overlapped phantom") {
  const RealField gray = testsupport::blob_phantom(32, 3, 31, 3);
  const ComplexField truth = make_phantom(gray, 1.0);
  const ComplexField probe = disk_probe(8, 8);
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(32, 8, 2), Provenance::Real);

  EpieOptions opts;
  opts.sweeps = 400;
  opts.seed = 1;
  const EpieResult res = run_epie(ComplexField::constant(32, 32, cdouble(1.0, 0.0)), probe,
                                  stack, opts);
  CHECK(aligned_mse(res.x_hat, gray, 1.0) < 1e-4);
}

TEST_CASE("run_epie honors the early-stop tolerance") {
  const ComplexField truth = small_phantom(16, 32);
  const ComplexField probe = disk_probe(8, 8);
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(16, 8, 8), Provenance::Real);

  EpieOptions opts;
  opts.sweeps = 50;
  opts.stop_tol = 1e-8;
  const EpieResult res = run_epie(truth, probe, stack, opts);
  CHECK(res.sweeps_run == 1);  // already at the fixed point
  CHECK(res.final_update_norm < 1e-8);
}

TEST_CASE("solver input validation") {
  const ComplexField probe = disk_probe(8, 8);
  const ComplexField x0 = ComplexField::constant(16, 16, cdouble(1.0, 0.0));

  DiffractionStack empty(8);
  CHECK_THROWS_AS(run_epie(x0, probe, empty, {}), ValidationError);

  DiffractionStack wrong(4);
  DiffractionRecord rec;
  rec.intensity = RealField(4, 4);
  wrong.push_back(rec);
  CHECK_THROWS_AS(run_epie(x0, probe, wrong, {}), DimensionError);

  const ComplexField dead(8, 8);  // all-zero probe
  DiffractionStack stack(8);
  DiffractionRecord rec8;
  rec8.intensity = RealField(8, 8);
  stack.push_back(rec8);
  CHECK_THROWS_AS(run_epie(x0, dead, stack, {}), ValidationError);

  EpieOptions bad;
  bad.sweeps = 0;
  CHECK_THROWS_AS(run_epie(x0, probe, stack, bad), ValidationError);
  bad = {};
  bad.zero_guard = 0.0;
  CHECK_THROWS_AS(run_epie(x0, probe, stack, bad), ValidationError);
}
