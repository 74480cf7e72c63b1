#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ptycho/forward.hpp"
#include "ptycho/metrics.hpp"
#include "support/phantoms.hpp"

using namespace ptycho;

namespace {

RealField random_gray(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  RealField g(size, size);
  for (auto& v : g.values()) v = uni(rng);
  return g;
}

}  // namespace

TEST_CASE("total variation of a constant image is zero") {
  CHECK(total_variation(RealField::constant(12, 9, 0.42)) == 0.0);
  CHECK(total_variation(ComplexField::constant(7, 7, std::polar(1.0, 0.3))) == 0.0);
}

TEST_CASE("total variation of a half-and-half image counts the boundary") {
  // left half 0, right half 1: one vertical seam of height 4
  RealField img(4, 6);
  for (int r = 0; r < 4; ++r) {
    for (int c = 3; c < 6; ++c) img(r, c) = 1.0;
  }
  CHECK(total_variation(img) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("total variation is positively homogeneous") {
  const RealField g = random_gray(10, 5);
  RealField scaled = g;
  for (auto& v : scaled.values()) v *= 3.5;
  CHECK(total_variation(scaled) == doctest::Approx(3.5 * total_variation(g)).epsilon(1e-12));
}

TEST_CASE("complex total variation reads the phase map") {
  const RealField g = random_gray(10, 6);
  ComplexField f(10, 10);
  for (std::size_t i = 0; i < f.size(); ++i) f.values()[i] = std::polar(1.0, g.values()[i]);
  CHECK(total_variation(f) == doctest::Approx(total_variation(g)).epsilon(1e-10));
}

TEST_CASE("l1 misfit vanishes on consistent data") {
  const ComplexField truth = make_phantom(testsupport::blob_phantom(16, 2, 7, 3), 1.0);
  const ComplexField probe = [] {
    ProbeSpec spec;
    spec.size = 8;
    spec.diameter = 8;
    return make_probe(spec);
  }();
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(16, 8, 4), Provenance::Real);
  CHECK(l1_misfit(truth, probe, stack) < 1e-10);
}

TEST_CASE("l1 misfit equals total intensity against zeroed data") {
  const ComplexField x = ComplexField::constant(8, 8, cdouble(1.0, 0.0));
  const ComplexField probe = ComplexField::constant(4, 4, cdouble(1.0, 0.0));

  DiffractionRecord rec;
  rec.position = {2, 2};
  rec.intensity = RealField(4, 4);  // all zero
  DiffractionStack stack(4);
  stack.push_back(rec);

  // Parseval: sum |F psi|^2 = sum |psi|^2 = 16
  CHECK(l1_misfit(x, probe, stack) == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("l1 misfit is additive over records") {
  const ComplexField truth = make_phantom(testsupport::blob_phantom(16, 2, 8, 3), 1.0);
  const ComplexField recon = make_phantom(testsupport::blob_phantom(16, 2, 9, 3), 1.0);
  const ComplexField probe = [] {
    ProbeSpec spec;
    spec.size = 8;
    spec.diameter = 6;
    return make_probe(spec);
  }();
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(16, 8, 2), Provenance::Real);

  double split = 0.0;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    DiffractionStack one(8);
    one.push_back(stack.records()[i]);
    split += l1_misfit(recon, probe, one);
  }
  CHECK(l1_misfit(recon, probe, stack) == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("poisson nll against zero data is the total model intensity") {
  const ComplexField x = make_phantom(testsupport::blob_phantom(12, 2, 10, 2), 1.0);
  const ComplexField probe = [] {
    ProbeSpec spec;
    spec.size = 6;
    spec.diameter = 6;
    return make_probe(spec);
  }();

  DiffractionRecord rec;
  rec.position = {3, 3};
  rec.intensity = RealField(6, 6);
  DiffractionStack stack(6);
  stack.push_back(rec);

  double total = 0.0;
  const ComplexField psi = exit_wave(x, probe, rec.position);
  for (const auto& v : psi.values()) total += std::norm(v);
  CHECK(poisson_nll(x, probe, stack) == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("poisson nll matches a direct evaluation") {
  const ComplexField truth = make_phantom(testsupport::blob_phantom(12, 2, 11, 2), 1.0);
  const ComplexField recon = make_phantom(testsupport::blob_phantom(12, 2, 12, 2), 1.0);
  const ComplexField probe = [] {
    ProbeSpec spec;
    spec.size = 6;
    spec.diameter = 5;
    return make_probe(spec);
  }();
  const DiffractionStack stack =
      simulate_scan(truth, probe, raster_geometry(12, 6, 3), Provenance::Real);

  double expected = 0.0;
  for (const auto& rec : stack.records()) {
    const RealField model = diffract(exit_wave(recon, probe, rec.position));
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double power = model.values()[i];
      expected += power - 2.0 * rec.intensity.values()[i] *
                              std::log(std::sqrt(power) + 1e-12);
    }
  }
  CHECK(poisson_nll(recon, probe, stack) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("aligned mse is zero for the exact phantom") {
  const RealField gray = testsupport::blob_phantom(16, 2, 13, 3);
  const ComplexField recon = make_phantom(gray, 0.8);
  CHECK(aligned_mse(recon, gray, 0.8) < 1e-24);
}

TEST_CASE("aligned mse ignores a global phase") {
  const RealField gray = testsupport::blob_phantom(16, 2, 14, 3);
  ComplexField recon = make_phantom(gray, 1.0);
  for (auto& v : recon.values()) v *= std::polar(1.0, 0.3);
  CHECK(aligned_mse(recon, gray, 1.0) < 1e-20);
}

TEST_CASE("aligned mse detects a genuine mismatch") {
  const RealField gray = testsupport::blob_phantom(16, 2, 15, 3);
  const RealField other = testsupport::blob_phantom(16, 2, 16, 3);
  const ComplexField recon = make_phantom(other, 1.0);
  CHECK(aligned_mse(recon, gray, 1.0) > 1e-4);
}

TEST_CASE("aligned mse normalizes by the phase range") {
  // checkerboard +-0.2 gray error: the circular mean is exactly zero,
  // so the normalized score is 0.04 regardless of the phase range
  const RealField gray = RealField::constant(16, 16, 0.5);
  for (double pm : {0.5, 1.0, 2.0}) {
    ComplexField recon(16, 16);
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 16; ++c) {
        const double g = 0.5 + ((r + c) % 2 == 0 ? 0.2 : -0.2);
        recon(r, c) = std::polar(1.0, g * pm);
      }
    }
    CHECK(aligned_mse(recon, gray, pm) == doctest::Approx(0.04).epsilon(1e-12));
  }
}

TEST_CASE("a constant phase offset in the truth is absorbed") {
  const RealField gray = testsupport::blob_phantom(16, 2, 18, 3);
  ComplexField recon(16, 16);
  for (std::size_t i = 0; i < recon.size(); ++i) {
    recon.values()[i] = std::polar(1.0, gray.values()[i] * 1.0 + 0.45);
  }
  CHECK(aligned_mse(recon, gray, 1.0) < 1e-20);
}

TEST_CASE("coverage mask unions the probe windows") {
  const ScanGeometry full = raster_geometry(16, 4, 4);
  CHECK(coverage_fraction(full) == doctest::Approx(1.0).epsilon(1e-12));

  ScanGeometry single = full;
  single.positions = {Position{0, 0}};
  CHECK(coverage_fraction(single) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));

  const auto mask = coverage_mask(single);
  REQUIRE(mask.size() == 256);
  CHECK(mask[0]);
  CHECK(mask[3 * 16 + 3]);
  CHECK_FALSE(mask[3 * 16 + 4]);
  CHECK_FALSE(mask[4 * 16 + 0]);
}

TEST_CASE("coverage-restricted mse matches a hand computation") {
  const RealField gray = testsupport::blob_phantom(16, 2, 19, 3);
  RealField other = gray;
  // corrupt only the lower-right quadrant
  for (int r = 8; r < 16; ++r) {
    for (int c = 8; c < 16; ++c) other(r, c) = std::min(1.0, other(r, c) + 0.2);
  }
  const ComplexField recon = make_phantom(other, 1.0);

  ScanGeometry top_left = raster_geometry(16, 8, 8);
  top_left.positions = {Position{0, 0}};

  // recon agrees with the truth on the covered window, up to alignment
  CHECK(aligned_mse(recon, gray, 1.0, top_left) < 1e-20);
  CHECK(aligned_mse(recon, gray, 1.0) > 1e-4);
}

TEST_CASE("empty coverage is rejected") {
  const RealField gray = testsupport::blob_phantom(8, 2, 20, 2);
  const ComplexField recon = make_phantom(gray, 1.0);
  ScanGeometry geom = raster_geometry(8, 4, 4);
  geom.positions.clear();
  CHECK_THROWS_AS(aligned_mse(recon, gray, 1.0, geom), MetricError);
}

TEST_CASE("field-to-field mse agrees with the grayscale version") {
  const RealField gray = testsupport::blob_phantom(16, 2, 21, 3);
  const RealField other = testsupport::blob_phantom(16, 2, 22, 3);
  const double pm = 0.9;
  const ComplexField recon = make_phantom(other, pm);
  const ComplexField truth = make_phantom(gray, pm);
  CHECK(aligned_field_mse(recon, truth, pm) ==
        doctest::Approx(aligned_mse(recon, gray, pm)).epsilon(1e-12));
}

TEST_CASE("metric argument validation") {
  const RealField gray = testsupport::blob_phantom(8, 2, 23, 2);
  const ComplexField recon = make_phantom(gray, 1.0);
  CHECK_THROWS_AS(aligned_mse(recon, RealField(4, 4), 1.0), DimensionError);
  CHECK_THROWS_AS(aligned_mse(recon, gray, 0.0), MetricError);
  CHECK_THROWS_AS(aligned_mse(recon, gray, -1.0), MetricError);
}
