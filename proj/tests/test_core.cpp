#include <doctest.h>

#include <limits>
#include <random>
#include <vector>

#include "ptycho/errors.hpp"
#include "ptycho/field.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/stack.hpp"

using namespace ptycho;

TEST_CASE("complex field shape and finiteness invariants") {
  ComplexField f(2, 3);
  CHECK(f.rows() == 2);
  CHECK(f.cols() == 3);
  CHECK(f.size() == 6);
  CHECK(f(1, 2) == cdouble(0.0, 0.0));

  CHECK_THROWS_AS(ComplexField(0, 3), DimensionError);
  CHECK_THROWS_AS(ComplexField(3, -1), DimensionError);
  CHECK_THROWS_AS(ComplexField(2, 2, std::vector<cdouble>(3)), DimensionError);

  std::vector<cdouble> bad(4, cdouble(1.0, 0.0));
  bad[2] = cdouble(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(ComplexField(2, 2, bad), ValidationError);

  const ComplexField c = ComplexField::constant(2, 2, cdouble(0.5, -1.0));
  CHECK(c(0, 0) == cdouble(0.5, -1.0));
  CHECK(c == ComplexField(2, 2, std::vector<cdouble>(4, cdouble(0.5, -1.0))));
}

TEST_CASE("real field validators") {
  RealField f(2, 2, {0.0, 0.25, 0.5, 1.0});
  CHECK(f.sum() == doctest::Approx(1.75));
  CHECK_NOTHROW(f.require_nonnegative("f"));
  CHECK_NOTHROW(f.require_unit_range("f"));

  RealField neg(1, 2, {-0.1, 0.0});
  CHECK_THROWS_AS(neg.require_nonnegative("neg"), ValidationError);
  RealField big(1, 2, {0.5, 1.5});
  CHECK_THROWS_AS(big.require_unit_range("big"), ValidationError);
  CHECK_THROWS_AS(RealField(1, 1, {std::numeric_limits<double>::infinity()}), ValidationError);
}

TEST_CASE("raster geometry enumerates the row-major grid") {
  const ScanGeometry g = raster_geometry(240, 60, 60);
  REQUIRE(g.positions.size() == 16);
  CHECK(g.positions.front() == Position{0, 0});
  CHECK(g.positions[1] == Position{0, 60});
  CHECK(g.positions[4] == Position{60, 0});
  CHECK(g.positions.back() == Position{180, 180});

  CHECK(raster_geometry(240, 60, 20).positions.size() == 100);

  const ScanGeometry single = raster_geometry(60, 60, 1);
  REQUIRE(single.positions.size() == 1);
  CHECK(single.positions[0] == Position{0, 0});
}

TEST_CASE("raster geometry position count matches the closed form") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = size(rng);
    const int T = S + std::uniform_int_distribution<int>(0, 80)(rng);
    const int step = std::uniform_int_distribution<int>(1, 30)(rng);
    const ScanGeometry g = raster_geometry(T, S, step);
    const std::size_t per_axis = static_cast<std::size_t>((T - S) / step) + 1;
    CHECK(g.positions.size() == per_axis * per_axis);
    for (const Position& p : g.positions) {
      CHECK(p.row >= 0);
      CHECK(p.col >= 0);
      CHECK(p.row <= T - S);
      CHECK(p.col <= T - S);
    }
  }
}

TEST_CASE("geometry validation rejects bad scans") {
  CHECK_THROWS_AS(raster_geometry(59, 60, 10), GeometryError);
  CHECK_THROWS_AS(raster_geometry(240, 0, 10), GeometryError);
  CHECK_THROWS_AS(raster_geometry(240, 60, 0), GeometryError);

  ScanGeometry g;
  g.object_size = 100;
  g.probe_size = 40;
  g.step = 10;
  g.positions = {{0, 0}, {61, 0}};
  CHECK_THROWS_AS(g.validate(), GeometryError);

  g.positions = {{0, 0}, {10, 10}, {0, 0}};
  CHECK_THROWS_AS(g.validate(), GeometryError);

  g.positions = {{0, 0}, {60, 60}};
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("overlap percent") {
  CHECK(overlap_percent(60, 45) == doctest::Approx(25.0));
  CHECK(overlap_percent(60, 60) == doctest::Approx(0.0));
  CHECK(overlap_percent(60, 75) == doctest::Approx(-25.0));
  CHECK(overlap_percent(60, 90) == doctest::Approx(-50.0));
  CHECK_THROWS_AS(overlap_percent(0, 10), GeometryError);
  CHECK_THROWS_AS(overlap_percent(10, 0), GeometryError);
}

TEST_CASE("diffraction stack enforces one patch size") {
  DiffractionStack stack;
  DiffractionRecord a;
  a.position = {0, 0};
  a.intensity = RealField(4, 4);
  stack.push_back(a);
  CHECK(stack.patch_size() == 4);

  DiffractionRecord b;
  b.position = {2, 2};
  b.intensity = RealField(5, 5);
  CHECK_THROWS_AS(stack.push_back(b), DimensionError);

  DiffractionRecord rect;
  rect.intensity = RealField(4, 5);
  CHECK_THROWS_AS(stack.push_back(rect), DimensionError);
}

TEST_CASE("diffraction stack provenance filters and validation") {
  DiffractionStack stack(3);
  for (int i = 0; i < 5; ++i) {
    DiffractionRecord rec;
    rec.position = {i, 2 * i};
    rec.provenance = i % 2 == 0 ? Provenance::Real : Provenance::Simulated;
    rec.intensity = RealField::constant(3, 3, static_cast<double>(i));
    stack.push_back(rec);
  }
  CHECK(stack.count(Provenance::Real) == 3);
  CHECK(stack.count(Provenance::Simulated) == 2);

  const DiffractionStack real = stack.with_provenance(Provenance::Real);
  REQUIRE(real.size() == 3);
  CHECK(real[1].position == Position{2, 4});
  CHECK(real[1].intensity(0, 0) == 2.0);

  const std::vector<Position> pos = stack.positions();
  REQUIRE(pos.size() == 5);
  CHECK(pos[3] == Position{3, 6});

  CHECK_NOTHROW(stack.validate(20));
  CHECK_THROWS_AS(stack.validate(10), GeometryError);

  DiffractionStack negative(2);
  DiffractionRecord bad;
  bad.intensity = RealField(2, 2, {0.0, -1.0, 0.0, 0.0});
  negative.push_back(bad);
  CHECK_THROWS_AS(negative.validate(4), ValidationError);
}
