#include <doctest.h>

#include <cmath>

#include "wnl/phantoms.hpp"

using namespace wnl;

namespace {

// Closed-form oracles for the probe envelope chi = K exp(-(s/w)^2):
//   int chi^2 = K^2 w sqrt(pi/2),  int chi^6 = K^6 w sqrt(pi/6).
double envelope_l2_closed_form(double K, double w) {
  return K * K * w * std::sqrt(3.14159265358979323846 / 2.0);
}
double envelope_l6_closed_form(double K, double w) {
  return std::pow(K, 6) * w * std::sqrt(3.14159265358979323846 / 6.0);
}

}  // namespace

TEST_SUITE_BEGIN("phantoms");

TEST_CASE("gaussian phantom hits the stated pointwise values") {
  AlphaDescriptor d;  // defaults: gaussian, ax 0.2, ay 0.1, amplitude 1
  const Grid2D g(401, 401, -1, 1, -1, 1);
  const RealField f = sample_alpha(d, g);

  // (0,0) and (0.2, 0) are grid nodes of the 401-point grid on [-1,1].
  CHECK(f.values(200, 200) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.values(240, 200) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // Far corner: the taper has already cut the field to exact zero.
  CHECK(std::abs(f.bilinear(1.0, 1.0)) < 1e-10);
}

TEST_CASE("gaussian phantom is compactly supported and nonnegative") {
  AlphaDescriptor d;
  d.ax = 0.1;
  d.ay = 0.1;  // support ellipse radius 0.45 fits inside [-0.5, 0.5]^2
  const Grid2D g(501, 501, -1, 1, -1, 1);
  const RealField f = sample_alpha(d, g);

  CHECK(f.values.minCoeff() >= 0.0);
  double outside = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (std::abs(g.x(ix)) > 0.6 || std::abs(g.y(iy)) > 0.6)
        outside = std::max(outside, f.values(ix, iy));
  CHECK(outside < 1e-10);

  double boundary = 0.0;
  for (int ix = 0; ix < g.nx; ++ix)
    boundary = std::max({boundary, f.values(ix, 0), f.values(ix, g.ny - 1)});
  for (int iy = 0; iy < g.ny; ++iy)
    boundary = std::max({boundary, f.values(0, iy), f.values(g.nx - 1, iy)});
  CHECK(boundary < 1e-12);
}

TEST_CASE("invalid descriptors are rejected") {
  const Grid2D g(64, 64, -1, 1, -1, 1);
  AlphaDescriptor d;
  d.ax = -0.2;
  CHECK_THROWS_AS(sample_alpha(d, g), ConfigError);
  d = AlphaDescriptor{};
  d.amplitude = -1.0;
  CHECK_THROWS_AS(sample_alpha(d, g), ConfigError);
  d = AlphaDescriptor{};
  d.kind = AlphaDescriptor::Kind::shepp_logan;
  d.blur_sigma = 0.0;
  CHECK_THROWS_AS(sample_alpha(d, g), ConfigError);
  d = AlphaDescriptor{};
  d.kind = AlphaDescriptor::Kind::from_file;
  d.path = "/nonexistent/alpha.grd";
  CHECK_THROWS_AS(sample_alpha(d, g), IoError);
}

TEST_CASE("envelope values and quadrature against closed forms") {
  Envelope e{1.0, 0.14};
  CHECK(sample_envelope(e, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  Envelope e5{5.0, 0.14};
  CHECK(sample_envelope(e5, 0.14) == doctest::Approx(5.0 * std::exp(-1.0)).epsilon(1e-14));
  // The spec's reference number 0.17546 for K = 1, w = 0.14.
  CHECK(envelope_power_integral(e, 2) ==
        doctest::Approx(envelope_l2_closed_form(1.0, 0.14)).epsilon(1e-10));
  CHECK(envelope_power_integral(e, 2) == doctest::Approx(0.17546).epsilon(1e-4));
  CHECK(envelope_power_integral(e, 6) ==
        doctest::Approx(envelope_l6_closed_form(1.0, 0.14)).epsilon(1e-10));
  // K enters as K^2 in the quadratic integral.
  CHECK(envelope_power_integral(e5, 2) ==
        doctest::Approx(25.0 * envelope_power_integral(e, 2)).epsilon(1e-12));

  const Envelope bad_peak{0.0, 0.14};
  const Envelope bad_width{1.0, -1.0};
  CHECK_THROWS_AS(bad_peak.validate(), ConfigError);
  CHECK_THROWS_AS(bad_width.validate(), ConfigError);
}

TEST_CASE("shepp_logan phantom: nonnegative, normalized, compact") {
  AlphaDescriptor d;
  d.kind = AlphaDescriptor::Kind::shepp_logan;
  d.amplitude = 0.7;
  d.blur_sigma = 0.01;
  const Grid2D g(401, 401, -1, 1, -1, 1);
  const RealField f = sample_alpha(d, g);

  CHECK(f.values.minCoeff() >= 0.0);
  CHECK(f.values.maxCoeff() == doctest::Approx(0.7).epsilon(1e-12));
  double outside = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (std::abs(g.x(ix)) > 0.6 || std::abs(g.y(iy)) > 0.6)
        outside = std::max(outside, f.values(ix, iy));
  CHECK(outside < 1e-12);
  // Blur keeps it smooth but the skull ring must still be visible.
  CHECK(f.bilinear(0.0, 0.0) > 0.0);
}

TEST_CASE("rotation by zero is the identity") {
  AlphaDescriptor d;
  const Grid2D g(201, 201, -1, 1, -1, 1);
  const RealField f = sample_alpha(d, g);
  const RealField r = rotate_field(f, 0.0);
  CHECK((r.values == f.values).all());
}

TEST_CASE("rotation by 90 degrees swaps the gaussian axes") {
  AlphaDescriptor d;  // ax 0.2, ay 0.1
  const Grid2D g(401, 401, -1, 1, -1, 1);
  const RealField f = sample_alpha(d, g);
  const RealField rot = rotate_field(f, 90.0);

  AlphaDescriptor swapped;
  swapped.ax = 0.1;
  swapped.ay = 0.2;
  const RealField direct = sample_alpha(swapped, g);
  const double err = (rot.values - direct.values).abs().maxCoeff();
  CHECK(err < 2.0 * g.dx());
}

TEST_CASE("rotation by 180 degrees moves an off-center bump across the origin") {
  const Grid2D g(401, 401, -1, 1, -1, 1);
  RealField f(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = g.x(ix) - 0.3, dy = g.y(iy);
      f.values(ix, iy) = std::exp(-(dx * dx + dy * dy) / (0.02 * 0.02));
    }
  const RealField r = rotate_field(f, 180.0);
  int bx = 0, by = 0;
  r.values.maxCoeff(&bx, &by);
  CHECK(std::abs(g.x(bx) - (-0.3)) <= g.dx() + 1e-12);
  CHECK(std::abs(g.y(by)) <= g.dy() + 1e-12);
}

TEST_CASE("rotation approximately preserves mass and inverts") {
  AlphaDescriptor d;
  const Grid2D g(401, 401, -1, 1, -1, 1);
  const RealField f = sample_alpha(d, g);

  const RealField r = rotate_field(f, 33.0);
  const double mass_f = f.values.sum();
  const double mass_r = r.values.sum();
  CHECK(std::abs(mass_r - mass_f) / mass_f < 1e-2);

  const RealField back = rotate_field(r, -33.0);
  CHECK(rel_l2_distance(back, f) < 1e-2);
}

TEST_CASE("rotation requires square extents") {
  RealField f(Grid2D(64, 32, -1, 1, -0.5, 0.5));
  CHECK_THROWS_AS(rotate_field(f, 10.0), ConfigError);
}

TEST_SUITE_END();
