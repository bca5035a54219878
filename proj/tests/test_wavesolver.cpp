#include <doctest.h>

#include <cmath>

#include "wnl/optics.hpp"
#include "wnl/rng.hpp"
#include "wnl/wavesolver.hpp"

using namespace wnl;

namespace {

std::shared_ptr<const RealField> zero_alpha(const Grid2D& g) {
  return std::make_shared<const RealField>(RealField(g));
}

WavePacket test_packet(double h, double K, double c0,
                       WavePacket::FieldKind kind = WavePacket::FieldKind::complex_probe) {
  WavePacket p;
  p.h = h;
  p.envelope = Envelope{K, 0.14};
  p.center_offset = c0;
  p.kind = kind;
  return p;
}

// Straight-line scalar oracle for one leapfrog step (dirichlet edges),
// mirroring the documented per-component update formula.
template <typename Scalar>
Field<Scalar> reference_step(const WaveState<Scalar>& s, double dt, bool periodic_x) {
  const Grid2D& g = s.u.grid;
  const double rx = dt * dt / (g.dx() * g.dx());
  const double ry = dt * dt / (g.dy() * g.dy());
  const double dt2 = dt * dt;
  Field<Scalar> next(g);
  for (int iy = 1; iy < g.ny - 1; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!periodic_x && (ix == 0 || ix == g.nx - 1)) continue;
      const int il = ix == 0 ? g.nx - 1 : ix - 1;
      const int ir = ix == g.nx - 1 ? 0 : ix + 1;
      if constexpr (std::is_same_v<Scalar, Complex>) {
        const Complex u = s.u.values(ix, iy);
        double out[2];
        const double uc[2] = {u.real(), u.imag()};
        const double l[2] = {s.u.values(il, iy).real(), s.u.values(il, iy).imag()};
        const double r[2] = {s.u.values(ir, iy).real(), s.u.values(ir, iy).imag()};
        const double dn[2] = {s.u.values(ix, iy - 1).real(), s.u.values(ix, iy - 1).imag()};
        const double up[2] = {s.u.values(ix, iy + 1).real(), s.u.values(ix, iy + 1).imag()};
        const double pv[2] = {s.u_prev.values(ix, iy).real(), s.u_prev.values(ix, iy).imag()};
        const double q =
            (dt2 * s.alpha->values(ix, iy)) * (uc[0] * uc[0] + uc[1] * uc[1]);
        for (int c = 0; c < 2; ++c) {
          out[c] = 2.0 * uc[c] - pv[c] + rx * (l[c] + r[c] - 2.0 * uc[c]) +
                   ry * (dn[c] + up[c] - 2.0 * uc[c]);
          out[c] -= q * uc[c];
        }
        next.values(ix, iy) = Complex(out[0], out[1]);
      } else {
        const double u = s.u.values(ix, iy);
        double out = 2.0 * u - s.u_prev.values(ix, iy) +
                     rx * (s.u.values(il, iy) + s.u.values(ir, iy) - 2.0 * u) +
                     ry * (s.u.values(ix, iy - 1) + s.u.values(ix, iy + 1) - 2.0 * u);
        out -= (dt2 * s.alpha->values(ix, iy)) * (u * u * u);
        next.values(ix, iy) = out;
      }
    }
  return next;
}

template <typename Scalar>
WaveState<Scalar> random_state(const Grid2D& g, bool periodic, std::uint64_t seed) {
  WaveState<Scalar> st;
  st.t = 0.0;
  st.dt = 0.4 * std::min(g.dx(), g.dy());
  st.boundary = periodic ? Boundary::periodic_x : Boundary::dirichlet_zero;
  st.u = Field<Scalar>(g);
  st.u_prev = Field<Scalar>(g);
  RealField alpha(g);
  SplitMix64 rng(seed);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      if constexpr (std::is_same_v<Scalar, Complex>) {
        st.u.values(ix, iy) = Complex(rng.uniform_pm1(), rng.uniform_pm1());
        st.u_prev.values(ix, iy) = Complex(rng.uniform_pm1(), rng.uniform_pm1());
      } else {
        st.u.values(ix, iy) = rng.uniform_pm1();
        st.u_prev.values(ix, iy) = rng.uniform_pm1();
      }
      alpha.values(ix, iy) = 0.5 + 0.5 * rng.uniform01();
    }
  st.alpha = std::make_shared<const RealField>(std::move(alpha));
  st.packet = test_packet(0.05, 1.0, 0.0);
  return st;
}

}  // namespace

TEST_SUITE_BEGIN("wavesolver");

TEST_CASE("initial data samples the exact traveling packet") {
  // 221 nodes on [-1.2, 1]: c0 = -0.4 sits on a node and the 5w support
  // [-1.1, 0.3] fits inside the grid.
  const Grid2D g(21, 221, -0.1, 0.1, -1.2, 1);
  const double h = 0.01;
  const auto packet = test_packet(h, 1.0, -0.4);
  const auto st = make_initial_data<Complex>(packet, zero_alpha(g), 0.001);

  const int iy_center = 80;  // y = -0.4
  CHECK(g.y(iy_center) == doctest::Approx(-0.4).epsilon(1e-14));
  CHECK(std::abs(st.u.values(5, iy_center)) == doctest::Approx(10.0).epsilon(1e-12));

  // Envelope decay beyond 5w.
  const int iy_far = 220;  // y = 1, xi = 1.4 = 10w
  CHECK(std::abs(st.u.values(5, iy_far)) < 1e-10 * 10.0);

  // Real kind: cosine carrier peaks at the packet center.
  const auto rst =
      make_initial_data<double>(test_packet(h, 1.0, -0.4, WavePacket::FieldKind::real_probe),
                                zero_alpha(g), 0.001);
  CHECK(rst.u.values(5, iy_center) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("initial data rejects bad setups") {
  const Grid2D g(21, 221, -0.1, 0.1, -1.2, 1);
  AlphaDescriptor d;
  auto alpha = std::make_shared<const RealField>(sample_alpha(d, g));

  // Packet sitting on the nonlinearity.
  CHECK_THROWS_AS(make_initial_data<Complex>(test_packet(0.01, 1.0, 0.0), alpha, 1e-3),
                  SetupError);
  // Support reaching past the bottom edge.
  CHECK_THROWS_AS(make_initial_data<Complex>(test_packet(0.01, 1.0, -0.9), zero_alpha(g), 1e-3),
                  SetupError);
  // Bad direction vector.
  WavePacket p = test_packet(0.01, 1.0, -0.4);
  p.omega_y = 0.5;
  CHECK_THROWS_AS(make_initial_data<Complex>(p, zero_alpha(g), 1e-3), ConfigError);
}

TEST_CASE("one step matches the straight-line oracle bit for bit") {
  const Grid2D g(32, 40, -1, 1, -1, 1);
  for (bool periodic : {false, true}) {
    CAPTURE(periodic);
    auto st = random_state<Complex>(g, periodic, 11);
    const auto expect = reference_step(st, st.dt, periodic);
    auto moved = st;
    step(moved, st.dt, 1);
    CHECK((moved.u.values == expect.values).all());

    auto rst = random_state<double>(g, periodic, 12);
    const auto rexpect = reference_step(rst, rst.dt, periodic);
    auto rmoved = rst;
    step(rmoved, rst.dt, 1);
    CHECK((rmoved.u.values == rexpect.values).all());
  }
}

TEST_CASE("row-parallel stepping is bitwise identical to serial") {
  const Grid2D g(48, 64, -1, 1, -1, 1);
  auto a = random_state<Complex>(g, true, 21);
  auto b = a;
  for (int n = 0; n < 5; ++n) {
    step(a, a.dt, 1);
    step(b, b.dt, 3);
  }
  CHECK((a.u.values == b.u.values).all());
}

TEST_CASE("zero field is a fixed point and CFL violations are rejected") {
  const Grid2D g(16, 16, -1, 1, -1, 1);
  WaveState<double> st;
  st.dt = 0.4 * g.dx();
  st.u = RealField(g);
  st.u_prev = RealField(g);
  st.alpha = zero_alpha(g);
  auto moved = st;
  step(moved, st.dt, 1);
  CHECK((moved.u.values == 0.0).all());

  CHECK_THROWS_AS(step(st, g.dx(), 1), ConfigError);  // dt = dx > 0.7 dx
}

TEST_CASE("free propagation reproduces the translated closed form") {
  // alpha = 0; after t = 0.2 the packet is the shifted closed form. The
  // second-order scheme carries the dispersion phase error
  // k t (1 - cfl^2)(k dx)^2 / 24, about 2.5% here; halving dx quarters it.
  const double h = 0.01;
  const auto packet = test_packet(h, 1.0, -0.4);
  auto sup_error = [&](double dx) {
    const int ny = static_cast<int>(std::lround(1.8 / dx)) + 1;
    const Grid2D g(9, ny, -0.02, 0.02, -1.2, 0.6);
    SimConfig cfg;
    cfg.grid = g;
    cfg.cfl = 0.5;
    cfg.t_final = 0.2;
    cfg.snapshot_times = {0.2};
    cfg.boundary = Boundary::periodic_x;
    const auto snaps = run<Complex>(cfg, packet, zero_alpha(g));
    const auto& st = snaps.back();
    double num = 0.0, den = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
      const Complex exact = packet.value_complex(st.t, g.x(4), g.y(iy));
      num = std::max(num, std::abs(st.u.values(4, iy) - exact));
      den = std::max(den, std::abs(exact));
    }
    return num / den;
  };

  const double e_coarse = sup_error(0.002);
  const double e_fine = sup_error(0.001);
  CHECK(e_coarse < 0.03);
  CHECK(e_fine < 0.008);
  // Second-order convergence of the free solver.
  CHECK(e_coarse / e_fine > 3.0);
  CHECK(e_coarse / e_fine < 5.0);
}

TEST_CASE("energy: zero field, packet quadrature and drift") {
  const Grid2D g(9, 1201, -0.02, 0.02, -1.2, 1.2);
  const double h = 0.01;
  const auto packet = test_packet(h, 1.0, -0.4);

  WaveState<double> zero;
  zero.dt = 0.4 * g.dy();
  zero.u = RealField(g);
  zero.u_prev = RealField(g);
  zero.alpha = zero_alpha(g);
  CHECK(energy(zero) == 0.0);

  // Closed-form energy of the complex packet per unit width:
  //   E = W [ int chi'^2 + h^{-2} int chi^2 ] / h
  // with int chi^2 = K^2 w sqrt(pi/2) and int chi'^2 = K^2 sqrt(pi/2) / w.
  const auto st = make_initial_data<Complex>(packet, zero_alpha(g), 0.4 * g.dy());
  const double W = g.xmax - g.xmin;
  const double s2pi = std::sqrt(3.14159265358979323846 / 2.0);
  const double exact = W / h * (s2pi / 0.14 + s2pi * 0.14 / (h * h));
  CHECK(energy(st) == doctest::Approx(exact).epsilon(0.01));

  // Drift along a short nonlinear run (coarse probe, its own alpha).
  const Grid2D g2(41, 701, -0.2, 0.2, -1.85, 1.65);
  AlphaDescriptor d;
  auto alpha = std::make_shared<const RealField>(sample_alpha(d, g2));
  SimConfig cfg;
  cfg.grid = g2;
  cfg.cfl = 0.5;
  cfg.t_final = 1.0;
  cfg.snapshot_times = {0.0, 0.25, 0.5, 0.75, 1.0};
  cfg.boundary = Boundary::periodic_x;
  const auto snaps = run<Complex>(cfg, test_packet(0.02, 1.0, -1.1), alpha);
  const double e0 = energy(snaps.front());
  for (const auto& s : snaps) CHECK(std::abs(energy(s) - e0) / e0 < 0.005);
}

TEST_CASE("noise: bounds, determinism and coverage") {
  const Grid2D g(1000, 500, -1, 1, -1, 1);  // 5e5 nodes, 1e6 complex draws per field
  WaveState<Complex> st;
  st.dt = 1e-3;
  st.u = ComplexField(g);
  st.u_prev = ComplexField(g);
  st.alpha = zero_alpha(g);
  st.u.values.setConstant(Complex(10.0, 0.0));  // M = 10
  st.u_prev.values.setConstant(Complex(10.0, 0.0));

  auto a = st;
  add_noise(a, 0.0, 5);
  CHECK((a.u.values == st.u.values).all());

  auto b = st;
  add_noise(b, 0.1, 5);
  auto c = st;
  add_noise(c, 0.1, 5);
  CHECK((b.u.values == c.u.values).all());
  CHECK((b.u_prev.values == c.u_prev.values).all());

  auto d = st;
  add_noise(d, 0.1, 6);
  CHECK(!(d.u.values == b.u.values).all());

  // Per-component bound level*M and the order-statistics floor: over 2e6
  // uniform draws the max exceeds 0.9 of the bound with probability
  // 1 - 0.9^(2e6), i.e. always in practice.
  double max_re = 0.0, max_im = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const Complex dv = b.u.values(ix, iy) - st.u.values(ix, iy);
      max_re = std::max(max_re, std::abs(dv.real()));
      max_im = std::max(max_im, std::abs(dv.imag()));
      CHECK(std::abs(dv) <= 0.1 * 10.0 * std::sqrt(2.0) + 1e-12);
    }
  CHECK(max_re >= 0.9 * 0.1 * 10.0);
  CHECK(max_im >= 0.9 * 0.1 * 10.0);
}

TEST_CASE("runs are deterministic and snapshots land on the nearest step") {
  const Grid2D g(9, 401, -0.02, 0.02, -1.1, 0.9);
  SimConfig cfg;
  cfg.grid = g;
  cfg.cfl = 0.5;
  cfg.t_final = 0.5;
  cfg.snapshot_times = {0.1003, 0.5};
  cfg.boundary = Boundary::periodic_x;
  cfg.noise_level = 0.05;
  cfg.seed = 99;
  const auto packet = test_packet(0.02, 1.0, -0.4);

  const auto s1 = run<Complex>(cfg, packet, zero_alpha(g));
  const auto s2 = run<Complex>(cfg, packet, zero_alpha(g));
  REQUIRE(s1.size() == 2);
  CHECK(s1[0].t == doctest::Approx(0.1).epsilon(1e-9));  // dt = 0.0025, nearest step to 0.1003
  CHECK((s1[0].u.values == s2[0].u.values).all());
  CHECK((s1[1].u.values == s2[1].u.values).all());
}

TEST_CASE("divergence is reported with the offending step") {
  const Grid2D g(9, 201, -0.02, 0.02, -1, 1);
  RealField alpha(g);
  alpha.values.setConstant(0.0);
  for (int iy = 120; iy < 160; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) alpha.values(ix, iy) = 1e18;  // absurd stiffness
  SimConfig cfg;
  cfg.grid = g;
  cfg.cfl = 0.5;
  cfg.t_final = 1.5;
  cfg.snapshot_times = {1.5};
  cfg.boundary = Boundary::periodic_x;
  const auto packet = test_packet(0.02, 1.0, -0.4);
  CHECK_THROWS_AS(run<Complex>(cfg, packet, std::make_shared<const RealField>(std::move(alpha))),
                  NumericError);
}

TEST_CASE("x-invariant linear reference equals the 2D run exactly") {
  const Grid2D g(33, 301, -0.1, 0.1, -1.2, 0.8);
  SimConfig cfg;
  cfg.grid = g;
  cfg.cfl = 0.5;
  cfg.t_final = 0.3;
  cfg.snapshot_times = {0.0, 0.15, 0.3};
  cfg.boundary = Boundary::periodic_x;
  const auto packet = test_packet(0.02, 1.0, -0.5);

  const auto snaps = run<Complex>(cfg, packet, zero_alpha(g));
  const auto ref = run_linear_reference<Complex>(cfg, packet);
  REQUIRE(snaps.size() == ref.profiles.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const ComplexField broadcast = ref.broadcast(i, g);
    CHECK((broadcast.values == snaps[i].u.values).all());
  }
}

TEST_SUITE_END();
