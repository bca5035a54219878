#include "wnl/wavesolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "wnl/rng.hpp"

namespace wnl {

namespace {

template <typename Scalar>
Scalar packet_value(const WavePacket& p, double t, double x, double y) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    return p.value_complex(t, x, y);
  } else {
    return p.value_real(t, x, y);
  }
}

template <typename Scalar>
bool all_finite(const Field<Scalar>& f) {
  return f.values.isFinite().all();
}

// Stencil update for columns iy in [iy_begin, iy_end). Pure per-node map,
// so any partition of the range produces bitwise identical results.
//
// Real case, per node:
//   out = 2u - prev + rx*(l + r - 2u) + ry*(dn + up - 2u) - (dt2*a)*(u*u*u)
// Complex case, per component c in {re, im}:
//   out_c = 2u_c - prev_c + rx*(l_c + r_c - 2u_c) + ry*(dn_c + up_c - 2u_c)
//           - ((dt2*a)*(u_re*u_re + u_im*u_im))*u_c
// The complex column is swept as interleaved double lanes; the linear part
// is componentwise, which keeps the hot loop stride-1 and vectorizable.
template <typename Scalar>
void update_columns(const WaveState<Scalar>& s, Field<Scalar>& next, double dt, int iy_begin,
                    int iy_end) {
  const Grid2D& g = s.u.grid;
  const int nx = g.nx;
  const double rx = dt * dt / (g.dx() * g.dx());
  const double ry = dt * dt / (g.dy() * g.dy());
  const double dt2 = dt * dt;
  const bool periodic = s.boundary == Boundary::periodic_x;
  const auto& alpha = *s.alpha;

  constexpr int lanes = std::is_same_v<Scalar, Complex> ? 2 : 1;
  const int m = lanes * nx;

  for (int iy = iy_begin; iy < iy_end; ++iy) {
    const double* u = reinterpret_cast<const double*>(&s.u.values(0, iy));
    const double* dn = reinterpret_cast<const double*>(&s.u.values(0, iy - 1));
    const double* up = reinterpret_cast<const double*>(&s.u.values(0, iy + 1));
    const double* prev = reinterpret_cast<const double*>(&s.u_prev.values(0, iy));
    const double* a = &alpha.values(0, iy);
    double* out = reinterpret_cast<double*>(&next.values(0, iy));

    auto linear = [&](int j, double left, double right) {
      out[j] = 2.0 * u[j] - prev[j] + rx * (left + right - 2.0 * u[j]) +
               ry * (dn[j] + up[j] - 2.0 * u[j]);
    };

    for (int j = lanes; j < m - lanes; ++j) linear(j, u[j - lanes], u[j + lanes]);
    if (periodic) {
      for (int c = 0; c < lanes; ++c) {
        linear(c, u[m - lanes + c], u[lanes + c]);
        linear(m - lanes + c, u[m - 2 * lanes + c], u[c]);
      }
    } else {
      for (int c = 0; c < lanes; ++c) {
        out[c] = 0.0;
        out[m - lanes + c] = 0.0;
      }
    }

    const int ix_begin = periodic ? 0 : 1;
    const int ix_end = periodic ? nx : nx - 1;
    if constexpr (lanes == 2) {
      for (int ix = ix_begin; ix < ix_end; ++ix) {
        const double q = (dt2 * a[ix]) * (u[2 * ix] * u[2 * ix] + u[2 * ix + 1] * u[2 * ix + 1]);
        out[2 * ix] -= q * u[2 * ix];
        out[2 * ix + 1] -= q * u[2 * ix + 1];
      }
    } else {
      for (int ix = ix_begin; ix < ix_end; ++ix)
        out[ix] -= (dt2 * a[ix]) * (u[ix] * u[ix] * u[ix]);
    }
  }
}

}  // namespace

void WavePacket::validate() const {
  if (h <= 0.0) throw ConfigError("packet: h must be > 0");
  const double n = std::hypot(omega_x, omega_y);
  if (std::abs(n - 1.0) > 1e-12) throw ConfigError("packet: omega must be a unit vector");
  envelope.validate();
}

Complex WavePacket::value_complex(double t, double x, double y) const {
  const double s = xi(t, x, y);
  const double amp = envelope(s) / std::sqrt(h);
  return Complex(amp * std::cos(s / h), amp * std::sin(s / h));
}

double WavePacket::value_real(double t, double x, double y) const {
  const double s = xi(t, x, y);
  return envelope(s) / std::sqrt(h) * std::cos(s / h);
}

void SimConfig::validate() const {
  grid.dx();  // constructor enforced extents; this just touches the grid
  if (!(cfl > 0.0) || cfl > 0.7)
    throw ConfigError("solver: cfl must lie in (0, 0.7], below the 2D bound 1/sqrt(2)");
  if (!(t_final > 0.0)) throw ConfigError("solver: t_final must be > 0");
  if (noise_level < 0.0) throw ConfigError("solver: noise_level must be >= 0");
  if (threads < 1) throw ConfigError("solver: threads must be >= 1");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_final + 1e-12)
      throw ConfigError("solver: snapshot_times must lie in [0, t_final]");
}

template <typename Scalar>
WaveState<Scalar> make_initial_data(const WavePacket& packet,
                                    std::shared_ptr<const RealField> alpha, double dt,
                                    Boundary boundary) {
  packet.validate();
  if (!alpha) throw ConfigError("make_initial_data: alpha field required");
  if (!(dt > 0.0)) throw ConfigError("make_initial_data: dt must be > 0");
  const Grid2D& g = alpha->grid;

  // Projection of the grid corners onto omega bounds the band the packet
  // support must fit into.
  const double delta = packet.envelope.support_halfwidth();
  double pmin = 1e300, pmax = -1e300;
  for (double cx : {g.xmin, g.xmax})
    for (double cy : {g.ymin, g.ymax}) {
      const double proj = cx * packet.omega_x + cy * packet.omega_y;
      pmin = std::min(pmin, proj);
      pmax = std::max(pmax, proj);
    }
  const double c0 = packet.center_offset;
  if (c0 - delta < pmin - 1e-12 || c0 + delta > pmax + 1e-12)
    throw SetupError("make_initial_data: packet support exceeds the grid along omega");

  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      if (alpha->values(ix, iy) <= 1e-6) continue;
      const double proj = g.x(ix) * packet.omega_x + g.y(iy) * packet.omega_y;
      if (std::abs(proj - c0) <= delta)
        throw SetupError("make_initial_data: packet support overlaps {alpha > 1e-6}");
    }

  WaveState<Scalar> st;
  st.t = 0.0;
  st.dt = dt;
  st.packet = packet;
  st.alpha = std::move(alpha);
  st.boundary = boundary;
  st.u = Field<Scalar>(g);
  st.u_prev = Field<Scalar>(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      st.u.values(ix, iy) = packet_value<Scalar>(packet, 0.0, g.x(ix), g.y(iy));
      st.u_prev.values(ix, iy) = packet_value<Scalar>(packet, -dt, g.x(ix), g.y(iy));
    }
  return st;
}

template <typename Scalar>
void step(WaveState<Scalar>& state, double dt, int threads) {
  const Grid2D& g = state.u.grid;
  if (!(state.alpha->grid == g) || !(state.u_prev.grid == g))
    throw ConfigError("step: inconsistent grids");
  if (dt > 0.7 * std::min(g.dx(), g.dy()) + 1e-15)
    throw ConfigError("step: dt violates the CFL bound 0.7*min(dx, dy)");

  Field<Scalar> next(g);  // y edges stay zero
  const int iy_begin = 1, iy_end = g.ny - 1;
  if (threads <= 1 || iy_end - iy_begin < 4 * threads) {
    update_columns(state, next, dt, iy_begin, iy_end);
  } else {
    std::vector<std::thread> pool;
    const int span = (iy_end - iy_begin + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
      const int b = iy_begin + k * span;
      const int e = std::min(iy_end, b + span);
      if (b >= e) break;
      pool.emplace_back([&, b, e] { update_columns(state, next, dt, b, e); });
    }
    for (auto& th : pool) th.join();
  }

  state.u_prev = std::move(state.u);
  state.u = std::move(next);
  state.t += dt;
  state.step_index += 1;
}

template <typename Scalar>
std::vector<WaveState<Scalar>> run(const SimConfig& config, const WavePacket& packet,
                                   std::shared_ptr<const RealField> alpha) {
  config.validate();
  const double dt = config.dt();
  auto state = make_initial_data<Scalar>(packet, std::move(alpha), dt, config.boundary);
  if (config.noise_level > 0.0) add_noise(state, config.noise_level, config.seed);

  const long nsteps = std::lround(config.t_final / dt);
  std::vector<long> targets;
  for (double t : config.snapshot_times)
    targets.push_back(std::clamp<long>(std::lround(t / dt), 0, nsteps));
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  std::vector<WaveState<Scalar>> snapshots;
  auto capture = [&](long n) {
    if (std::find(targets.begin(), targets.end(), n) != targets.end()) snapshots.push_back(state);
  };
  capture(0);
  for (long n = 1; n <= nsteps; ++n) {
    step(state, dt, config.threads);
    if (n % 16 == 0 || n == nsteps) {
      if (!all_finite(state.u))
        throw NumericError("run: non-finite values detected at step " + std::to_string(n) +
                           " (t = " + std::to_string(state.t) + ")");
    }
    capture(n);
  }
  return snapshots;
}

template <typename Scalar>
double energy(const WaveState<Scalar>& state) {
  const Grid2D& g = state.u.grid;
  const double dx = g.dx(), dy = g.dy();
  const auto& u = state.u.values;
  const auto& alpha = state.alpha->values;
  const bool periodic = state.boundary == Boundary::periodic_x;

  double acc = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Scalar ut = (u(ix, iy) - state.u_prev.values(ix, iy)) / state.dt;

      Scalar gx;
      if (ix > 0 && ix < g.nx - 1)
        gx = (u(ix + 1, iy) - u(ix - 1, iy)) / (2 * dx);
      else if (periodic)
        gx = (u((ix + 1) % g.nx, iy) - u((ix + g.nx - 1) % g.nx, iy)) / (2 * dx);
      else
        gx = ix == 0 ? (u(1, iy) - u(0, iy)) / dx : (u(ix, iy) - u(ix - 1, iy)) / dx;

      Scalar gy;
      if (iy > 0 && iy < g.ny - 1)
        gy = (u(ix, iy + 1) - u(ix, iy - 1)) / (2 * dy);
      else
        gy = iy == 0 ? (u(ix, 1) - u(ix, 0)) / dy : (u(ix, iy) - u(ix, iy - 1)) / dy;

      const double u2 = std::norm(u(ix, iy));
      acc += 0.5 * std::norm(ut) + 0.5 * (std::norm(gx) + std::norm(gy)) +
             0.25 * alpha(ix, iy) * u2 * u2;
    }
  }
  return acc * dx * dy;
}

template <typename Scalar>
void add_noise(WaveState<Scalar>& state, double level, std::uint64_t seed) {
  if (level < 0.0) throw ConfigError("add_noise: level must be >= 0");
  if (level == 0.0) return;
  const double scale = level * state.u.max_abs();
  SplitMix64 rng(seed);
  for (Field<Scalar>* f : {&state.u, &state.u_prev}) {
    for (int iy = 0; iy < f->grid.ny; ++iy)
      for (int ix = 0; ix < f->grid.nx; ++ix) {
        if constexpr (std::is_same_v<Scalar, Complex>) {
          const double re = scale * rng.uniform_pm1();
          const double im = scale * rng.uniform_pm1();
          f->values(ix, iy) += Complex(re, im);
        } else {
          f->values(ix, iy) += scale * rng.uniform_pm1();
        }
      }
  }
}

template <typename Scalar>
Field<Scalar> LinearReference<Scalar>::broadcast(std::size_t snapshot, const Grid2D& grid) const {
  if (snapshot >= profiles.size()) throw ConfigError("LinearReference: snapshot out of range");
  if (static_cast<int>(profiles[snapshot].size()) != grid.ny)
    throw ConfigError("LinearReference: grid height mismatch");
  Field<Scalar> out(grid);
  for (int iy = 0; iy < grid.ny; ++iy) out.values.col(iy).setConstant(profiles[snapshot][iy]);
  return out;
}

template <typename Scalar>
LinearReference<Scalar> run_linear_reference(const SimConfig& config, const WavePacket& packet) {
  config.validate();
  packet.validate();
  if (std::abs(packet.omega_x) > 1e-12 || std::abs(packet.omega_y - 1.0) > 1e-12)
    throw ConfigError("run_linear_reference: requires the vertical probe omega = (0, 1)");

  const Grid2D& g = config.grid;
  const double dt = config.dt();
  const double ry = dt * dt / (g.dy() * g.dy());
  const long nsteps = std::lround(config.t_final / dt);

  std::vector<Scalar> v(g.ny), vprev(g.ny), vnext(g.ny, Scalar(0));
  for (int iy = 0; iy < g.ny; ++iy) {
    v[iy] = packet_value<Scalar>(packet, 0.0, 0.0, g.y(iy));
    vprev[iy] = packet_value<Scalar>(packet, -dt, 0.0, g.y(iy));
  }

  std::vector<long> targets;
  for (double t : config.snapshot_times)
    targets.push_back(std::clamp<long>(std::lround(t / dt), 0, nsteps));

  LinearReference<Scalar> ref;
  auto capture = [&](long n, double t) {
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (targets[i] == n) {
        ref.times.push_back(t);
        ref.profiles.push_back(v);
      }
  };
  capture(0, 0.0);
  for (long n = 1; n <= nsteps; ++n) {
    for (int iy = 1; iy < g.ny - 1; ++iy)
      vnext[iy] = 2.0 * v[iy] - vprev[iy] + ry * (v[iy - 1] + v[iy + 1] - 2.0 * v[iy]);
    vnext[0] = Scalar(0);
    vnext[g.ny - 1] = Scalar(0);
    std::swap(vprev, v);
    std::swap(v, vnext);
    capture(n, n * dt);
  }
  return ref;
}

// Explicit instantiations for the two field kinds.
template WaveState<Complex> make_initial_data<Complex>(const WavePacket&,
                                                       std::shared_ptr<const RealField>, double,
                                                       Boundary);
template WaveState<double> make_initial_data<double>(const WavePacket&,
                                                     std::shared_ptr<const RealField>, double,
                                                     Boundary);
template void step<Complex>(WaveState<Complex>&, double, int);
template void step<double>(WaveState<double>&, double, int);
template std::vector<WaveState<Complex>> run<Complex>(const SimConfig&, const WavePacket&,
                                                      std::shared_ptr<const RealField>);
template std::vector<WaveState<double>> run<double>(const SimConfig&, const WavePacket&,
                                                    std::shared_ptr<const RealField>);
template double energy<Complex>(const WaveState<Complex>&);
template double energy<double>(const WaveState<double>&);
template void add_noise<Complex>(WaveState<Complex>&, double, std::uint64_t);
template void add_noise<double>(WaveState<double>&, double, std::uint64_t);
template struct LinearReference<Complex>;
template struct LinearReference<double>;
template LinearReference<Complex> run_linear_reference<Complex>(const SimConfig&,
                                                                const WavePacket&);
template LinearReference<double> run_linear_reference<double>(const SimConfig&, const WavePacket&);

}  // namespace wnl
