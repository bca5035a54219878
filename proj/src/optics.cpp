#include "wnl/optics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wnl {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void require_vertical(const WavePacket& p, const char* who) {
  if (std::abs(p.omega_x) > 1e-12 || std::abs(p.omega_y - 1.0) > 1e-12)
    throw ConfigError(std::string(who) + ": requires the vertical probe omega = (0, 1)");
}

// Parameter range over which the line x + s*omega stays inside the grid.
bool clip_to_grid(const Grid2D& g, double ox, double oy, double x, double y, double& s_lo,
                  double& s_hi) {
  s_lo = -std::numeric_limits<double>::infinity();
  s_hi = std::numeric_limits<double>::infinity();
  auto clip_axis = [&](double o, double p, double lo, double hi) {
    if (std::abs(o) < 1e-15) return p >= lo && p <= hi;
    double a = (lo - p) / o, b = (hi - p) / o;
    if (a > b) std::swap(a, b);
    s_lo = std::max(s_lo, a);
    s_hi = std::min(s_hi, b);
    return true;
  };
  if (!clip_axis(ox, x, g.xmin, g.xmax)) return false;
  if (!clip_axis(oy, y, g.ymin, g.ymax)) return false;
  return s_lo < s_hi;
}

PhaseMap phase_against(const ComplexField& u_T, const ComplexField& ref, const WavePacket& packet,
                       double T, double mask_fraction = Envelope::mask_threshold) {
  if (!(u_T.grid == ref.grid)) throw ConfigError("extract_phase: grids differ");
  const Grid2D& g = u_T.grid;
  PhaseMap map;
  map.grid = g;
  map.values = Array2<double>::Zero(g.nx, g.ny);
  map.mask = Array2<bool>::Constant(g.nx, g.ny, false);

  const double cut = mask_fraction * packet.envelope.K;
  double min_abs = std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double chi = packet.envelope(packet.xi(T, g.x(ix), g.y(iy)));
      if (chi <= cut) continue;
      map.mask(ix, iy) = true;
      min_abs = std::min(min_abs, std::abs(u_T.values(ix, iy)));
      map.values(ix, iy) = std::arg(u_T.values(ix, iy) * std::conj(ref.values(ix, iy)));
    }
  if (min_abs < 1e-14)
    throw NumericError("extract_phase: degenerate amplitude on the envelope mask");
  return map;
}

}  // namespace

double PhaseMap::max_abs_on_mask() const {
  double m = 0.0;
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      if (mask(ix, iy)) m = std::max(m, std::abs(values(ix, iy)));
  return m;
}

std::vector<double> DataProfile::xray_estimate() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = -values[i] / C;
  return out;
}

double partial_xray(const RealField& alpha, double omega_x, double omega_y, double x, double y,
                    double t_upper) {
  const Grid2D& g = alpha.grid;
  double s_lo, s_hi;
  if (!clip_to_grid(g, omega_x, omega_y, x, y, s_lo, s_hi)) return 0.0;
  s_hi = std::min(s_hi, t_upper);
  if (s_hi <= s_lo) return 0.0;

  const double step = 0.5 * std::min(g.dx(), g.dy());
  const int n = std::max(2, static_cast<int>(std::ceil((s_hi - s_lo) / step)) + 1);
  const double ds = (s_hi - s_lo) / (n - 1);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = s_lo + i * ds;
    const double v = alpha.bilinear(x + s * omega_x, y + s * omega_y);
    acc += (i == 0 || i == n - 1) ? 0.5 * v : v;
  }
  return acc * ds;
}

RealField cumulative_vertical_xray(const RealField& alpha) {
  const Grid2D& g = alpha.grid;
  RealField out(g);
  const double dy = g.dy();
  for (int ix = 0; ix < g.nx; ++ix) {
    double acc = 0.0;
    out.values(ix, 0) = 0.0;
    for (int iy = 1; iy < g.ny; ++iy) {
      acc += 0.5 * dy * (alpha.values(ix, iy - 1) + alpha.values(ix, iy));
      out.values(ix, iy) = acc;
    }
  }
  return out;
}

ComplexField parametrix(const WavePacket& packet, const RealField& alpha, double t,
                        const Grid2D& grid) {
  packet.validate();
  if (packet.kind != WavePacket::FieldKind::complex_probe)
    throw ConfigError("parametrix: the phase ansatz applies to the complex probe only");

  const bool vertical = std::abs(packet.omega_x) < 1e-12 && std::abs(packet.omega_y - 1.0) < 1e-12;
  RealField cum;
  if (vertical && alpha.grid == grid) cum = cumulative_vertical_xray(alpha);

  const double inv_sqrt_h = 1.0 / std::sqrt(packet.h);
  const double delta = packet.envelope.support_halfwidth();
  ComplexField out(grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double x = grid.x(ix), y = grid.y(iy);
      const double xi = packet.xi(t, x, y);
      if (std::abs(xi) > delta) continue;  // chi below 2.1e-11 of peak
      const double chi = packet.envelope(xi);

      double ray;
      if (cum.grid.nx > 0) {
        // I(y + t) clamped to the column ends equals the s in [entry, t]
        // integral because alpha vanishes off the grid.
        const double y_cap = std::clamp(y + t, grid.ymin, grid.ymax);
        const double fy = (y_cap - grid.ymin) / grid.dy();
        const int j = std::min(static_cast<int>(fy), grid.ny - 2);
        const double ty = fy - j;
        ray = (1.0 - ty) * cum.values(ix, j) + ty * cum.values(ix, j + 1);
      } else {
        ray = partial_xray(alpha, packet.omega_x, packet.omega_y, x, y, t);
      }

      const double phi = xi / packet.h - 0.5 * chi * chi * ray;
      out.values(ix, iy) = Complex(chi * inv_sqrt_h * std::cos(phi), chi * inv_sqrt_h * std::sin(phi));
    }
  return out;
}

PhaseMap extract_phase(const ComplexField& u_T, const ComplexField& reference,
                       const WavePacket& packet, double T) {
  return phase_against(u_T, reference, packet, T);
}

PhaseMap extract_phase(const ComplexField& u_T, const WavePacket& packet, double T) {
  const Grid2D& g = u_T.grid;
  ComplexField ref(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      ref.values(ix, iy) = packet.value_complex(T, g.x(ix), g.y(iy));
  return phase_against(u_T, ref, packet, T);
}

std::vector<double> unwrap_profile(const std::vector<double>& profile, std::size_t anchor) {
  if (profile.empty()) return {};
  if (anchor >= profile.size()) throw ConfigError("unwrap_profile: anchor out of range");

  std::vector<double> out(profile.size());
  out[anchor] = profile[anchor];
  auto branch_step = [](double raw_jump) {
    if (std::abs(std::abs(raw_jump) - kPi) < 1e-9)
      throw NumericError("unwrap_profile: successive-sample jump of exactly pi; branch ambiguous");
    double j = std::remainder(raw_jump, kTwoPi);
    return j;
  };
  for (std::size_t i = anchor + 1; i < profile.size(); ++i)
    out[i] = out[i - 1] + branch_step(profile[i] - profile[i - 1]);
  for (std::size_t i = anchor; i-- > 0;)
    out[i] = out[i + 1] + branch_step(profile[i] - profile[i + 1]);
  return out;
}

DataProfile integrated_data(const ComplexField& u_T, const ComplexField& u_lin_T,
                            const WavePacket& packet, double T, double mask_fraction) {
  require_vertical(packet, "integrated_data");
  PhaseMap map = phase_against(u_T, u_lin_T, packet, T, mask_fraction);

  DataProfile prof;
  prof.C = 0.5 * envelope_power_integral(packet.envelope, 2);

  const Grid2D& g = u_T.grid;
  const double dy = g.dy();
  for (int ix = 0; ix < g.nx; ++ix) {
    int lo = -1, hi = -1;
    for (int iy = 0; iy < g.ny; ++iy)
      if (map.mask(ix, iy)) {
        if (lo < 0) lo = iy;
        hi = iy;
      }
    if (lo < 0) continue;  // empty mask column: sample absent

    std::vector<double> col;
    col.reserve(hi - lo + 1);
    for (int iy = lo; iy <= hi; ++iy) col.push_back(map.values(ix, iy));
    const std::vector<double> unwrapped = unwrap_profile(col, 0);

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < unwrapped.size(); ++i)
      acc += 0.5 * dy * (unwrapped[i] + unwrapped[i + 1]);
    prof.z.push_back(g.x(ix));
    prof.values.push_back(acc);
  }
  return prof;
}

double relative_shift(double phase_max) { return phase_max / kTwoPi; }

void require_packet_exited(const RealField& alpha, const WavePacket& packet, double T) {
  const Grid2D& g = alpha.grid;
  const double cut = Envelope::mask_threshold * packet.envelope.K;
  double worst = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (packet.envelope(packet.xi(T, g.x(ix), g.y(iy))) > cut)
        worst = std::max(worst, alpha.values(ix, iy));
  if (worst > 1e-5)
    throw SetupError("phase extraction requested before the packet exited supp alpha (max alpha "
                     "on the envelope mask: " +
                     std::to_string(worst) + ")");
}

ModulusStats modulus_check(const ComplexField& u_nl, const ComplexField& u_lin,
                           const WavePacket& packet, double T, double threshold_fraction) {
  if (!(u_nl.grid == u_lin.grid)) throw ConfigError("modulus_check: grids differ");
  const Grid2D& g = u_nl.grid;
  const double cut = threshold_fraction * packet.envelope.K;

  ModulusStats stats;
  double sum = 0.0;
  long count = 0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      if (packet.envelope(packet.xi(T, g.x(ix), g.y(iy))) <= cut) continue;
      const double a = std::abs(u_nl.values(ix, iy));
      const double b = std::abs(u_lin.values(ix, iy));
      if (b < 1e-300) continue;
      const double dev = std::abs(a - b) / b;
      stats.max_dev = std::max(stats.max_dev, dev);
      sum += dev;
      ++count;
    }
  stats.mean_dev = count ? sum / count : 0.0;
  return stats;
}

double discrete_group_velocity(double h, double dy, double dt) {
  const double nu = dt / dy;
  const double s = std::sin(0.5 * dy / h);
  return std::cos(0.5 * dy / h) / std::sqrt(std::max(1e-300, 1.0 - nu * nu * s * s));
}

double parametrix_deviation(const ComplexState& state, const ComplexField& u_lin) {
  const WavePacket& packet = state.packet;
  require_vertical(packet, "parametrix_deviation");
  if (!(u_lin.grid == state.u.grid)) throw ConfigError("parametrix_deviation: grids differ");

  const Grid2D& g = state.u.grid;
  const RealField cum = cumulative_vertical_xray(*state.alpha);
  const double cg = discrete_group_velocity(packet.h, g.dy(), state.dt);
  const double lag = (1.0 - cg) * state.t;  // numerical envelope delay
  const double sqrt_h = std::sqrt(packet.h);

  double worst = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const double y = g.y(iy);
    const double y_cap = std::clamp(y + state.t, g.ymin, g.ymax);
    const double fy = (y_cap - g.ymin) / g.dy();
    const int j = std::min(static_cast<int>(fy), g.ny - 2);
    const double ty = fy - j;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi_g = packet.xi(state.t, g.x(ix), y) + lag;
      const double chi = packet.envelope(xi_g);
      const double ray = (1.0 - ty) * cum.values(ix, j) + ty * cum.values(ix, j + 1);
      const double phi = -0.5 * chi * chi * ray;
      const Complex cal = u_lin.values(ix, iy) * Complex(std::cos(phi), std::sin(phi));
      worst = std::max(worst, sqrt_h * std::abs(state.u.values(ix, iy) - cal));
    }
  }
  return worst;
}

}  // namespace wnl
