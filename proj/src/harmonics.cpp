#include "wnl/harmonics.hpp"

#include <algorithm>
#include <cmath>

#include "wnl/optics.hpp"

namespace wnl {

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI(0.0, 1.0);

void check_kmax(int kmax) {
  if (kmax < 1 || kmax % 2 == 0) throw ConfigError("harmonics: kmax must be odd and >= 1");
}

// Lookup into the conjugate-symmetric full sequence; k odd in [-kmax, kmax].
Complex full_seq(const std::vector<Complex>& amps, int k) {
  return k > 0 ? amps[(k - 1) / 2] : std::conj(amps[(-k - 1) / 2]);
}

double sup_l2_distance(const std::vector<std::vector<Complex>>& a,
                       const std::vector<std::vector<Complex>>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a[i].size(); ++k) acc += std::norm(a[i][k] - b[i][k]);
    worst = std::max(worst, std::sqrt(2.0 * acc));
  }
  return worst;
}

}  // namespace

HarmonicState HarmonicState::initial(double A, int kmax) {
  check_kmax(kmax);
  if (A < 0.0) throw ConfigError("harmonics: A must be >= 0");
  HarmonicState st;
  st.A = A;
  st.kmax = kmax;
  st.amps.assign((kmax + 1) / 2, Complex(0.0, 0.0));
  st.amps[0] = Complex(A / 2.0, 0.0);
  return st;
}

double HarmonicState::conserved_q() const {
  double q = 0.0;
  for (int i = 0; i < count(); ++i) {
    const double k = 2 * i + 1;
    q += k * k * std::norm(amps[i]);
  }
  return q;
}

double HarmonicState::k_weighted_sum() const {
  double q = 0.0;
  for (int i = 0; i < count(); ++i) q += (2 * i + 1) * std::norm(amps[i]);
  return q;
}

double HarmonicState::l1_norm() const {
  double acc = 0.0;
  for (const Complex& a : amps) acc += std::abs(a);
  return 2.0 * acc;
}

double HarmonicState::l2_norm() const {
  double acc = 0.0;
  for (const Complex& a : amps) acc += std::norm(a);
  return std::sqrt(2.0 * acc);
}

double HarmonicState::h_half_norm() const { return std::sqrt(2.0 * k_weighted_sum()); }

std::vector<Complex> triple_convolution(const std::vector<Complex>& amps, int kmax) {
  check_kmax(kmax);
  if (static_cast<int>(amps.size()) != (kmax + 1) / 2)
    throw ConfigError("triple_convolution: amps size does not match kmax");

  std::vector<Complex> out((kmax + 1) / 2, Complex(0.0, 0.0));
  for (int k = 1; k <= kmax; k += 2) {
    Complex acc(0.0, 0.0);
    for (int k1 = -kmax; k1 <= kmax; k1 += 2) {
      const Complex a1 = full_seq(amps, k1);
      if (a1 == Complex(0.0, 0.0)) continue;
      for (int k2 = -kmax; k2 <= kmax; k2 += 2) {
        const int k3 = k - k1 - k2;
        if (k3 < -kmax || k3 > kmax || k3 % 2 == 0) continue;
        const Complex a2 = full_seq(amps, k2);
        if (a2 == Complex(0.0, 0.0)) continue;
        acc += a1 * a2 * full_seq(amps, k3);
      }
    }
    out[(k - 1) / 2] = acc;
  }
  return out;
}

std::vector<Complex> transport_rhs(const HarmonicState& state, double alpha_s) {
  std::vector<Complex> c = triple_convolution(state.amps, state.kmax);
  for (int i = 0; i < state.count(); ++i) c[i] *= -kI * alpha_s / (2.0 * (2 * i + 1));
  return c;
}

std::vector<HarmonicState> solve_transport(double A, const AlphaOfS& alpha, double S, int kmax,
                                           double ds) {
  check_kmax(kmax);
  if (!(ds > 0.0) || !(S >= 0.0)) throw ConfigError("solve_transport: need ds > 0, S >= 0");

  HarmonicState st = HarmonicState::initial(A, kmax);
  std::vector<HarmonicState> trajectory;
  const long nsteps = std::lround(S / ds);
  trajectory.reserve(nsteps + 1);
  trajectory.push_back(st);

  const int m = st.count();
  std::vector<Complex> k1(m), k2(m), k3(m), k4(m);
  HarmonicState tmp = st;

  for (long n = 0; n < nsteps; ++n) {
    const double s = n * ds;

    k1 = transport_rhs(st, alpha(s));
    for (int i = 0; i < m; ++i) tmp.amps[i] = st.amps[i] + 0.5 * ds * k1[i];
    k2 = transport_rhs(tmp, alpha(s + 0.5 * ds));
    for (int i = 0; i < m; ++i) tmp.amps[i] = st.amps[i] + 0.5 * ds * k2[i];
    k3 = transport_rhs(tmp, alpha(s + 0.5 * ds));
    for (int i = 0; i < m; ++i) tmp.amps[i] = st.amps[i] + ds * k3[i];
    k4 = transport_rhs(tmp, alpha(s + ds));
    for (int i = 0; i < m; ++i)
      st.amps[i] += ds / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    st.s = (n + 1) * ds;

    for (const Complex& a : st.amps)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw NumericError("solve_transport: non-finite state at s = " + std::to_string(st.s));
    trajectory.push_back(st);
  }
  return trajectory;
}

PicardBounds existence_bounds(double alpha_inf, double a0_l2, double a0_h12, double s0_cap) {
  if (alpha_inf < 0.0 || a0_l2 <= 0.0 || a0_h12 < 0.0 || s0_cap <= 0.0)
    throw ConfigError("existence_bounds: invalid inputs");

  auto certified_s0 = [&](double norm) {
    const double M = norm;
    if (alpha_inf * norm < 1e-300) return s0_cap;
    const double sum = norm + M;
    const double cond1 = 2.0 * M / (alpha_inf * sum * sum * sum);
    const double cond2 = 2.0 / (3.0 * alpha_inf * sum * sum);
    return std::min(s0_cap, 0.9 * std::min(cond1, cond2));
  };

  PicardBounds b;
  b.alpha_inf = alpha_inf;
  b.a0_l2 = a0_l2;
  b.a0_h12 = a0_h12;
  b.M = a0_l2;
  b.s0 = certified_s0(a0_l2);
  b.s0_h12 = a0_h12 > 0.0 ? certified_s0(a0_h12) : 0.0;
  b.contraction = 1.5 * b.s0 * alpha_inf * (b.M + a0_l2) * (b.M + a0_l2);
  return b;
}

PicardResult picard_solve(double A, const AlphaOfS& alpha, int kmax, double s0, double M,
                          int max_iterations, double tol, bool force, double ds) {
  check_kmax(kmax);
  if (!(s0 > 0.0) || !(M > 0.0)) throw ConfigError("picard_solve: need s0, M > 0");

  const long n = std::max<long>(2, std::lround(s0 / ds) + 1);
  std::vector<double> s(n);
  for (long i = 0; i < n; ++i) s[i] = s0 * static_cast<double>(i) / (n - 1);
  const double h = s[1] - s[0];

  double alpha_inf = 0.0;
  std::vector<double> alpha_s(n);
  for (long i = 0; i < n; ++i) {
    alpha_s[i] = alpha(s[i]);
    alpha_inf = std::max(alpha_inf, std::abs(alpha_s[i]));
  }

  const HarmonicState init = HarmonicState::initial(A, kmax);
  const double a0 = init.l2_norm();
  const double cond1 = 0.5 * alpha_inf * (a0 + M) * (a0 + M) * (a0 + M) * s0;
  const double contraction = 1.5 * alpha_inf * (M + a0) * (M + a0) * s0;
  if (!force && (cond1 > M || contraction >= 1.0))
    throw ConfigError(
        "picard_solve: (s0, M) not certified by the invariance/contraction inequalities; "
        "pass force = true to iterate anyway");

  const int m = init.count();
  PicardResult res;
  res.s = s;
  res.trajectory.assign(n, init.amps);

  std::vector<std::vector<Complex>> next(n, std::vector<Complex>(m));
  std::vector<std::vector<Complex>> conv(n);
  for (int it = 0; it < max_iterations; ++it) {
    for (long i = 0; i < n; ++i) conv[i] = triple_convolution(res.trajectory[i], kmax);
    for (int k_idx = 0; k_idx < m; ++k_idx) {
      const double k = 2 * k_idx + 1;
      Complex acc(0.0, 0.0);
      next[0][k_idx] = init.amps[k_idx];
      for (long i = 1; i < n; ++i) {
        acc += 0.5 * h * (alpha_s[i - 1] * conv[i - 1][k_idx] + alpha_s[i] * conv[i][k_idx]);
        next[i][k_idx] = init.amps[k_idx] - kI / (2.0 * k) * acc;
      }
    }
    const double dist = sup_l2_distance(next, res.trajectory);
    res.successive_distances.push_back(dist);
    res.trajectory.swap(next);
    res.iterations = it + 1;
    if (dist < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::pair<Complex, Complex> linearized_amplitudes(double A, double R) {
  const Complex da1 = -(3.0 * A * A * A / 8.0) * (kI / 2.0) * R;
  const Complex da3 = -(A * A * A / 8.0) * (kI / 6.0) * R;
  return {da1, da3};
}

double first_harmonic_field(double A, double partial_integral, double phase_arg, double h) {
  return A / std::sqrt(h) * std::cos(phase_arg - 3.0 * A * A / 8.0 * partial_integral);
}

RealDataProfile real_data_extract(const RealField& u_T, const RealField& u_lin_T,
                                  const WavePacket& packet, const RealField& alpha, double band_lo,
                                  double band_hi) {
  if (packet.kind != WavePacket::FieldKind::real_probe)
    throw ConfigError("real_data_extract: real probe required");
  if (!(u_T.grid == u_lin_T.grid) || !(u_T.grid == alpha.grid))
    throw ConfigError("real_data_extract: grids differ");
  if (!(band_hi > band_lo)) throw ConfigError("real_data_extract: empty band");

  const Grid2D& g = u_T.grid;
  const double dy = g.dy();
  int lo = static_cast<int>(std::ceil((band_lo - g.ymin) / dy));
  int hi = static_cast<int>(std::floor((band_hi - g.ymin) / dy));
  lo = std::clamp(lo, 0, g.ny - 1);
  hi = std::clamp(hi, 0, g.ny - 1);
  if (hi - lo < 2) throw ConfigError("real_data_extract: band too narrow for the grid");

  for (int iy = lo; iy <= hi; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (alpha.values(ix, iy) > 1e-6)
        throw SetupError("real_data_extract: band overlaps supp alpha");

  RealDataProfile prof;
  prof.C = std::sqrt(41.0) / 24.0 * std::sqrt(envelope_power_integral(packet.envelope, 6));

  for (int ix = 0; ix < g.nx; ++ix) {
    double acc = 0.0;
    for (int iy = lo; iy < hi; ++iy) {
      const double d0 = u_T.values(ix, iy) - u_lin_T.values(ix, iy);
      const double d1 = u_T.values(ix, iy + 1) - u_lin_T.values(ix, iy + 1);
      acc += 0.5 * dy * (d0 * d0 + d1 * d1);
    }
    prof.z.push_back(g.x(ix));
    prof.values.push_back(std::sqrt(packet.h * acc) / prof.C);
  }
  return prof;
}

std::size_t PowerSpectrum::peak_index(double min_frequency) const {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t j = 1; j + 1 < magnitude.size(); ++j) {
    if (frequency[j] < min_frequency) continue;
    if (magnitude[j] >= magnitude[j - 1] && magnitude[j] >= magnitude[j + 1] &&
        magnitude[j] > best_mag) {
      best = j;
      best_mag = magnitude[j];
    }
  }
  if (best_mag < 0.0) throw NumericError("PowerSpectrum: no local maximum found");
  return best;
}

double PowerSpectrum::refined_peak(std::size_t j) const {
  if (j == 0 || j + 1 >= magnitude.size()) return frequency[j];
  const double m0 = magnitude[j - 1], m1 = magnitude[j], m2 = magnitude[j + 1];
  const double denom = m0 - 2.0 * m1 + m2;
  const double delta = std::abs(denom) < 1e-300 ? 0.0 : 0.5 * (m0 - m2) / denom;
  const double df = frequency[1] - frequency[0];
  return frequency[j] + delta * df;
}

PowerSpectrum power_spectrum(const std::vector<double>& slice, double spacing) {
  const std::size_t n = slice.size();
  if (n < 64) throw ConfigError("power_spectrum: need at least 64 samples");
  if (!(spacing > 0.0)) throw ConfigError("power_spectrum: spacing must be > 0");

  PowerSpectrum out;
  const std::size_t half = n / 2;
  out.frequency.resize(half + 1);
  out.magnitude.resize(half + 1);
  for (std::size_t j = 0; j <= half; ++j) {
    double re = 0.0, im = 0.0;
    const double w = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      re += slice[i] * std::cos(w * i);
      im += slice[i] * std::sin(w * i);
    }
    out.frequency[j] = static_cast<double>(j) / (static_cast<double>(n) * spacing);
    out.magnitude[j] = std::hypot(re, im);
  }
  return out;
}

}  // namespace wnl
