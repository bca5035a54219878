#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wnl/field.hpp"
#include "wnl/wavesolver.hpp"

namespace wnl {

/// Truncated vector of complex Fourier amplitudes a_k of the real-probe
/// ansatz, odd k in [1, kmax]; negative indices are implied by the
/// conjugate symmetry a_{-k} = conj(a_k). The cubic nonlinearity feeds odd
/// harmonics only, so even slots are never carried.
struct HarmonicState {
  double A = 1.0;                ///< envelope amplitude on this ray
  int kmax = 15;                 ///< odd truncation order
  std::vector<Complex> amps;     ///< a_1, a_3, ..., a_kmax
  double s = 0.0;                ///< ray parameter

  static HarmonicState initial(double A, int kmax);
  int count() const { return static_cast<int>(amps.size()); }

  /// The conserved quadratic form of the transport system,
  ///   Q = sum_{k>0 odd} k^2 |a_k|^2 = A^2/4,
  /// exactly invariant at any truncation order: grouping the zero-sum
  /// quadruples (k1, k2, k3, -k) with their index-negated (conjugate)
  /// partners cancels the flux because the positive and negative indices
  /// of a zero-sum quadruple carry equal weight. The k-weighted sum (the
  /// h^{1/2} norm) is NOT an invariant of this system; it drifts at the
  /// 1e-3 scale for A = 1, alpha = 1, S = 2 and is merely bounded by Q.
  double conserved_q() const;
  /// k-weighted sum over k > 0: the square of half the h^{1/2} norm.
  double k_weighted_sum() const;
  /// Full-sequence norms (both signs of k): l1, l2 and h^{1/2}.
  double l1_norm() const;
  double l2_norm() const;
  double h_half_norm() const;
};

/// (a*a*a)_k for odd k in [1, kmax], contributions from indices outside the
/// truncation window dropped; input is the k>0 half of a conjugate-symmetric
/// sequence and the output keeps that symmetry structurally.
std::vector<Complex> triple_convolution(const std::vector<Complex>& amps, int kmax);

/// Transport right-hand side: d a_k / d s = -(i alpha_s / (2k)) (a*a*a)_k.
std::vector<Complex> transport_rhs(const HarmonicState& state, double alpha_s);

using AlphaOfS = std::function<double(double)>;

/// Classical 4th-order integration of the transport system from the
/// two-line initial data a_{+-1} = A/2 on [0, S]; returns the states at
/// every accepted step (including s = 0).
std::vector<HarmonicState> solve_transport(double A, const AlphaOfS& alpha, double S, int kmax,
                                           double ds);

/// Certified Picard ball: radius M and step s0 for the integral map.
struct PicardBounds {
  double alpha_inf = 0.0;
  double a0_l2 = 0.0;
  double a0_h12 = 0.0;
  double M = 0.0;
  double s0 = 0.0;      ///< from the l2 conditions
  double s0_h12 = 0.0;  ///< continuation variant with the h^{1/2} norm (0 if not requested)
  double contraction = 0.0;  ///< (3 s0 / 2) ||alpha|| (M + ||a0||)^2 at the returned s0
};

/// Largest s0 satisfying both certification inequalities with margin 0.9:
///   (1/2) ||alpha|| (||a0|| + M)^3 s0 <= M      (invariance of the ball)
///   (3/2) ||alpha|| (M + ||a0||)^2 s0 <  1      (contraction)
/// with M = ||a0||; s0 is capped at s0_cap when alpha_inf is tiny. When
/// a0_h12 > 0 the same inequalities evaluated with the h^{1/2} norm give
/// the continuation step s0_h12.
PicardBounds existence_bounds(double alpha_inf, double a0_l2, double a0_h12 = 0.0,
                              double s0_cap = 1e6);

struct PicardResult {
  std::vector<double> s;                          ///< quadrature grid on [0, s0]
  std::vector<std::vector<Complex>> trajectory;   ///< amps per grid point
  std::vector<double> successive_distances;       ///< sup-l2 distance per iteration
  int iterations = 0;
  bool converged = false;
};

/// Fixed-point iteration of the integral map
///   a_k(s) = a_k(0) - (i / 2k) int_0^s alpha (a*a*a)_k,
/// starting from the constant initial sequence. Refuses uncertified (s0, M)
/// unless force = true. Successive sup-l2 distances must contract at least
/// as fast as the certified constant.
PicardResult picard_solve(double A, const AlphaOfS& alpha, int kmax, double s0, double M,
                          int max_iterations = 400, double tol = 1e-12, bool force = false,
                          double ds = 5e-4);

/// First-order response of the k = 1, 3 amplitudes to a small alpha with
/// ray integral R: (delta a_1, delta a_3) = (-(3A^3/8)(i/2) R, -(A^3/8)(i/6) R).
std::pair<Complex, Complex> linearized_amplitudes(double A, double R);

/// Leading first-harmonic field A h^{-1/2} cos(phase_arg - (3A^2/8) I),
/// I the partial ray integral of alpha.
double first_harmonic_field(double A, double partial_integral, double phase_arg, double h);

/// Real-probe data extraction: Data(z) = sqrt(h * int_band |u - u_L|^2) / C
/// per column, C = (sqrt(41)/24) (int chi^6)^{1/2}; estimates |X alpha(z)|.
/// band = [y_lo, y_hi] must lie past supp alpha.
struct RealDataProfile {
  std::vector<double> z;
  std::vector<double> values;  ///< already divided by C
  double C = 0.0;
};
RealDataProfile real_data_extract(const RealField& u_T, const RealField& u_lin_T,
                                  const WavePacket& packet, const RealField& alpha, double band_lo,
                                  double band_hi);

/// Magnitude of the DFT of a real slice; frequencies in cycles per unit
/// length, bins j/(n*spacing) for j = 0..n/2.
struct PowerSpectrum {
  std::vector<double> frequency;
  std::vector<double> magnitude;

  /// Index of the largest local maximum above min_frequency.
  std::size_t peak_index(double min_frequency = 0.0) const;
  /// Sub-bin peak location by parabolic interpolation around bin j.
  double refined_peak(std::size_t j) const;
};
PowerSpectrum power_spectrum(const std::vector<double>& slice, double spacing);

}  // namespace wnl
