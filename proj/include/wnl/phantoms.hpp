#pragma once

#include <string>

#include "wnl/field.hpp"

namespace wnl {

/// Description of the nonlinearity coefficient field alpha(x) >= 0.
struct AlphaDescriptor {
  enum class Kind { gaussian, shepp_logan, from_file };

  Kind kind = Kind::gaussian;
  double ax = 0.2;          ///< gaussian semi-axis along x
  double ay = 0.1;          ///< gaussian semi-axis along y
  double amplitude = 1.0;   ///< peak value
  double blur_sigma = 0.01; ///< shepp_logan blur width
  std::string path;         ///< from_file source

  void validate() const;
};

/// 1D Gaussian probe envelope chi(s) = K * exp(-(s/w)^2). The envelope is
/// treated as effectively supported on (-support_halfwidth(), +...): beyond
/// 5w the tail is below 2.1e-11 of the peak. Masks that need "where the
/// envelope lives" use the mask_threshold() fraction of K instead.
struct Envelope {
  double K = 1.0;  ///< peak amplitude chi(0)
  double w = 0.14; ///< 1/e half width

  void validate() const;
  double operator()(double s) const { return K * std::exp(-(s / w) * (s / w)); }
  double support_halfwidth() const { return 5.0 * w; }
  static constexpr double mask_threshold = 1e-3;
};

double sample_envelope(const Envelope& env, double s);

/// Quadrature of chi^p over the real line (composite Simpson on the
/// effective support). Used for the calibration constants: p=2 gives the
/// integral entering C = K^2/2 * int chi_unit^2, p=6 the real-probe one.
double envelope_power_integral(const Envelope& env, int p);

/// Samples alpha on the grid. The gaussian kind is the elliptic Gaussian
/// amplitude*exp(-(x/ax)^2-(y/ay)^2) tapered to exact zero between elliptic
/// radius 3 and 4.5 (quintic smoothstep), so the sampled field is compactly
/// supported as the model requires; the taper changes line integrals by
/// less than 3e-5 relative. shepp_logan rasterizes the standard ten-ellipse
/// table scaled into [-0.5,0.5]^2, clips at zero and blurs with a discrete
/// Gaussian kernel truncated at 4*blur_sigma. from_file loads a GRD1 file
/// and resamples it onto the grid bilinearly.
RealField sample_alpha(const AlphaDescriptor& desc, const Grid2D& grid);

/// Samples f composed with the rotation by -angle_deg about the domain
/// center (bilinear interpolation, zero outside). Requires square physical
/// extents; rotate_field(f, 0) is the identity.
RealField rotate_field(const RealField& f, double angle_deg);

}  // namespace wnl
