#pragma once

#include <string>
#include <vector>

#include "wnl/field.hpp"
#include "wnl/optics.hpp"
#include "wnl/wavesolver.hpp"

namespace wnl {

/// Data(z, omega)/C profiles stacked over acquisition angles.
///
/// Angle convention: the probe always travels along +y and the phantom is
/// rotated instead, so the row at angle theta holds line integrals of the
/// original field along omega(theta) = (sin theta, cos theta) parameterized
/// by the offset z along omega_perp(theta) = (cos theta, -sin theta).
struct Sinogram {
  std::vector<double> angles_deg;  ///< strictly increasing, within [0, 180)
  std::vector<double> offsets;     ///< strictly increasing z samples
  Array2<double> values;           ///< (angles x offsets)

  void validate() const;
};

/// Line integrals of alpha at the given acquisition angle, one per offset.
/// Reference oracle for the simulated acquisition (zero-extension outside
/// the grid, trapezoid step min(dx,dy)/2, bilinear samples).
std::vector<double> xray_transform(const RealField& alpha, double angle_deg,
                                   const std::vector<double>& offsets);

/// Acquisition controls beyond the solver configuration.
struct AcquisitionPlan {
  std::vector<double> angles_deg;
  double offset_min = -0.5;
  double offset_max = 0.5;
  int jobs = 1;  ///< concurrent angle simulations
};

/// Full multi-angle acquisition: for each angle rotate alpha on its square
/// grid, embed it into the solver grid, run the nonlinear probe, extract
/// the integrated phase profile against the shared linear reference and
/// divide by C. Deterministic given (inputs, seed); rows are assembled in
/// angle order regardless of completion order.
Sinogram acquire_sinogram(const RealField& alpha_square, const WavePacket& packet,
                          const SimConfig& config, const AcquisitionPlan& plan);

enum class FbpFilter { ram_lak, ram_lak_hann };

/// Filtered backprojection onto out_grid: per-angle frequency-domain ramp
/// filtering (zero padded to the next power of two >= 2*len, optional Hann
/// window), then backprojection with bilinear interpolation along offsets
/// and angular weight pi/num_angles. Negative overshoot is retained.
RealField fbp(const Sinogram& sino, FbpFilter filter, const Grid2D& out_grid);

/// CSV round trip: first line the offsets, then one line per angle with the
/// angle leading. 17 significant digits.
void write_sinogram_csv(const std::string& path, const Sinogram& sino);
Sinogram read_sinogram_csv(const std::string& path);

}  // namespace wnl
