#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wnl/field.hpp"
#include "wnl/phantoms.hpp"

namespace wnl {

/// Probe parameters for the incoming plane wave packet
///   u_in = carrier((-t + x.w - c0)/h) * h^{-1/2} * chi(-t + x.w - c0),
/// carrier = exp(i.) for the complex probe and cos(.) for the real one.
/// The packet rides on the line x.w = c0 + t.
struct WavePacket {
  enum class FieldKind { complex_probe, real_probe };

  double h = 0.01;                ///< wavelength scale, 0 < h << 1
  double omega_x = 0.0;           ///< unit propagation direction
  double omega_y = 1.0;
  Envelope envelope;
  double center_offset = 0.0;     ///< c0
  FieldKind kind = FieldKind::complex_probe;

  void validate() const;
  /// Envelope/carrier argument xi = -t + x.omega - c0.
  double xi(double t, double x, double y) const {
    return -t + x * omega_x + y * omega_y - center_offset;
  }
  Complex value_complex(double t, double x, double y) const;
  double value_real(double t, double x, double y) const;
};

enum class Boundary {
  dirichlet_zero,  ///< all four edges held at zero
  periodic_x       ///< wrap in x, zero at the y edges (transverse-invariant probes)
};

/// Solver controls. dt is derived as cfl * min(dx, dy).
struct SimConfig {
  Grid2D grid;
  double cfl = 0.5;
  double t_final = 1.0;
  std::vector<double> snapshot_times;
  Boundary boundary = Boundary::dirichlet_zero;
  double noise_level = 0.0;   ///< fraction of max |u(0)|
  std::uint64_t seed = 0;
  int threads = 1;            ///< row-parallel stencil workers (bitwise invariant)

  void validate() const;
  double dt() const { return cfl * std::min(grid.dx(), grid.dy()); }
};

/// Two-level leapfrog state: u at time t, u_prev at t - dt.
template <typename Scalar>
struct WaveState {
  double t = 0.0;
  double dt = 0.0;
  Field<Scalar> u;
  Field<Scalar> u_prev;
  WavePacket packet;
  std::shared_ptr<const RealField> alpha;  ///< immutable, shared across states
  Boundary boundary = Boundary::dirichlet_zero;
  long step_index = 0;
};

using ComplexState = WaveState<Complex>;
using RealState = WaveState<double>;

/// Samples the exact incoming wave at t = 0 and t = -dt (the incoming wave
/// solves the free equation exactly where alpha vanishes, so the shifted
/// closed form encodes u_t without a separate array). Fails if the packet
/// support (c0 +- 5w along omega) leaves the grid or touches {alpha > 1e-6}.
template <typename Scalar>
WaveState<Scalar> make_initial_data(const WavePacket& packet,
                                    std::shared_ptr<const RealField> alpha, double dt,
                                    Boundary boundary = Boundary::dirichlet_zero);

/// One leapfrog step:
///   u_next = 2u - u_prev + dt^2 (Lap5 u - alpha N(u)),
/// N(u) = |u|^2 u (complex) or u^3 (real); y edges held at zero, x edges
/// held at zero or wrapped depending on the boundary mode.
template <typename Scalar>
void step(WaveState<Scalar>& state, double dt, int threads = 1);

/// Marches to t_final and returns snapshots at the requested times
/// (nearest step). Deterministic given (config, packet, alpha).
template <typename Scalar>
std::vector<WaveState<Scalar>> run(const SimConfig& config, const WavePacket& packet,
                                   std::shared_ptr<const RealField> alpha);

/// Discrete energy sum((|u_t|^2 + |grad u|^2)/2 + alpha |u|^4 / 4) dx dy
/// with u_t = (u - u_prev)/dt and centered gradients.
template <typename Scalar>
double energy(const WaveState<Scalar>& state);

/// Adds iid uniform noise in [-level*M, level*M], M = max |u|, independently
/// to u and u_prev (complex fields get independent real and imaginary
/// draws). Deterministic per seed; draws are consumed for u first, then
/// u_prev, each in column-major grid order (iy outer, ix inner).
template <typename Scalar>
void add_noise(WaveState<Scalar>& state, double level, std::uint64_t seed);

/// The x-invariant linear reference: with a transverse-invariant probe and
/// periodic x the 2D scheme reduces exactly to this 1D leapfrog in y, so a
/// broadcast of the profile reproduces the 2D linear run bit for bit.
template <typename Scalar>
struct LinearReference {
  std::vector<double> times;
  std::vector<std::vector<Scalar>> profiles;  ///< per time, ny samples along y

  Field<Scalar> broadcast(std::size_t snapshot, const Grid2D& grid) const;
};

template <typename Scalar>
LinearReference<Scalar> run_linear_reference(const SimConfig& config, const WavePacket& packet);

}  // namespace wnl
