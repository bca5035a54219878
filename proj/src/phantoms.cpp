#include "wnl/phantoms.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "wnl/grd1.hpp"

namespace wnl {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quintic smoothstep, C^2 at both ends.
double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

// Taper from 1 at elliptic radius rho<=3 to 0 at rho>=4.5.
double gaussian_taper(double rho) { return 1.0 - smoothstep5((rho - 3.0) / 1.5); }

double gaussian_alpha_value(const AlphaDescriptor& d, double x, double y) {
  const double rx = x / d.ax;
  const double ry = y / d.ay;
  const double rho2 = rx * rx + ry * ry;
  const double taper = gaussian_taper(std::sqrt(rho2));
  if (taper == 0.0) return 0.0;
  return d.amplitude * std::exp(-rho2) * taper;
}

// Standard ten-ellipse head phantom (Toft's table): center, half axes,
// tilt in degrees, additive intensity. Canonical coordinates in [-1,1]^2;
// sample_alpha scales them into [-0.5,0.5]^2.
struct PhantomEllipse {
  double x0, y0, a, b, phi_deg, intensity;
};

const std::array<PhantomEllipse, 10>& shepp_logan_table() {
  static const std::array<PhantomEllipse, 10> t = {{
      {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
      {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
      {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
      {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
      {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
      {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
      {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
      {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
      {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
      {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
  }};
  return t;
}

double shepp_logan_raw(double x, double y) {
  // Canonical phantom coordinates: scale [-0.5,0.5]^2 up to [-1,1]^2.
  const double u = 2.0 * x;
  const double v = 2.0 * y;
  double val = 0.0;
  for (const auto& e : shepp_logan_table()) {
    const double c = std::cos(e.phi_deg * kPi / 180.0);
    const double s = std::sin(e.phi_deg * kPi / 180.0);
    const double dx = u - e.x0;
    const double dy = v - e.y0;
    const double xr = c * dx + s * dy;
    const double yr = -s * dx + c * dy;
    if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0) val += e.intensity;
  }
  return val;
}

// Separable Gaussian blur with a discrete kernel truncated at 4*sigma,
// zero padding outside the grid (keeps the support compact).
void gaussian_blur(RealField& f, double sigma) {
  const double dx = f.grid.dx();
  const double dy = f.grid.dy();
  auto make_kernel = [&](double h) {
    const int r = std::max(1, static_cast<int>(std::ceil(4.0 * sigma / h)));
    std::vector<double> k(2 * r + 1);
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
      k[i + r] = std::exp(-0.5 * (i * h / sigma) * (i * h / sigma));
      sum += k[i + r];
    }
    for (double& v : k) v /= sum;
    return k;
  };

  const auto kx = make_kernel(dx);
  const int rx = static_cast<int>(kx.size() / 2);
  Array2<double> tmp = Array2<double>::Zero(f.grid.nx, f.grid.ny);
  for (int iy = 0; iy < f.grid.ny; ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix) {
      double acc = 0.0;
      for (int o = -rx; o <= rx; ++o) {
        const int j = ix + o;
        if (j >= 0 && j < f.grid.nx) acc += kx[o + rx] * f.values(j, iy);
      }
      tmp(ix, iy) = acc;
    }

  const auto ky = make_kernel(dy);
  const int ry = static_cast<int>(ky.size() / 2);
  for (int iy = 0; iy < f.grid.ny; ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix) {
      double acc = 0.0;
      for (int o = -ry; o <= ry; ++o) {
        const int j = iy + o;
        if (j >= 0 && j < f.grid.ny) acc += ky[o + ry] * tmp(ix, j);
      }
      f.values(ix, iy) = acc;
    }
}

}  // namespace

void AlphaDescriptor::validate() const {
  if (amplitude < 0.0) throw ConfigError("alpha descriptor: amplitude must be >= 0");
  switch (kind) {
    case Kind::gaussian:
      if (ax <= 0.0 || ay <= 0.0) throw ConfigError("alpha descriptor: gaussian axes must be > 0");
      break;
    case Kind::shepp_logan:
      if (blur_sigma <= 0.0) throw ConfigError("alpha descriptor: blur_sigma must be > 0");
      break;
    case Kind::from_file:
      if (path.empty()) throw ConfigError("alpha descriptor: from_file requires a path");
      break;
  }
}

void Envelope::validate() const {
  if (K <= 0.0) throw ConfigError("envelope: K must be > 0");
  if (w <= 0.0) throw ConfigError("envelope: w must be > 0");
}

double sample_envelope(const Envelope& env, double s) { return env(s); }

double envelope_power_integral(const Envelope& env, int p) {
  env.validate();
  if (p < 1) throw ConfigError("envelope_power_integral: p must be >= 1");
  // chi^p has 1/e half width w/sqrt(p); [-5w, 5w] captures the integral
  // to well below double round-off. 4096 Simpson panels is overkill but cheap.
  const double a = -env.support_halfwidth();
  const double b = env.support_halfwidth();
  const int n = 4096;
  const double h = (b - a) / n;
  auto f = [&](double s) { return std::pow(env(s), p); };
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

RealField sample_alpha(const AlphaDescriptor& desc, const Grid2D& grid) {
  desc.validate();
  RealField out(grid);

  switch (desc.kind) {
    case AlphaDescriptor::Kind::gaussian: {
      for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
          out.values(ix, iy) = gaussian_alpha_value(desc, grid.x(ix), grid.y(iy));
      break;
    }
    case AlphaDescriptor::Kind::shepp_logan: {
      for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
          out.values(ix, iy) = std::max(0.0, shepp_logan_raw(grid.x(ix), grid.y(iy)));
      gaussian_blur(out, desc.blur_sigma);
      const double peak = out.values.maxCoeff();
      if (peak > 0.0) out.values *= desc.amplitude / peak;
      break;
    }
    case AlphaDescriptor::Kind::from_file: {
      const RealField src = read_grd1_real(desc.path);
      for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
          out.values(ix, iy) = std::max(0.0, src.bilinear(grid.x(ix), grid.y(iy)));
      break;
    }
  }
  return out;
}

RealField rotate_field(const RealField& f, double angle_deg) {
  if (!f.grid.square_extents())
    throw ConfigError("rotate_field: field must have square physical extents");
  if (angle_deg == 0.0) return f;

  const double cx = 0.5 * (f.grid.xmin + f.grid.xmax);
  const double cy = 0.5 * (f.grid.ymin + f.grid.ymax);
  const double th = -angle_deg * kPi / 180.0;
  const double c = std::cos(th);
  const double s = std::sin(th);

  RealField out(f.grid);
  for (int iy = 0; iy < f.grid.ny; ++iy) {
    const double y = f.grid.y(iy) - cy;
    for (int ix = 0; ix < f.grid.nx; ++ix) {
      const double x = f.grid.x(ix) - cx;
      out.values(ix, iy) = f.bilinear(cx + c * x - s * y, cy + s * x + c * y);
    }
  }
  return out;
}

}  // namespace wnl
