#include "wnl/tomo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "wnl/fft.hpp"
#include "wnl/phantoms.hpp"
#include "wnl/rng.hpp"

namespace wnl {

namespace {

constexpr double kPi = 3.14159265358979323846;

void angle_direction(double angle_deg, double& ox, double& oy, double& px, double& py) {
  const double th = angle_deg * kPi / 180.0;
  ox = std::sin(th);
  oy = std::cos(th);
  px = std::cos(th);
  py = -std::sin(th);
}

// Resamples the rotated square phantom onto the (typically taller) solver
// grid; zero outside the square. Grids share dx so this is loss-free where
// nodes align.
RealField embed_into(const RealField& src, const Grid2D& grid) {
  RealField out(grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      out.values(ix, iy) = std::max(0.0, src.bilinear(grid.x(ix), grid.y(iy)));
  return out;
}

}  // namespace

void Sinogram::validate() const {
  if (angles_deg.empty() || offsets.empty()) throw ConfigError("sinogram: empty");
  if (values.rows() != static_cast<long>(angles_deg.size()) ||
      values.cols() != static_cast<long>(offsets.size()))
    throw ConfigError("sinogram: shape mismatch");
  for (std::size_t i = 0; i + 1 < angles_deg.size(); ++i)
    if (!(angles_deg[i] < angles_deg[i + 1]))
      throw ConfigError("sinogram: angles must be strictly increasing");
  if (angles_deg.front() < 0.0 || angles_deg.back() >= 180.0)
    throw ConfigError("sinogram: angles must lie in [0, 180)");
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i)
    if (!(offsets[i] < offsets[i + 1]))
      throw ConfigError("sinogram: offsets must be strictly increasing");
  if (!values.isFinite().all()) throw ConfigError("sinogram: non-finite entries");
}

std::vector<double> xray_transform(const RealField& alpha, double angle_deg,
                                   const std::vector<double>& offsets) {
  double ox, oy, px, py;
  angle_direction(angle_deg, ox, oy, px, py);
  std::vector<double> out(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i)
    out[i] = partial_xray(alpha, ox, oy, offsets[i] * px, offsets[i] * py,
                          std::numeric_limits<double>::infinity());
  return out;
}

Sinogram acquire_sinogram(const RealField& alpha_square, const WavePacket& packet,
                          const SimConfig& config, const AcquisitionPlan& plan) {
  if (plan.angles_deg.empty()) throw ConfigError("acquire_sinogram: no angles");
  for (double a : plan.angles_deg)
    if (a < 0.0 || a >= 180.0) throw ConfigError("acquire_sinogram: angles must lie in [0, 180)");
  if (std::abs(packet.omega_x) > 1e-12 || std::abs(packet.omega_y - 1.0) > 1e-12)
    throw ConfigError("acquire_sinogram: the probe must travel vertically (rotate the phantom)");
  config.validate();
  if (config.snapshot_times.size() != 1)
    throw ConfigError("acquire_sinogram: config must request exactly one measurement snapshot");
  const double T = config.snapshot_times.front();

  // Offsets: one sample per solver column inside [offset_min, offset_max].
  std::vector<double> offsets;
  std::vector<int> offset_ix;
  for (int ix = 0; ix < config.grid.nx; ++ix) {
    const double z = config.grid.x(ix);
    if (z >= plan.offset_min - 1e-12 && z <= plan.offset_max + 1e-12) {
      offsets.push_back(z);
      offset_ix.push_back(ix);
    }
  }
  if (offsets.size() < 2) throw ConfigError("acquire_sinogram: offset window too narrow");

  // One linear reference serves every angle: it does not see alpha. Noisy
  // runs need a per-angle 2D reference instead, handled in the worker.
  SimConfig lin_cfg = config;
  lin_cfg.noise_level = 0.0;
  lin_cfg.threads = 1;
  const LinearReference<Complex> lin_ref = run_linear_reference<Complex>(lin_cfg, packet);

  Sinogram sino;
  sino.angles_deg = plan.angles_deg;
  sino.offsets = offsets;
  sino.values = Array2<double>::Zero(plan.angles_deg.size(), offsets.size());

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= plan.angles_deg.size() || failed.load()) return;
      const double angle = plan.angles_deg[idx];
      try {
        RealField rotated = rotate_field(alpha_square, angle);
        auto alpha = std::make_shared<const RealField>(embed_into(rotated, config.grid));

        SimConfig cfg = config;
        cfg.threads = 1;
        cfg.seed = SplitMix64::substream(config.seed, idx).next();
        const auto snaps = run<Complex>(cfg, packet, alpha);

        ComplexField reference;
        if (config.noise_level > 0.0) {
          SimConfig ref_cfg = cfg;
          ref_cfg.seed = SplitMix64::substream(cfg.seed, 1).next();
          auto zero = std::make_shared<const RealField>(RealField(config.grid));
          reference = run<Complex>(ref_cfg, packet, zero).back().u;
        } else {
          reference = lin_ref.broadcast(lin_ref.profiles.size() - 1, config.grid);
        }

        require_packet_exited(*alpha, packet, T);
        const double mask_fraction =
            config.noise_level > 0.0 ? 0.25 : Envelope::mask_threshold;
        const DataProfile prof =
            integrated_data(snaps.back().u, reference, packet, T, mask_fraction);
        const std::vector<double> estimate = prof.xray_estimate();

        // integrated_data returns every solver column; pick the window.
        for (std::size_t k = 0; k < offset_ix.size(); ++k)
          sino.values(idx, k) = estimate.at(offset_ix[k]);
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed.store(true);
        if (failure.empty())
          failure = "acquire_sinogram: angle " + std::to_string(angle) + ": " + e.what();
        return;
      }
    }
  };

  const int jobs = std::max(1, plan.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw NumericError(failure);
  return sino;
}

RealField fbp(const Sinogram& sino, FbpFilter filter, const Grid2D& out_grid) {
  sino.validate();
  if (sino.angles_deg.size() < 2) throw ConfigError("fbp: need at least 2 angles");

  const std::size_t n = sino.offsets.size();
  const double dz = sino.offsets[1] - sino.offsets[0];
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs((sino.offsets[i + 1] - sino.offsets[i]) - dz) > 1e-9 * dz)
      throw ConfigError("fbp: offsets must be uniformly spaced");

  const std::size_t npad = next_pow2(2 * n);
  const double f_nyq = 0.5 / dz;

  // Q(z_j) = (1/N) sum_k |f_k| P_k e^{2 pi i jk/N} with f_k in cycles per
  // unit length; the frequency bin width 1/(N dz) and the forward-transform
  // dz cancel against each other, leaving the plain |f| multiplier.
  std::vector<double> ramp(npad);
  for (std::size_t k = 0; k < npad; ++k) {
    const double fk = (k <= npad / 2 ? static_cast<double>(k)
                                     : static_cast<double>(k) - static_cast<double>(npad)) /
                      (static_cast<double>(npad) * dz);
    double w = std::abs(fk);
    if (filter == FbpFilter::ram_lak_hann) w *= 0.5 * (1.0 + std::cos(kPi * fk / f_nyq));
    ramp[k] = w;
  }

  const std::size_t n_angles = sino.angles_deg.size();
  Array2<double> filtered(n_angles, n);
  std::vector<std::complex<double>> buf(npad);
  for (std::size_t a = 0; a < n_angles; ++a) {
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) buf[i] = sino.values(a, i);
    fft_radix2(buf, false);
    for (std::size_t k = 0; k < npad; ++k) buf[k] *= ramp[k];
    fft_radix2(buf, true);
    for (std::size_t i = 0; i < n; ++i) filtered(a, i) = buf[i].real();
  }

  RealField out(out_grid);
  const double weight = kPi / static_cast<double>(n_angles);
  const double z0 = sino.offsets.front();
  for (std::size_t a = 0; a < n_angles; ++a) {
    double ox, oy, px, py;
    angle_direction(sino.angles_deg[a], ox, oy, px, py);
    for (int iy = 0; iy < out_grid.ny; ++iy) {
      const double y = out_grid.y(iy);
      for (int ix = 0; ix < out_grid.nx; ++ix) {
        const double z = out_grid.x(ix) * px + y * py;
        const double fz = (z - z0) / dz;
        if (fz < 0.0 || fz > static_cast<double>(n - 1)) continue;
        std::size_t j = static_cast<std::size_t>(fz);
        if (j >= n - 1) j = n - 2;
        const double t = fz - static_cast<double>(j);
        out.values(ix, iy) += weight * ((1.0 - t) * filtered(a, j) + t * filtered(a, j + 1));
      }
    }
  }
  return out;
}

void write_sinogram_csv(const std::string& path, const Sinogram& sino) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot create " + path);
  char buf[40];
  auto put = [&](double v, bool first) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) os << ',';
    os << buf;
  };
  for (std::size_t i = 0; i < sino.offsets.size(); ++i) put(sino.offsets[i], i == 0);
  os << '\n';
  for (std::size_t a = 0; a < sino.angles_deg.size(); ++a) {
    put(sino.angles_deg[a], true);
    for (std::size_t i = 0; i < sino.offsets.size(); ++i) put(sino.values(a, i), false);
    os << '\n';
  }
  if (!os) throw IoError("write failed for " + path);
}

Sinogram read_sinogram_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  auto parse_line = [](const std::string& line) {
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (...) {
        throw IoError("sinogram csv: bad number '" + cell + "'");
      }
    }
    return vals;
  };

  std::string line;
  if (!std::getline(is, line)) throw IoError("sinogram csv: empty file " + path);
  Sinogram sino;
  sino.offsets = parse_line(line);

  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto vals = parse_line(line);
    if (vals.size() != sino.offsets.size() + 1)
      throw IoError("sinogram csv: row length mismatch in " + path);
    sino.angles_deg.push_back(vals.front());
    rows.emplace_back(vals.begin() + 1, vals.end());
  }
  sino.values = Array2<double>::Zero(rows.size(), sino.offsets.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t i = 0; i < sino.offsets.size(); ++i) sino.values(a, i) = rows[a][i];
  sino.validate();
  return sino;
}

}  // namespace wnl
