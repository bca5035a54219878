#include "wnl/pipeline.hpp"

#include <cmath>

#include "wnl/rng.hpp"

namespace wnl {

template <typename Scalar>
ProbeRun<Scalar> run_probe_with_reference(const SimConfig& config, const WavePacket& packet,
                                          std::shared_ptr<const RealField> alpha) {
  ProbeRun<Scalar> out;
  out.alpha = alpha;
  out.snapshots = run<Scalar>(config, packet, alpha);

  const bool clean_periodic =
      config.noise_level == 0.0 && config.boundary == Boundary::periodic_x;
  if (clean_periodic) {
    const LinearReference<Scalar> ref = run_linear_reference<Scalar>(config, packet);
    for (std::size_t i = 0; i < out.snapshots.size(); ++i)
      out.references.push_back(ref.broadcast(i, config.grid));
  } else {
    SimConfig ref_cfg = config;
    ref_cfg.seed = SplitMix64::substream(config.seed, 1).next();
    auto zero = std::make_shared<const RealField>(RealField(config.grid));
    const auto lin = run<Scalar>(ref_cfg, packet, zero);
    for (const auto& st : lin) out.references.push_back(st.u);
  }
  if (out.references.size() != out.snapshots.size())
    throw NumericError("run_probe_with_reference: snapshot/reference count mismatch");
  return out;
}

RealField alpha_on_solver_grid(const ExperimentConfig& cfg) {
  return sample_alpha(cfg.phantom, cfg.solver.grid);
}

ConvergenceReport convergence_study(ExperimentConfig cfg, const std::vector<double>& h_list) {
  if (h_list.size() < 2) throw ConfigError("convergence_study: need at least two h values");
  if (cfg.packet.kind != WavePacket::FieldKind::complex_probe)
    throw ConfigError("convergence_study: complex probe required");

  ConvergenceReport report;
  for (double h : h_list) {
    cfg.packet.h = h;
    cfg.dx_target = 0.0;  // resolution rule dx = h/4
    cfg.solver.snapshot_times = {cfg.solver.t_final};
    cfg.finalize();

    auto alpha = std::make_shared<const RealField>(alpha_on_solver_grid(cfg));
    const auto run = run_probe_with_reference<Complex>(cfg.solver, cfg.packet, alpha);
    require_packet_exited(*alpha, cfg.packet, cfg.solver.t_final);
    const double e = parametrix_deviation(run.snapshots.back(), run.references.back());
    report.points.push_back({h, e});
  }

  // Least-squares slope in log-log coordinates.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(report.points.size());
  for (const auto& p : report.points) {
    const double lx = std::log(p.h), ly = std::log(p.deviation);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  report.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return report;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw ConfigError("correlation: size mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

double field_correlation(const RealField& a, const RealField& b) {
  if (!(a.grid == b.grid)) throw ConfigError("field_correlation: grids differ");
  std::vector<double> va(a.values.data(), a.values.data() + a.values.size());
  std::vector<double> vb(b.values.data(), b.values.data() + b.values.size());
  return correlation(va, vb);
}

template ProbeRun<Complex> run_probe_with_reference<Complex>(const SimConfig&, const WavePacket&,
                                                             std::shared_ptr<const RealField>);
template ProbeRun<double> run_probe_with_reference<double>(const SimConfig&, const WavePacket&,
                                                           std::shared_ptr<const RealField>);

}  // namespace wnl
