// Command-line front end: one subcommand per experiment stage. Every
// command is a pure function of (config file, input files, seed), so
// repeated runs produce byte-identical outputs.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "wnl/csv.hpp"
#include "wnl/grd1.hpp"
#include "wnl/pipeline.hpp"

namespace fs = std::filesystem;
using namespace wnl;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "override [solver] seed");
  cmd->add_option("--jobs", opts.jobs,
                  "worker count: concurrent angles for sinogram, stencil rows otherwise");
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg =
      opts.config_path.empty() ? ExperimentConfig::defaults() : ExperimentConfig::from_file(opts.config_path);
  if (opts.seed) cfg.solver.seed = *opts.seed;
  if (opts.jobs) {
    cfg.plan.jobs = *opts.jobs;
    cfg.solver.threads = *opts.jobs;
  }
  cfg.finalize();
  fs::create_directories(opts.out_dir);
  return cfg;
}

std::string snapshot_name(const std::string& dir, double t, bool reference) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_t%.6f%s.grd", t, reference ? "_lin" : "");
  return (fs::path(dir) / buf).string();
}

template <typename Scalar>
void write_snapshots(const ProbeRun<Scalar>& run, const std::string& dir) {
  std::ofstream manifest(fs::path(dir) / "manifest.txt", std::ios::trunc);
  if (!manifest) throw IoError("cannot create manifest in " + dir);
  manifest << "# time  snapshot  linear_reference\n";
  char tbuf[40];
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const double t = run.snapshots[i].t;
    const std::string snap = snapshot_name(dir, t, false);
    const std::string ref = snapshot_name(dir, t, true);
    write_grd1(snap, run.snapshots[i].u);
    write_grd1(ref, run.references[i]);
    std::snprintf(tbuf, sizeof tbuf, "%.17g", t);
    manifest << tbuf << "  " << fs::path(snap).filename().string() << "  "
             << fs::path(ref).filename().string() << '\n';
  }
}

void write_profile_csv(const std::string& path, const DataProfile& prof) {
  CsvWriter csv(path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "C = %.17g", prof.C);
  csv.comment(buf);
  csv.header({"z", "data", "xray_estimate"});
  const std::vector<double> estimate = prof.xray_estimate();
  for (std::size_t i = 0; i < prof.z.size(); ++i)
    csv.row({prof.z[i], prof.values[i], estimate[i]});
}

int cmd_phantom(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const RealField alpha = sample_alpha(cfg.phantom, cfg.phantom_grid());
  const std::string path = (fs::path(opts.out_dir) / "alpha.grd").string();
  write_grd1(path, alpha);
  std::cout << path << "\n";
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  auto alpha = std::make_shared<const RealField>(alpha_on_solver_grid(cfg));
  if (cfg.packet.kind == WavePacket::FieldKind::complex_probe) {
    const auto run = run_probe_with_reference<Complex>(cfg.solver, cfg.packet, alpha);
    write_snapshots(run, opts.out_dir);
  } else {
    const auto run = run_probe_with_reference<double>(cfg.solver, cfg.packet, alpha);
    write_snapshots(run, opts.out_dir);
  }
  std::cout << (fs::path(opts.out_dir) / "manifest.txt").string() << "\n";
  return 0;
}

int cmd_extract(const CommonOpts& opts, const std::string& snapshot_path,
                const std::string& reference_path, double time_flag) {
  const ExperimentConfig cfg = load_config(opts);
  const double T = std::isnan(time_flag) ? cfg.solver.snapshot_times.back() : time_flag;

  if (cfg.packet.kind == WavePacket::FieldKind::complex_probe) {
    const ComplexField u_T = read_grd1_complex(snapshot_path);
    ComplexField ref;
    if (!reference_path.empty()) {
      ref = read_grd1_complex(reference_path);
    } else {
      ref = ComplexField(u_T.grid);
      for (int iy = 0; iy < ref.grid.ny; ++iy)
        for (int ix = 0; ix < ref.grid.nx; ++ix)
          ref.values(ix, iy) = cfg.packet.value_complex(T, ref.grid.x(ix), ref.grid.y(iy));
    }
    const PhaseMap map = extract_phase(u_T, ref, cfg.packet, T);
    const DataProfile prof = integrated_data(u_T, ref, cfg.packet, T);
    write_profile_csv((fs::path(opts.out_dir) / "profile.csv").string(), prof);
    const double pm = map.max_abs_on_mask();
    std::printf("max_phase = %.6g\nrelative_shift = %.6g\n", pm, relative_shift(pm));
  } else {
    const RealField u_T = read_grd1_real(snapshot_path);
    if (reference_path.empty())
      throw ConfigError("extract: the real probe needs --reference (simulated linear field)");
    const RealField ref = read_grd1_real(reference_path);
    const RealField alpha = alpha_on_solver_grid(cfg);
    const double center = cfg.packet.center_offset + T;
    const RealDataProfile prof =
        real_data_extract(u_T, ref, cfg.packet, alpha, center - 0.45, center + 0.45);
    CsvWriter csv((fs::path(opts.out_dir) / "profile.csv").string());
    char buf[64];
    std::snprintf(buf, sizeof buf, "C = %.17g", prof.C);
    csv.comment(buf);
    csv.header({"z", "abs_xray_estimate"});
    for (std::size_t i = 0; i < prof.z.size(); ++i) csv.row({prof.z[i], prof.values[i]});
  }
  return 0;
}

int cmd_sinogram(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_config(opts);
  const RealField alpha = sample_alpha(cfg.phantom, cfg.phantom_grid());
  const Sinogram sino = acquire_sinogram(alpha, cfg.packet, cfg.solver, cfg.plan);
  const std::string path = (fs::path(opts.out_dir) / "sinogram.csv").string();
  write_sinogram_csv(path, sino);
  std::cout << path << "\n";
  return 0;
}

int cmd_reconstruct(const CommonOpts& opts, const std::string& sinogram_path) {
  const ExperimentConfig cfg = load_config(opts);
  const Sinogram sino = read_sinogram_csv(sinogram_path);
  const Grid2D out_grid(cfg.out_n, cfg.out_n, -cfg.out_extent, cfg.out_extent, -cfg.out_extent,
                        cfg.out_extent);
  const RealField recon = fbp(sino, cfg.filter, out_grid);
  const std::string path = (fs::path(opts.out_dir) / "recon.grd").string();
  write_grd1(path, recon);
  std::cout << path << "\n";
  return 0;
}

int cmd_harmonics(const CommonOpts& opts, const std::string& slice_path) {
  const ExperimentConfig cfg = load_config(opts);
  const HarmonicsParams& hp = cfg.harmonics;

  const auto traj = solve_transport(hp.A, hp.profile(), hp.s_max, hp.kmax, hp.ds);
  {
    CsvWriter csv((fs::path(opts.out_dir) / "trajectory.csv").string());
    std::vector<std::string> names = {"s"};
    for (int k = 1; k <= hp.kmax; k += 2) {
      names.push_back("re_a" + std::to_string(k));
      names.push_back("im_a" + std::to_string(k));
    }
    names.push_back("Q");
    csv.header(names);
    for (const auto& st : traj) {
      std::vector<double> row = {st.s};
      for (const Complex& a : st.amps) {
        row.push_back(a.real());
        row.push_back(a.imag());
      }
      row.push_back(st.conserved_q());
      csv.row(row);
    }
  }

  {
    const HarmonicState init = HarmonicState::initial(hp.A, hp.kmax);
    const PicardBounds b = existence_bounds(hp.sup_norm(), init.l2_norm(), init.h_half_norm());
    std::ofstream os(fs::path(opts.out_dir) / "bounds.txt", std::ios::trunc);
    if (!os) throw IoError("cannot create bounds.txt");
    os << "alpha_inf     = " << b.alpha_inf << "\n"
       << "a0_l2         = " << b.a0_l2 << "\n"
       << "a0_h12        = " << b.a0_h12 << "\n"
       << "M             = " << b.M << "\n"
       << "s0            = " << b.s0 << "\n"
       << "s0_h12        = " << b.s0_h12 << "\n"
       << "contraction   = " << b.contraction << "\n";
    if (b.s0 > 0.0 && hp.sup_norm() > 0.0) {
      const PicardResult pr = picard_solve(hp.A, hp.profile(), hp.kmax, b.s0, b.M);
      os << "picard_iterations = " << pr.iterations << "\n"
         << "picard_converged  = " << (pr.converged ? "yes" : "no") << "\n";
      os << "successive_distances =";
      for (double d : pr.successive_distances) os << ' ' << d;
      os << "\n";
    }
  }

  if (!slice_path.empty()) {
    const RealField u = read_grd1_real(slice_path);
    const int ix = u.grid.nx / 2;
    std::vector<double> slice(u.grid.ny);
    for (int iy = 0; iy < u.grid.ny; ++iy) slice[iy] = u.values(ix, iy);
    const PowerSpectrum sp = power_spectrum(slice, u.grid.dy());
    CsvWriter csv((fs::path(opts.out_dir) / "spectrum.csv").string());
    csv.header({"frequency", "magnitude"});
    for (std::size_t j = 0; j < sp.frequency.size(); ++j)
      csv.row({sp.frequency[j], sp.magnitude[j]});
  }
  std::cout << (fs::path(opts.out_dir) / "trajectory.csv").string() << "\n";
  return 0;
}

int cmd_convergence(const CommonOpts& opts, std::vector<double> h_list) {
  ExperimentConfig cfg = load_config(opts);
  if (h_list.empty()) h_list = {0.01, 0.005, 0.0025};
  const ConvergenceReport rep = convergence_study(cfg, h_list);

  std::ofstream os(fs::path(opts.out_dir) / "convergence.txt", std::ios::trunc);
  if (!os) throw IoError("cannot create convergence.txt");
  char buf[96];
  for (const auto& p : rep.points) {
    std::snprintf(buf, sizeof buf, "h = %-10.6g  sup|h^(1/2) (u - ansatz)| = %.10g", p.h,
                  p.deviation);
    os << buf << "\n";
    std::cout << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "fitted order p = %.4f", rep.order);
  os << buf << "\n";
  std::cout << buf << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weakly nonlinear wave probing laboratory"};
  app.require_subcommand(1);

  CommonOpts phantom_opts, simulate_opts, extract_opts, sinogram_opts, reconstruct_opts,
      harmonics_opts, convergence_opts;
  std::string snapshot_path, reference_path, sinogram_path, slice_path;
  std::vector<double> h_list;
  double time_flag = std::nan("");

  add_common(app.add_subcommand("phantom", "sample the nonlinearity field"), phantom_opts);
  add_common(app.add_subcommand("simulate", "run the probe and its linear reference"),
             simulate_opts);

  auto* extract = app.add_subcommand("extract", "phase-shift data profile from a snapshot");
  add_common(extract, extract_opts);
  extract->add_option("--snapshot", snapshot_path, "GRD1 snapshot")->required();
  extract->add_option("--reference", reference_path, "GRD1 linear reference (closed form if absent)");
  extract->add_option("--time", time_flag, "measurement time (default: last snapshot time)");

  add_common(app.add_subcommand("sinogram", "multi-angle acquisition"), sinogram_opts);

  auto* reconstruct = app.add_subcommand("reconstruct", "filtered backprojection");
  add_common(reconstruct, reconstruct_opts);
  reconstruct->add_option("--sinogram", sinogram_path, "sinogram CSV")->required();

  auto* harmonics = app.add_subcommand("harmonics", "transport system, bounds, spectra");
  add_common(harmonics, harmonics_opts);
  harmonics->add_option("--slice", slice_path, "real GRD1 snapshot for the power spectrum");

  auto* convergence = app.add_subcommand("convergence", "ansatz error order fit");
  add_common(convergence, convergence_opts);
  convergence->add_option("--h-list", h_list, "wavelength scales to sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("phantom")) return cmd_phantom(phantom_opts);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate_opts);
    if (app.got_subcommand("extract"))
      return cmd_extract(extract_opts, snapshot_path, reference_path, time_flag);
    if (app.got_subcommand("sinogram")) return cmd_sinogram(sinogram_opts);
    if (app.got_subcommand("reconstruct")) return cmd_reconstruct(reconstruct_opts, sinogram_path);
    if (app.got_subcommand("harmonics")) return cmd_harmonics(harmonics_opts, slice_path);
    if (app.got_subcommand("convergence")) return cmd_convergence(convergence_opts, h_list);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SetupError& e) {
    std::cerr << "setup error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
