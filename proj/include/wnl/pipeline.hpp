#pragma once

#include <memory>
#include <vector>

#include "wnl/config.hpp"
#include "wnl/optics.hpp"

namespace wnl {

/// A probe simulation plus the matching linear reference per snapshot.
template <typename Scalar>
struct ProbeRun {
  std::vector<WaveState<Scalar>> snapshots;
  std::vector<Field<Scalar>> references;
  std::shared_ptr<const RealField> alpha;
};

/// Runs the nonlinear probe and builds the linear reference for every
/// snapshot: the exact x-invariant 1D reduction for clean periodic_x runs,
/// a full 2D linear simulation otherwise (noise breaks the reduction; the
/// noisy reference draws from the derived substream seed ^ stream 1).
template <typename Scalar>
ProbeRun<Scalar> run_probe_with_reference(const SimConfig& config, const WavePacket& packet,
                                          std::shared_ptr<const RealField> alpha);

/// Samples the configured phantom directly on the solver grid.
RealField alpha_on_solver_grid(const ExperimentConfig& cfg);

struct ConvergencePoint {
  double h = 0.0;
  double deviation = 0.0;  ///< sup |h^{1/2} (u - calibrated ansatz)| at t_final
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  double order = 0.0;  ///< least-squares slope of log e against log h
};

/// Runs the probe for each h (resolution rule dx = h/4) and fits the decay
/// order of the calibrated ansatz deviation.
ConvergenceReport convergence_study(ExperimentConfig cfg, const std::vector<double>& h_list);

/// Pearson correlation of two equally long sequences.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

/// Normalized cross-correlation of two fields on one grid.
double field_correlation(const RealField& a, const RealField& b);

}  // namespace wnl
