#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wnl/harmonics.hpp"
#include "wnl/phantoms.hpp"
#include "wnl/tomo.hpp"
#include "wnl/wavesolver.hpp"

namespace wnl {

/// Raw parse of the plain-text config format: UTF-8, [section] headers,
/// key = value lines, # comments. Duplicate keys within a section are
/// rejected; so are lines outside any section.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;
RawConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RawConfig parse_config_file(const std::string& path);

/// Transport coefficient profile for the harmonics command.
struct HarmonicsParams {
  double A = 1.0;
  int kmax = 15;
  double ds = 1e-3;
  double s_max = 2.0;
  enum class AlphaKind { constant, gaussian } alpha_kind = AlphaKind::constant;
  double alpha_value = 1.0;   ///< constant value / gaussian peak
  double alpha_center = 1.0;  ///< gaussian center along s
  double alpha_width = 0.3;   ///< gaussian 1/e half width

  AlphaOfS profile() const;
  double sup_norm() const { return std::abs(alpha_value); }
};

/// Fully validated experiment description assembled from the five config
/// sections. Every key is checked against its module's invariants before a
/// run starts; unknown keys or sections are rejected.
struct ExperimentConfig {
  AlphaDescriptor phantom;
  double phantom_extent = 1.0;  ///< half width of the square phantom grid

  WavePacket packet;

  SimConfig solver;       ///< grid filled in via dx_target
  double dx_target = 0.0; ///< 0 means the h/4 resolution rule

  AcquisitionPlan plan;
  FbpFilter filter = FbpFilter::ram_lak_hann;
  int out_n = 400;
  double out_extent = 0.5;

  HarmonicsParams harmonics;

  static ExperimentConfig defaults();
  static ExperimentConfig from_raw(const RawConfig& raw);
  static ExperimentConfig from_file(const std::string& path);

  /// Re-derives the solver grid from the extents, the dx rule and h, then
  /// validates everything. Call after mutating h or extents.
  void finalize();

  /// Square grid for phantom sampling/rotation matching the solver dx.
  Grid2D phantom_grid() const;
};

}  // namespace wnl
