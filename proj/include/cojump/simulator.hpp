#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cojump/mat2.hpp"
#include "cojump/rng.hpp"
#include "cojump/types.hpp"

namespace cojump {

/// One compound-Poisson jump source: intensity `lambda` per unit time, marks
/// uniform on [-high, -low] U [low, high], level-proportional jump factor
/// 1 + alpha * mark. Source 1 drives x1, source 2 drives x2, source 3 hits
/// both components with the same mark.
struct JumpSourceConfig {
  double alpha = 0.0;
  double lambda = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Level-proportional bivariate diffusion with correlated Brownian drivers
/// and up to three jump sources.
struct ScenarioConfig {
  double rho = 0.0;
  double sigma1 = 0.0;  // volatility of component 1 (not variance)
  double sigma2 = 0.0;
  JumpSourceConfig sources[3];
  double x0_1 = 1.0;
  double x0_2 = 1.0;
  double horizon = 1.0;
  int fine_steps_per_obs = 1;

  void validate() const;  // throws degenerate_config when a jump can kill positivity
};

enum class PathClass { joint, disjoint, continuous_any };

const char* to_string(PathClass c);

struct JumpEvent {
  double time = 0.0;
  int source = 0;  // 1, 2 or 3
  double mark = 0.0;
  double jump1 = 0.0, jump2 = 0.0;  // level jumps of each component
  Sym2 c_left, c_right;             // spot covariance just before / after
};

struct SpotSample {
  double t = 0.0;
  Sym2 c;
};

struct PathTruth {
  std::vector<JumpEvent> jumps;
  std::vector<SpotSample> spot_path;  // observation times plus duplicated jump times
  PathClass path_class = PathClass::continuous_any;
};

/// Exact simulation: geometric diffusion bridged in closed form between jump
/// times, jumps applied multiplicatively at their exact times. Returns the
/// observed increment series and the full ground truth.
std::pair<IncrementSeries, PathTruth> simulate_path(const ScenarioConfig& cfg, int n_obs,
                                                    const RngStream& stream);

PathClass classify_jumps(const std::vector<JumpEvent>& jumps, double horizon);
PathClass classify_path(const PathTruth& truth, double horizon);

/// Named Monte-Carlo presets (I-j, II-m, III-d0, ...). Null when unknown.
const ScenarioConfig* find_preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace cojump
