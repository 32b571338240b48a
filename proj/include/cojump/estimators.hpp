#pragma once

#include <optional>
#include <string>

#include "cojump/mat2.hpp"
#include "cojump/types.hpp"

namespace cojump {

/// Threshold separating "small" (diffusive) from "big" (jump) increments at
/// level alpha * delta^varpi. Either one Euclidean-norm cut, or independent
/// per-component cuts when the two series live on different scales.
struct TruncationSpec {
  double varpi = 0.49;
  double alpha1 = 0.03;
  double alpha2 = -1.0;  // < 0: joint-norm mode using alpha1 only

  static TruncationSpec joint_norm(double alpha, double varpi);
  static TruncationSpec per_component(double a1, double a2, double varpi);

  bool per_component_mode() const noexcept { return alpha2 > 0.0; }
  void validate() const;

  /// True when the increment counts as small (kept by the truncation).
  bool keeps(double dx1, double dx2, double delta) const;
};

/// Width of the one-sided local windows used by the spot estimates.
struct WindowSpec {
  int k_n = 1;

  /// round(1 / sqrt(delta)), clamped so both windows fit the grid.
  static WindowSpec for_grid(const SamplingGrid& grid);
  void validate(const SamplingGrid& grid) const;
};

/// Spot covariance estimates just before (left) and just after (right) an
/// increment; symmetric by construction, PSD up to truncation round-off.
struct SpotCovPair {
  Sym2 left, right;
};

struct StandardizerReport {
  double a_hat = 0.0;        // multipower estimate of the quarticity integral
  double a_hat_trunc = 0.0;  // truncated-power estimate of the same
  double f_hat = 0.0;
  double fprime_hat = 0.0;
  double v_joint = 0.0;
  double v_disjoint = 0.0;
  double v_disjoint_trunc = 0.0;
};

/// Multipower estimate of int (c11 c22 + 2 c12^2) ds, built from adjacent
/// quadruples of increments so jumps wash out. Can come out slightly
/// negative in small samples; recorded as-is.
double multipower_c(const IncrementSeries& series);

/// Truncated-power estimate of the same integral: sum of the squared cross
/// product over small increments, scaled by 1/delta.
double truncated_c(const IncrementSeries& series, const TruncationSpec& trunc);

/// Spot covariance around index i (0-based). Left window is the k_n
/// increments before i; the right window skips i+1 and takes the next k_n.
SpotCovPair spot_cov(const IncrementSeries& series, std::size_t i, const WindowSpec& window,
                     const TruncationSpec& trunc);

/// Jump-diffusion interaction sums: big increments paired with the small
/// increments in their surrounding windows.
double f_hat(const IncrementSeries& series, const WindowSpec& window, const TruncationSpec& trunc);
double fprime_hat(const IncrementSeries& series, const WindowSpec& window,
                  const TruncationSpec& trunc);

/// All standardizer pieces, with missing preconditions captured instead of
/// thrown; run_tests uses this to degrade per side.
struct StandardizerParts {
  double v_f = 0.0, v_fk = 0.0, v_g1 = 0.0, v_g2 = 0.0;
  std::optional<double> a_hat;
  double a_hat_trunc = 0.0;
  std::optional<double> f_hat, fprime_hat;
  std::optional<double> v_joint, v_disjoint, v_disjoint_trunc;
  std::string note;
};

StandardizerParts standardizer_parts(const IncrementSeries& series, int k,
                                     const WindowSpec& window, const TruncationSpec& trunc);

/// Strict variant: throws denominator_zero / insufficient_data when any
/// piece is unavailable.
StandardizerReport standardizers(const IncrementSeries& series, int k, const WindowSpec& window,
                                 const TruncationSpec& trunc);

}  // namespace cojump
