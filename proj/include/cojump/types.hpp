#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cojump {

enum class Errc {
  invalid_argument,
  denominator_zero,
  insufficient_data,
  index_out_of_window,
  insufficient_draws,
  missing_power_guard,
  degenerate_config,
  parse_error,
  gap_error,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

/// Regular observation grid: count = floor(horizon / delta) increments
/// covering [0, horizon].
struct SamplingGrid {
  double delta = 0.0;
  double horizon = 0.0;
  std::size_t count = 0;

  SamplingGrid() = default;
  SamplingGrid(double delta_, double horizon_);
};

/// Observed per-interval increments of a bivariate path. Everything
/// downstream consumes increments only; level ingestion happens upstream.
class IncrementSeries {
 public:
  IncrementSeries(SamplingGrid grid, std::vector<double> x1, std::vector<double> x2);

  static IncrementSeries from_increments(double delta, std::vector<double> x1,
                                         std::vector<double> x2);
  // n_levels rows produce n_levels - 1 increments; take_logs differences
  // the logarithms (levels must be positive in that case).
  static IncrementSeries from_levels(double delta, double horizon,
                                     const std::vector<double>& lv1,
                                     const std::vector<double>& lv2, bool take_logs);

  const SamplingGrid& grid() const noexcept { return grid_; }
  std::size_t count() const noexcept { return x1_.size(); }
  double delta() const noexcept { return grid_.delta; }
  double horizon() const noexcept { return grid_.horizon; }
  double x1(std::size_t i) const noexcept { return x1_[i]; }
  double x2(std::size_t i) const noexcept { return x2_[i]; }
  const std::vector<double>& x1s() const noexcept { return x1_; }
  const std::vector<double>& x2s() const noexcept { return x2_; }

 private:
  SamplingGrid grid_;
  std::vector<double> x1_, x2_;
};

}  // namespace cojump
