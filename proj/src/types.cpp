#include "cojump/types.hpp"

#include <cmath>

namespace cojump {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::denominator_zero: return "denominator_zero";
    case Errc::insufficient_data: return "insufficient_data";
    case Errc::index_out_of_window: return "index_out_of_window";
    case Errc::insufficient_draws: return "insufficient_draws";
    case Errc::missing_power_guard: return "missing_power_guard";
    case Errc::degenerate_config: return "degenerate_config";
    case Errc::parse_error: return "parse_error";
    case Errc::gap_error: return "gap_error";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

SamplingGrid::SamplingGrid(double delta_, double horizon_) : delta(delta_), horizon(horizon_) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(Errc::invalid_argument, "grid: delta must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) fail(Errc::invalid_argument, "grid: horizon must be positive");
  const double ratio = horizon / delta;
  // Tolerate the usual horizon = delta * n rounding when flooring.
  count = static_cast<std::size_t>(std::floor(ratio + ratio * 1e-12 + 1e-9));
  if (count < 1) fail(Errc::invalid_argument, "grid: horizon shorter than one step");
}

IncrementSeries::IncrementSeries(SamplingGrid grid, std::vector<double> x1, std::vector<double> x2)
    : grid_(grid), x1_(std::move(x1)), x2_(std::move(x2)) {
  if (x1_.size() != x2_.size())
    fail(Errc::invalid_argument, "series: component lengths differ");
  if (x1_.size() != grid_.count)
    fail(Errc::invalid_argument, "series: length " + std::to_string(x1_.size()) +
                                     " does not match grid count " + std::to_string(grid_.count));
  for (std::size_t i = 0; i < x1_.size(); ++i) {
    if (!std::isfinite(x1_[i]) || !std::isfinite(x2_[i]))
      fail(Errc::invalid_argument, "series: non-finite increment at index " + std::to_string(i));
  }
}

IncrementSeries IncrementSeries::from_increments(double delta, std::vector<double> x1,
                                                 std::vector<double> x2) {
  if (x1.empty()) fail(Errc::invalid_argument, "series: empty increment list");
  SamplingGrid grid(delta, delta * static_cast<double>(x1.size()));
  return IncrementSeries(grid, std::move(x1), std::move(x2));
}

IncrementSeries IncrementSeries::from_levels(double delta, double horizon,
                                             const std::vector<double>& lv1,
                                             const std::vector<double>& lv2, bool take_logs) {
  if (lv1.size() != lv2.size()) fail(Errc::invalid_argument, "levels: component lengths differ");
  if (lv1.size() < 2) fail(Errc::insufficient_data, "levels: need at least two rows per series");
  const std::size_t n = lv1.size() - 1;
  std::vector<double> x1(n), x2(n);
  auto value = [take_logs](double v, std::size_t row) {
    if (take_logs) {
      if (!(v > 0.0)) fail(Errc::parse_error, "levels: non-positive value at row " + std::to_string(row) +
                                                  " cannot be log-differenced");
      return std::log(v);
    }
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = value(lv1[i + 1], i + 1) - value(lv1[i], i);
    x2[i] = value(lv2[i + 1], i + 1) - value(lv2[i], i);
  }
  SamplingGrid grid(delta, horizon);
  if (grid.count != n)
    fail(Errc::invalid_argument, "levels: grid count " + std::to_string(grid.count) +
                                     " does not match increment count " + std::to_string(n));
  return IncrementSeries(grid, std::move(x1), std::move(x2));
}

}  // namespace cojump
