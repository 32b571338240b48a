#include "cojump/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cojump {

ResampleDraw sample_resample_draw(CounterRng& rng, int k) {
  if (k < 2) fail(Errc::invalid_argument, "resample draw: k must be >= 2");
  ResampleDraw d;
  d.kappa = rng.uniform01();
  d.u[0] = rng.normal();
  d.u[1] = rng.normal();
  d.uprime[0] = rng.normal();
  d.uprime[1] = rng.normal();
  d.offset = rng.uniform_below(static_cast<std::uint32_t>(k));
  d.ubar[0] = rng.normal();
  d.ubar[1] = rng.normal();
  d.ubarprime[0] = rng.normal();
  d.ubarprime[1] = rng.normal();
  return d;
}

ResamplePair resample_pair(const Sym2& root_left, const Sym2& root_right,
                           const ResampleDraw& draw, int k) {
  if (k < 2) fail(Errc::invalid_argument, "resample_pair: k must be >= 2");
  ResamplePair out;
  const double wl = std::sqrt(draw.kappa);
  const double wr = std::sqrt(1.0 - draw.kappa);
  const auto [l1, l2] = root_left.apply(draw.u[0], draw.u[1]);
  const auto [r1, r2] = root_right.apply(draw.uprime[0], draw.uprime[1]);
  out.r[0] = wl * l1 + wr * r1;
  out.r[1] = wl * l2 + wr * r2;
  const double bl = std::sqrt(static_cast<double>(draw.offset));
  const double br = std::sqrt(static_cast<double>(k - 1) - static_cast<double>(draw.offset));
  const auto [bl1, bl2] = root_left.apply(draw.ubar[0], draw.ubar[1]);
  const auto [br1, br2] = root_right.apply(draw.ubarprime[0], draw.ubarprime[1]);
  out.rprime[0] = bl * bl1 + br * br1;
  out.rprime[1] = bl * bl2 + br * br2;
  return out;
}

ResamplePair draw_resample_pair(const SpotCovPair& spot, const ResampleDraw& draw, int k) {
  return resample_pair(psd_sqrt(spot.left), psd_sqrt(spot.right), draw, k);
}

ResamplePlan make_resample_plan(const IncrementSeries& series, const WindowSpec& window,
                                const TruncationSpec& trunc, int k) {
  if (k < 2) fail(Errc::invalid_argument, "resample plan: k must be >= 2");
  window.validate(series.grid());
  trunc.validate();
  const std::size_t n = series.count();
  const std::size_t kn = static_cast<std::size_t>(window.k_n);
  ResamplePlan plan;
  plan.k = k;
  plan.delta = series.delta();
  for (std::size_t i = kn; i + kn + 2 <= n; ++i) {
    if (trunc.keeps(series.x1(i), series.x2(i), plan.delta)) continue;
    const SpotCovPair spot = spot_cov(series, i, window, trunc);
    ResamplePlan::Item item;
    item.index = static_cast<std::uint32_t>(i);
    item.dx1 = series.x1(i);
    item.dx2 = series.x2(i);
    item.root_left = psd_sqrt(spot.left);
    item.root_right = psd_sqrt(spot.right);
    plan.items.push_back(item);
  }
  return plan;
}

double simulate_d_stat(const ResamplePlan& plan, const RngStream& stream, std::uint32_t copy) {
  double acc = 0.0;
  for (const auto& item : plan.items) {
    CounterRng rng = stream.at(copy, item.index);
    const ResampleDraw draw = sample_resample_draw(rng, plan.k);
    const ResamplePair rp = resample_pair(item.root_left, item.root_right, draw, plan.k);
    const double t1 = item.dx1 * rp.r[1];
    const double t2 = item.dx2 * rp.r[0];
    acc += t1 * t1 + t2 * t2;
  }
  return acc;
}

double simulate_g_stat(const ResamplePlan& plan, const RngStream& stream, std::uint32_t copy) {
  double acc = 0.0;
  for (const auto& item : plan.items) {
    CounterRng rng = stream.at(copy, item.index);
    const ResampleDraw draw = sample_resample_draw(rng, plan.k);
    const ResamplePair rp = resample_pair(item.root_left, item.root_right, draw, plan.k);
    acc += item.dx1 * item.dx2 * (item.dx1 * rp.rprime[1] + item.dx2 * rp.rprime[0]);
  }
  return 2.0 * acc;
}

double simulate_d_stat(const IncrementSeries& series, const WindowSpec& window,
                       const TruncationSpec& trunc, int k, const RngStream& stream) {
  return simulate_d_stat(make_resample_plan(series, window, trunc, k), stream, 0);
}

double simulate_g_stat(const IncrementSeries& series, const WindowSpec& window,
                       const TruncationSpec& trunc, int k, const RngStream& stream) {
  return simulate_g_stat(make_resample_plan(series, window, trunc, k), stream, 0);
}

std::vector<double> simulate_d_copies(const ResamplePlan& plan, const RngStream& stream, int n) {
  if (n < 1) fail(Errc::invalid_argument, "copies: need at least one draw");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) out[c] = simulate_d_stat(plan, stream, static_cast<std::uint32_t>(c));
  return out;
}

std::vector<double> simulate_g_copies(const ResamplePlan& plan, const RngStream& stream, int n) {
  if (n < 1) fail(Errc::invalid_argument, "copies: need at least one draw");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) out[c] = simulate_g_stat(plan, stream, static_cast<std::uint32_t>(c));
  return out;
}

int quantile_rank(double level, int n_draws) {
  if (!(level > 0.0 && level < 1.0))
    fail(Errc::invalid_argument, "quantile: level must lie in (0,1)");
  if (n_draws < 1) fail(Errc::invalid_argument, "quantile: need draws");
  const double scaled = level * static_cast<double>(n_draws) + 1e-9;
  if (scaled < 1.0)
    fail(Errc::insufficient_draws, "quantile: level * n_draws < 1, quantile undefined");
  return std::min(n_draws, static_cast<int>(std::floor(scaled)));
}

double quantile_from_sorted_desc(const std::vector<double>& sorted_desc, double level) {
  const int rank = quantile_rank(level, static_cast<int>(sorted_desc.size()));
  return sorted_desc[static_cast<std::size_t>(rank - 1)];
}

namespace {

QuantileEstimate finish_quantile(std::vector<double> copies, double level) {
  std::sort(copies.begin(), copies.end(), std::greater<double>());
  QuantileEstimate q;
  q.level = level;
  q.n_draws = static_cast<int>(copies.size());
  q.value = quantile_from_sorted_desc(copies, level);
  q.sorted_desc = std::move(copies);
  return q;
}

}  // namespace

QuantileEstimate quantile_g(const IncrementSeries& series, const WindowSpec& window,
                            const TruncationSpec& trunc, int k, double level, int n_draws,
                            const RngStream& stream) {
  quantile_rank(level, n_draws);  // validate before the expensive part
  const ResamplePlan plan = make_resample_plan(series, window, trunc, k);
  std::vector<double> copies = simulate_g_copies(plan, stream, n_draws);
  for (double& v : copies) v = std::fabs(v);
  return finish_quantile(std::move(copies), level);
}

QuantileEstimate quantile_d(const IncrementSeries& series, const WindowSpec& window,
                            const TruncationSpec& trunc, double level, int n_draws,
                            const RngStream& stream) {
  quantile_rank(level, n_draws);
  const ResamplePlan plan = make_resample_plan(series, window, trunc, 2);
  return finish_quantile(simulate_d_copies(plan, stream, n_draws), level);
}

}  // namespace cojump
