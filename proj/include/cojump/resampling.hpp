#pragma once

#include <cstdint>
#include <vector>

#include "cojump/estimators.hpp"
#include "cojump/rng.hpp"

namespace cojump {

/// One bundle of auxiliary variables for a single increment: a uniform
/// mixing weight, a uniform block offset, and four independent standard
/// normal pairs.
struct ResampleDraw {
  double kappa = 0.0;
  std::uint32_t offset = 0;  // uniform on {0, ..., k-1}
  double u[2] = {0, 0}, uprime[2] = {0, 0};
  double ubar[2] = {0, 0}, ubarprime[2] = {0, 0};
};

ResampleDraw sample_resample_draw(CounterRng& rng, int k);

struct ResamplePair {
  double r[2] = {0, 0};       // sqrt(kappa) S- U + sqrt(1-kappa) S+ U'
  double rprime[2] = {0, 0};  // sqrt(offset) S- Ubar + sqrt(k-1-offset) S+ Ubar'
};

/// Variant taking precomputed matrix square roots (hot path).
ResamplePair resample_pair(const Sym2& root_left, const Sym2& root_right,
                           const ResampleDraw& draw, int k);
/// Convenience variant taking the raw spot pair.
ResamplePair draw_resample_pair(const SpotCovPair& spot, const ResampleDraw& draw, int k);

/// Everything that stays fixed across resampling copies: the big increments
/// in the admissible index range together with the square roots of their
/// local spot covariance estimates.
struct ResamplePlan {
  struct Item {
    std::uint32_t index = 0;
    double dx1 = 0.0, dx2 = 0.0;
    Sym2 root_left, root_right;
  };
  std::vector<Item> items;
  int k = 2;
  double delta = 0.0;
};

ResamplePlan make_resample_plan(const IncrementSeries& series, const WindowSpec& window,
                                const TruncationSpec& trunc, int k);

/// One copy each; stream.at(copy, item.index) keys every draw, so copies are
/// reproducible independent of generation order.
double simulate_d_stat(const ResamplePlan& plan, const RngStream& stream, std::uint32_t copy);
double simulate_g_stat(const ResamplePlan& plan, const RngStream& stream, std::uint32_t copy);

/// Single-copy conveniences matching the estimator call style.
double simulate_d_stat(const IncrementSeries& series, const WindowSpec& window,
                       const TruncationSpec& trunc, int k, const RngStream& stream);
double simulate_g_stat(const IncrementSeries& series, const WindowSpec& window,
                       const TruncationSpec& trunc, int k, const RngStream& stream);

std::vector<double> simulate_d_copies(const ResamplePlan& plan, const RngStream& stream, int n);
std::vector<double> simulate_g_copies(const ResamplePlan& plan, const RngStream& stream, int n);

/// Rank of the empirical upper quantile: floor(level * n) clamped to [1, n].
/// Throws insufficient_draws when level * n < 1.
int quantile_rank(double level, int n_draws);

struct QuantileEstimate {
  double level = 0.0;
  double value = 0.0;
  int n_draws = 0;
  std::vector<double> sorted_desc;  // retained copies, largest first
};

/// value = rank-th largest of sorted_desc at the given level.
double quantile_from_sorted_desc(const std::vector<double>& sorted_desc, double level);

/// Empirical upper quantile of |G| over n_draws fresh copies.
QuantileEstimate quantile_g(const IncrementSeries& series, const WindowSpec& window,
                            const TruncationSpec& trunc, int k, double level, int n_draws,
                            const RngStream& stream);
/// Empirical upper quantile of D (nonnegative) over n_draws fresh copies.
QuantileEstimate quantile_d(const IncrementSeries& series, const WindowSpec& window,
                            const TruncationSpec& trunc, double level, int n_draws,
                            const RngStream& stream);

}  // namespace cojump
