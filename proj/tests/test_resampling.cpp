#include <algorithm>
#include <cmath>
#include <vector>

#include "cojump/estimators.hpp"
#include "cojump/resampling.hpp"
#include "cojump/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cojump;
using test_helpers::make_series;

namespace {

Sym2 square_of(const Sym2& s) {
  return {s.xx * s.xx + s.xy * s.xy, s.xx * s.xy + s.xy * s.yy, s.xy * s.xy + s.yy * s.yy};
}

// A small diffuse series with two outsized increments.
IncrementSeries jumpy_series(std::uint64_t seed, int n = 96) {
  CounterRng g = RngStream(seed).scalar();
  std::vector<double> x1(n), x2(n);
  for (int i = 0; i < n; ++i) {
    x1[i] = 5e-4 * g.normal();
    x2[i] = 5e-4 * g.normal();
  }
  x1[n / 3] += 0.5;
  x2[n / 3] += 0.2;
  x1[2 * n / 3] -= 0.3;
  x2[2 * n / 3] += 0.4;
  return make_series(1.0 / n, std::move(x1), std::move(x2));
}

const TruncationSpec kTrunc = TruncationSpec::joint_norm(0.05, 0.49);
const WindowSpec kWin{6};

}  // namespace

TEST_CASE("resample pair degenerate and identity cases") {
  CounterRng g = RngStream(5).scalar();
  ResampleDraw d = sample_resample_draw(g, 2);
  const SpotCovPair zero{Sym2::zero(), Sym2::zero()};
  const ResamplePair rp0 = draw_resample_pair(zero, d, 2);
  CHECK(rp0.r[0] == 0.0);
  CHECK(rp0.r[1] == 0.0);
  CHECK(rp0.rprime[0] == 0.0);
  CHECK(rp0.rprime[1] == 0.0);

  d.kappa = 1.0;
  const SpotCovPair ident{Sym2::identity(), Sym2::identity()};
  const ResamplePair rp1 = draw_resample_pair(ident, d, 2);
  CHECK(rp1.r[0] == doctest::Approx(d.u[0]));
  CHECK(rp1.r[1] == doctest::Approx(d.u[1]));

  CHECK_THROWS_AS(draw_resample_pair(ident, d, 1), Error);
}

TEST_CASE("resample pair moments match the half-sum of the spot pair") {
  const Sym2 c_left{1.0, 0.3, 0.8};
  const Sym2 c_right{0.5, -0.1, 1.2};
  const Sym2 sl = psd_sqrt(c_left), sr = psd_sqrt(c_right);
  const int k = 3, n = 100000;
  const RngStream stream = RngStream(17).fork(1);
  double rxx = 0, rxy = 0, ryy = 0;
  double pxx = 0, pxy = 0, pyy = 0;
  for (int i = 0; i < n; ++i) {
    CounterRng g = stream.at(static_cast<std::uint32_t>(i), 0);
    const ResampleDraw d = sample_resample_draw(g, k);
    const ResamplePair rp = resample_pair(sl, sr, d, k);
    rxx += rp.r[0] * rp.r[0];
    rxy += rp.r[0] * rp.r[1];
    ryy += rp.r[1] * rp.r[1];
    pxx += rp.rprime[0] * rp.rprime[0];
    pxy += rp.rprime[0] * rp.rprime[1];
    pyy += rp.rprime[1] * rp.rprime[1];
  }
  const Sym2 half = c_left.plus(c_right).scaled(0.5);
  CHECK(rxx / n == doctest::Approx(half.xx).epsilon(0.02));
  CHECK(rxy / n == doctest::Approx(half.xy).epsilon(0.05));
  CHECK(ryy / n == doctest::Approx(half.yy).epsilon(0.02));
  // Block-offset pair scales the same sum by (k-1)/2 = 1 at k = 3.
  const Sym2 full = c_left.plus(c_right);
  CHECK(pxx / n == doctest::Approx(full.xx).epsilon(0.02));
  CHECK(pxy / n == doctest::Approx(full.xy).epsilon(0.08));
  CHECK(pyy / n == doctest::Approx(full.yy).epsilon(0.02));
}

TEST_CASE("d statistic of a hand-built single-item plan") {
  ResamplePlan plan;
  plan.k = 2;
  plan.delta = 0.01;
  const double v = 0.7;
  ResamplePlan::Item item;
  item.index = 11;
  item.dx1 = 1.0;
  item.dx2 = 0.0;
  item.root_left = item.root_right = psd_sqrt(Sym2::diag(0.0, v));
  plan.items.push_back(item);
  const RngStream stream = RngStream(23).fork(4);
  double mean = 0.0;
  const int n = 50000;
  for (int c = 0; c < n; ++c) {
    const double d = simulate_d_stat(plan, stream, static_cast<std::uint32_t>(c));
    CHECK(d >= 0.0);
    mean += d;
  }
  CHECK(mean / n == doctest::Approx(v).epsilon(0.03));
}

TEST_CASE("no big increments means zero statistics") {
  std::vector<double> x1(32, 1e-4), x2(32, 1e-4);
  const IncrementSeries s = make_series(1.0 / 32, std::move(x1), std::move(x2));
  const RngStream stream(3);
  CHECK(simulate_d_stat(s, WindowSpec{3}, kTrunc, 2, stream) == 0.0);
  CHECK(simulate_g_stat(s, WindowSpec{3}, kTrunc, 2, stream) == 0.0);
}

TEST_CASE("conditional moment identities against the estimator sums") {
  const IncrementSeries s = jumpy_series(31);
  const int k = 2;
  const ResamplePlan plan = make_resample_plan(s, kWin, kTrunc, k);
  REQUIRE(plan.items.size() == 2);

  // Exact identities: the conditional mean of D equals the f sum and the
  // conditional variance of G equals (k-1) times the f' sum, both computable
  // from the plan itself.
  double mean_d_exact = 0.0, var_g_exact = 0.0;
  for (const auto& item : plan.items) {
    const Sym2 cl = square_of(item.root_left), cr = square_of(item.root_right);
    mean_d_exact += 0.5 * (item.dx1 * item.dx1 * (cl.yy + cr.yy) +
                           item.dx2 * item.dx2 * (cl.xx + cr.xx));
    const Sym2 sum = cl.plus(cr);
    const double quad = item.dx2 * item.dx2 * sum.xx + 2.0 * item.dx1 * item.dx2 * sum.xy +
                        item.dx1 * item.dx1 * sum.yy;
    var_g_exact += 2.0 * (k - 1) * item.dx1 * item.dx1 * item.dx2 * item.dx2 * quad;
  }
  CHECK(mean_d_exact == doctest::Approx(f_hat(s, kWin, kTrunc)).epsilon(1e-10));
  CHECK(var_g_exact == doctest::Approx((k - 1) * fprime_hat(s, kWin, kTrunc)).epsilon(1e-10));

  // Monte-Carlo confirmation on top of the algebra.
  const RngStream stream = RngStream(37).fork(9);
  const int n = 20000;
  double mean_d = 0.0, mean_g = 0.0, sq_g = 0.0;
  for (int c = 0; c < n; ++c) {
    mean_d += simulate_d_stat(plan, stream.fork(1), static_cast<std::uint32_t>(c));
    const double g = simulate_g_stat(plan, stream.fork(2), static_cast<std::uint32_t>(c));
    mean_g += g;
    sq_g += g * g;
  }
  mean_d /= n;
  mean_g /= n;
  const double var_g = sq_g / n - mean_g * mean_g;
  CHECK(mean_d == doctest::Approx(mean_d_exact).epsilon(0.05));
  CHECK(var_g == doctest::Approx(var_g_exact).epsilon(0.05));
  CHECK(std::fabs(mean_g) < 4.0 * std::sqrt(var_g_exact / n));  // centered
}

TEST_CASE("copies are bit-reproducible for a fixed stream") {
  const IncrementSeries s = jumpy_series(41);
  const ResamplePlan plan = make_resample_plan(s, kWin, kTrunc, 2);
  const RngStream stream = RngStream(55).fork(2);
  const std::vector<double> a = simulate_d_copies(plan, stream, 100);
  const std::vector<double> b = simulate_d_copies(plan, stream, 100);
  CHECK(a == b);
  const std::vector<double> g1 = simulate_g_copies(plan, stream, 64);
  const std::vector<double> g2 = simulate_g_copies(plan, stream, 64);
  CHECK(g1 == g2);
}

TEST_CASE("quantile rank selection and order statistics") {
  CHECK(quantile_rank(0.5, 4) == 2);
  CHECK(quantile_rank(0.25, 4) == 1);
  CHECK(quantile_rank(0.3, 10) == 3);  // guards against 2.9999... flooring
  CHECK_THROWS_AS(quantile_rank(0.05, 10), Error);

  const std::vector<double> sorted{10.0, 8.0, 5.0, 1.0};
  CHECK(quantile_from_sorted_desc(sorted, 0.5) == doctest::Approx(8.0));
  CHECK(quantile_from_sorted_desc(sorted, 0.25) == doctest::Approx(10.0));
  // level up -> value down (same copy set)
  double prev = 1e300;
  for (double level : {0.25, 0.5, 0.75, 0.9}) {
    const double v = quantile_from_sorted_desc(sorted, level);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("quantile of identical copies is that value") {
  ResamplePlan plan;  // empty plan -> every copy is exactly zero
  plan.k = 2;
  plan.delta = 0.01;
  const RngStream stream(7);
  std::vector<double> copies = simulate_d_copies(plan, stream, 50);
  std::sort(copies.begin(), copies.end(), std::greater<double>());
  for (double level : {0.1, 0.5, 0.9})
    CHECK(quantile_from_sorted_desc(copies, level) == doctest::Approx(0.0));
}

TEST_CASE("empirical tail of the simulated quantiles is calibrated") {
  const IncrementSeries s = jumpy_series(61);
  const double level = 0.1;
  const int n = 2000;
  const QuantileEstimate qg = quantile_g(s, kWin, kTrunc, 2, level, n, RngStream(71).fork(1));
  const QuantileEstimate qd = quantile_d(s, kWin, kTrunc, level, n, RngStream(71).fork(2));
  CHECK(qg.n_draws == n);
  CHECK(qd.value >= 0.0);

  const ResamplePlan plan = make_resample_plan(s, kWin, kTrunc, 2);
  const RngStream fresh = RngStream(71).fork(3);
  int above_g = 0, above_d = 0;
  for (int c = 0; c < n; ++c) {
    if (std::fabs(simulate_g_stat(plan, fresh.fork(1), static_cast<std::uint32_t>(c))) > qg.value)
      ++above_g;
    if (simulate_d_stat(plan, fresh.fork(2), static_cast<std::uint32_t>(c)) > qd.value) ++above_d;
  }
  const double band = 3.0 * std::sqrt(level * (1.0 - level) / n);
  CHECK(std::fabs(above_g / static_cast<double>(n) - level) < band);
  CHECK(std::fabs(above_d / static_cast<double>(n) - level) < band);
}
