#include "cojump/estimators.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cojump/power_variation.hpp"

namespace cojump {

TruncationSpec TruncationSpec::joint_norm(double alpha, double varpi) {
  TruncationSpec t;
  t.alpha1 = alpha;
  t.alpha2 = -1.0;
  t.varpi = varpi;
  t.validate();
  return t;
}

TruncationSpec TruncationSpec::per_component(double a1, double a2, double varpi) {
  TruncationSpec t;
  t.alpha1 = a1;
  t.alpha2 = a2;
  t.varpi = varpi;
  t.validate();
  return t;
}

void TruncationSpec::validate() const {
  if (!(varpi > 0.0 && varpi < 0.5))
    fail(Errc::invalid_argument, "truncation: varpi must lie in (0, 0.5)");
  if (!(alpha1 > 0.0)) fail(Errc::invalid_argument, "truncation: alpha must be positive");
}

bool TruncationSpec::keeps(double dx1, double dx2, double delta) const {
  const double scale = std::pow(delta, varpi);
  if (per_component_mode())
    return std::fabs(dx1) <= alpha1 * scale && std::fabs(dx2) <= alpha2 * scale;
  const double thr = alpha1 * scale;
  return dx1 * dx1 + dx2 * dx2 <= thr * thr;
}

WindowSpec WindowSpec::for_grid(const SamplingGrid& grid) {
  int k_n = static_cast<int>(std::lround(1.0 / std::sqrt(grid.delta)));
  if (k_n < 1) k_n = 1;
  const int max_fit = (static_cast<int>(grid.count) - 2) / 2;
  if (max_fit >= 1 && k_n > max_fit) k_n = max_fit;
  return WindowSpec{k_n};
}

void WindowSpec::validate(const SamplingGrid& grid) const {
  if (k_n < 1) fail(Errc::invalid_argument, "window: k_n must be >= 1");
  if (2 * static_cast<std::size_t>(k_n) + 2 > grid.count)
    fail(Errc::insufficient_data, "window: 2*k_n + 2 = " + std::to_string(2 * k_n + 2) +
                                      " exceeds count " + std::to_string(grid.count));
}

double multipower_c(const IncrementSeries& series) {
  const std::size_t n = series.count();
  if (n < 4) fail(Errc::insufficient_data, "multipower_c: need at least 4 increments");
  std::vector<double> p(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = series.x1(i) + series.x2(i);
    m[i] = series.x1(i) - series.x2(i);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 3 < n; ++i) {
    const double quad11_22 =
        std::fabs(series.x1(i) * series.x1(i + 1) * series.x2(i + 2) * series.x2(i + 3));
    const double quad_pp = std::fabs(p[i] * p[i + 1] * p[i + 2] * p[i + 3]);
    const double quad_mm = std::fabs(m[i] * m[i + 1] * m[i + 2] * m[i + 3]);
    const double quad_pm = std::fabs(p[i] * p[i + 1] * m[i + 2] * m[i + 3]);
    acc += quad11_22 + 0.125 * (quad_pp + quad_mm) - 0.25 * quad_pm;
  }
  const double pi = std::numbers::pi;
  return acc * (pi * pi) / (4.0 * series.delta());
}

double truncated_c(const IncrementSeries& series, const TruncationSpec& trunc) {
  trunc.validate();
  const double delta = series.delta();
  double acc = 0.0;
  for (std::size_t i = 0; i < series.count(); ++i) {
    if (!trunc.keeps(series.x1(i), series.x2(i), delta)) continue;
    const double cross = series.x1(i) * series.x2(i);
    acc += cross * cross;
  }
  return acc / delta;
}

SpotCovPair spot_cov(const IncrementSeries& series, std::size_t i, const WindowSpec& window,
                     const TruncationSpec& trunc) {
  window.validate(series.grid());
  trunc.validate();
  const std::size_t n = series.count();
  const std::size_t kn = static_cast<std::size_t>(window.k_n);
  if (i < kn || i + kn + 2 > n)
    fail(Errc::index_out_of_window, "spot_cov: index " + std::to_string(i) +
                                        " leaves no room for both windows");
  const double delta = series.delta();
  auto window_sum = [&](std::size_t first, std::size_t last) {
    Sym2 c;
    for (std::size_t j = first; j <= last; ++j) {
      if (!trunc.keeps(series.x1(j), series.x2(j), delta)) continue;
      c.xx += series.x1(j) * series.x1(j);
      c.xy += series.x1(j) * series.x2(j);
      c.yy += series.x2(j) * series.x2(j);
    }
    return c.scaled(1.0 / (static_cast<double>(kn) * delta));
  };
  return SpotCovPair{window_sum(i - kn, i - 1), window_sum(i + 2, i + kn + 1)};
}

namespace {

std::vector<char> small_flags(const IncrementSeries& series, const TruncationSpec& trunc) {
  const double delta = series.delta();
  std::vector<char> small(series.count());
  for (std::size_t i = 0; i < series.count(); ++i)
    small[i] = trunc.keeps(series.x1(i), series.x2(i), delta) ? 1 : 0;
  return small;
}

}  // namespace

double f_hat(const IncrementSeries& series, const WindowSpec& window,
             const TruncationSpec& trunc) {
  window.validate(series.grid());
  trunc.validate();
  const std::size_t n = series.count();
  const std::size_t kn = static_cast<std::size_t>(window.k_n);
  const std::vector<char> small = small_flags(series, trunc);
  double acc = 0.0;
  for (std::size_t i = kn; i + kn + 2 <= n; ++i) {
    if (small[i]) continue;
    const double a = series.x1(i) * series.x1(i);
    const double b = series.x2(i) * series.x2(i);
    auto add_window = [&](std::size_t first, std::size_t last) {
      for (std::size_t j = first; j <= last; ++j) {
        if (!small[j]) continue;
        acc += a * series.x2(j) * series.x2(j) + b * series.x1(j) * series.x1(j);
      }
    };
    add_window(i - kn, i - 1);
    add_window(i + 2, i + kn + 1);
  }
  return acc / (2.0 * static_cast<double>(kn) * series.delta());
}

double fprime_hat(const IncrementSeries& series, const WindowSpec& window,
                  const TruncationSpec& trunc) {
  window.validate(series.grid());
  trunc.validate();
  const std::size_t n = series.count();
  const std::size_t kn = static_cast<std::size_t>(window.k_n);
  const std::vector<char> small = small_flags(series, trunc);
  double acc = 0.0;
  for (std::size_t i = kn; i + kn + 2 <= n; ++i) {
    if (small[i]) continue;
    const double d1 = series.x1(i), d2 = series.x2(i);
    const double cross_sq = d1 * d1 * d2 * d2;
    auto add_window = [&](std::size_t first, std::size_t last) {
      for (std::size_t j = first; j <= last; ++j) {
        if (!small[j]) continue;
        const double w = d1 * series.x2(j) + d2 * series.x1(j);
        acc += cross_sq * w * w;
      }
    };
    add_window(i - kn, i - 1);
    add_window(i + 2, i + kn + 1);
  }
  return acc * 2.0 / (static_cast<double>(kn) * series.delta());
}

StandardizerParts standardizer_parts(const IncrementSeries& series, int k,
                                     const WindowSpec& window, const TruncationSpec& trunc) {
  if (k < 2) fail(Errc::invalid_argument, "standardizers: k must be >= 2");
  StandardizerParts parts;
  parts.v_f = realized_functional(series, TestFunctionId::prod_sq, 1);
  parts.v_fk = realized_functional(series, TestFunctionId::prod_sq, k);
  parts.v_g1 = realized_functional(series, TestFunctionId::quartic_1, 1);
  parts.v_g2 = realized_functional(series, TestFunctionId::quartic_2, 1);
  parts.a_hat_trunc = truncated_c(series, trunc);
  try {
    parts.a_hat = multipower_c(series);
  } catch (const Error& e) {
    parts.note += std::string(e.what()) + "; ";
  }
  try {
    parts.f_hat = f_hat(series, window, trunc);
    parts.fprime_hat = fprime_hat(series, window, trunc);
  } catch (const Error& e) {
    parts.note += std::string(e.what()) + "; ";
  }
  const double delta = series.delta();
  if (parts.v_f > 0.0 && parts.fprime_hat)
    parts.v_joint = std::sqrt(delta * (k - 1) * *parts.fprime_hat) / parts.v_f;
  if (parts.v_g1 > 0.0 && parts.v_g2 > 0.0 && parts.f_hat) {
    const double root = std::sqrt(parts.v_g1) * std::sqrt(parts.v_g2);
    // A variance proxy must stay nonnegative, so a slightly negative
    // multipower estimate is clamped here (and only here).
    if (parts.a_hat)
      parts.v_disjoint = delta * (*parts.f_hat + std::max(*parts.a_hat, 0.0)) / root;
    parts.v_disjoint_trunc = delta * (*parts.f_hat + parts.a_hat_trunc) / root;
  }
  return parts;
}

StandardizerReport standardizers(const IncrementSeries& series, int k, const WindowSpec& window,
                                 const TruncationSpec& trunc) {
  const StandardizerParts parts = standardizer_parts(series, k, window, trunc);
  if (!parts.f_hat || !parts.fprime_hat || !parts.a_hat)
    fail(Errc::insufficient_data, "standardizers: " + parts.note);
  if (parts.v_f == 0.0)
    fail(Errc::denominator_zero, "standardizers: no cross variation at the fine scale");
  if (parts.v_g1 == 0.0 || parts.v_g2 == 0.0)
    fail(Errc::denominator_zero, "standardizers: a component shows no variation");
  StandardizerReport r;
  r.a_hat = *parts.a_hat;
  r.a_hat_trunc = parts.a_hat_trunc;
  r.f_hat = *parts.f_hat;
  r.fprime_hat = *parts.fprime_hat;
  r.v_joint = *parts.v_joint;
  r.v_disjoint = *parts.v_disjoint;
  r.v_disjoint_trunc = *parts.v_disjoint_trunc;
  return r;
}

}  // namespace cojump
