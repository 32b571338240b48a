#include "cojump/testing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "cojump/power_variation.hpp"

namespace cojump {

const char* to_string(JointMethod m) {
  switch (m) {
    case JointMethod::normal: return "normal";
    case JointMethod::chebyshev: return "chebyshev";
    case JointMethod::simulated: return "simulated";
    case JointMethod::normal_truncated: return "normal_truncated";
    case JointMethod::chebyshev_truncated: return "chebyshev_truncated";
  }
  return "?";
}

const char* to_string(DisjointMethod m) {
  switch (m) {
    case DisjointMethod::markov: return "markov";
    case DisjointMethod::simulated: return "simulated";
  }
  return "?";
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::retain: return "retain";
    case Decision::reject: return "reject";
    case Decision::inapplicable: return "inapplicable";
  }
  return "?";
}

JointMethod joint_method_from_string(const std::string& s) {
  if (s == "normal") return JointMethod::normal;
  if (s == "chebyshev") return JointMethod::chebyshev;
  if (s == "simulated") return JointMethod::simulated;
  if (s == "normal_truncated") return JointMethod::normal_truncated;
  if (s == "chebyshev_truncated") return JointMethod::chebyshev_truncated;
  fail(Errc::invalid_argument, "unknown joint method '" + s + "'");
}

DisjointMethod disjoint_method_from_string(const std::string& s) {
  if (s == "markov") return DisjointMethod::markov;
  if (s == "simulated") return DisjointMethod::simulated;
  fail(Errc::invalid_argument, "unknown disjoint method '" + s + "'");
}

CEstimator c_estimator_from_string(const std::string& s) {
  if (s == "multipower") return CEstimator::multipower;
  if (s == "truncated") return CEstimator::truncated;
  fail(Errc::invalid_argument, "unknown c estimator '" + s + "'");
}

WindowSpec TestConfig::resolve_window(const SamplingGrid& grid) const {
  if (window > 0) {
    WindowSpec w{window};
    w.validate(grid);
    return w;
  }
  WindowSpec w = WindowSpec::for_grid(grid);
  w.validate(grid);
  return w;
}

int TestConfig::resolve_draws() const {
  if (n_draws > 0) return n_draws;
  const int wanted = static_cast<int>(std::ceil(1000.0 / level));
  return std::min(20000, wanted);
}

void TestConfig::validate() const {
  if (k < 2) fail(Errc::invalid_argument, "config: k must be >= 2");
  if (!(level > 0.0 && level < 1.0)) fail(Errc::invalid_argument, "config: level must lie in (0,1)");
  trunc.validate();
  if (power_guard) {
    if (!(power_guard->alpha_prime > 0.0))
      fail(Errc::invalid_argument, "config: power-guard alpha' must be positive");
    if (!(power_guard->varpi_prime > 0.0 && power_guard->varpi_prime < 0.5))
      fail(Errc::invalid_argument, "config: power-guard varpi' must lie in (0, 0.5)");
  }
}

double z_alpha(double level) { return normal_abs_quantile(level); }

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double count_above(const std::vector<double>& sorted_desc, double threshold) {
  // sorted_desc is descending; strict exceedances form a prefix.
  auto it = std::lower_bound(sorted_desc.begin(), sorted_desc.end(), threshold,
                             [](double a, double b) { return a > b; });
  return static_cast<double>(it - sorted_desc.begin());
}

}  // namespace

SideOutcome decide_joint(const JointSideInputs& in, JointMethod method, double level) {
  SideOutcome out;
  if (!(in.v_f > 0.0) || !std::isfinite(in.phi)) return out;
  const double dist = std::fabs(in.phi - 1.0);
  switch (method) {
    case JointMethod::normal:
    case JointMethod::chebyshev:
    case JointMethod::normal_truncated:
    case JointMethod::chebyshev_truncated: {
      if (!in.v_joint) return out;
      double v_eff = *in.v_joint;
      const bool truncated =
          method == JointMethod::normal_truncated || method == JointMethod::chebyshev_truncated;
      if (truncated) {
        if (!in.guard)
          fail(Errc::missing_power_guard, "joint cutoff: truncated method needs a power guard");
        v_eff = std::min(v_eff, in.guard->alpha_prime * std::pow(in.delta, in.guard->varpi_prime));
      }
      const bool normal_tail =
          method == JointMethod::normal || method == JointMethod::normal_truncated;
      out.cutoff = normal_tail ? z_alpha(level) * v_eff : v_eff / std::sqrt(level);
      if (normal_tail) {
        out.p_value = (v_eff > 0.0) ? std::erfc((dist / v_eff) / kSqrt2) : (dist > 0.0 ? 0.0 : 1.0);
      } else {
        // Inverse of the two-sided concentration bound behind the cutoff.
        if (dist == 0.0) out.p_value = 1.0;
        else if (v_eff == 0.0) out.p_value = 0.0;
        else out.p_value = std::min(1.0, (v_eff / dist) * (v_eff / dist));
      }
      break;
    }
    case JointMethod::simulated: {
      if (in.g_abs_sorted == nullptr || in.g_abs_sorted->empty()) return out;
      const int n = static_cast<int>(in.g_abs_sorted->size());
      const double z = quantile_from_sorted_desc(*in.g_abs_sorted, level);
      out.cutoff = z * std::sqrt(in.delta) / in.v_f;
      const double observed = dist * in.v_f / std::sqrt(in.delta);
      out.p_value = count_above(*in.g_abs_sorted, observed) / static_cast<double>(n);
      break;
    }
  }
  if (dist == 0.0 && out.cutoff == 0.0) {
    out.decision = Decision::inapplicable;  // fully degenerate input
    return out;
  }
  out.decision = dist >= out.cutoff ? Decision::reject : Decision::retain;
  return out;
}

SideOutcome decide_disjoint(const DisjointSideInputs& in, DisjointMethod method,
                            CEstimator estimator, double level) {
  SideOutcome out;
  if (!(in.vg_root > 0.0) || !std::isfinite(in.phi)) return out;
  switch (method) {
    case DisjointMethod::markov: {
      const std::optional<double>& v_eff =
          estimator == CEstimator::multipower ? in.v_disjoint : in.v_disjoint_trunc;
      if (!v_eff) return out;
      out.cutoff = *v_eff / level;
      if (in.phi > 0.0) out.p_value = std::min(1.0, *v_eff / in.phi);
      else out.p_value = 1.0;
      break;
    }
    case DisjointMethod::simulated: {
      if (in.d_sorted == nullptr || in.d_sorted->empty()) return out;
      std::optional<double> a_sel;
      if (estimator == CEstimator::multipower) {
        if (!in.a_hat) return out;
        a_sel = std::max(*in.a_hat, 0.0);
      } else {
        a_sel = std::max(in.a_hat_trunc, 0.0);
      }
      const int n = static_cast<int>(in.d_sorted->size());
      const double z = quantile_from_sorted_desc(*in.d_sorted, level);
      out.cutoff = (z + *a_sel) * in.delta / in.vg_root;
      const double observed = in.phi * in.vg_root / in.delta - *a_sel;
      out.p_value = count_above(*in.d_sorted, observed) / static_cast<double>(n);
      break;
    }
  }
  if (in.phi == 0.0 && out.cutoff == 0.0) {
    out.decision = Decision::inapplicable;
    return out;
  }
  out.decision = in.phi >= out.cutoff ? Decision::reject : Decision::retain;
  return out;
}

namespace {

struct Prepared {
  StandardizerParts parts;
  std::optional<double> phi_j, phi_d;
  std::vector<double> g_abs_sorted, d_sorted;
  bool have_window = false;
  std::string note;
};

constexpr std::uint64_t kForkGCopies = 1;
constexpr std::uint64_t kForkDCopies = 2;

Prepared prepare(const IncrementSeries& series, const TestConfig& cfg, bool want_g, bool want_d,
                 const RngStream& stream) {
  cfg.validate();
  Prepared prep;
  WindowSpec win;
  try {
    win = cfg.resolve_window(series.grid());
    prep.have_window = true;
  } catch (const Error& e) {
    prep.note = std::string(e.what()) + "; ";
  }
  if (prep.have_window) {
    prep.parts = standardizer_parts(series, cfg.k, win, cfg.trunc);
  } else {
    prep.parts.v_f = realized_functional(series, TestFunctionId::prod_sq, 1);
    prep.parts.v_fk = realized_functional(series, TestFunctionId::prod_sq, cfg.k);
    prep.parts.v_g1 = realized_functional(series, TestFunctionId::quartic_1, 1);
    prep.parts.v_g2 = realized_functional(series, TestFunctionId::quartic_2, 1);
    prep.parts.a_hat_trunc = truncated_c(series, cfg.trunc);
  }
  prep.note += prep.parts.note;
  if (prep.parts.v_f > 0.0) prep.phi_j = prep.parts.v_fk / prep.parts.v_f;
  if (prep.parts.v_g1 > 0.0 && prep.parts.v_g2 > 0.0)
    prep.phi_d = prep.parts.v_f / (std::sqrt(prep.parts.v_g1) * std::sqrt(prep.parts.v_g2));
  if (prep.have_window && (want_g || want_d)) {
    const int n = cfg.resolve_draws();
    const ResamplePlan plan = make_resample_plan(series, win, cfg.trunc, cfg.k);
    if (want_g) {
      prep.g_abs_sorted = simulate_g_copies(plan, stream.fork(kForkGCopies), n);
      for (double& v : prep.g_abs_sorted) v = std::fabs(v);
      std::sort(prep.g_abs_sorted.begin(), prep.g_abs_sorted.end(), std::greater<double>());
    }
    if (want_d) {
      prep.d_sorted = simulate_d_copies(plan, stream.fork(kForkDCopies), n);
      std::sort(prep.d_sorted.begin(), prep.d_sorted.end(), std::greater<double>());
    }
  }
  return prep;
}

JointSideInputs joint_inputs(const Prepared& prep, const IncrementSeries& series,
                             const TestConfig& cfg) {
  JointSideInputs in;
  in.phi = prep.phi_j.value_or(std::numeric_limits<double>::quiet_NaN());
  in.v_f = prep.parts.v_f;
  in.delta = series.delta();
  in.v_joint = prep.parts.v_joint;
  in.g_abs_sorted = &prep.g_abs_sorted;
  in.guard = cfg.power_guard;
  return in;
}

DisjointSideInputs disjoint_inputs(const Prepared& prep, const IncrementSeries& series) {
  DisjointSideInputs in;
  in.phi = prep.phi_d.value_or(std::numeric_limits<double>::quiet_NaN());
  in.vg_root = (prep.parts.v_g1 > 0.0 && prep.parts.v_g2 > 0.0)
                   ? std::sqrt(prep.parts.v_g1) * std::sqrt(prep.parts.v_g2)
                   : 0.0;
  in.delta = series.delta();
  in.v_disjoint = prep.parts.v_disjoint;
  in.v_disjoint_trunc = prep.parts.v_disjoint_trunc;
  in.a_hat = prep.parts.a_hat;
  in.a_hat_trunc = prep.parts.a_hat_trunc;
  in.d_sorted = &prep.d_sorted;
  return in;
}

}  // namespace

double joint_cutoff(const IncrementSeries& series, const TestConfig& cfg, JointMethod method,
                    const RngStream& stream) {
  const Prepared prep = prepare(series, cfg, method == JointMethod::simulated, false, stream);
  if (!prep.phi_j) fail(Errc::denominator_zero, "joint cutoff: no cross variation at fine scale");
  const SideOutcome out = decide_joint(joint_inputs(prep, series, cfg), method, cfg.level);
  if (!std::isfinite(out.cutoff))
    fail(Errc::insufficient_data, "joint cutoff: " + (prep.note.empty() ? "standardizer unavailable" : prep.note));
  return out.cutoff;
}

double disjoint_cutoff(const IncrementSeries& series, const TestConfig& cfg,
                       DisjointMethod method, CEstimator estimator, const RngStream& stream) {
  const Prepared prep = prepare(series, cfg, false, method == DisjointMethod::simulated, stream);
  if (!prep.phi_d) fail(Errc::denominator_zero, "disjoint cutoff: a component shows no variation");
  const SideOutcome out =
      decide_disjoint(disjoint_inputs(prep, series), method, estimator, cfg.level);
  if (!std::isfinite(out.cutoff))
    fail(Errc::insufficient_data, "disjoint cutoff: " + (prep.note.empty() ? "standardizer unavailable" : prep.note));
  return out.cutoff;
}

int category_from(Decision joint, Decision disjoint) {
  if (joint == Decision::inapplicable || disjoint == Decision::inapplicable) return 0;
  const bool jr = joint == Decision::reject;
  const bool dr = disjoint == Decision::reject;
  if (!jr && dr) return 1;  // joint arrival confirmed by both tests
  if (jr && !dr) return 2;  // disjoint arrival confirmed by both tests
  if (!jr && !dr) return 3; // neither null rejected
  return 4;                 // both rejected
}

StatReport run_tests(const IncrementSeries& series, const TestConfig& cfg, JointMethod jm,
                     DisjointMethod dm, CEstimator estimator, const RngStream& stream) {
  const Prepared prep = prepare(series, cfg, jm == JointMethod::simulated,
                                dm == DisjointMethod::simulated, stream);
  StatReport rep;
  rep.note = prep.note;
  if (prep.phi_j) rep.phi_joint = *prep.phi_j;
  if (prep.phi_d) rep.phi_disjoint = *prep.phi_d;
  rep.scales.a_hat = prep.parts.a_hat.value_or(std::numeric_limits<double>::quiet_NaN());
  rep.scales.a_hat_trunc = prep.parts.a_hat_trunc;
  rep.scales.f_hat = prep.parts.f_hat.value_or(std::numeric_limits<double>::quiet_NaN());
  rep.scales.fprime_hat = prep.parts.fprime_hat.value_or(std::numeric_limits<double>::quiet_NaN());
  rep.scales.v_joint = prep.parts.v_joint.value_or(std::numeric_limits<double>::quiet_NaN());
  rep.scales.v_disjoint = prep.parts.v_disjoint.value_or(std::numeric_limits<double>::quiet_NaN());
  rep.scales.v_disjoint_trunc =
      prep.parts.v_disjoint_trunc.value_or(std::numeric_limits<double>::quiet_NaN());

  const SideOutcome joint = decide_joint(joint_inputs(prep, series, cfg), jm, cfg.level);
  rep.joint_decision = joint.decision;
  rep.p_joint = joint.p_value;
  rep.joint_cutoff = joint.cutoff;
  if (prep.phi_j && prep.parts.v_joint && *prep.parts.v_joint > 0.0)
    rep.t_joint = (*prep.phi_j - 1.0) / *prep.parts.v_joint;

  const SideOutcome disjoint =
      decide_disjoint(disjoint_inputs(prep, series), dm, estimator, cfg.level);
  rep.disjoint_decision = disjoint.decision;
  rep.p_disjoint = disjoint.p_value;
  rep.disjoint_cutoff = disjoint.cutoff;
  if (prep.phi_d && prep.parts.v_disjoint && *prep.parts.v_disjoint > 0.0)
    rep.t_disjoint = *prep.phi_d / *prep.parts.v_disjoint;

  rep.category = category_from(rep.joint_decision, rep.disjoint_decision);
  return rep;
}

double bipower_variation(const IncrementSeries& series, int component) {
  if (component != 1 && component != 2)
    fail(Errc::invalid_argument, "bipower: component must be 1 or 2");
  const std::size_t n = series.count();
  if (n < 2) fail(Errc::insufficient_data, "bipower: need at least 2 increments");
  const std::vector<double>& x = component == 1 ? series.x1s() : series.x2s();
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) acc += std::fabs(x[i]) * std::fabs(x[i - 1]);
  return acc * std::numbers::pi / 2.0;
}

PrefilterResult univariate_jump_prefilter(const IncrementSeries& series, int component,
                                          double level) {
  if (!(level > 0.0 && level < 1.0))
    fail(Errc::invalid_argument, "prefilter: level must lie in (0,1)");
  if (component != 1 && component != 2)
    fail(Errc::invalid_argument, "prefilter: component must be 1 or 2");
  const std::size_t n = series.count();
  if (n < 4) fail(Errc::insufficient_data, "prefilter: need at least 4 increments");
  const std::vector<double>& x = component == 1 ? series.x1s() : series.x2s();
  double rv = 0.0;
  for (double v : x) rv += v * v;
  const double bv = bipower_variation(series, component);
  if (!(rv > 0.0) || !(bv > 0.0)) return PrefilterResult::no_jump;  // no signal at all
  const double pi = std::numbers::pi;
  double quad = 0.0;
  for (std::size_t i = 3; i < n; ++i)
    quad += std::fabs(x[i]) * std::fabs(x[i - 1]) * std::fabs(x[i - 2]) * std::fabs(x[i - 3]);
  const double qq = quad * (pi * pi / 4.0) / series.delta();
  const double theta = pi * pi / 4.0 + pi - 5.0;
  const double floor_ratio = 1.0 / series.horizon();  // Cauchy-Schwarz lower bound
  const double ratio = std::max(floor_ratio, qq / (bv * bv));
  const double z = std::log(rv / bv) / std::sqrt(theta * series.delta() * ratio);
  return z > normal_quantile(1.0 - level) ? PrefilterResult::jump : PrefilterResult::no_jump;
}

}  // namespace cojump
