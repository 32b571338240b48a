#include "cojump/oracle.hpp"

#include <cmath>

#include "cojump/resampling.hpp"

namespace cojump {

namespace {

inline double quarticity_density(const Sym2& c) { return c.xx * c.yy + 2.0 * c.xy * c.xy; }

}  // namespace

LimitQuantities limit_quantities(const PathTruth& truth, double horizon) {
  LimitQuantities q;
  for (const JumpEvent& j : truth.jumps) {
    if (j.time > horizon) continue;
    const double j1sq = j.jump1 * j.jump1;
    const double j2sq = j.jump2 * j.jump2;
    q.b += j1sq * j2sq;
    q.b11 += j1sq * j1sq;
    q.b22 += j2sq * j2sq;
    const double cxx = j.c_left.xx + j.c_right.xx;
    const double cyy = j.c_left.yy + j.c_right.yy;
    const double cxy = j.c_left.xy + j.c_right.xy;
    q.f += 0.5 * (j1sq * cyy + j2sq * cxx);
    const double cross3 = j.jump1 * j.jump2;
    q.fprime += 2.0 * (j1sq * j2sq * j2sq * cxx + j1sq * j1sq * j2sq * cyy +
                       2.0 * cross3 * cross3 * cross3 * cxy);
  }
  // Trapezoid over the sampled spot path; duplicated jump times make the
  // discontinuities exact.
  const auto& path = truth.spot_path;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double t0 = path[i].t, t1 = path[i + 1].t;
    if (t0 >= horizon) break;
    const double hi = std::min(t1, horizon);
    if (hi <= t0) continue;
    q.c += 0.5 * (quarticity_density(path[i].c) + quarticity_density(path[i + 1].c)) * (hi - t0);
  }
  return q;
}

LimitLawPlan make_limit_law_plan(const PathTruth& truth, double horizon, int k) {
  if (k < 2) fail(Errc::invalid_argument, "limit law: k must be >= 2");
  LimitLawPlan plan;
  plan.k = k;
  plan.c = limit_quantities(truth, horizon).c;
  for (const JumpEvent& j : truth.jumps) {
    if (j.time > horizon) continue;
    LimitLawPlan::Jump jp;
    jp.j1 = j.jump1;
    jp.j2 = j.jump2;
    jp.root_left = psd_sqrt(j.c_left);
    jp.root_right = psd_sqrt(j.c_right);
    plan.jumps.push_back(jp);
  }
  return plan;
}

LimitLawSample sample_limit_law(const LimitLawPlan& plan, CounterRng& rng) {
  LimitLawSample s;
  for (const auto& jp : plan.jumps) {
    const ResampleDraw draw = sample_resample_draw(rng, plan.k);
    const ResamplePair rp = resample_pair(jp.root_left, jp.root_right, draw, plan.k);
    const double rpp0 = rp.r[0] + rp.rprime[0];
    const double rpp1 = rp.r[1] + rp.rprime[1];
    const double d1 = jp.j1 * rp.r[1], d2 = jp.j2 * rp.r[0];
    s.d_tilde += d1 * d1 + d2 * d2;
    const double dd1 = jp.j1 * rpp1, dd2 = jp.j2 * rpp0;
    s.d_tilde_pp += dd1 * dd1 + dd2 * dd2;
    s.g_tilde += 2.0 * jp.j1 * jp.j2 * (jp.j1 * rp.rprime[1] + jp.j2 * rp.rprime[0]);
  }
  const double denom = s.d_tilde + plan.c;
  s.phi_tilde = denom > 0.0 ? (s.d_tilde_pp + static_cast<double>(plan.k) * plan.c) / denom
                            : static_cast<double>(plan.k);
  return s;
}

LimitLawSample sample_limit_law(const PathTruth& truth, double horizon, int k, CounterRng& rng) {
  const LimitLawPlan plan = make_limit_law_plan(truth, horizon, k);
  return sample_limit_law(plan, rng);
}

}  // namespace cojump
