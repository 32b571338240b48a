#include "cojump/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace cojump {

void ScenarioConfig::validate() const {
  if (!(std::fabs(rho) <= 1.0)) fail(Errc::invalid_argument, "scenario: |rho| must be <= 1");
  if (sigma1 < 0.0 || sigma2 < 0.0) fail(Errc::invalid_argument, "scenario: volatilities must be >= 0");
  if (!(x0_1 > 0.0 && x0_2 > 0.0)) fail(Errc::invalid_argument, "scenario: initial levels must be positive");
  if (!(horizon > 0.0)) fail(Errc::invalid_argument, "scenario: horizon must be positive");
  if (fine_steps_per_obs < 1) fail(Errc::invalid_argument, "scenario: fine_steps_per_obs must be >= 1");
  for (int s = 0; s < 3; ++s) {
    const JumpSourceConfig& src = sources[s];
    if (src.lambda < 0.0) fail(Errc::invalid_argument, "scenario: jump intensity must be >= 0");
    if (src.lambda > 0.0 && src.alpha != 0.0) {
      if (!(src.low > 0.0 && src.high > src.low))
        fail(Errc::invalid_argument, "scenario: need 0 < low < high for an active jump source");
      if (std::fabs(src.alpha) * src.high >= 1.0)
        fail(Errc::degenerate_config, "scenario: |alpha| * high >= 1 can push a level to zero");
    }
  }
}

const char* to_string(PathClass c) {
  switch (c) {
    case PathClass::joint: return "joint";
    case PathClass::disjoint: return "disjoint";
    case PathClass::continuous_any: return "continuous";
  }
  return "?";
}

namespace {

int poisson_count(CounterRng& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  for (;;) {
    p *= rng.uniform01();
    if (p <= limit) return k;
    ++k;
  }
}

struct RawEvent {
  double t = 0.0;
  int source = 0;  // 1-based
  double mark = 0.0;
};

Sym2 spot_of(const ScenarioConfig& cfg, double lv1, double lv2) {
  const double s1 = lv1 * cfg.sigma1;
  const double s2 = lv2 * cfg.sigma2;
  return {s1 * s1, cfg.rho * s1 * s2, s2 * s2};
}

}  // namespace

PathClass classify_jumps(const std::vector<JumpEvent>& jumps, double horizon) {
  bool has1 = false, has2 = false, common = false;
  for (const JumpEvent& j : jumps) {
    if (j.time > horizon) continue;
    if (j.jump1 != 0.0) has1 = true;
    if (j.jump2 != 0.0) has2 = true;
    if (j.jump1 * j.jump2 != 0.0) common = true;
  }
  if (common) return PathClass::joint;
  if (has1 && has2) return PathClass::disjoint;
  return PathClass::continuous_any;
}

PathClass classify_path(const PathTruth& truth, double horizon) {
  return classify_jumps(truth.jumps, horizon);
}

std::pair<IncrementSeries, PathTruth> simulate_path(const ScenarioConfig& cfg, int n_obs,
                                                    const RngStream& stream) {
  cfg.validate();
  if (n_obs < 1) fail(Errc::invalid_argument, "simulate: n_obs must be >= 1");
  CounterRng rng = stream.scalar();

  // Jump layer first, in a fixed source order, so the diffusion draws that
  // follow are reproducible for a given seed.
  std::vector<RawEvent> events;
  for (int s = 0; s < 3; ++s) {
    const JumpSourceConfig& src = cfg.sources[s];
    if (src.lambda <= 0.0 || src.alpha == 0.0) continue;
    const int count = poisson_count(rng, src.lambda * cfg.horizon);
    for (int j = 0; j < count; ++j) {
      RawEvent ev;
      ev.t = rng.uniform01() * cfg.horizon;
      const double mag = src.low + (src.high - src.low) * rng.uniform01();
      ev.mark = rng.uniform01() < 0.5 ? -mag : mag;
      ev.source = s + 1;
      events.push_back(ev);
    }
  }
  std::sort(events.begin(), events.end(), [](const RawEvent& a, const RawEvent& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.source < b.source;
  });

  const double delta = cfg.horizon / static_cast<double>(n_obs);
  const double fine = delta / static_cast<double>(cfg.fine_steps_per_obs);
  const double root_one_minus_rho2 = std::sqrt(std::max(0.0, 1.0 - cfg.rho * cfg.rho));

  double lv1 = cfg.x0_1, lv2 = cfg.x0_2;
  double t_cur = 0.0;

  auto diffuse = [&](double dt) {
    if (dt <= 0.0) return;
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double sdt = std::sqrt(dt);
    const double w1 = sdt * z1;
    const double w2 = sdt * (cfg.rho * z1 + root_one_minus_rho2 * z2);
    lv1 *= std::exp(-0.5 * cfg.sigma1 * cfg.sigma1 * dt + cfg.sigma1 * w1);
    lv2 *= std::exp(-0.5 * cfg.sigma2 * cfg.sigma2 * dt + cfg.sigma2 * w2);
  };

  PathTruth truth;
  truth.spot_path.push_back({0.0, spot_of(cfg, lv1, lv2)});

  std::vector<double> x1(static_cast<std::size_t>(n_obs)), x2(static_cast<std::size_t>(n_obs));
  std::size_t ev_i = 0;
  double prev_lv1 = lv1, prev_lv2 = lv2;

  for (int obs = 0; obs < n_obs; ++obs) {
    for (int f = 1; f <= cfg.fine_steps_per_obs; ++f) {
      // Land the final step exactly on the horizon so a jump drawn within
      // rounding of it still falls inside the last increment.
      const bool last = obs == n_obs - 1 && f == cfg.fine_steps_per_obs;
      const double t_next =
          last ? cfg.horizon : static_cast<double>(obs) * delta + static_cast<double>(f) * fine;
      while (ev_i < events.size() && events[ev_i].t <= t_next) {
        const RawEvent& ev = events[ev_i];
        diffuse(ev.t - t_cur);
        t_cur = ev.t;
        JumpEvent rec;
        rec.time = ev.t;
        rec.source = ev.source;
        rec.mark = ev.mark;
        rec.c_left = spot_of(cfg, lv1, lv2);
        const double factor = 1.0 + cfg.sources[ev.source - 1].alpha * ev.mark;
        if (ev.source == 1 || ev.source == 3) {
          rec.jump1 = lv1 * (factor - 1.0);
          lv1 *= factor;
        }
        if (ev.source == 2 || ev.source == 3) {
          rec.jump2 = lv2 * (factor - 1.0);
          lv2 *= factor;
        }
        rec.c_right = spot_of(cfg, lv1, lv2);
        truth.spot_path.push_back({t_cur, rec.c_left});
        truth.spot_path.push_back({t_cur, rec.c_right});
        truth.jumps.push_back(rec);
        ++ev_i;
      }
      diffuse(t_next - t_cur);
      t_cur = t_next;
      truth.spot_path.push_back({t_cur, spot_of(cfg, lv1, lv2)});
    }
    x1[static_cast<std::size_t>(obs)] = lv1 - prev_lv1;
    x2[static_cast<std::size_t>(obs)] = lv2 - prev_lv2;
    prev_lv1 = lv1;
    prev_lv2 = lv2;
  }

  truth.path_class = classify_jumps(truth.jumps, cfg.horizon);
  SamplingGrid grid;
  grid.delta = delta;
  grid.horizon = cfg.horizon;
  grid.count = static_cast<std::size_t>(n_obs);
  return {IncrementSeries(grid, std::move(x1), std::move(x2)), std::move(truth)};
}

namespace {

constexpr double kSigmaSq = 8e-5;

ScenarioConfig base_scenario(double rho) {
  ScenarioConfig cfg;
  cfg.rho = rho;
  cfg.sigma1 = cfg.sigma2 = std::sqrt(kSigmaSq);
  return cfg;
}

struct Preset {
  const char* name;
  ScenarioConfig cfg;
};

std::vector<Preset> build_presets() {
  // Jump sizes shrink as intensities grow so every row keeps the same total
  // jump variance.
  const JumpSourceConfig lo{0.01, 1.0, 0.05, 0.7484};
  const JumpSourceConfig mid{0.01, 5.0, 0.05, 0.3187};
  const JumpSourceConfig hi{0.01, 25.0, 0.05, 0.1238};
  std::vector<Preset> out;
  auto add = [&out](const char* name, double rho, const JumpSourceConfig* s1,
                    const JumpSourceConfig* s2, const JumpSourceConfig* s3) {
    ScenarioConfig cfg = base_scenario(rho);
    if (s1) cfg.sources[0] = *s1;
    if (s2) cfg.sources[1] = *s2;
    if (s3) cfg.sources[2] = *s3;
    out.push_back({name, cfg});
  };
  add("I-j", 0.0, nullptr, nullptr, &lo);
  add("II-j", 0.0, nullptr, nullptr, &mid);
  add("III-j", 0.0, nullptr, nullptr, &hi);
  add("I-m", 0.5, &lo, &lo, &lo);
  add("II-m", 0.5, &mid, &mid, &mid);
  add("III-m", 0.5, &hi, &hi, &hi);
  add("I-d0", 0.0, &lo, &lo, nullptr);
  add("II-d0", 0.0, &mid, &mid, nullptr);
  add("III-d0", 0.0, &hi, &hi, nullptr);
  add("I-d1", 1.0, &lo, &lo, nullptr);
  add("II-d1", 1.0, &mid, &mid, nullptr);
  add("III-d1", 1.0, &hi, &hi, nullptr);
  return out;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build_presets();
  return table;
}

}  // namespace

const ScenarioConfig* find_preset(std::string_view name) {
  for (const Preset& p : presets())
    if (name == p.name) return &p.cfg;
  return nullptr;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : presets()) names.emplace_back(p.name);
  return names;
}

}  // namespace cojump
