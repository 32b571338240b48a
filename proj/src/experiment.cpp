#include "cojump/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "cojump/oracle.hpp"
#include "cojump/power_variation.hpp"

namespace cojump {

void ExperimentSpec::validate() const {
  scenario.validate();
  if (n_obs_list.empty()) fail(Errc::invalid_argument, "experiment: empty n_obs list");
  for (int n : n_obs_list)
    if (n < 1) fail(Errc::invalid_argument, "experiment: n_obs must be >= 1");
  if (replications < 1) fail(Errc::invalid_argument, "experiment: replications must be >= 1");
  if (levels.empty()) fail(Errc::invalid_argument, "experiment: empty level grid");
  for (double a : levels)
    if (!(a > 0.0 && a < 1.0)) fail(Errc::invalid_argument, "experiment: levels must lie in (0,1)");
  if (joint_methods.empty() && disjoint_methods.empty())
    fail(Errc::invalid_argument, "experiment: no methods selected");
  if (max_attempt_factor < 1) fail(Errc::invalid_argument, "experiment: bad attempt factor");
  TestConfig probe = test;
  probe.level = levels.front();
  probe.validate();
}

namespace {

// ---------------------------------------------------------------------------
// Config text parsing

struct IniData {
  std::map<std::string, std::string> values;  // "section.key" -> value
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

IniData parse_ini(const std::string& text) {
  IniData ini;
  std::istringstream in(text);
  std::string line, section;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(Errc::parse_error, "config line " + std::to_string(row) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::parse_error, "config line " + std::to_string(row) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(Errc::parse_error, "config line " + std::to_string(row) + ": empty key");
    ini.values[section + "." + key] = value;
  }
  return ini;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(Errc::parse_error, "config: bad number for " + key + ": '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(Errc::parse_error, "config: bad integer for " + key + ": '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

class IniReader {
 public:
  explicit IniReader(IniData data) : data_(std::move(data)) {}

  std::optional<std::string> get(const std::string& key) const {
    const auto it = data_.values.find(key);
    if (it == data_.values.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }
  std::optional<double> get_double(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return to_double(key, *v);
  }
  std::optional<long> get_long(const std::string& key) const {
    const auto v = get(key);
    if (!v) return std::nullopt;
    return to_long(key, *v);
  }
  void check_all_used() const {
    for (const auto& [key, value] : data_.values)
      if (!used_.count(key)) fail(Errc::parse_error, "config: unknown key '" + key + "'");
  }

 private:
  IniData data_;
  mutable std::set<std::string> used_;
};

void load_scenario(const IniReader& ini, ExperimentSpec& spec) {
  if (const auto preset = ini.get("scenario.preset")) {
    const ScenarioConfig* cfg = find_preset(*preset);
    if (!cfg) fail(Errc::invalid_argument, "config: unknown preset '" + *preset + "'");
    spec.scenario = *cfg;
    spec.scenario_name = *preset;
  }
  ScenarioConfig& sc = spec.scenario;
  if (const auto v = ini.get_double("scenario.rho")) sc.rho = *v;
  if (const auto v = ini.get_double("scenario.sigma1")) sc.sigma1 = *v;
  if (const auto v = ini.get_double("scenario.sigma2")) sc.sigma2 = *v;
  if (const auto v = ini.get_double("scenario.sigma1_sq")) sc.sigma1 = std::sqrt(*v);
  if (const auto v = ini.get_double("scenario.sigma2_sq")) sc.sigma2 = std::sqrt(*v);
  for (int s = 1; s <= 3; ++s) {
    const std::string tag = std::to_string(s);
    if (const auto v = ini.get_double("scenario.alpha" + tag)) sc.sources[s - 1].alpha = *v;
    if (const auto v = ini.get_double("scenario.lambda" + tag)) sc.sources[s - 1].lambda = *v;
    if (const auto v = ini.get_double("scenario.low" + tag)) sc.sources[s - 1].low = *v;
    if (const auto v = ini.get_double("scenario.high" + tag)) sc.sources[s - 1].high = *v;
  }
  if (const auto v = ini.get_double("scenario.x0_1")) sc.x0_1 = *v;
  if (const auto v = ini.get_double("scenario.x0_2")) sc.x0_2 = *v;
  if (const auto v = ini.get_double("scenario.horizon")) sc.horizon = *v;
  if (const auto v = ini.get_long("scenario.fine_steps")) sc.fine_steps_per_obs = static_cast<int>(*v);
}

void load_experiment(const IniReader& ini, ExperimentSpec& spec) {
  if (const auto v = ini.get("experiment.n_obs")) {
    spec.n_obs_list.clear();
    for (const std::string& item : split_list(*v))
      spec.n_obs_list.push_back(static_cast<int>(to_long("experiment.n_obs", item)));
  }
  if (const auto v = ini.get_long("experiment.replications"))
    spec.replications = static_cast<int>(*v);
  if (const auto v = ini.get("experiment.levels")) {
    spec.levels.clear();
    for (const std::string& item : split_list(*v))
      spec.levels.push_back(to_double("experiment.levels", item));
  }
  if (const auto v = ini.get_long("experiment.seed")) spec.seed = static_cast<std::uint64_t>(*v);
  if (const auto v = ini.get("experiment.keep")) {
    spec.keep.clear();
    for (const std::string& item : split_list(*v)) {
      if (item == "any") {
        spec.keep.clear();
        break;
      }
      if (item == "joint") spec.keep.insert(PathClass::joint);
      else if (item == "disjoint") spec.keep.insert(PathClass::disjoint);
      else if (item == "continuous") spec.keep.insert(PathClass::continuous_any);
      else fail(Errc::parse_error, "config: unknown keep class '" + item + "'");
    }
  }
  if (const auto v = ini.get_long("experiment.max_attempt_factor"))
    spec.max_attempt_factor = static_cast<int>(*v);
}

void load_test(const IniReader& ini, ExperimentSpec& spec) {
  TestConfig& t = spec.test;
  if (const auto v = ini.get_long("test.k")) t.k = static_cast<int>(*v);
  double alpha1 = t.trunc.alpha1, alpha2 = t.trunc.alpha2, varpi = t.trunc.varpi;
  if (const auto v = ini.get_double("test.alpha")) alpha1 = *v;
  if (const auto v = ini.get_double("test.alpha2")) alpha2 = *v;
  if (const auto v = ini.get_double("test.varpi")) varpi = *v;
  t.trunc = alpha2 > 0.0 ? TruncationSpec::per_component(alpha1, alpha2, varpi)
                         : TruncationSpec::joint_norm(alpha1, varpi);
  if (const auto v = ini.get_long("test.kn")) t.window = static_cast<int>(*v);
  if (const auto v = ini.get_long("test.draws")) t.n_draws = static_cast<int>(*v);
  const auto pa = ini.get_double("test.power_alpha");
  const auto pv = ini.get_double("test.power_varpi");
  if (pa && pv) t.power_guard = PowerGuard{*pa, *pv};
  else if (pa || pv)
    fail(Errc::parse_error, "config: power_alpha and power_varpi come as a pair");
  if (const auto v = ini.get("test.method_joint")) {
    spec.joint_methods.clear();
    for (const std::string& item : split_list(*v))
      spec.joint_methods.push_back(joint_method_from_string(item));
  }
  if (const auto v = ini.get("test.method_disjoint")) {
    spec.disjoint_methods.clear();
    for (const std::string& item : split_list(*v))
      spec.disjoint_methods.push_back(disjoint_method_from_string(item));
  }
  if (const auto v = ini.get("test.c_estimator")) spec.c_estimator = c_estimator_from_string(*v);
}

}  // namespace

ExperimentSpec parse_experiment_config(const std::string& text) {
  const IniReader ini(parse_ini(text));
  ExperimentSpec spec;
  load_scenario(ini, spec);
  load_experiment(ini, spec);
  load_test(ini, spec);
  ini.check_all_used();
  spec.validate();
  return spec;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string scenario_to_config(const ScenarioConfig& cfg) {
  std::string out = "[scenario]\n";
  out += "rho = " + num(cfg.rho) + "\n";
  out += "sigma1 = " + num(cfg.sigma1) + "\n";
  out += "sigma2 = " + num(cfg.sigma2) + "\n";
  for (int s = 0; s < 3; ++s) {
    const JumpSourceConfig& src = cfg.sources[s];
    if (src.lambda <= 0.0 && src.alpha == 0.0) continue;
    const std::string tag = std::to_string(s + 1);
    out += "alpha" + tag + " = " + num(src.alpha) + "\n";
    out += "lambda" + tag + " = " + num(src.lambda) + "\n";
    out += "low" + tag + " = " + num(src.low) + "\n";
    out += "high" + tag + " = " + num(src.high) + "\n";
  }
  out += "x0_1 = " + num(cfg.x0_1) + "\n";
  out += "x0_2 = " + num(cfg.x0_2) + "\n";
  out += "horizon = " + num(cfg.horizon) + "\n";
  out += "fine_steps = " + std::to_string(cfg.fine_steps_per_obs) + "\n";
  return out;
}

std::string experiment_to_config(const ExperimentSpec& spec) {
  std::string out = scenario_to_config(spec.scenario);
  out += "[experiment]\n";
  auto join = [](const auto& items, auto&& piece) {
    std::string acc;
    for (const auto& item : items) {
      if (!acc.empty()) acc += ", ";
      acc += piece(item);
    }
    return acc;
  };
  out += "n_obs = " + join(spec.n_obs_list, [](int n) { return std::to_string(n); }) + "\n";
  out += "replications = " + std::to_string(spec.replications) + "\n";
  out += "levels = " + join(spec.levels, [](double l) { return num(l); }) + "\n";
  out += "seed = " + std::to_string(spec.seed) + "\n";
  if (!spec.keep.empty())
    out += "keep = " +
           join(spec.keep, [](PathClass c) { return std::string(to_string(c)); }) + "\n";
  out += "max_attempt_factor = " + std::to_string(spec.max_attempt_factor) + "\n";
  out += "[test]\n";
  out += "k = " + std::to_string(spec.test.k) + "\n";
  out += "alpha = " + num(spec.test.trunc.alpha1) + "\n";
  if (spec.test.trunc.per_component_mode()) out += "alpha2 = " + num(spec.test.trunc.alpha2) + "\n";
  out += "varpi = " + num(spec.test.trunc.varpi) + "\n";
  out += "kn = " + std::to_string(spec.test.window) + "\n";
  out += "draws = " + std::to_string(spec.test.n_draws) + "\n";
  if (spec.test.power_guard) {
    out += "power_alpha = " + num(spec.test.power_guard->alpha_prime) + "\n";
    out += "power_varpi = " + num(spec.test.power_guard->varpi_prime) + "\n";
  }
  out += "method_joint = " +
         join(spec.joint_methods, [](JointMethod m) { return std::string(to_string(m)); }) + "\n";
  out += "method_disjoint = " +
         join(spec.disjoint_methods,
              [](DisjointMethod m) { return std::string(to_string(m)); }) + "\n";
  out += std::string("c_estimator = ") +
         (spec.c_estimator == CEstimator::multipower ? "multipower" : "truncated") + "\n";
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Replication engine

constexpr std::uint64_t kForkPath = 100;
constexpr std::uint64_t kForkGCopies = 101;
constexpr std::uint64_t kForkDCopies = 102;

struct AttemptOutcome {
  bool kept = false;
  PathClass path_class = PathClass::continuous_any;
  double phi_j = std::numeric_limits<double>::quiet_NaN();
  double phi_d = std::numeric_limits<double>::quiet_NaN();
  double limit_phi_d = std::numeric_limits<double>::quiet_NaN();
  // decisions[level][method]; joint methods first, then disjoint methods
  std::vector<std::vector<Decision>> decisions;
};

struct Engine {
  const ExperimentSpec& spec;
  int n_obs;
  RngStream n_stream;

  AttemptOutcome run_attempt(long attempt) const {
    const RngStream a_stream = n_stream.fork(static_cast<std::uint64_t>(attempt));
    auto [series, truth] = simulate_path(spec.scenario, n_obs, a_stream.fork(kForkPath));
    AttemptOutcome out;
    out.path_class = truth.path_class;
    if (!spec.keep.empty() && !spec.keep.count(truth.path_class)) return out;
    out.kept = true;

    const LimitQuantities lim = limit_quantities(truth, spec.scenario.horizon);
    if (lim.b11 > 0.0 && lim.b22 > 0.0)
      out.limit_phi_d = lim.b / (std::sqrt(lim.b11) * std::sqrt(lim.b22));

    TestConfig cfg = spec.test;
    cfg.level = spec.levels.front();
    const WindowSpec win = cfg.resolve_window(series.grid());
    const StandardizerParts parts = standardizer_parts(series, cfg.k, win, cfg.trunc);
    if (parts.v_f > 0.0) out.phi_j = parts.v_fk / parts.v_f;
    if (parts.v_g1 > 0.0 && parts.v_g2 > 0.0)
      out.phi_d = parts.v_f / (std::sqrt(parts.v_g1) * std::sqrt(parts.v_g2));

    const bool want_g = std::find(spec.joint_methods.begin(), spec.joint_methods.end(),
                                  JointMethod::simulated) != spec.joint_methods.end();
    const bool want_d = std::find(spec.disjoint_methods.begin(), spec.disjoint_methods.end(),
                                  DisjointMethod::simulated) != spec.disjoint_methods.end();
    std::vector<double> g_abs_sorted, d_sorted;
    if (want_g || want_d) {
      const int draws = resolve_draws_for(spec);
      const ResamplePlan plan = make_resample_plan(series, win, cfg.trunc, cfg.k);
      if (want_g) {
        g_abs_sorted = simulate_g_copies(plan, a_stream.fork(kForkGCopies), draws);
        for (double& v : g_abs_sorted) v = std::fabs(v);
        std::sort(g_abs_sorted.begin(), g_abs_sorted.end(), std::greater<double>());
      }
      if (want_d) {
        d_sorted = simulate_d_copies(plan, a_stream.fork(kForkDCopies), draws);
        std::sort(d_sorted.begin(), d_sorted.end(), std::greater<double>());
      }
    }

    JointSideInputs jin;
    jin.phi = out.phi_j;
    jin.v_f = parts.v_f;
    jin.delta = series.delta();
    jin.v_joint = parts.v_joint;
    jin.g_abs_sorted = &g_abs_sorted;
    jin.guard = cfg.power_guard;
    DisjointSideInputs din;
    din.phi = out.phi_d;
    din.vg_root = (parts.v_g1 > 0.0 && parts.v_g2 > 0.0)
                      ? std::sqrt(parts.v_g1) * std::sqrt(parts.v_g2)
                      : 0.0;
    din.delta = series.delta();
    din.v_disjoint = parts.v_disjoint;
    din.v_disjoint_trunc = parts.v_disjoint_trunc;
    din.a_hat = parts.a_hat;
    din.a_hat_trunc = parts.a_hat_trunc;
    din.d_sorted = &d_sorted;

    out.decisions.resize(spec.levels.size());
    for (std::size_t li = 0; li < spec.levels.size(); ++li) {
      const double level = spec.levels[li];
      auto& row = out.decisions[li];
      row.reserve(spec.joint_methods.size() + spec.disjoint_methods.size());
      for (JointMethod jm : spec.joint_methods)
        row.push_back(decide_joint(jin, jm, level).decision);
      for (DisjointMethod dm : spec.disjoint_methods)
        row.push_back(decide_disjoint(din, dm, spec.c_estimator, level).decision);
    }
    return out;
  }

  static int resolve_draws_for(const ExperimentSpec& spec) {
    if (spec.test.n_draws > 0) return spec.test.n_draws;
    // One shared copy set serves the whole level grid, so size it for the
    // smallest level.
    const double min_level = *std::min_element(spec.levels.begin(), spec.levels.end());
    return std::min(20000, static_cast<int>(std::ceil(1000.0 / min_level)));
  }
};

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto drain = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 0; w < workers - 1; ++w) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, int threads) {
  spec.validate();
  ExperimentResult result;
  result.spec = spec;

  const std::size_t n_methods = spec.joint_methods.size() + spec.disjoint_methods.size();
  // rejection counts indexed [method][level][n_obs]
  std::vector<std::vector<std::vector<long>>> rejects(
      n_methods, std::vector<std::vector<long>>(spec.levels.size(),
                                                std::vector<long>(spec.n_obs_list.size(), 0)));

  const RngStream base(spec.seed);
  for (std::size_t ni = 0; ni < spec.n_obs_list.size(); ++ni) {
    const int n_obs = spec.n_obs_list[ni];
    Engine engine{spec, n_obs, base.fork(1000 + ni)};
    const long max_attempts =
        static_cast<long>(spec.max_attempt_factor) * spec.replications + 1000;
    long attempt = 0;
    int kept = 0;
    while (kept < spec.replications && attempt < max_attempts) {
      const long remaining = max_attempts - attempt;
      const long wave = std::min<long>(remaining, std::max<long>(64, spec.replications));
      std::vector<AttemptOutcome> outcomes(static_cast<std::size_t>(wave));
      parallel_for(static_cast<std::size_t>(wave), threads,
                   [&](std::size_t w) { outcomes[w] = engine.run_attempt(attempt + static_cast<long>(w)); });
      for (long w = 0; w < wave && kept < spec.replications; ++w) {
        const AttemptOutcome& out = outcomes[static_cast<std::size_t>(w)];
        if (!out.kept) continue;
        PhiSample sample;
        sample.n_obs = n_obs;
        sample.replication = kept;
        sample.phi_joint = out.phi_j;
        sample.phi_disjoint = out.phi_d;
        sample.limit_phi_disjoint = out.limit_phi_d;
        sample.path_class = out.path_class;
        result.samples.push_back(sample);
        for (std::size_t li = 0; li < spec.levels.size(); ++li)
          for (std::size_t mi = 0; mi < n_methods; ++mi)
            if (out.decisions[li][mi] == Decision::reject) ++rejects[mi][li][ni];
        ++kept;
      }
      attempt += wave;
    }
    if (kept < spec.replications)
      fail(Errc::invalid_argument,
           "experiment: screening kept only " + std::to_string(kept) + "/" +
               std::to_string(spec.replications) + " replications after " +
               std::to_string(attempt) + " attempts");
    result.kept.push_back(kept);
    result.attempts.push_back(static_cast<int>(attempt));
  }

  auto make_table = [&](const std::string& side, const std::string& method, std::size_t mi) {
    RejectionTable t;
    t.side = side;
    t.method = method;
    t.levels = spec.levels;
    t.n_obs = spec.n_obs_list;
    t.rate.assign(spec.levels.size(), std::vector<double>(spec.n_obs_list.size(), 0.0));
    for (std::size_t li = 0; li < spec.levels.size(); ++li)
      for (std::size_t ni = 0; ni < spec.n_obs_list.size(); ++ni)
        t.rate[li][ni] = static_cast<double>(rejects[mi][li][ni]) /
                         static_cast<double>(result.kept[ni]);
    return t;
  };
  std::size_t mi = 0;
  for (JointMethod jm : spec.joint_methods)
    result.tables.push_back(make_table("joint", to_string(jm), mi++));
  for (DisjointMethod dm : spec.disjoint_methods)
    result.tables.push_back(make_table("disjoint", to_string(dm), mi++));
  return result;
}

namespace {

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

void write_experiment_csvs(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(Errc::io_error, "cannot create output directory '" + out_dir + "'");

  {
    const std::string path = out_dir + "/config_used.ini";
    std::ofstream out(path);
    if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
    out << experiment_to_config(result.spec);
  }

  for (const RejectionTable& t : result.tables) {
    const std::string path = out_dir + "/rejection_" + t.side + "_" + t.method + ".csv";
    std::ofstream out(path);
    if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
    out << "level";
    for (int n : t.n_obs) out << ",n_" << n;
    out << "\n";
    for (std::size_t li = 0; li < t.levels.size(); ++li) {
      out << format_double("%.6g", t.levels[li]);
      for (std::size_t ni = 0; ni < t.n_obs.size(); ++ni)
        out << "," << format_double("%.6f", t.rate[li][ni]);
      out << "\n";
    }
  }

  auto write_samples = [&](const std::string& name, auto value_of, bool with_limit) {
    const std::string path = out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) fail(Errc::io_error, "cannot write '" + path + "'");
    out << (with_limit ? "n_obs,replication,value,oracle_limit\n" : "n_obs,replication,value\n");
    for (const PhiSample& s : result.samples) {
      out << s.n_obs << "," << s.replication << "," << format_double("%.10g", value_of(s));
      if (with_limit) out << "," << format_double("%.10g", s.limit_phi_disjoint);
      out << "\n";
    }
  };
  write_samples("phi_joint_samples.csv", [](const PhiSample& s) { return s.phi_joint; }, false);
  write_samples("phi_disjoint_samples.csv", [](const PhiSample& s) { return s.phi_disjoint; },
                true);
}

std::vector<DayReportRow> analyze_days(const std::vector<DayRecord>& days,
                                       const AnalyzeOptions& options) {
  std::vector<DayReportRow> rows;
  rows.reserve(days.size());
  const RngStream base(options.seed);
  for (std::size_t d = 0; d < days.size(); ++d) {
    const DayRecord& day = days[d];
    DayReportRow row;
    row.date = day.label;
    const RngStream day_stream = base.fork(d);
    try {
      if (options.prefilter_level > 0.0) {
        const bool jump1 = univariate_jump_prefilter(day.series, 1, options.prefilter_level) ==
                           PrefilterResult::jump;
        const bool jump2 = univariate_jump_prefilter(day.series, 2, options.prefilter_level) ==
                           PrefilterResult::jump;
        if (!jump1 || !jump2) {
          row.status = !jump1 && !jump2 ? "skipped:continuous"
                       : !jump1         ? "skipped:continuous_x1"
                                        : "skipped:continuous_x2";
          rows.push_back(row);
          continue;
        }
      }
      TestConfig cfg = options.test;
      if (options.calibrate_truncation) {
        const double t = day.series.horizon();
        const double a1 = 3.0 * std::sqrt(bipower_variation(day.series, 1) / t);
        const double a2 = 3.0 * std::sqrt(bipower_variation(day.series, 2) / t);
        if (a1 > 0.0 && a2 > 0.0) cfg.trunc = TruncationSpec::per_component(a1, a2, 0.49);
      }
      const StatReport rep = run_tests(day.series, cfg, options.joint_method,
                                       options.disjoint_method, options.c_estimator, day_stream);
      if (rep.joint_decision == Decision::inapplicable ||
          rep.disjoint_decision == Decision::inapplicable) {
        row.status = "inapplicable";
        rows.push_back(row);
        continue;
      }
      row.phi_d = rep.phi_disjoint;
      row.phi_j = rep.phi_joint;
      row.p_d = rep.p_disjoint.value_or(0.0);
      row.p_j = rep.p_joint.value_or(0.0);
      row.category = rep.category;
      row.ok = true;
    } catch (const Error& e) {
      row.status = std::string("error:") + errc_name(e.code());
    }
    rows.push_back(row);
  }
  return rows;
}

std::string day_report_header() { return "date,phi_d,phi_j,p_d,p_j,category"; }

std::string format_day_row(const DayReportRow& row) {
  if (!row.ok) return row.date + ",,,,," + row.status;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%.4f,%.4f,%d", row.date.c_str(), row.phi_d,
                row.phi_j, row.p_d, row.p_j, row.category);
  return buf;
}

void write_day_report(const std::vector<DayReportRow>& rows, std::ostream& out) {
  out << day_report_header() << "\n";
  for (const DayReportRow& row : rows) out << format_day_row(row) << "\n";
}

int category_from_pvalues(double p_d, double p_j, double level) {
  const Decision joint = p_j < level ? Decision::reject : Decision::retain;
  const Decision disjoint = p_d < level ? Decision::reject : Decision::retain;
  return category_from(joint, disjoint);
}

}  // namespace cojump
