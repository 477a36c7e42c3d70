#include "banditlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace banditlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + s + "'");
  }
}

Vec parse_vec_string(const std::string& key, const std::string& s) {
  Vec out;
  std::istringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(parse_double(key, trim(cell)));
  return out;
}

}  // namespace

ConfigMap ConfigMap::from_text(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    if (cfg.kv_.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    cfg.kv_[key] = value;
  }
  return cfg;
}

ConfigMap ConfigMap::from_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  consumed_.insert(key);
  return it->second;
}

std::string ConfigMap::require_string(const std::string& key) {
  if (!has(key)) throw std::invalid_argument("config: missing required key '" + key + "'");
  return get_string(key, "");
}

double ConfigMap::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return parse_double(key, get_string(key, ""));
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t fallback) {
  if (!has(key)) return fallback;
  const std::string s = get_string(key, "");
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + s + "'");
  }
}

std::uint64_t ConfigMap::get_uint(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const std::string s = get_string(key, "");
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + s + "'");
  }
}

std::optional<double> ConfigMap::get_optional_double(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return parse_double(key, get_string(key, ""));
}

Vec ConfigMap::get_vec(const std::string& key) {
  return parse_vec_string(key, get_string(key, ""));
}

std::vector<int> ConfigMap::get_int_list(const std::string& key) {
  std::vector<int> out;
  for (double v : get_vec(key)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<Vec> ConfigMap::get_vec_list(const std::string& key) {
  const std::string s = get_string(key, "");
  std::vector<Vec> out;
  std::istringstream ss(s);
  std::string group;
  while (std::getline(ss, group, ';')) {
    Vec v;
    std::istringstream gs(group);
    std::string cell;
    while (std::getline(gs, cell, ',')) v.push_back(parse_double(key, trim(cell)));
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::string> ConfigMap::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : kv_)
    if (!consumed_.count(k)) out.push_back(k);
  return out;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
  consumed_.erase(key);
}

ActionSpace SpaceSpec::build() const {
  if (kind == "sphere") return ActionSpace(UnitSphere{dim});
  if (kind == "pnorm_ball") return ActionSpace(PNormBall{dim, p, radius});
  if (kind == "ellipsoid") {
    Vec diag = axes;
    if (diag.empty()) diag.assign(dim, 1.0);
    Ellipsoid e;
    e.a = SymMatrix::diagonal(diag);
    e.level = level;
    return ActionSpace(std::move(e));
  }
  if (kind == "finite") return ActionSpace(FiniteSet{points});
  throw std::invalid_argument("unknown space kind '" + kind + "'");
}

Vec ExperimentConfig::resolve_theta(std::size_t d) const {
  if (theta_mode == "e1") return basis_vector(d, 0);
  if (theta_mode == "ones") return Vec(d, 1.0);
  if (theta_mode == "custom") {
    if (theta_values.size() != d)
      throw std::invalid_argument("theta_star length does not match space dimension");
    return theta_values;
  }
  throw std::invalid_argument("unknown theta_star mode '" + theta_mode + "'");
}

ExperimentConfig experiment_from_config(ConfigMap& cfg) {
  ExperimentConfig ec;
  ec.name = cfg.get_string("name", "experiment");
  const std::string scen = cfg.require_string("scenario");
  if (scen == "eigen_trace")
    ec.scenario = Scenario::EigenTrace;
  else if (scen == "dim_sweep")
    ec.scenario = Scenario::DimSweep;
  else if (scen == "convex_counterexample")
    ec.scenario = Scenario::ConvexCounterexample;
  else if (scen == "alb")
    ec.scenario = Scenario::Alb;
  else if (scen == "clustering")
    ec.scenario = Scenario::Clustering;
  else if (scen == "verify_theory")
    ec.scenario = Scenario::VerifyTheory;
  else
    throw std::invalid_argument("unknown scenario '" + scen + "'");

  ec.master_seed = cfg.get_uint("master_seed", 1);
  ec.trials = static_cast<int>(cfg.get_int("trials", 1));
  ec.n = cfg.get_int("n", 1024);
  ec.lambda = cfg.get_double("lambda", 1.0);
  ec.sigma = cfg.get_double("sigma", 1.0);
  if (ec.trials < 1) throw std::invalid_argument("config: trials < 1");
  if (ec.n < 1) throw std::invalid_argument("config: n < 1");
  if (ec.lambda <= 0.0) throw std::invalid_argument("config: lambda <= 0");
  if (ec.sigma < 0.0) throw std::invalid_argument("config: sigma < 0");

  ec.space.kind = cfg.get_string("space.kind", "sphere");
  ec.space.dim = static_cast<std::size_t>(cfg.get_int("d", 2));
  ec.space.p = cfg.get_double("space.p", 10.0);
  ec.space.radius = cfg.get_double("space.radius", 1.0);
  ec.space.level = cfg.get_double("space.level", 1.0);
  if (cfg.has("space.axes")) ec.space.axes = cfg.get_vec("space.axes");
  if (cfg.has("space.points")) ec.space.points = cfg.get_vec_list("space.points");

  const std::string theta = cfg.get_string("theta_star", "e1");
  if (theta == "e1" || theta == "ones") {
    ec.theta_mode = theta;
  } else {
    ec.theta_mode = "custom";
    ec.theta_values = parse_vec_string("theta_star", theta);
  }

  const std::string pk = cfg.get_string("policy.kind", "lints");
  if (pk == "oful")
    ec.policy.kind = PolicyKind::Oful;
  else if (pk == "lints")
    ec.policy.kind = PolicyKind::LinTs;
  else if (pk == "uniform")
    ec.policy.kind = PolicyKind::Uniform;
  else
    throw std::invalid_argument("unknown policy kind '" + pk + "'");
  ec.policy.delta = cfg.get_double("policy.delta", 0.1);
  ec.policy.norm_bound = cfg.get_double("policy.b", 1.0);
  ec.policy.ts_scale = cfg.get_optional_double("policy.ts_scale");
  if (!(ec.policy.delta > 0.0 && ec.policy.delta <= 1.0))
    throw std::invalid_argument("config: policy.delta outside (0,1]");

  ec.exponent_threshold = cfg.get_double("exponent.threshold", 0.5);
  ec.tail_fraction = cfg.get_double("exponent.tail_fraction", 0.5);
  ec.k_sigma = cfg.get_double("exponent.k_sigma", 3.0);
  ec.checkpoint_count = static_cast<int>(cfg.get_int("exponent.checkpoints", 64));

  if (cfg.has("dims")) ec.dims = cfg.get_int_list("dims");

  ec.alb.b_init = cfg.get_double("alb.b_init", 10.0);
  ec.alb.n1 = cfg.get_int("alb.n1", 256);
  ec.alb.delta = cfg.get_double("alb.delta", 0.05);
  ec.alb.total_rounds = cfg.get_int("alb.total_rounds", ec.n);
  ec.alb.lambda = ec.lambda;
  ec.alb.refine = cfg.get_string("alb.refine", "exact") == "bound" ? RefineMode::Bound
                                                                   : RefineMode::Exact;

  if (cfg.has("cluster.params")) ec.cluster_params = cfg.get_vec_list("cluster.params");
  if (cfg.has("cluster.assignment"))
    ec.cluster_assignment = cfg.get_int_list("cluster.assignment");
  ec.cluster_eta = cfg.get_optional_double("cluster.eta");
  ec.cluster_gamma = cfg.get_double("cluster.gamma", 0.5);

  ec.vt_eps_scale = cfg.get_double("verify.eps_scale", 10.0);

  const std::vector<std::string> leftover = cfg.unconsumed();
  if (!leftover.empty()) {
    std::string msg = "config: unknown key(s):";
    for (const std::string& k : leftover) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  return ec;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  ConfigMap cfg = ConfigMap::from_file(path);
  return experiment_from_config(cfg);
}

}  // namespace banditlab
