#include "ouhjb/config.hpp"

#include <fstream>
#include <set>

#include "ouhjb/error.hpp"
#include "ouhjb/presets.hpp"

namespace ouhjb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

// Object view that remembers which keys were read so leftovers can be rejected.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(j_.at(key), path(key));
  }

  double required_number(const std::string& key) {
    if (!has(key)) fail(path(key), "missing");
    return as_number(j_.at(key), path(key));
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    return v.get<long long>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
    fail(path(key), "expected a non-negative integer");
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(path(key), "expected true or false");
    return j_.at(key).get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) fail(path(key), "expected a string");
    return j_.at(key).get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(join(path_, it.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& p) {
    if (!v.is_number()) fail(p, "expected a number");
    return v.get<double>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec parse_vector(const json& v, const std::string& p) {
  if (!v.is_array()) fail(p, "expected an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = Section::as_number(v[i], p + "[" + std::to_string(i) + "]");
  }
  return out;
}

Mat parse_matrix(const json& v, const std::string& p) {
  if (!v.is_array() || v.empty()) fail(p, "expected an array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  Mat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = p + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols) fail(rp, "rows must be arrays of equal length");
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Section::as_number(v[i][j], rp + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

json vector_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

void parse_model(Section& root, RunConfig& cfg) {
  if (!root.has("model")) fail("model", "missing");
  Section m(root.raw("model"), "model");
  if (m.has("random_decoupled")) {
    Section r(m.raw("random_decoupled"), "model.random_decoupled");
    RandomDecoupledSpec spec;
    spec.n = static_cast<int>(r.integer("n", spec.n));
    spec.seed = r.unsigned_integer("seed", spec.seed);
    r.finish();
    m.finish();
    if (spec.n < 1) fail("model.random_decoupled.n", "must be positive");
    cfg.random_model = spec;
    cfg.model = presets::decoupled_random(spec.n, spec.seed);
  } else {
    ModelParams& p = cfg.model;
    if (!m.has("alpha")) fail("model.alpha", "missing");
    p.alpha = parse_vector(m.raw("alpha"), "model.alpha");
    p.n = static_cast<int>(m.integer("n", p.alpha.size()));
    p.r = m.required_number("r");
    p.gamma = m.required_number("gamma");
    p.rho0 = m.number("rho0", 0.0);
    p.T = m.required_number("T");
    if (!m.has("mu")) fail("model.mu", "missing");
    p.mu = parse_vector(m.raw("mu"), "model.mu");
    if (!m.has("sigma")) fail("model.sigma", "missing");
    p.sigma = parse_matrix(m.raw("sigma"), "model.sigma");
    p.rho = m.has("rho") ? parse_vector(m.raw("rho"), "model.rho") : Vec::Zero(p.n);
    p.varrho = m.has("varrho") ? parse_matrix(m.raw("varrho"), "model.varrho") : Mat::Zero(p.n, p.n);
    m.finish();
  }
  try {
    cfg.model = validate(cfg.model).params;
  } catch (const Error& e) {
    fail("model", e.what());
  }
}

template <typename Fn>
void section(Section& root, const std::string& key, Fn&& fn) {
  if (!root.has(key)) return;
  Section s(root.raw(key), key);
  fn(s);
  s.finish();
}

}  // namespace

CoefficientScheme parse_coefficient_scheme(const std::string& name) {
  if (name == "expeuler-rk2") return CoefficientScheme::ExpEulerRK2;
  if (name == "erow3-rk3") return CoefficientScheme::Erow3RK3;
  throw Error(ErrorCode::ConfigError, "unknown scheme '" + name + "' (expeuler-rk2 or erow3-rk3)");
}

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  Section root(doc, "");
  parse_model(root, cfg);
  const int n = cfg.model.n;
  cfg.output = root.string("output", cfg.output);

  section(root, "solver", [&](Section& s) {
    const auto name = s.string("scheme", std::string(to_string(cfg.solver.scheme)));
    try {
      cfg.solver.scheme = parse_coefficient_scheme(name);
    } catch (const Error&) {
      fail("solver.scheme", "unknown scheme '" + name + "'");
    }
    cfg.solver.steps = static_cast<int>(s.integer("steps", cfg.solver.steps));
  });
  if (cfg.solver.steps < 1) fail("solver.steps", "must be at least 1");

  section(root, "convergence", [&](Section& s) {
    cfg.convergence.k_min = static_cast<int>(s.integer("k_min", cfg.convergence.k_min));
    cfg.convergence.k_max = static_cast<int>(s.integer("k_max", cfg.convergence.k_max));
  });
  if (cfg.convergence.k_min < 0 || cfg.convergence.k_max < cfg.convergence.k_min ||
      cfg.convergence.k_max > 20) {
    fail("convergence", "need 0 <= k_min <= k_max <= 20");
  }

  section(root, "verify", [&](Section& s) {
    const auto name = s.string("scheme", std::string(to_string(cfg.verify.scheme)));
    if (name == "expeuler") {
      cfg.verify.scheme = RiccatiScheme::ExpEuler;
    } else if (name == "erow3") {
      cfg.verify.scheme = RiccatiScheme::Erow3;
    } else {
      fail("verify.scheme", "unknown scheme '" + name + "' (expeuler or erow3)");
    }
    cfg.verify.steps = static_cast<int>(s.integer("steps", cfg.verify.steps));
    cfg.verify.sigma_start = s.number("sigma_start", cfg.verify.sigma_start);
  });
  if (cfg.verify.steps < 1) fail("verify.steps", "must be at least 1");
  if (cfg.verify.sigma_start < 0 || cfg.verify.sigma_start > cfg.model.T) {
    fail("verify.sigma_start", "must lie in [0, T]");
  }

  section(root, "fdm", [&](Section& s) {
    auto& sp = cfg.fdm.spec;
    sp.S_lo = s.number("S_lo", sp.S_lo);
    sp.S_hi = s.number("S_hi", sp.S_hi);
    sp.N_S = static_cast<int>(s.integer("N_S", sp.N_S));
    sp.N_t = static_cast<int>(s.integer("N_t", sp.N_t));
    const auto ts = s.string("time_scheme", std::string(to_string(sp.time_scheme)));
    if (ts == "implicit-euler") {
      sp.time_scheme = FdmTimeScheme::ImplicitEuler;
    } else if (ts == "richardson-euler") {
      sp.time_scheme = FdmTimeScheme::RichardsonEuler;
    } else {
      fail("fdm.time_scheme", "unknown scheme '" + ts + "' (implicit-euler or richardson-euler)");
    }
    sp.upwind = s.boolean("upwind", sp.upwind);
    cfg.fdm.solver_steps = static_cast<int>(s.integer("solver_steps", cfg.fdm.solver_steps));
    cfg.fdm.repeats = static_cast<int>(s.integer("repeats", cfg.fdm.repeats));
  });
  if (cfg.fdm.spec.N_S < 2 || cfg.fdm.spec.N_t < 1) fail("fdm", "need N_S >= 2 and N_t >= 1");
  if (!(cfg.fdm.spec.S_hi > cfg.fdm.spec.S_lo)) fail("fdm", "need S_lo < S_hi");
  if (cfg.fdm.solver_steps < 1) fail("fdm.solver_steps", "must be at least 1");
  if (cfg.fdm.repeats < 1) fail("fdm.repeats", "must be at least 1");

  auto& so = cfg.simulate.options;
  so.S0 = Vec::Constant(n, 2.0);
  section(root, "simulate", [&](Section& s) {
    so.paths = static_cast<int>(s.integer("paths", so.paths));
    cfg.simulate.phi_steps = static_cast<int>(s.integer("phi_steps", cfg.simulate.phi_steps));
    so.policy_steps = static_cast<int>(s.integer("policy_steps", so.policy_steps));
    so.substeps = static_cast<int>(s.integer("substeps", so.substeps));
    so.seed = s.unsigned_integer("seed", so.seed);
    so.x0 = s.number("x0", so.x0);
    if (s.has("S0")) so.S0 = parse_vector(s.raw("S0"), "simulate.S0");
    so.exact_ou = s.boolean("exact_ou", so.exact_ou);
    so.record_paths = static_cast<int>(s.integer("record_paths", so.record_paths));
    so.threads = static_cast<int>(s.integer("threads", so.threads));
    cfg.simulate.redraw_random = s.boolean("redraw_random", cfg.simulate.redraw_random);
    if (s.has("policies")) {
      const auto& arr = s.raw("policies");
      if (!arr.is_array()) fail("simulate.policies", "expected an array of names");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) fail("simulate.policies[" + std::to_string(i) + "]", "expected a string");
        cfg.simulate.policies.push_back(arr[i].get<std::string>());
      }
    }
  });
  if (so.S0.size() != n) fail("simulate.S0", "length must equal model dimension");
  if (so.paths < 2) fail("simulate.paths", "must be at least 2");
  if (so.policy_steps < 1 || so.substeps < 1 || cfg.simulate.phi_steps < 1) {
    fail("simulate", "phi_steps, policy_steps and substeps must be positive");
  }
  if (!(so.x0 > 0)) fail("simulate.x0", "must be positive");
  if (so.record_paths < 0) fail("simulate.record_paths", "must be non-negative");
  if (so.threads < 0) fail("simulate.threads", "must be non-negative");

  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  json m;
  const auto& p = c.model;
  if (c.random_model) {
    m["random_decoupled"] = {{"n", c.random_model->n}, {"seed", c.random_model->seed}};
  } else {
    m["n"] = p.n;
    m["r"] = p.r;
    m["gamma"] = p.gamma;
    m["rho0"] = p.rho0;
    m["rho"] = vector_json(p.rho);
    m["varrho"] = matrix_json(p.varrho);
    m["alpha"] = vector_json(p.alpha);
    m["mu"] = vector_json(p.mu);
    m["sigma"] = matrix_json(p.sigma);
    m["T"] = p.T;
  }
  j["model"] = m;
  j["solver"] = {{"scheme", std::string(to_string(c.solver.scheme))}, {"steps", c.solver.steps}};
  j["convergence"] = {{"k_min", c.convergence.k_min}, {"k_max", c.convergence.k_max}};
  j["verify"] = {{"scheme", std::string(to_string(c.verify.scheme))},
                 {"steps", c.verify.steps},
                 {"sigma_start", c.verify.sigma_start}};
  const auto& f = c.fdm.spec;
  j["fdm"] = {{"S_lo", f.S_lo},
              {"S_hi", f.S_hi},
              {"N_S", f.N_S},
              {"N_t", f.N_t},
              {"time_scheme", std::string(to_string(f.time_scheme))},
              {"upwind", f.upwind},
              {"solver_steps", c.fdm.solver_steps},
              {"repeats", c.fdm.repeats}};
  const auto& s = c.simulate.options;
  j["simulate"] = {{"paths", s.paths},
                   {"phi_steps", c.simulate.phi_steps},
                   {"policy_steps", s.policy_steps},
                   {"substeps", s.substeps},
                   {"seed", s.seed},
                   {"x0", s.x0},
                   {"S0", vector_json(s.S0)},
                   {"exact_ou", s.exact_ou},
                   {"record_paths", s.record_paths},
                   {"threads", s.threads},
                   {"redraw_random", c.simulate.redraw_random},
                   {"policies", c.simulate.policies}};
  j["output"] = c.output;
  return j;
}

}  // namespace ouhjb
