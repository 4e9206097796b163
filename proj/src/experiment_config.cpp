#include "sigmaevo/experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "sigmaevo/exponent_oracle.hpp"

namespace sigmaevo {

using nlohmann::json;

namespace {

const std::set<std::string> kModelKeys = {"subcommand", "sigma", "n", "m", "p", "eps_zone", "n_zone", "tolerance"};
const std::set<std::string> kTimeKeys = {"t_min", "t_max", "t_count"};
const std::set<std::string> kRunKeys = {"grid",      "data",          "amplitude",   "dt",
                                        "t_final",   "dealias_fraction", "blowup_threshold", "c_stab",
                                        "snapshot_times", "snapshot_count", "fit_t_min", "fit_t_max",
                                        "s",         "expected_verdict"};

std::set<std::string> allowed_keys(Subcommand sc) {
  std::set<std::string> keys = kModelKeys;
  auto add = [&](std::initializer_list<const char*> ks) {
    for (const char* k : ks) keys.insert(k);
  };
  switch (sc) {
    case Subcommand::eigen: add({"xi_min", "xi_max", "xi_count", "random_checks"}); break;
    case Subcommand::linear_decay:
      add({"grid", "data", "t_min", "t_max", "t_count", "fit_t_min", "fit_t_max", "s", "regularity_loss"});
      break;
    case Subcommand::pointwise: add({"t_max", "t_count", "xi_min", "xi_max", "xi_count", "C_cap"}); break;
    case Subcommand::diffusion:
      add({"grid", "data", "t_min", "t_max", "t_count", "fit_t_min", "fit_t_max", "s", "ell"});
      break;
    case Subcommand::semilinear: keys.insert(kRunKeys.begin(), kRunKeys.end()); break;
    case Subcommand::blowup:
      keys.insert(kRunKeys.begin(), kRunKeys.end());
      add({"R_list", "s_sigma", "data_kind"});
      break;
    case Subcommand::pcrit: add({"s"}); break;
    case Subcommand::admissible: add({"s", "ell", "data_kind", "sweep"}); break;
  }
  return keys;
}

class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<ConfigIssue>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {}

  void check_keys(const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj_.items())
      if (!allowed.count(key)) issue(key, "unknown key");
  }

  bool has(const char* key) const { return obj_.contains(key); }
  std::string at(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void number(const char* key, double& out) {
    if (!obj_.contains(key)) return;
    const auto& v = obj_[key];
    if (!v.is_number()) return issue(key, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) issue(key, "must be finite");
  }

  void integer(const char* key, int& out) {
    if (!obj_.contains(key)) return;
    const auto& v = obj_[key];
    if (!v.is_number_integer()) return issue(key, "expected an integer");
    out = v.get<int>();
  }

  void string(const char* key, std::string& out) {
    if (!obj_.contains(key)) return;
    const auto& v = obj_[key];
    if (!v.is_string()) return issue(key, "expected a string");
    out = v.get<std::string>();
  }

  void numbers(const char* key, std::vector<double>& out) {
    if (!obj_.contains(key)) return;
    const auto& v = obj_[key];
    if (!v.is_array()) return issue(key, "expected an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) return issue(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  const json* object(const char* key) {
    if (!obj_.contains(key)) return nullptr;
    const auto& v = obj_[key];
    if (!v.is_object()) {
      issue(key, "expected an object");
      return nullptr;
    }
    return &v;
  }

  void issue(const std::string& key, const std::string& message) {
    issues_.push_back({path_.empty() ? key : path_ + "." + key, message});
  }

  void require(bool ok, const char* key, const std::string& message) {
    if (!ok) issue(key, message);
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<ConfigIssue>& issues_;
};

void read_grid(Reader& top, GridSpec& grid, std::vector<ConfigIssue>& issues, const std::string& prefix = "") {
  const json* g = top.object("grid");
  if (!g) return;
  Reader r(*g, prefix.empty() ? "grid" : prefix + ".grid", issues);
  r.check_keys({"L", "M"});
  r.number("L", grid.extent);
  r.integer("M", grid.points);
  r.require(grid.extent > 0.0, "L", "L must be > 0");
  r.require(grid.points >= 4 && grid.points % 2 == 0, "M", "M must be an even integer >= 4");
}

void read_times(Reader& r, TimeSampling& t) {
  r.number("t_min", t.t_min);
  r.number("t_max", t.t_max);
  r.integer("t_count", t.count);
  r.require(t.t_min > 0.0, "t_min", "t_min must be > 0");
  r.require(t.t_max > t.t_min, "t_max", "t_max must exceed t_min");
  r.require(t.count >= 8, "t_count", "t_count must be >= 8");
}

}  // namespace

const char* to_string(Subcommand s) noexcept {
  switch (s) {
    case Subcommand::eigen: return "eigen";
    case Subcommand::linear_decay: return "linear-decay";
    case Subcommand::pointwise: return "pointwise";
    case Subcommand::diffusion: return "diffusion";
    case Subcommand::semilinear: return "semilinear";
    case Subcommand::blowup: return "blowup";
    case Subcommand::pcrit: return "pcrit";
    case Subcommand::admissible: return "admissible";
  }
  return "unknown";
}

std::optional<Subcommand> subcommand_from_string(const std::string& name) {
  for (auto s : {Subcommand::eigen, Subcommand::linear_decay, Subcommand::pointwise, Subcommand::diffusion,
                 Subcommand::semilinear, Subcommand::blowup, Subcommand::pcrit, Subcommand::admissible})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues) msg += "\n  " + (i.path.empty() ? std::string("<root>") : i.path) + ": " + i.message;
        return msg;
      }()),
      issues_(std::move(issues)) {}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  if (count < 2) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out.push_back(std::exp(a + (b - a) * i / (count - 1)));
  out.front() = lo;
  out.back() = hi;
  return out;
}

ExperimentConfig parse_config(Subcommand sc, const std::string& text) {
  std::vector<ConfigIssue> issues;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::vector<ConfigIssue>{{"", std::string("malformed JSON: ") + e.what()}});
  }
  if (!doc.is_object()) throw ConfigError(std::vector<ConfigIssue>{{"", "top level must be a JSON object"}});

  ExperimentConfig cfg;
  cfg.subcommand = sc;
  Reader r(doc, "", issues);
  r.check_keys(allowed_keys(sc));
  if (r.has("subcommand")) {
    std::string named;
    r.string("subcommand", named);
    if (!named.empty() && named != to_string(sc))
      r.issue("subcommand", "config is for '" + named + "' but run as '" + to_string(sc) + "'");
  }

  auto& mp = cfg.params;
  r.number("sigma", mp.sigma);
  r.integer("n", mp.n);
  r.number("m", mp.m);
  r.number("p", mp.p);
  r.number("eps_zone", mp.eps_zone);
  r.number("n_zone", mp.n_zone);
  r.number("tolerance", cfg.tolerance);
  r.require(mp.sigma >= 1.0, "sigma", "sigma must be >= 1");
  r.require(mp.n >= 1 && mp.n <= 3, "n", "n must be 1, 2 or 3");
  r.require(mp.m >= 1.0 && mp.m < 2.0, "m", "m in [1,2) required");
  r.require(mp.p > 1.0, "p", "p must be > 1");
  r.require(mp.eps_zone > 0.0, "eps_zone", "eps_zone must be > 0");
  r.require(mp.n_zone > mp.eps_zone, "n_zone", "n_zone must exceed eps_zone");
  r.require(cfg.tolerance > 0.0, "tolerance", "tolerance must be > 0");

  cfg.grid.dim = std::clamp(mp.n, 1, 3);
  cfg.grid.extent = 200.0;
  cfg.grid.points = mp.n == 1 ? 2048 : 256;
  read_grid(r, cfg.grid, issues);

  if (const json* d = r.object("data")) {
    Reader dr(*d, "data", issues);
    dr.check_keys({"kind", "width"});
    std::string kind = "gaussian";
    dr.string("kind", kind);
    dr.require(kind == "gaussian", "kind", "only 'gaussian' data is supported here");
    dr.number("width", cfg.data_width);
    dr.require(cfg.data_width > 0.0, "width", "width must be > 0");
  }

  switch (sc) {
    case Subcommand::eigen:
      r.number("xi_min", cfg.xi_min);
      r.number("xi_max", cfg.xi_max);
      r.integer("xi_count", cfg.xi_count);
      r.integer("random_checks", cfg.random_checks);
      r.require(cfg.xi_min > 0.0, "xi_min", "xi_min must be > 0");
      r.require(cfg.xi_max > cfg.xi_min, "xi_max", "xi_max must exceed xi_min");
      r.require(cfg.xi_count >= 2, "xi_count", "xi_count must be >= 2");
      r.require(cfg.random_checks >= 0, "random_checks", "random_checks must be >= 0");
      break;
    case Subcommand::linear_decay:
    case Subcommand::diffusion:
      read_times(r, cfg.times);
      r.number("fit_t_min", cfg.fit_t_min);
      r.number("fit_t_max", cfg.fit_t_max);
      r.number("s", cfg.s);
      r.require(cfg.s >= 0.0, "s", "s must be >= 0");
      if (sc == Subcommand::diffusion) {
        cfg.ell = mp.sigma;
        r.number("ell", cfg.ell);
        r.require(cfg.ell >= 0.0, "ell", "ell must be >= 0");
        r.require(cfg.s + cfg.ell - mp.sigma >= 0.0, "ell", "hypothesis s + ell - sigma >= 0 violated");
      }
      if (const json* rl = r.object("regularity_loss")) {
        RegularityLossBlock blk;
        blk.grid.dim = cfg.grid.dim;
        Reader rr(*rl, "regularity_loss", issues);
        rr.check_keys({"ell", "delta", "tolerance", "t_min", "t_max", "t_count", "grid"});
        rr.number("ell", blk.ell);
        rr.number("delta", blk.delta);
        rr.number("tolerance", blk.tolerance);
        read_times(rr, blk.times);
        read_grid(rr, blk.grid, issues, "regularity_loss");
        rr.require(blk.ell >= 0.0, "ell", "ell must be >= 0");
        rr.require(blk.delta > 0.0, "delta", "delta must be > 0");
        rr.require(blk.tolerance > 0.0, "tolerance", "tolerance must be > 0");
        cfg.regularity_loss = blk;
      }
      break;
    case Subcommand::pointwise:
      cfg.xi_min = 1e-3;
      cfg.xi_max = 1e3;
      cfg.xi_count = 121;
      cfg.times = {1e-2, 1e4, 41};
      r.number("t_max", cfg.times.t_max);
      r.integer("t_count", cfg.times.count);
      r.number("xi_min", cfg.xi_min);
      r.number("xi_max", cfg.xi_max);
      r.integer("xi_count", cfg.xi_count);
      r.number("C_cap", cfg.C_cap);
      r.require(cfg.times.t_max > cfg.times.t_min, "t_max", "t_max must exceed 1e-2");
      r.require(cfg.times.count >= 2, "t_count", "t_count must be >= 2");
      r.require(cfg.xi_min > 0.0 && cfg.xi_max > cfg.xi_min, "xi_max", "need 0 < xi_min < xi_max");
      r.require(cfg.xi_count >= 2, "xi_count", "xi_count must be >= 2");
      r.require(cfg.C_cap >= 1.0, "C_cap", "C_cap must be >= 1");
      break;
    case Subcommand::semilinear:
    case Subcommand::blowup:
      r.number("amplitude", cfg.amplitude);
      r.number("dt", cfg.dt);
      r.number("t_final", cfg.t_final);
      r.number("dealias_fraction", cfg.dealias_fraction);
      r.number("blowup_threshold", cfg.blowup_threshold);
      r.number("c_stab", cfg.c_stab);
      r.numbers("snapshot_times", cfg.snapshot_times);
      r.integer("snapshot_count", cfg.snapshot_count);
      r.number("fit_t_min", cfg.fit_t_min);
      r.number("fit_t_max", cfg.fit_t_max);
      r.number("s", cfg.s);
      r.string("expected_verdict", cfg.expected_verdict);
      r.require(cfg.amplitude >= 0.0, "amplitude", "amplitude must be >= 0");
      r.require(cfg.dt > 0.0, "dt", "dt must be > 0");
      r.require(cfg.t_final > 0.0, "t_final", "t_final must be > 0");
      r.require(cfg.dealias_fraction > 0.0 && cfg.dealias_fraction <= 1.0, "dealias_fraction",
                "dealias_fraction must be in (0,1]");
      r.require(cfg.blowup_threshold > 0.0, "blowup_threshold", "blowup_threshold must be > 0");
      r.require(cfg.c_stab > 0.0, "c_stab", "c_stab must be > 0");
      r.require(cfg.snapshot_count >= 2, "snapshot_count", "snapshot_count must be >= 2");
      r.require(cfg.s >= 0.0, "s", "s must be >= 0");
      for (double t : cfg.snapshot_times)
        if (!(t >= 0.0 && t <= cfg.t_final)) {
          r.issue("snapshot_times", "entries must lie in [0, t_final]");
          break;
        }
      r.require(cfg.expected_verdict.empty() || cfg.expected_verdict == "global-decay" ||
                    cfg.expected_verdict == "blow-up-detected" || cfg.expected_verdict == "inconclusive",
                "expected_verdict", "expected_verdict must be global-decay, blow-up-detected or inconclusive");
      if (sc == Subcommand::blowup) {
        r.numbers("R_list", cfg.R_list);
        r.number("s_sigma", cfg.s_sigma);
        r.string("data_kind", cfg.data_kind);
        r.require(!cfg.R_list.empty(), "R_list", "R_list must not be empty");
        for (double R : cfg.R_list)
          if (!(R > 0.0)) {
            r.issue("R_list", "entries must be > 0");
            break;
          }
        r.require(cfg.s_sigma == 0.0 || (cfg.s_sigma > 0.0 && cfg.s_sigma < 1.0), "s_sigma",
                  "s_sigma must be in (0,1)");
        r.require(cfg.data_kind == "positive-mass" || cfg.data_kind == "slow-decay", "data_kind",
                  "data_kind must be positive-mass or slow-decay");
      }
      break;
    case Subcommand::pcrit:
      cfg.s = 0.0;
      r.number("s", cfg.s);
      r.require(cfg.s >= 0.0, "s", "s must be >= 0");
      break;
    case Subcommand::admissible:
      cfg.s = 1.0;
      cfg.ell = 0.5;
      r.number("s", cfg.s);
      r.number("ell", cfg.ell);
      r.string("data_kind", cfg.data_kind);
      r.require(cfg.s >= 0.0, "s", "s must be >= 0");
      r.require(cfg.ell >= 0.0, "ell", "ell must be >= 0");
      r.require(cfg.data_kind == "positive-mass" || cfg.data_kind == "slow-decay", "data_kind",
                "data_kind must be positive-mass or slow-decay");
      if (const json* sw = r.object("sweep")) {
        SweepBlock blk;
        Reader sr(*sw, "sweep", issues);
        sr.check_keys({"p_min", "p_max", "p_count", "n_max"});
        sr.number("p_min", blk.p_min);
        sr.number("p_max", blk.p_max);
        sr.integer("p_count", blk.p_count);
        sr.integer("n_max", blk.n_max);
        sr.require(blk.p_min > 1.0, "p_min", "p_min must be > 1");
        sr.require(blk.p_max > blk.p_min, "p_max", "p_max must exceed p_min");
        sr.require(blk.p_count >= 2, "p_count", "p_count must be >= 2");
        sr.require(blk.n_max >= 1, "n_max", "n_max must be >= 1");
        cfg.sweep = blk;
      }
      break;
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));

  if (cfg.fit_t_min <= 0.0) cfg.fit_t_min = (sc == Subcommand::semilinear || sc == Subcommand::blowup)
                                                ? cfg.t_final / 100.0
                                                : cfg.times.t_min;
  if (cfg.fit_t_max <= 0.0) cfg.fit_t_max = (sc == Subcommand::semilinear || sc == Subcommand::blowup)
                                                ? cfg.t_final
                                                : cfg.times.t_max;
  if ((sc == Subcommand::semilinear || sc == Subcommand::blowup) && cfg.snapshot_times.empty()) {
    cfg.snapshot_times.push_back(0.0);
    for (double t : log_spaced(std::max(cfg.dt, cfg.t_final / 1e4), cfg.t_final, cfg.snapshot_count))
      cfg.snapshot_times.push_back(t);
  }
  if (sc == Subcommand::blowup && cfg.s_sigma == 0.0) {
    const double frac = mp.sigma - std::floor(mp.sigma);
    cfg.s_sigma = frac == 0.0 ? 0.5 : frac;
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["subcommand"] = to_string(c.subcommand);
  j["sigma"] = c.params.sigma;
  j["n"] = c.params.n;
  j["m"] = c.params.m;
  j["p"] = c.params.p;
  j["eps_zone"] = c.params.eps_zone;
  j["n_zone"] = c.params.n_zone;
  j["tolerance"] = c.tolerance;
  auto grid = [](const GridSpec& g) { return json{{"L", g.extent}, {"M", g.points}}; };
  switch (c.subcommand) {
    case Subcommand::eigen:
      j["xi_min"] = c.xi_min;
      j["xi_max"] = c.xi_max;
      j["xi_count"] = c.xi_count;
      j["random_checks"] = c.random_checks;
      break;
    case Subcommand::linear_decay:
    case Subcommand::diffusion:
      j["grid"] = grid(c.grid);
      j["data"] = {{"kind", "gaussian"}, {"width", c.data_width}};
      j["t_min"] = c.times.t_min;
      j["t_max"] = c.times.t_max;
      j["t_count"] = c.times.count;
      j["fit_t_min"] = c.fit_t_min;
      j["fit_t_max"] = c.fit_t_max;
      j["s"] = c.s;
      if (c.subcommand == Subcommand::diffusion) j["ell"] = c.ell;
      if (c.regularity_loss) {
        const auto& b = *c.regularity_loss;
        j["regularity_loss"] = {{"ell", b.ell},         {"delta", b.delta}, {"tolerance", b.tolerance},         {"t_min", b.times.t_min},
                                {"t_max", b.times.t_max}, {"t_count", b.times.count}, {"grid", grid(b.grid)}};
      }
      break;
    case Subcommand::pointwise:
      j["t_max"] = c.times.t_max;
      j["t_count"] = c.times.count;
      j["xi_min"] = c.xi_min;
      j["xi_max"] = c.xi_max;
      j["xi_count"] = c.xi_count;
      j["C_cap"] = c.C_cap;
      break;
    case Subcommand::semilinear:
    case Subcommand::blowup:
      j["grid"] = grid(c.grid);
      j["data"] = {{"kind", "gaussian"}, {"width", c.data_width}};
      j["amplitude"] = c.amplitude;
      j["dt"] = c.dt;
      j["t_final"] = c.t_final;
      j["dealias_fraction"] = c.dealias_fraction;
      j["blowup_threshold"] = c.blowup_threshold;
      j["c_stab"] = c.c_stab;
      j["snapshot_times"] = c.snapshot_times;
      j["fit_t_min"] = c.fit_t_min;
      j["fit_t_max"] = c.fit_t_max;
      j["s"] = c.s;
      if (!c.expected_verdict.empty()) j["expected_verdict"] = c.expected_verdict;
      if (c.subcommand == Subcommand::blowup) {
        j["R_list"] = c.R_list;
        j["s_sigma"] = c.s_sigma;
        j["data_kind"] = c.data_kind;
      }
      break;
    case Subcommand::pcrit: j["s"] = c.s; break;
    case Subcommand::admissible:
      j["s"] = c.s;
      j["ell"] = c.ell;
      j["data_kind"] = c.data_kind;
      if (c.sweep)
        j["sweep"] = {{"p_min", c.sweep->p_min}, {"p_max", c.sweep->p_max}, {"p_count", c.sweep->p_count},
                      {"n_max", c.sweep->n_max}};
      break;
  }
  return j.dump(2);
}

}  // namespace sigmaevo
