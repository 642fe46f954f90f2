#include "intdim/run_config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "intdim/errors.hpp"

namespace intdim {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "command", "set",        "theta",      "m",        "schedule", "mode",       "quotient",  "anchor_r",
    "source",  "trials",     "seed",       "eta",      "tolerances", "net_factor", "cover_phases",
    "annulus_correction",    "output",     "plot",     "dump",     "workers",    "verify"};

double get_number(const json& j, const char* field) {
  detail::require(j.is_number(), field, "must be a number");
  return j.get<double>();
}

long get_integer(const json& j, const char* field) {
  detail::require(j.is_number_integer(), field, "must be an integer");
  return j.get<long>();
}

bool get_bool(const json& j, const char* field) {
  detail::require(j.is_boolean(), field, "must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const char* field) {
  detail::require(j.is_string(), field, "must be a string");
  return j.get<std::string>();
}

std::vector<double> number_list(const json& j, const char* field) {
  if (j.is_number()) return {j.get<double>()};
  detail::require(j.is_array() && !j.empty(), field, "must be a number or a non-empty array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_number(v, field));
  return out;
}

std::vector<int> integer_list(const json& j, const char* field) {
  if (j.is_number_integer()) return {j.get<int>()};
  detail::require(j.is_array() && !j.empty(), field, "must be an integer or a non-empty array");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(static_cast<int>(get_integer(v, field)));
  return out;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ValidationError(where.empty() ? key : where + "." + key, "unknown key");
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Generate: return "generate";
    case Command::Estimate: return "estimate";
    case Command::Profile: return "profile";
    case Command::Project: return "project";
    case Command::Verify: return "verify";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Generate, Command::Estimate, Command::Profile, Command::Project, Command::Verify})
    if (name == to_string(c)) return c;
  throw ValidationError("command", "must be one of generate, estimate, profile, project, verify");
}

RunConfig RunConfig::parse(const json& doc) {
  detail::require(doc.is_object(), "config", "must be a JSON object");
  check_keys(doc, kKeys, "");
  RunConfig cfg;
  detail::require(doc.contains("command"), "command", "is required");
  cfg.command = parse_command(get_string(doc["command"], "command"));

  if (doc.contains("set")) {
    detail::require(doc["set"].is_object(), "set", "must be an object");
    cfg.set = doc["set"];
  } else {
    detail::require(cfg.command == Command::Verify, "set", "is required");
  }

  if (doc.contains("theta")) {
    cfg.theta_grid = number_list(doc["theta"], "theta");
  } else {
    cfg.theta_grid = cfg.command == Command::Estimate ? std::vector<double>{1.0} : default_theta_grid();
  }
  for (double t : cfg.theta_grid) detail::require(t > 0.0 && t <= 1.0, "theta", "must lie in (0,1]");

  if (doc.contains("m")) {
    cfg.m_list = integer_list(doc["m"], "m");
    for (int m : cfg.m_list) detail::require(m >= 1, "m", "must be at least 1");
  }

  if (doc.contains("schedule")) {
    const json& s = doc["schedule"];
    detail::require(s.is_object(), "schedule", "must be an object");
    check_keys(s, {"k_first", "k_last", "r_values", "tail_window"}, "schedule");
    if (s.contains("r_values")) {
      detail::require(!s.contains("k_first") && !s.contains("k_last"), "schedule",
                      "give either r_values or k_first/k_last");
      cfg.schedule.r_values = number_list(s["r_values"], "r_values");
    } else {
      const long k_first = s.contains("k_first") ? get_integer(s["k_first"], "k_first") : 5;
      const long k_last = s.contains("k_last") ? get_integer(s["k_last"], "k_last") : 40;
      detail::require(k_first >= 1 && k_first <= k_last && k_last <= 60, "k_first",
                      "need 1 <= k_first <= k_last <= 60");
      cfg.schedule.r_values = dyadic_scales(static_cast<int>(k_first), static_cast<int>(k_last));
    }
    if (s.contains("tail_window")) cfg.schedule.tail_window = static_cast<int>(get_integer(s["tail_window"], "tail_window"));
  }
  if (doc.contains("mode")) {
    const std::string mode = get_string(doc["mode"], "mode");
    detail::require(mode == "lower" || mode == "upper", "mode", "must be lower or upper");
    cfg.schedule.mode = mode == "lower" ? LimitMode::Lower : LimitMode::Upper;
  }
  cfg.schedule.validate();

  if (doc.contains("quotient")) {
    const std::string q = get_string(doc["quotient"], "quotient");
    if (q == "ratio") cfg.estimator.quotient = Quotient::Ratio;
    else if (q == "anchored") cfg.estimator.quotient = Quotient::Anchored;
    else if (q == "regression") cfg.estimator.quotient = Quotient::Regression;
    else throw ValidationError("quotient", "must be ratio, anchored or regression");
  }
  if (doc.contains("anchor_r")) cfg.estimator.anchor_r = get_number(doc["anchor_r"], "anchor_r");
  if (doc.contains("net_factor")) cfg.estimator.net_factor = get_number(doc["net_factor"], "net_factor");
  if (doc.contains("cover_phases"))
    cfg.estimator.cover_phases = static_cast<int>(get_integer(doc["cover_phases"], "cover_phases"));
  if (doc.contains("annulus_correction"))
    cfg.estimator.annulus_correction = get_bool(doc["annulus_correction"], "annulus_correction");
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    detail::require(t.is_object(), "tolerances", "must be an object");
    check_keys(t, {"tol", "tol_s", "support_tolerance", "max_iters", "restarts"}, "tolerances");
    if (t.contains("tol")) cfg.estimator.solver.tol = get_number(t["tol"], "tol");
    if (t.contains("tol_s")) cfg.estimator.tol_s = get_number(t["tol_s"], "tol_s");
    if (t.contains("support_tolerance"))
      cfg.estimator.solver.support_tolerance = get_number(t["support_tolerance"], "support_tolerance");
    if (t.contains("max_iters")) cfg.estimator.solver.max_iters = get_integer(t["max_iters"], "max_iters");
    if (t.contains("restarts")) cfg.estimator.solver.restarts = static_cast<int>(get_integer(t["restarts"], "restarts"));
  }
  cfg.estimator.validate();

  if (doc.contains("source")) {
    const std::string src = get_string(doc["source"], "source");
    if (src == "cover") cfg.source = EstimateSource::Cover;
    else if (src == "capacity") cfg.source = EstimateSource::Capacity;
    else if (src == "both") cfg.source = EstimateSource::Both;
    else throw ValidationError("source", "must be cover, capacity or both");
  } else if (cfg.command == Command::Profile) {
    cfg.source = EstimateSource::Capacity;
  }
  if (doc.contains("trials")) cfg.trials = static_cast<int>(get_integer(doc["trials"], "trials"));
  detail::require(cfg.trials >= 1, "trials", "must be at least 1");
  if (doc.contains("seed")) {
    detail::require(doc["seed"].is_number_unsigned(), "seed", "must be a nonnegative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("eta")) cfg.eta = get_number(doc["eta"], "eta");
  detail::require(cfg.eta >= 0.0, "eta", "must be nonnegative");
  if (doc.contains("output")) cfg.output = get_string(doc["output"], "output");
  detail::require(!cfg.output.empty(), "output", "must be non-empty");
  if (doc.contains("plot")) cfg.plot = get_bool(doc["plot"], "plot");
  if (doc.contains("dump")) cfg.dump = get_bool(doc["dump"], "dump");
  if (doc.contains("workers")) cfg.workers = static_cast<int>(get_integer(doc["workers"], "workers"));
  detail::require(cfg.workers >= 0, "workers", "must be nonnegative");

  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    detail::require(v.is_object(), "verify", "must be an object");
    check_keys(v, {"pairs", "r_exponents", "thetas", "mc_trials", "target_se"}, "verify");
    if (v.contains("pairs")) cfg.pairs = static_cast<int>(get_integer(v["pairs"], "pairs"));
    if (v.contains("r_exponents")) cfg.r_exponents = integer_list(v["r_exponents"], "r_exponents");
    if (v.contains("thetas")) cfg.verify_thetas = number_list(v["thetas"], "thetas");
    if (v.contains("mc_trials")) cfg.mc_trials = get_integer(v["mc_trials"], "mc_trials");
    if (v.contains("target_se")) cfg.target_se = get_number(v["target_se"], "target_se");
  }
  detail::require(cfg.pairs >= 1, "pairs", "must be at least 1");
  for (int k : cfg.r_exponents) detail::require(k >= 1 && k <= 60, "r_exponents", "must lie in 1..60");
  for (double t : cfg.verify_thetas) detail::require(t > 0.0 && t <= 1.0, "thetas", "must lie in (0,1]");
  detail::require(cfg.mc_trials >= 1000, "mc_trials", "must be at least 1000");
  detail::require(cfg.target_se > 0.0, "target_se", "must be positive");
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse(doc);
}

json RunConfig::to_json() const {
  json j;
  j["command"] = to_string(command);
  if (!set.is_null()) j["set"] = set;
  j["theta"] = theta_grid;
  if (!m_list.empty()) j["m"] = m_list;
  j["schedule"] = {{"r_values", schedule.r_values}, {"tail_window", schedule.tail_window}};
  j["mode"] = intdim::to_string(schedule.mode);
  j["quotient"] = intdim::to_string(estimator.quotient);
  j["anchor_r"] = estimator.anchor_r;
  j["net_factor"] = estimator.net_factor;
  j["cover_phases"] = estimator.cover_phases;
  j["annulus_correction"] = estimator.annulus_correction;
  j["tolerances"] = {{"tol", estimator.solver.tol},
                     {"tol_s", estimator.tol_s},
                     {"support_tolerance", estimator.solver.support_tolerance},
                     {"max_iters", estimator.solver.max_iters},
                     {"restarts", estimator.solver.restarts}};
  j["source"] = source == EstimateSource::Cover ? "cover" : source == EstimateSource::Capacity ? "capacity" : "both";
  j["trials"] = trials;
  j["seed"] = seed;
  j["eta"] = eta;
  j["output"] = output;
  j["plot"] = plot;
  j["dump"] = dump;
  j["workers"] = workers;
  j["verify"] = {{"pairs", pairs},
                 {"r_exponents", r_exponents},
                 {"thetas", verify_thetas},
                 {"mc_trials", mc_trials},
                 {"target_se", target_se}};
  return j;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

Cloud build_set(const json& d) {
  detail::require(d.is_object(), "set", "must be an object");
  if (d.contains("path")) {
    check_keys(d, {"path", "format"}, "set");
    const std::string path = get_string(d["path"], "path");
    if (!d.contains("format")) return load_points(path);
    const std::string fmt = get_string(d["format"], "format");
    detail::require(fmt == "csv" || fmt == "json", "format", "must be csv or json");
    return load_points(path, fmt == "csv" ? PointFormat::Csv : PointFormat::Json);
  }
  detail::require(d.contains("generator"), "generator", "set needs a generator or a path");
  const std::string gen = get_string(d["generator"], "generator");
  auto need = [&](const char* key) -> const json& {
    detail::require(d.contains(key), key, "is required for generator " + gen);
    return d[key];
  };
  if (gen == "sequence_set") {
    check_keys(d, {"generator", "p", "count"}, "set");
    return generate_sequence_set(get_number(need("p"), "p"), get_integer(need("count"), "count"));
  }
  if (gen == "cantor") {
    check_keys(d, {"generator", "depth"}, "set");
    return generate_ifs_attractor(IfsSystem::middle_third_cantor(), static_cast<int>(get_integer(need("depth"), "depth")));
  }
  if (gen == "uniform_grid") {
    check_keys(d, {"generator", "dim", "per_axis"}, "set");
    return generate_uniform_grid(static_cast<int>(get_integer(need("dim"), "dim")),
                                 get_integer(need("per_axis"), "per_axis"));
  }
  if (gen == "carpet") {
    check_keys(d, {"generator", "base_a", "base_b", "digits", "depth"}, "set");
    std::vector<std::pair<int, int>> digits;
    const json& dj = need("digits");
    detail::require(dj.is_array(), "digits", "must be an array of [i, j] pairs");
    for (const auto& p : dj) {
      detail::require(p.is_array() && p.size() == 2, "digits", "must be an array of [i, j] pairs");
      digits.emplace_back(static_cast<int>(get_integer(p[0], "digits")), static_cast<int>(get_integer(p[1], "digits")));
    }
    return generate_carpet(static_cast<int>(get_integer(need("base_a"), "base_a")),
                           static_cast<int>(get_integer(need("base_b"), "base_b")), digits,
                           static_cast<int>(get_integer(need("depth"), "depth")));
  }
  if (gen == "single_point") {
    check_keys(d, {"generator", "dim"}, "set");
    return single_point(d.contains("dim") ? static_cast<int>(get_integer(d["dim"], "dim")) : 1);
  }
  if (gen == "product") {
    check_keys(d, {"generator", "factors"}, "set");
    const json& f = need("factors");
    detail::require(f.is_array() && f.size() == 2, "factors", "must list two set descriptors");
    return product(build_set(f[0]), build_set(f[1]));
  }
  throw ValidationError("generator", "unknown generator " + gen);
}

}  // namespace intdim
