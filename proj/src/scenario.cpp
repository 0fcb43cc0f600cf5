#include "hcache/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hcache::cli {

using nlohmann::json;

namespace {

constexpr std::pair<Mode, const char*> kModes[] = {
    {Mode::analyze, "analyze"},
    {Mode::simulate, "simulate"},
    {Mode::optimize, "optimize"},
    {Mode::sweep, "sweep"},
};

constexpr std::pair<Scheme, const char*> kSchemes[] = {
    {Scheme::hybrid, "hybrid"},
    {Scheme::pure_coded, "pure-coded"},
    {Scheme::pure_uncoded, "pure-uncoded"},
    {Scheme::hetero, "hetero"},
};

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ParseError((where.empty() ? "" : where + ".") + key + ": unknown key");
}

const json& object_at(const json& j, const std::string& field) {
  if (!j.is_object()) throw ParseError(field + ": expected an object");
  return j;
}

long long as_int(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 9e15) return static_cast<long long>(v);
  }
  throw ParseError(field + ": expected an integer");
}

double as_double(const json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field + ": expected a number");
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) throw ParseError(field + ": expected true or false");
  return j.get<bool>();
}

const json& as_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + ": expected an array");
  return j;
}

std::vector<int> int_list(const json& j, const std::string& field) {
  std::vector<int> out;
  for (std::size_t i = 0; i < as_array(j, field).size(); ++i)
    out.push_back(static_cast<int>(as_int(j[i], field + "[" + std::to_string(i) + "]")));
  return out;
}

// 1-based indices in [1, limit] to 0-based.
std::vector<int> index_list(const json& j, const std::string& field, int limit) {
  auto out = int_list(j, field);
  for (int& v : out) {
    if (v < 1 || v > limit)
      throw ValidationError(field + ": index " + std::to_string(v) + " outside 1.." +
                            std::to_string(limit));
    --v;
  }
  return out;
}

// [a, b, ...] or {"from": a, "to": b, "step": s}.
std::vector<double> double_range(const json& j, const std::string& field) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(as_double(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }
  reject_unknown(object_at(j, field), field, {"from", "to", "step"});
  if (!j.contains("from") || !j.contains("to") || !j.contains("step"))
    throw ParseError(field + ": range needs from, to and step");
  const double from = as_double(j["from"], field + ".from");
  const double to = as_double(j["to"], field + ".to");
  const double step = as_double(j["step"], field + ".step");
  if (!(step > 0.0)) throw ValidationError(field + ".step: must be positive");
  // Index-based so accumulated rounding neither skips nor adds the endpoint.
  const long count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

std::vector<int> int_range(const json& j, const std::string& field) {
  if (j.is_array()) return int_list(j, field);
  reject_unknown(object_at(j, field), field, {"from", "to", "step"});
  if (!j.contains("from") || !j.contains("to"))
    throw ParseError(field + ": range needs from and to");
  const long long from = as_int(j["from"], field + ".from");
  const long long to = as_int(j["to"], field + ".to");
  const long long step = j.contains("step") ? as_int(j["step"], field + ".step") : 1;
  if (step <= 0) throw ValidationError(field + ".step: must be positive");
  std::vector<int> out;
  for (long long v = from; v <= to; v += step) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> users_from(const json& j, const std::string& field, int sbs_count) {
  if (j.is_number()) {
    const auto z = as_int(j, field);
    return std::vector<int>(std::max(0, sbs_count), static_cast<int>(z));
  }
  auto z = int_list(j, field);
  if (static_cast<int>(z.size()) != sbs_count)
    throw ValidationError(field + ": has " + std::to_string(z.size()) + " entries, K=" +
                          std::to_string(sbs_count) + " requires " + std::to_string(sbs_count));
  for (int v : z)
    if (v < 0) throw ValidationError(field + ": user counts must be >= 0");
  return z;
}

PopularitySpec parse_popularity(const json& j, const SystemConfig& config) {
  reject_unknown(object_at(j, "popularity"), "popularity", {"zipf", "matrix"});
  if (j.contains("zipf") == j.contains("matrix"))
    throw ParseError("popularity: give exactly one of zipf or matrix");
  PopularitySpec spec;
  if (j.contains("zipf")) {
    spec.zipf_alpha = as_double(j["zipf"], "popularity.zipf");
    if (!(*spec.zipf_alpha >= 0.0)) throw ValidationError("popularity.zipf: must be >= 0");
    return spec;
  }
  const auto& rows = as_array(j["matrix"], "popularity.matrix");
  if (static_cast<int>(rows.size()) != config.content_count)
    throw ValidationError("popularity.matrix: has " + std::to_string(rows.size()) +
                          " rows, N=" + std::to_string(config.content_count));
  spec.columns.assign(config.sbs_count, std::vector<double>(config.content_count));
  for (int n = 0; n < config.content_count; ++n) {
    const std::string row_field = "popularity.matrix[" + std::to_string(n) + "]";
    const auto& row = as_array(rows[n], row_field);
    if (static_cast<int>(row.size()) != config.sbs_count)
      throw ValidationError(row_field + ": has " + std::to_string(row.size()) +
                            " columns, K=" + std::to_string(config.sbs_count));
    for (int c = 0; c < config.sbs_count; ++c)
      spec.columns[c][n] = as_double(row[c], row_field + "[" + std::to_string(c) + "]");
  }
  try {
    (void)PopularityMatrix::from_columns(spec.columns);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("popularity.matrix: ") + e.what());
  }
  return spec;
}

Placement parse_placement(const json& j, const SystemConfig& config) {
  object_at(j, "placement");
  if (j.contains("M1") || j.contains("N1")) {
    reject_unknown(j, "placement", {"M1", "N1"});
    if (!j.contains("M1") || !j.contains("N1"))
      throw ParseError("placement: hybrid placement needs both M1 and N1");
    return HybridPlacement{static_cast<int>(as_int(j["M1"], "placement.M1")),
                           static_cast<int>(as_int(j["N1"], "placement.N1"))};
  }
  reject_unknown(j, "placement", {"groups", "uncoded"});
  HeteroPlacement p;
  if (j.contains("groups")) {
    const auto& groups = as_array(j["groups"], "placement.groups");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string field = "placement.groups[" + std::to_string(g) + "]";
      reject_unknown(object_at(groups[g], field), field, {"sbs", "M", "contents"});
      if (!groups[g].contains("sbs") || !groups[g].contains("M") || !groups[g].contains("contents"))
        throw ParseError(field + ": needs sbs, M and contents");
      SbsGroup group;
      group.members = index_list(groups[g]["sbs"], field + ".sbs", config.sbs_count);
      group.capacity = static_cast<int>(as_int(groups[g]["M"], field + ".M"));
      group.contents = index_list(groups[g]["contents"], field + ".contents", config.content_count);
      std::sort(group.members.begin(), group.members.end());
      std::sort(group.contents.begin(), group.contents.end());
      p.groups.push_back(std::move(group));
    }
  }
  p.uncoded.assign(config.sbs_count, {});
  if (j.contains("uncoded")) {
    const auto& rows = as_array(j["uncoded"], "placement.uncoded");
    if (static_cast<int>(rows.size()) != config.sbs_count)
      throw ValidationError("placement.uncoded: has " + std::to_string(rows.size()) +
                            " entries, K=" + std::to_string(config.sbs_count));
    for (int c = 0; c < config.sbs_count; ++c) {
      p.uncoded[c] = index_list(rows[c], "placement.uncoded[" + std::to_string(c) + "]",
                                config.content_count);
      std::sort(p.uncoded[c].begin(), p.uncoded[c].end());
    }
  }
  return p;
}

std::vector<Scheme> parse_schemes(const json& j) {
  std::vector<Scheme> out;
  auto one = [&](const json& v, const std::string& field) {
    if (!v.is_string()) throw ParseError(field + ": expected a scheme name");
    auto s = parse_scheme(v.get<std::string>());
    if (!s)
      throw ParseError(field + ": unknown scheme '" + v.get<std::string>() +
                       "' (hybrid, pure-coded, pure-uncoded, hetero)");
    out.push_back(*s);
  };
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) one(j[i], "scheme[" + std::to_string(i) + "]");
    if (out.empty()) throw ValidationError("scheme: list must not be empty");
  } else {
    one(j, "scheme");
  }
  return out;
}

void require(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string(key) + ": required key missing");
}

}  // namespace

const char* to_string(Mode mode) {
  for (const auto& [m, name] : kModes)
    if (m == mode) return name;
  return "?";
}

const char* to_string(Scheme scheme) {
  for (const auto& [s, name] : kSchemes)
    if (s == scheme) return name;
  return "?";
}

std::optional<Mode> parse_mode(const std::string& text) {
  for (const auto& [m, name] : kModes)
    if (text == name) return m;
  return std::nullopt;
}

std::optional<Scheme> parse_scheme(const std::string& text) {
  for (const auto& [s, name] : kSchemes)
    if (text == name) return s;
  return std::nullopt;
}

PopularityMatrix PopularitySpec::build(const SystemConfig& config,
                                       std::optional<double> alpha) const {
  if (zipf_alpha) return zipf_popularity(config.content_count, alpha.value_or(*zipf_alpha),
                                         config.sbs_count);
  return PopularityMatrix::from_columns(columns);
}

std::string PopularitySpec::label() const { return zipf_alpha ? "zipf" : "matrix"; }

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  reject_unknown(object_at(j, "scenario"), "",
                 {"K", "N", "M", "Z", "F", "popularity", "scheme", "placement", "sweep",
                  "simulate", "slots", "seed", "exact_oracle", "hetero"});
  for (const char* key : {"K", "N", "M", "Z", "popularity"}) require(j, key);

  Scenario s;
  auto& cfg = s.config;
  cfg.sbs_count = static_cast<int>(as_int(j["K"], "K"));
  cfg.content_count = static_cast<int>(as_int(j["N"], "N"));
  cfg.cache_capacity = static_cast<int>(as_int(j["M"], "M"));
  if (cfg.sbs_count < 1) throw ValidationError("K: must be >= 1");
  if (cfg.content_count < 1) throw ValidationError("N: must be >= 1");
  cfg.users = users_from(j["Z"], "Z", cfg.sbs_count);
  if (j.contains("F")) {
    cfg.content_bits = as_double(j["F"], "F");
    if (!(cfg.content_bits > 0.0)) throw ValidationError("F: must be positive");
  }
  if (auto bad = cfg.check(); !bad.empty()) throw ValidationError("config: " + bad.front());

  s.popularity = parse_popularity(j["popularity"], cfg);
  if (j.contains("scheme")) s.schemes = parse_schemes(j["scheme"]);
  if (j.contains("placement")) s.placement = parse_placement(j["placement"], cfg);

  if (j.contains("sweep")) {
    const auto& sw = j["sweep"];
    reject_unknown(object_at(sw, "sweep"), "sweep", {"alpha", "Z", "M"});
    if (sw.contains("alpha")) {
      s.sweep.alphas = double_range(sw["alpha"], "sweep.alpha");
      if (!s.popularity.zipf_alpha)
        throw ValidationError("sweep.alpha: requires Zipf popularity");
      for (double a : s.sweep.alphas)
        if (!(a >= 0.0)) throw ValidationError("sweep.alpha: exponents must be >= 0");
    }
    if (sw.contains("Z")) {
      const auto& list = as_array(sw["Z"], "sweep.Z");
      for (std::size_t i = 0; i < list.size(); ++i)
        s.sweep.users.push_back(
            users_from(list[i], "sweep.Z[" + std::to_string(i) + "]", cfg.sbs_count));
    }
    if (sw.contains("M")) {
      s.sweep.capacities = int_range(sw["M"], "sweep.M");
      for (int m : s.sweep.capacities)
        if (m < 0 || m > cfg.content_count)
          throw ValidationError("sweep.M: capacity " + std::to_string(m) + " outside 0..N");
    }
  }

  if (j.contains("simulate")) s.simulate = as_bool(j["simulate"], "simulate");
  if (j.contains("slots")) {
    const auto slots = as_int(j["slots"], "slots");
    if (slots < 1) throw ValidationError("slots: must be >= 1");
    s.simulation.slots = static_cast<std::size_t>(slots);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() &&
                                             j["seed"].get<long long>() >= 0))
      throw ParseError("seed: expected a non-negative integer");
    s.simulation.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("exact_oracle")) s.exact_oracle = as_bool(j["exact_oracle"], "exact_oracle");
  if (j.contains("hetero")) {
    const auto& h = j["hetero"];
    reject_unknown(object_at(h, "hetero"), "hetero",
                   {"max_groups", "single_group", "prune_contents", "work_budget"});
    if (h.contains("max_groups")) {
      s.hetero.max_groups = static_cast<int>(as_int(h["max_groups"], "hetero.max_groups"));
      if (s.hetero.max_groups < 1) throw ValidationError("hetero.max_groups: must be >= 1");
    }
    if (h.contains("single_group"))
      s.hetero.single_group = as_bool(h["single_group"], "hetero.single_group");
    if (h.contains("prune_contents"))
      s.hetero.prune_contents = as_bool(h["prune_contents"], "hetero.prune_contents");
    if (h.contains("work_budget")) {
      s.hetero.work_budget = as_double(h["work_budget"], "hetero.work_budget");
      if (!(s.hetero.work_budget > 0.0)) throw ValidationError("hetero.work_budget: must be positive");
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("scenario: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void check_mode(const Scenario& s, Mode mode) {
  const bool needs_placement = mode == Mode::analyze || mode == Mode::simulate;
  if (needs_placement) {
    if (!s.placement) throw ValidationError("placement: required for " + std::string(to_string(mode)));
    if (!s.sweep.empty())
      throw ValidationError("sweep: only valid with the sweep subcommand");
    const auto pop = s.popularity.build(s.config);
    const auto bad = validate(s.config, pop, *s.placement);
    if (!bad.empty()) throw ValidationError("placement: " + bad.front());
  }
  if (mode == Mode::optimize && !s.sweep.empty())
    throw ValidationError("sweep: only valid with the sweep subcommand");
  if (mode == Mode::sweep && s.sweep.empty())
    throw ValidationError("sweep: the sweep subcommand needs at least one axis");
  if ((mode == Mode::optimize || mode == Mode::sweep) && s.placement)
    throw ValidationError("placement: the optimizer chooses the placement; remove the key");
  if (!needs_placement && s.exact_oracle && mode == Mode::sweep)
    throw ValidationError("exact_oracle: not available for sweeps");
}

}  // namespace hcache::cli
