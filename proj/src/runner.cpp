#include "hcache/runner.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>

#include <omp.h>

#include <json.hpp>

#include "hcache/oracle.hpp"

#ifndef HCACHE_VERSION
#define HCACHE_VERSION "dev"
#endif

namespace hcache::cli {

namespace {

struct SchemeResult {
  Placement placement;
  LoadReport load;
  std::size_t evaluated = 0;
};

SchemeResult optimize_scheme(const SystemConfig& config, const PopularityMatrix& pop,
                             Scheme scheme, HeteroSearchOptions hetero, Execution execution) {
  hetero.execution = execution;
  SearchOptions search{execution, false};
  auto hybrid = [](const SearchResult<HybridPlacement>& r) {
    return SchemeResult{r.best, r.load, r.evaluated};
  };
  auto het = [](const SearchResult<HeteroPlacement>& r) {
    return SchemeResult{r.best, r.load, r.evaluated};
  };
  // SBS-dependent popularity routes every scheme through the group search.
  const bool homogeneous = pop.homogeneous();
  switch (scheme) {
    case Scheme::hybrid:
      if (homogeneous) return hybrid(optimize_hybrid(config, pop, search));
      return het(optimize_hetero(config, pop, hetero));
    case Scheme::pure_coded:
      if (homogeneous) return hybrid(optimize_pure_coded(config, pop, {search, std::nullopt}));
      hetero.pure_coded = true;
      return het(optimize_hetero(config, pop, hetero));
    case Scheme::pure_uncoded:
      if (homogeneous) return hybrid(optimize_pure_uncoded(config, pop));
      return het(optimize_pure_uncoded_hetero(config, pop, hetero.work_budget));
    case Scheme::hetero:
      return het(optimize_hetero(config, pop, hetero));
  }
  throw std::logic_error("unknown scheme");
}

Scheme classify(const SystemConfig& config, const Placement& placement) {
  if (const auto* h = std::get_if<HybridPlacement>(&placement)) {
    if (h->pure_uncoded(config)) return Scheme::pure_uncoded;
    if (h->full == 0) return Scheme::pure_coded;
    return Scheme::hybrid;
  }
  return Scheme::hetero;
}

void finish_row(ResultRow& row, const Scenario& s, const PopularityMatrix& pop, bool simulate,
                bool exact, Execution execution) {
  row.seed = s.simulation.seed;
  if (simulate) {
    auto options = s.simulation;
    options.execution = execution;
    options.keep_trace = false;
    row.simulated = hcache::simulate(row.config, pop, row.placement, options);
  }
  if (exact) row.exact_r = oracle::exact_expected_load(row.config, pop, row.placement).r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// Hybrid view of any placement: uncoded slots and distinct cached contents
// per SBS, when they agree across SBSs.
std::pair<std::optional<int>, std::optional<int>> split_columns(const SystemConfig& config,
                                                                const Placement& placement) {
  if (const auto* h = std::get_if<HybridPlacement>(&placement)) return {h->full, h->cached};
  const auto& p = std::get<HeteroPlacement>(placement);
  std::optional<int> m1, n1;
  for (int c = 0; c < config.sbs_count; ++c) {
    const int uncoded = p.uncoded_capacity(c);
    int cached = uncoded;
    for (const auto& g : p.groups)
      if (g.contains_sbs(c)) cached += g.library();
    if (c == 0) {
      m1 = uncoded;
      n1 = cached;
      continue;
    }
    if (m1 && *m1 != uncoded) m1.reset();
    if (n1 && *n1 != cached) n1.reset();
  }
  return {m1, n1};
}

std::string replication_text(const SystemConfig& config, const Placement& placement) {
  if (const auto* h = std::get_if<HybridPlacement>(&placement)) {
    const auto t = h->replication(config);
    return t ? std::to_string(*t) : "";
  }
  std::string out;
  for (const auto& g : std::get<HeteroPlacement>(placement).groups) {
    const auto t = g.replication();
    if (!out.empty()) out += ' ';
    out += t ? std::to_string(*t) : "?";
  }
  return out;
}

void write_meta(const std::string& path, const RunOptions& options, const Scenario& s,
                std::size_t rows, double seconds, int threads) {
  nlohmann::ordered_json meta;
  meta["version"] = HCACHE_VERSION;
  meta["mode"] = to_string(options.mode);
  meta["scenario"] = options.scenario_path;
  meta["seed"] = s.simulation.seed;
  meta["slots"] = s.simulation.slots;
  meta["simulate"] = s.simulate;
  meta["threads"] = threads;
  meta["rows"] = rows;
  meta["elapsed_seconds"] = seconds;
  meta["compiler"] = __VERSION__;
  meta["openmp"] = _OPENMP;
  std::ofstream(path) << meta.dump(2) << '\n';
}

}  // namespace

std::string placement_text(const Placement& placement) {
  if (const auto* h = std::get_if<HybridPlacement>(&placement))
    return "M1=" + std::to_string(h->full) + ";N1=" + std::to_string(h->cached);
  return std::get<HeteroPlacement>(placement).describe();
}

std::vector<ResultRow> execute(const Scenario& s, Mode mode, Execution execution) {
  check_mode(s, mode);
  const bool simulate = s.simulate || mode == Mode::simulate;

  if (mode == Mode::analyze || mode == Mode::simulate) {
    const auto pop = s.popularity.build(s.config);
    ResultRow row;
    row.mode = mode;
    row.scheme = classify(s.config, *s.placement);
    row.config = s.config;
    row.popularity = s.popularity.label();
    row.alpha = s.popularity.zipf_alpha;
    row.placement = *s.placement;
    row.load = total_load(s.config, pop, *s.placement);
    finish_row(row, s, pop, simulate, s.exact_oracle, execution);
    return {row};
  }

  // Sweep points in key order; an absent axis contributes its base value.
  struct Point {
    std::optional<double> alpha;
    SystemConfig config;
    Scheme scheme;
  };
  std::vector<std::optional<double>> alphas;
  if (s.sweep.alphas.empty()) alphas.push_back(s.popularity.zipf_alpha);
  for (double a : s.sweep.alphas) alphas.emplace_back(a);
  auto users = s.sweep.users;
  if (users.empty()) users.push_back(s.config.users);
  auto capacities = s.sweep.capacities;
  if (capacities.empty()) capacities.push_back(s.config.cache_capacity);

  std::vector<Point> points;
  for (const auto& a : alphas)
    for (const auto& z : users)
      for (int m : capacities)
        for (Scheme scheme : s.schemes) {
          Point p{a, s.config, scheme};
          p.config.users = z;
          p.config.cache_capacity = m;
          points.push_back(std::move(p));
        }

  std::vector<ResultRow> rows(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  auto one = [&](std::size_t i, Execution inner) {
    try {
      const auto& p = points[i];
      const auto pop = s.popularity.build(p.config, p.alpha);
      auto res = optimize_scheme(p.config, pop, p.scheme, s.hetero, inner);
      auto& row = rows[i];
      row.mode = mode;
      row.scheme = p.scheme;
      row.config = p.config;
      row.popularity = s.popularity.label();
      row.alpha = p.alpha;
      row.placement = std::move(res.placement);
      row.load = std::move(res.load);
      row.evaluated = res.evaluated;
      finish_row(row, s, pop, simulate, s.exact_oracle, inner);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const long n = static_cast<long>(points.size());
  if (execution == Execution::parallel && n > 1) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) one(i, Execution::serial);
  } else {
    for (long i = 0; i < n; ++i) one(i, execution);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string csv_header() {
  return "mode,scheme,K,N,M,F,Z,sigma_Z,popularity,alpha,placement,M1,N1,T,evaluated,"
         "r1,r2,r,r_bits,sim_slots,seed,sim_r1,sim_r2,sim_r,sim_se_r,exact_r\n";
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header();
  for (const auto& row : rows) {
    const auto& cfg = row.config;
    std::string z;
    for (int v : cfg.users) z += (z.empty() ? "" : " ") + std::to_string(v);
    const auto [m1, n1] = split_columns(cfg, row.placement);
    auto opt_int = [](std::optional<int> v) { return v ? std::to_string(*v) : std::string(); };
    std::vector<std::string> cells = {
        to_string(row.mode),
        to_string(row.scheme),
        std::to_string(cfg.sbs_count),
        std::to_string(cfg.content_count),
        std::to_string(cfg.cache_capacity),
        format_double(cfg.content_bits),
        z,
        format_double(users_stddev(cfg)),
        row.popularity,
        row.alpha ? format_double(*row.alpha) : "",
        quoted(placement_text(row.placement)),
        opt_int(m1),
        opt_int(n1),
        replication_text(cfg, row.placement),
        std::to_string(row.evaluated),
        format_double(row.load.r1),
        format_double(row.load.r2),
        format_double(row.load.r),
        format_double(row.load.r * cfg.content_bits),
    };
    if (row.simulated) {
      cells.push_back(std::to_string(row.simulated->slots));
      cells.push_back(std::to_string(row.seed));
      cells.push_back(format_double(row.simulated->mean_r1));
      cells.push_back(format_double(row.simulated->mean_r2));
      cells.push_back(format_double(row.simulated->mean_r));
      cells.push_back(format_double(row.simulated->se_r));
    } else {
      cells.insert(cells.end(), 6, "");
    }
    cells.push_back(row.exact_r ? format_double(*row.exact_r) : "");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    auto s = load_scenario(options.scenario_path);
    if (options.seed) s.simulation.seed = *options.seed;
    if (options.slots) {
      if (*options.slots == 0) throw ValidationError("--slots: must be >= 1");
      s.simulation.slots = *options.slots;
    }
    if (options.exact_oracle) s.exact_oracle = true;
    if (options.threads < 0) throw ValidationError("--threads: must be >= 0");
    if (options.threads > 0) omp_set_num_threads(options.threads);
    const auto execution = options.threads == 1 ? Execution::serial : Execution::parallel;

    const auto rows = execute(s, options.mode, execution);
    const auto csv = to_csv(rows);
    if (options.out.empty()) {
      out << csv;
    } else {
      std::ofstream file(options.out, std::ios::binary);
      if (!file) throw ValidationError("--out: cannot write '" + options.out + "'");
      file << csv;
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      write_meta(options.out + ".meta.json", options, s, rows.size(), seconds,
                 execution == Execution::serial ? 1 : omp_get_max_threads());
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InstanceTooLarge& e) {
    err << "instance too large: " << e.what() << '\n';
    return kExitTooLarge;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace hcache::cli
