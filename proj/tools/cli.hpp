#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemspace/axioms.hpp"
#include "chemspace/measure.hpp"
#include "chemspace/novelty.hpp"
#include "chemspace/protocols.hpp"
#include "chemspace/synthetic.hpp"

namespace chemspace::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kDefaultMeasures =
    "richness,diversity,sum_diversity,diameter,sum_diameter,bottleneck,sum_bottleneck,dpp,circles:t=0.75";

// ---------------------------------------------------------------- reports

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

inline json json_cell(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

struct Report {
  std::string command;
  json params = json::object();
  Table table;
  json extra = json::object();  // JSON-only detail
};

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
  bool timing = true;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void render(const Report& r, const OutputOptions& opt, std::ostream& out) {
  if (opt.format == "csv") {
    for (std::size_t c = 0; c < r.table.columns.size(); ++c) out << (c ? "," : "") << r.table.columns[c];
    out << '\n';
    for (const auto& row : r.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
      out << '\n';
    }
    return;
  }
  json doc;
  doc["command"] = r.command;
  doc["params"] = r.params;
  json rows = json::array();
  for (const auto& row : r.table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[r.table.columns[c]] = json_cell(row[c]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  for (const auto& [k, v] : r.extra.items()) doc[k] = v;
  if (opt.timing) doc["timestamp"] = utc_timestamp();
  out << doc.dump(2) << '\n';
}

inline void emit(const Report& r, const OutputOptions& opt, std::ostream& out) {
  if (opt.out_path.empty()) {
    render(r, opt, out);
    return;
  }
  std::ofstream file(opt.out_path);
  if (!file) throw Error("cannot write '" + opt.out_path + "'");
  render(r, opt, file);
}

// ---------------------------------------------------------------- helpers

inline FingerprintFormat parse_fp_format(const std::string& s) {
  if (s == "auto") return FingerprintFormat::automatic;
  if (s == "hex") return FingerprintFormat::hex;
  if (s == "bits") return FingerprintFormat::bits;
  throw ParseError("unknown fingerprint format '" + s + "' (expected auto, hex or bits)");
}

inline std::optional<std::size_t> exact_cap_from_env() {
  const char* v = std::getenv("CHEMSPACE_EXACT_CAP");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return static_cast<std::size_t>(detail::parse_uint("CHEMSPACE_EXACT_CAP", v));
}

inline bool has_param(const MeasureSpec& s, const char* key) {
  for (const auto& p : s.params) {
    if (p.first == key) return true;
  }
  return false;
}

// Fills run-level defaults into specs that did not set them: the run seed for
// greedy circles, the exact-size cap from the environment, coverage universes.
inline void apply_run_defaults(std::vector<MeasureSpec>& specs, std::uint64_t seed) {
  const auto cap = exact_cap_from_env();
  for (auto& s : specs) {
    if (s.kind == MeasureKind::circles) {
      if (!has_param(s, "seed")) s.circles.seed = seed;
      if (cap && !has_param(s, "cap")) s.circles.exact_cap = *cap;
    }
    if (s.kind == MeasureKind::coverage && s.universe_path) {
      const auto ids = load_universe(*s.universe_path);
      s.reference.universe = std::unordered_set<std::string>(ids.begin(), ids.end());
    }
  }
}

inline std::string meta_to_string(const MetaValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else {
          return std::to_string(x);
        }
      },
      v);
}

inline std::string metadata_string(const std::map<std::string, MetaValue>& meta) {
  std::string out;
  for (const auto& [k, v] : meta) {
    if (!out.empty()) out += ';';
    out += k + "=" + meta_to_string(v);
  }
  return out;
}

inline json specs_json(const std::vector<MeasureSpec>& specs) {
  json a = json::array();
  for (const auto& s : specs) a.push_back(s.label());
  return a;
}

// "0.3:0.95:0.05" (inclusive) or "0.5,0.7,0.75".
inline std::vector<double> parse_t_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = detail::split(text, ':');
    if (parts.size() != 3) throw ParseError("t grid range must be start:stop:step");
    const double start = detail::parse_real("t-grid", detail::trim(parts[0]));
    const double stop = detail::parse_real("t-grid", detail::trim(parts[1]));
    const double step = detail::parse_real("t-grid", detail::trim(parts[2]));
    if (!(step > 0)) throw ParseError("t grid step must be positive");
    for (std::size_t k = 0;; ++k) {
      const double t = std::round((start + static_cast<double>(k) * step) * 1e9) / 1e9;
      if (t > stop + 1e-12) break;
      grid.push_back(t);
    }
  } else {
    for (auto item : detail::split(text, ',')) {
      item = detail::trim(item);
      if (!item.empty()) grid.push_back(detail::parse_real("t-grid", item));
    }
  }
  if (grid.empty()) throw ParseError("t grid is empty");
  for (double t : grid) {
    if (!(t >= 0.0 && t < 1.0)) throw ValidationError("t grid value " + format_double(t) + " outside [0, 1)");
  }
  return grid;
}

inline std::vector<std::string> split_paths(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    for (auto p : detail::split(r, ',')) {
      p = detail::trim(p);
      if (!p.empty()) out.emplace_back(p);
    }
  }
  return out;
}

inline void add_score_rows(Table& t, const std::vector<ScoreRow>& rows, bool with_degenerate) {
  t.columns = {"measure", "statistic", "value"};
  for (const auto& r : rows) {
    t.rows.push_back({r.measure, std::string("mean"), r.summary.mean});
    t.rows.push_back({r.measure, std::string("std"), r.summary.stddev});
    if (with_degenerate) {
      t.rows.push_back({r.measure, std::string("degenerate_runs"), static_cast<std::int64_t>(r.degenerate_runs)});
    }
    for (std::size_t k = 0; k < r.per_run.size(); ++k) {
      t.rows.push_back({r.measure, "run" + std::to_string(k), r.per_run[k]});
    }
  }
}

inline json verdict_json(const Verdict& v) {
  json j;
  j["holds"] = v.holds;
  j["verdict"] = v.describe();
  j["trials"] = v.trials;
  if (v.counterexample) {
    const auto& cx = *v.counterexample;
    json c;
    c["property"] = cx.property;
    c["construction"] = cx.construction;
    c["trial"] = cx.trial;
    c["matrix"] = cx.universe.matrix;
    if (cx.universe.fragments) c["fragments"] = *cx.universe.fragments;
    c["s1"] = cx.s1;
    c["s2"] = cx.s2;
    c["mu1"] = cx.mu1;
    c["mu2"] = cx.mu2;
    if (cx.property == "dissimilarity") {
      c["a"] = cx.a;
      c["delta"] = cx.delta;
    } else {
      c["mu_union"] = cx.mu_union;
    }
    j["counterexample"] = std::move(c);
  }
  return j;
}

// ---------------------------------------------------------------- commands

struct Common {
  OutputOptions output;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string fp_format = "auto";
};

struct MeasureArgs {
  std::string in;
  std::string matrix;
  std::string measures = kDefaultMeasures;
};

inline Report cmd_measure(const MeasureArgs& a, const Common& c, std::ostream& err) {
  auto specs = parse_measure_list(a.measures);
  apply_run_defaults(specs, c.seed);
  const auto ds = load_dataset(a.in, parse_fp_format(c.fp_format));
  Report r;
  r.command = "measure";
  r.params["in"] = a.in;
  r.params["measures"] = specs_json(specs);
  r.params["seed"] = c.seed;
  r.params["records"] = ds.size();
  r.table.columns = {"measure", "value", "set_size", "mode", "metadata"};
  if (c.output.timing) r.table.columns.push_back("wall_ms");
  if (ds.empty()) {
    err << "warning: '" << a.in << "' has no records; every measure is 0\n";
    for (const auto& s : specs) {
      std::vector<Cell> row{s.label(), 0.0, std::int64_t{0}, std::string(), std::string()};
      if (c.output.timing) row.emplace_back(0.0);
      r.table.rows.push_back(std::move(row));
    }
    return r;
  }
  const auto oracle = a.matrix.empty() ? build_oracle(ds) : build_oracle(ds, a.matrix);
  const auto all = MoleculeSet::all(ds.size());
  for (const auto& s : specs) {
    const auto start = std::chrono::steady_clock::now();
    const auto res = evaluate(s, oracle, all, {&ds});
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::string mode;
    if (auto it = res.metadata.find("mode"); it != res.metadata.end()) mode = meta_to_string(it->second);
    std::vector<Cell> row{s.label(), res.value, static_cast<std::int64_t>(res.set_size), mode,
                          metadata_string(res.metadata)};
    if (c.output.timing) row.emplace_back(ms);
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

struct CompareArgs {
  std::vector<std::string> in;
  std::string measures = kDefaultMeasures;
  std::size_t repeats = 5;
};

inline Report cmd_compare(const CompareArgs& a, const Common& c, std::ostream& err) {
  const auto paths = split_paths(a.in);
  if (paths.empty()) throw ValidationError("compare needs at least one dataset");
  if (a.repeats == 0) throw ValidationError("repeats must be positive");
  auto specs = parse_measure_list(a.measures);
  apply_run_defaults(specs, c.seed);
  Report r;
  r.command = "compare";
  r.params["in"] = paths;
  r.params["measures"] = specs_json(specs);
  r.params["seed"] = c.seed;
  r.params["repeats"] = a.repeats;
  r.table.columns = {"dataset", "measure", "mean", "rel_dev_pct", "mode", "repeats"};
  json matrix = json::array();
  for (const auto& path : paths) {
    const auto ds = load_dataset(path, parse_fp_format(c.fp_format));
    json means = json::array();
    if (ds.empty()) err << "warning: '" << path << "' has no records; every measure is 0\n";
    for (const auto& s : specs) {
      std::vector<double> values;
      std::string mode;
      if (!ds.empty()) {
        const auto oracle = build_oracle(ds);
        const auto all = MoleculeSet::all(ds.size());
        auto res = evaluate(s, oracle, all, {&ds});
        values.push_back(res.value);
        if (auto it = res.metadata.find("mode"); it != res.metadata.end()) mode = meta_to_string(it->second);
        // greedy circles depend on the seed: repeat over derived seeds
        if (mode == "greedy" && !has_param(s, "seed")) {
          for (std::size_t k = 1; k < a.repeats; ++k) {
            auto rs = s;
            rs.circles.seed = derive_seed(c.seed, k);
            values.push_back(evaluate(rs, oracle, all, {&ds}).value);
          }
        }
      } else {
        values.push_back(0.0);
      }
      const auto sum = summarize(values);
      const double rel = sum.mean == 0.0 ? 0.0 : 100.0 * sum.stddev / sum.mean;
      r.table.rows.push_back({path, s.label(), sum.mean, rel, mode, static_cast<std::int64_t>(values.size())});
      means.push_back(sum.mean);
    }
    matrix.push_back(std::move(means));
  }
  r.extra["matrix"] = {{"datasets", paths}, {"measures", specs_json(specs)}, {"mean", matrix}};
  return r;
}

struct AxiomArgs {
  std::size_t trials = 1000;
  std::string measures;
  bool corollaries = false;
};

inline Report cmd_axiom_check(const AxiomArgs& a, const Common& c, bool& matches) {
  auto specs = a.measures.empty() ? default_axiom_measures() : parse_measure_list(a.measures);
  apply_run_defaults(specs, c.seed);
  const auto table = quadrant_table(specs, a.trials, c.seed, c.jobs);
  Report r;
  r.command = "axiom-check";
  r.params["trials"] = a.trials;
  r.params["seed"] = c.seed;
  r.params["measures"] = specs_json(specs);
  r.table.columns = {"measure",    "subadditive",          "dissimilar",          "expected_subadditive",
                     "expected_dissimilar", "matches", "subadditive_verdict", "dissimilar_verdict"};
  json details = json::array();
  matches = true;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto& row = table[k];
    const auto expected = expected_quadrant(row.measure.kind);
    matches = matches && row.matches_expected();
    r.table.rows.push_back({row.measure.label(), row.subadditive.holds, row.dissimilar.holds, expected.subadditive,
                            expected.dissimilar, row.matches_expected(), row.subadditive.describe(),
                            row.dissimilar.describe()});
    json d;
    d["measure"] = row.measure.label();
    d["subadditivity"] = verdict_json(row.subadditive);
    d["dissimilarity"] = verdict_json(row.dissimilar);
    if (a.corollaries) {
      const auto cor = check_corollaries(specs[k], a.trials, c.seed);
      d["corollaries"] = {{"subtraction", verdict_json(cor.subtraction)},
                          {"monotonicity", verdict_json(cor.monotonicity)},
                          {"dominance", verdict_json(cor.dominance)}};
    }
    details.push_back(std::move(d));
  }
  r.extra["matches_expected"] = matches;
  r.extra["details"] = std::move(details);
  return r;
}

struct ProtocolArgs {
  std::string in;
  std::string measures;
  std::optional<std::size_t> n;
  std::size_t repeats = 1000;
  std::size_t runs = 10;
  std::string bias = "similar";
  double power = 10.0;
  bool normalize = false;
  std::string curves;
  std::string protocol = "fixed";
  std::string t_grid = "0.3:0.95:0.05";
};

inline ProtocolConfig protocol_config(const ProtocolArgs& a, const Common& c, std::size_t default_n) {
  ProtocolConfig cfg;
  cfg.n = a.n.value_or(default_n);
  cfg.repeats = a.repeats;
  cfg.runs = a.runs;
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  cfg.bias = parse_growth_bias(a.bias);
  cfg.bias_power = a.power;
  cfg.normalize = a.normalize;
  return cfg;
}

inline json protocol_params(const ProtocolConfig& cfg, const std::string& in, bool growing) {
  json p;
  p["in"] = in;
  p["n"] = cfg.n;
  if (!growing) p["repeats"] = cfg.repeats;
  p["runs"] = cfg.runs;
  p["seed"] = cfg.seed;
  if (growing) {
    p["bias"] = std::string(to_string(cfg.bias));
    p["bias_power"] = cfg.bias_power;
    p["normalize"] = cfg.normalize;
  }
  return p;
}

inline std::vector<MeasureSpec> protocol_specs(const std::string& text, const Dataset& ds, std::uint64_t seed) {
  std::vector<MeasureSpec> specs;
  if (text.empty()) {
    specs = parse_measure_list(kDefaultMeasures);
    if (!ds.empty() && ds.all_annotated()) specs.push_back(MeasureSpec::make(MeasureKind::coverage));
  } else {
    specs = parse_measure_list(text);
  }
  apply_run_defaults(specs, seed);
  return specs;
}

inline Report cmd_corr_fixed(const ProtocolArgs& a, const Common& c) {
  const auto ds = load_dataset(a.in, parse_fp_format(c.fp_format));
  const auto specs = protocol_specs(a.measures, ds, c.seed);
  const auto cfg = protocol_config(a, c, 200);
  const auto oracle = build_oracle(ds);
  const auto res = oracle.visit([&](const auto& o) { return protocol_fixed(ds, o, specs, cfg); });
  Report r;
  r.command = "corr-fixed";
  r.params = protocol_params(cfg, a.in, false);
  r.params["measures"] = specs_json(specs);
  add_score_rows(r.table, res.rows, true);
  return r;
}

inline void write_curves(const std::string& path, const GrowingResult& res) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << "run,step";
  for (const auto& m : res.curves.front().measures) out << ',' << csv_escape(m);
  out << '\n';
  for (std::size_t run = 0; run < res.curves.size(); ++run) {
    const auto& c = res.curves[run];
    for (std::size_t step = 0; step < c.order.size(); ++step) {
      out << run << ',' << step + 1;
      for (const auto& series : c.values) out << ',' << format_double(series[step]);
      out << '\n';
    }
  }
}

inline Report cmd_corr_growing(const ProtocolArgs& a, const Common& c) {
  const auto ds = load_dataset(a.in, parse_fp_format(c.fp_format));
  const auto specs = protocol_specs(a.measures, ds, c.seed);
  const auto cfg = protocol_config(a, c, 500);
  const auto oracle = build_oracle(ds);
  const auto res = oracle.visit([&](const auto& o) { return protocol_growing(ds, o, specs, cfg); });
  if (!a.curves.empty()) write_curves(a.curves, res);
  Report r;
  r.command = "corr-growing";
  r.params = protocol_params(cfg, a.in, true);
  r.params["measures"] = specs_json(specs);
  add_score_rows(r.table, res.rows, false);
  return r;
}

inline Report cmd_sweep_t(const ProtocolArgs& a, const Common& c) {
  const auto ds = load_dataset(a.in, parse_fp_format(c.fp_format));
  std::vector<MeasureSpec> extra;
  if (!a.measures.empty()) extra = protocol_specs(a.measures, ds, c.seed);
  ProtocolKind kind;
  if (a.protocol == "fixed") {
    kind = ProtocolKind::fixed;
  } else if (a.protocol == "growing") {
    kind = ProtocolKind::growing;
  } else {
    throw ParseError("unknown protocol '" + a.protocol + "' (expected fixed or growing)");
  }
  const auto grid = parse_t_grid(a.t_grid);
  const auto cfg = protocol_config(a, c, kind == ProtocolKind::fixed ? 200 : 500);
  CirclesParams base;
  base.seed = c.seed;
  if (const auto cap = exact_cap_from_env()) base.exact_cap = *cap;
  const auto oracle = build_oracle(ds);
  const auto res =
      oracle.visit([&](const auto& o) { return threshold_sweep(ds, o, kind, grid, cfg, extra, base); });
  Report r;
  r.command = "sweep-t";
  r.params = protocol_params(cfg, a.in, kind == ProtocolKind::growing);
  r.params["protocol"] = a.protocol;
  r.params["t_grid"] = grid;
  r.params["measures"] = specs_json(extra);
  add_score_rows(r.table, res.rows, kind == ProtocolKind::fixed);
  r.table.rows.push_back({std::string("best"), std::string("t"), grid[res.best]});
  r.extra["best_t"] = grid[res.best];
  return r;
}

struct SyntheticArgs {
  SyntheticConfig config;
  bool no_fragments = false;
};

inline void cmd_gen_synthetic(const SyntheticArgs& a, const Common& c, std::ostream& out) {
  auto cfg = a.config;
  cfg.fragments = !a.no_fragments;
  const auto ds = generate_synthetic(cfg, c.seed);
  if (c.output.out_path.empty()) {
    write_dataset(out, ds);
    return;
  }
  std::ofstream file(c.output.out_path);
  if (!file) throw Error("cannot write '" + c.output.out_path + "'");
  write_dataset(file, ds);
}

struct NoveltyArgs {
  std::string ref;
  double t = 0.6;
  std::string score = "circles";
  std::string against = "population";
};

inline void cmd_novelty(const NoveltyArgs& a, const Common& c, std::istream& in, std::ostream& out) {
  const auto ds = load_dataset(a.ref, parse_fp_format(c.fp_format));
  if (a.score != "circles" && a.score != "diversity" && a.score != "sumbottleneck") {
    throw ParseError("unknown novelty score '" + a.score + "' (expected circles, diversity or sumbottleneck)");
  }
  NoveltyReference against;
  if (a.against == "population") {
    against = NoveltyReference::population;
  } else if (a.against == "centers") {
    against = NoveltyReference::centers;
  } else {
    throw ParseError("unknown reference '" + a.against + "' (expected population or centers)");
  }
  const NoveltyScorer scorer(ds.fingerprints(), a.t, against, c.seed);
  const auto fmt = parse_fp_format(c.fp_format);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = detail::trim(line);
    if (v.empty() || v.front() == '#') continue;
    if (const auto tab = v.find('\t'); tab != std::string_view::npos) {
      const auto cols = detail::split(v, '\t');
      v = detail::trim(cols[1]);
    }
    Fingerprint fp;
    try {
      const bool bits = fmt == FingerprintFormat::bits ||
                        (fmt == FingerprintFormat::automatic && detail::is_bitstring(v) && v.size() == ds.width());
      fp = bits ? Fingerprint::from_bits(v) : Fingerprint::from_hex(v);
      if (fp.width() != ds.width()) {
        throw DimensionError("width " + std::to_string(fp.width()) + ", reference width " +
                             std::to_string(ds.width()));
      }
    } catch (const Error& e) {
      throw ParseError("stdin line " + std::to_string(lineno) + ": " + e.what());
    }
    if (a.score == "circles") {
      out << scorer.circles(fp) << '\n';
    } else if (a.score == "diversity") {
      out << format_double(scorer.diversity(fp)) << '\n';
    } else {
      out << format_double(scorer.sumbottleneck(fp)) << '\n';
    }
    out.flush();
  }
}

// ---------------------------------------------------------------- entry

inline void add_common(CLI::App* sub, Common& c, bool report = true) {
  sub->add_option("--seed", c.seed, "Random seed (default 0)");
  sub->add_option("--fp-format", c.fp_format, "Fingerprint encoding: auto, hex or bits")
      ->check(CLI::IsMember({"auto", "hex", "bits"}));
  sub->add_option("--out", c.output.out_path, "Write output to this file instead of stdout");
  if (!report) return;
  sub->add_option("--format", c.output.format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("!--no-timing", c.output.timing, "Omit timestamp and wall-time fields");
}

inline void add_protocol(CLI::App* sub, ProtocolArgs& p) {
  sub->add_option("--in", p.in, "Labeled dataset TSV")->required();
  sub->add_option("--measures", p.measures, "Measure list, e.g. richness,circles:t=0.75");
  sub->add_option("--n", p.n, "Subset size");
  sub->add_option("--runs", p.runs, "Independent runs")->check(CLI::PositiveNumber);
}

inline int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverage measures of chemical space over binary fingerprints", "chemspace"};
  app.require_subcommand(1);
  Common common;

  MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Evaluate measures on a dataset");
  m->add_option("--in", measure.in, "Dataset TSV")->required();
  m->add_option("--matrix", measure.matrix, "Explicit distance matrix CSV instead of Tanimoto");
  m->add_option("--measures", measure.measures, "Measure list");
  add_common(m, common);

  CompareArgs compare;
  auto* cmp = app.add_subcommand("compare", "Evaluate a measure grid over several datasets");
  cmp->add_option("--in", compare.in, "Dataset TSVs (repeat or comma-separate)")->required();
  cmp->add_option("--measures", compare.measures, "Measure list");
  cmp->add_option("--repeats", compare.repeats, "Seeds per stochastic measure")->check(CLI::PositiveNumber);
  add_common(cmp, common);

  AxiomArgs axiom;
  auto* ax = app.add_subcommand("axiom-check", "Check subadditivity and dissimilarity for each measure");
  ax->add_option("--trials", axiom.trials, "Random trials per measure")->check(CLI::PositiveNumber);
  ax->add_option("--measures", axiom.measures, "Measure list (default: every measure, circles at t=0.5)");
  ax->add_flag("--corollaries", axiom.corollaries, "Also check subtraction, monotonicity and dominance");
  add_common(ax, common);

  ProtocolArgs fixed;
  auto* cf = app.add_subcommand("corr-fixed", "Fixed-size correlation protocol (Spearman vs. gold standard)");
  add_protocol(cf, fixed);
  cf->add_option("--repeats", fixed.repeats, "Subsets per run")->check(CLI::Range(2, 1 << 30));
  add_common(cf, common);

  ProtocolArgs growing;
  auto* cg = app.add_subcommand("corr-growing", "Growing-size protocol (DTW vs. gold standard)");
  add_protocol(cg, growing);
  cg->add_option("--bias", growing.bias, "uniform, similar or most-similar")
      ->check(CLI::IsMember({"uniform", "similar", "most-similar"}));
  cg->add_option("--power", growing.power, "Exponent of the similar bias");
  cg->add_flag("--normalize", growing.normalize, "z-normalize incremental curves before DTW");
  cg->add_option("--curves", growing.curves, "Write per-step cumulative curves to this CSV");
  add_common(cg, common);

  ProtocolArgs sweep;
  auto* sw = app.add_subcommand("sweep-t", "Sweep the #Circles threshold under a protocol");
  add_protocol(sw, sweep);
  sw->add_option("--protocol", sweep.protocol, "fixed or growing")->check(CLI::IsMember({"fixed", "growing"}));
  sw->add_option("--t-grid", sweep.t_grid, "start:stop:step or comma list");
  sw->add_option("--repeats", sweep.repeats, "Subsets per run (fixed)")->check(CLI::Range(2, 1 << 30));
  sw->add_option("--bias", sweep.bias, "uniform, similar or most-similar (growing)")
      ->check(CLI::IsMember({"uniform", "similar", "most-similar"}));
  sw->add_option("--power", sweep.power, "Exponent of the similar bias");
  sw->add_flag("--normalize", sweep.normalize, "z-normalize incremental curves before DTW");
  add_common(sw, common);

  SyntheticArgs synthetic;
  auto* gs = app.add_subcommand("gen-synthetic", "Write a labeled synthetic dataset TSV");
  gs->add_option("--classes", synthetic.config.classes)->check(CLI::PositiveNumber);
  gs->add_option("--per-class", synthetic.config.per_class)->check(CLI::PositiveNumber);
  gs->add_option("--width", synthetic.config.width)->check(CLI::PositiveNumber);
  gs->add_option("--core-bits", synthetic.config.core_bits);
  gs->add_option("--flip-prob", synthetic.config.flip_prob)->check(CLI::Range(0.0, 1.0));
  gs->add_flag("--no-fragments", synthetic.no_fragments, "Leave out the fragment column");
  add_common(gs, common, false);

  NoveltyArgs novelty;
  auto* nv = app.add_subcommand("novelty", "Score candidate fingerprints read from stdin");
  nv->add_option("--ref", novelty.ref, "Reference dataset TSV")->required();
  nv->add_option("--t", novelty.t, "#Circles threshold");
  nv->add_option("--score", novelty.score, "circles, diversity or sumbottleneck")
      ->check(CLI::IsMember({"circles", "diversity", "sumbottleneck"}));
  nv->add_option("--against", novelty.against, "population or centers")
      ->check(CLI::IsMember({"population", "centers"}));
  add_common(nv, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (m->parsed()) {
      emit(cmd_measure(measure, common, err), common.output, out);
    } else if (cmp->parsed()) {
      emit(cmd_compare(compare, common, err), common.output, out);
    } else if (ax->parsed()) {
      bool matches = true;
      emit(cmd_axiom_check(axiom, common, matches), common.output, out);
      if (!matches) {
        err << "error: quadrant table deviates from the expected classification\n";
        return 3;
      }
    } else if (cf->parsed()) {
      emit(cmd_corr_fixed(fixed, common), common.output, out);
    } else if (cg->parsed()) {
      emit(cmd_corr_growing(growing, common), common.output, out);
    } else if (sw->parsed()) {
      emit(cmd_sweep_t(sweep, common), common.output, out);
    } else if (gs->parsed()) {
      cmd_gen_synthetic(synthetic, common, out);
    } else if (nv->parsed()) {
      cmd_novelty(novelty, common, in, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace chemspace::cli
