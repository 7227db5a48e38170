#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chemspace/dataset.hpp"
#include "chemspace/error.hpp"
#include "chemspace/incremental.hpp"
#include "chemspace/measure.hpp"
#include "chemspace/oracle.hpp"
#include "chemspace/parallel.hpp"
#include "chemspace/random.hpp"
#include "chemspace/stats.hpp"

namespace chemspace {

enum class GrowthBias { uniform, similar, most_similar };

inline std::string_view to_string(GrowthBias b) {
  switch (b) {
    case GrowthBias::uniform: return "uniform";
    case GrowthBias::similar: return "similar";
    case GrowthBias::most_similar: return "most-similar";
  }
  return "?";
}

inline GrowthBias parse_growth_bias(std::string_view s) {
  if (s == "uniform") return GrowthBias::uniform;
  if (s == "similar") return GrowthBias::similar;
  if (s == "most-similar" || s == "most_similar") return GrowthBias::most_similar;
  throw ParseError("unknown bias '" + std::string(s) + "' (expected uniform, similar or most-similar)");
}

struct ProtocolConfig {
  std::size_t n = 200;
  std::size_t repeats = 1000;  // fixed-size protocol only
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  std::size_t max_retries = 1000;
  std::size_t jobs = 1;
  GrowthBias bias = GrowthBias::similar;
  double bias_power = 10.0;
  bool normalize = false;  // z-normalize incremental curves before DTW

  void validate() const {
    if (n == 0) throw ValidationError("subset size n must be positive");
    if (runs == 0) throw ValidationError("runs must be positive");
    if (!(bias_power >= 0.0)) throw ValidationError("bias power must be non-negative");
  }
};

// Molecules grouped by class label, in order of first appearance.
struct LabelIndex {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> label_of;  // per record

  explicit LabelIndex(const Dataset& ds) {
    std::map<std::string, std::size_t> ids;
    label_of.resize(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (!ds[i].label) throw ValidationError("record '" + ds[i].id + "' has no class label");
      auto [it, fresh] = ids.emplace(*ds[i].label, labels.size());
      if (fresh) {
        labels.push_back(*ds[i].label);
        members.emplace_back();
      }
      members[it->second].push_back(i);
      label_of[i] = it->second;
    }
  }
};

// Number of distinct class labels in S.
inline std::size_t gold_standard(const LabelIndex& idx, std::span<const std::size_t> set) {
  std::vector<char> seen(idx.labels.size(), 0);
  std::size_t count = 0;
  for (std::size_t i : set) {
    if (!seen[idx.label_of[i]]) {
      seen[idx.label_of[i]] = 1;
      ++count;
    }
  }
  return count;
}

inline std::size_t gold_standard(const Dataset& ds, const MoleculeSet& set) {
  return gold_standard(LabelIndex(ds), set.indices());
}

namespace detail {

// m ~ U{1..L}, then m labels; retried until their molecules number at least n.
inline std::vector<std::size_t> draw_label_pool(const LabelIndex& idx, std::size_t n, Rng& rng,
                                                std::size_t max_retries) {
  const std::size_t L = idx.labels.size();
  std::vector<std::size_t> all_labels(L);
  for (std::size_t i = 0; i < L; ++i) all_labels[i] = i;
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    const std::size_t m = rng.between(1, L);
    auto chosen = rng.sample(all_labels, m);
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::size_t> pool;
    for (std::size_t l : chosen) pool.insert(pool.end(), idx.members[l].begin(), idx.members[l].end());
    if (pool.size() >= n) return pool;
  }
  throw ValidationError("could not draw labels covering " + std::to_string(n) + " molecules in " +
                        std::to_string(max_retries + 1) + " attempts");
}

inline void check_protocol_input(const Dataset& ds, const ProtocolConfig& cfg) {
  cfg.validate();
  if (cfg.n > ds.size()) {
    throw ValidationError("subset size n=" + std::to_string(cfg.n) + " exceeds dataset size " +
                          std::to_string(ds.size()));
  }
}

inline double evaluate_on(const MeasureSpec& spec, const MatrixOracle& local, std::span<const std::size_t> global,
                   const Dataset& ds) {
  if (spec.kind == MeasureKind::coverage) {
    const MoleculeSet set(std::vector<std::size_t>(global.begin(), global.end()), ds.size());
    return static_cast<double>(coverage(ds, set, spec.reference));
  }
  return evaluate(spec, local, MoleculeSet::all(local.size())).value;
}

}  // namespace detail

struct ScoreRow {
  std::string measure;          // label, or "gs" for the gold standard itself
  std::vector<double> per_run;  // Spearman rho (fixed) or DTW distance (growing)
  std::size_t degenerate_runs = 0;
  Summary summary;
};

struct FixedResult {
  std::vector<ScoreRow> rows;  // rows[0] is the gold standard
};

// Fixed-size protocol: per repeat, draw labels then n molecules among them,
// record GS and every measure; Spearman against GS per run.
template <DistanceSource D>
FixedResult protocol_fixed(const Dataset& ds, const D& oracle, const std::vector<MeasureSpec>& specs,
                           const ProtocolConfig& cfg) {
  detail::check_protocol_input(ds, cfg);
  if (cfg.repeats < 2) throw ValidationError("the fixed-size protocol needs at least 2 repeats");
  if (cfg.n > kDppMaxSize) {
    for (const auto& s : specs) {
      if (s.kind == MeasureKind::dpp) throw CapacityError("dpp cannot be evaluated on subsets larger than 2048");
    }
  }
  const LabelIndex idx(ds);
  const std::size_t K = specs.size();
  // rho[run][k], k = 0 is GS
  std::vector<std::vector<Correlation>> rho(cfg.runs, std::vector<Correlation>(K + 1));

  detail::parallel_for(cfg.runs, cfg.jobs, [&](std::size_t run) {
    std::vector<std::vector<double>> values(K + 1, std::vector<double>(cfg.repeats));
    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
      Rng rng(derive_seed(cfg.seed, 0xf1, run, rep));
      auto pool = detail::draw_label_pool(idx, cfg.n, rng, cfg.max_retries);
      auto chosen = rng.sample(std::move(pool), cfg.n);
      std::sort(chosen.begin(), chosen.end());
      values[0][rep] = static_cast<double>(gold_standard(idx, chosen));
      const auto local = MatrixOracle::materialize(restrict_to(oracle, std::span<const std::size_t>(chosen)));
      for (std::size_t k = 0; k < K; ++k) {
        values[k + 1][rep] = detail::evaluate_on(specs[k], local, chosen, ds);
      }
    }
    for (std::size_t k = 0; k <= K; ++k) rho[run][k] = spearman_detail(values[k], values[0]);
  });

  FixedResult out;
  for (std::size_t k = 0; k <= K; ++k) {
    ScoreRow row;
    row.measure = k == 0 ? "gs" : specs[k - 1].label();
    for (std::size_t run = 0; run < cfg.runs; ++run) {
      row.per_run.push_back(rho[run][k].value);
      if (rho[run][k].degenerate) ++row.degenerate_runs;
    }
    row.summary = summarize(row.per_run);
    out.rows.push_back(std::move(row));
  }
  return out;
}

// Cumulative per-step values of one growing run.
struct CurveSeries {
  std::vector<std::string> measures;        // measures[0] == "gs"
  std::vector<std::vector<double>> values;  // [measure][step]
  std::vector<std::size_t> order;           // dataset index added at each step
};

struct GrowingResult {
  std::vector<ScoreRow> rows;  // rows[0] is the gold standard
  std::vector<CurveSeries> curves;  // one per run
};

namespace detail {

// Grows a set of n molecules drawn from pool; returns the insertion order.
template <DistanceSource D, class OnAdd>
void grow(const D& oracle, std::vector<std::size_t> pool, std::size_t n, GrowthBias bias, double power, Rng& rng,
          OnAdd&& on_add) {
  std::vector<double> maxsim(pool.size(), 0.0);
  std::vector<double> weights(pool.size());
  std::vector<std::size_t> members;
  std::vector<double> dists;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = 0;
    if (step == 0 || bias == GrowthBias::uniform) {
      pick = rng.index(pool.size());
    } else if (bias == GrowthBias::most_similar) {
      pick = static_cast<std::size_t>(std::max_element(maxsim.begin(), maxsim.end()) - maxsim.begin());
    } else {
      long double total = 0;
      for (std::size_t c = 0; c < pool.size(); ++c) {
        weights[c] = power == 0.0 ? 1.0 : std::pow(maxsim[c], power);
        total += weights[c];
      }
      if (total <= 0) {
        pick = rng.index(pool.size());
      } else {
        const long double target = rng.uniform() * total;
        long double acc = 0;
        pick = pool.size() - 1;
        for (std::size_t c = 0; c < pool.size(); ++c) {
          acc += weights[c];
          if (target < acc) {
            pick = c;
            break;
          }
        }
      }
    }
    const std::size_t x = pool[pick];
    pool[pick] = pool.back();
    pool.pop_back();
    maxsim[pick] = maxsim.back();
    maxsim.pop_back();
    weights.pop_back();

    dists.resize(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) dists[k] = oracle(x, members[k]);
    on_add(x, std::span<const double>(dists));
    members.push_back(x);
    if (bias != GrowthBias::uniform) {
      for (std::size_t c = 0; c < pool.size(); ++c) maxsim[c] = std::max(maxsim[c], 1.0 - oracle(pool[c], x));
    }
  }
}

}  // namespace detail

// Growing-size protocol: draw labels, grow a set to n under the bias policy,
// then DTW between each measure's incremental curve and GS's.
template <DistanceSource D>
GrowingResult protocol_growing(const Dataset& ds, const D& oracle, const std::vector<MeasureSpec>& specs,
                               const ProtocolConfig& cfg) {
  detail::check_protocol_input(ds, cfg);
  const LabelIndex idx(ds);
  const std::size_t K = specs.size();
  const bool psd = detail::IdentityKeyed<D>;
  GrowingResult out;
  out.curves.resize(cfg.runs);

  detail::parallel_for(cfg.runs, cfg.jobs, [&](std::size_t run) {
    Rng rng(derive_seed(cfg.seed, 0x9a, run));
    auto pool = detail::draw_label_pool(idx, cfg.n, rng, cfg.max_retries);
    GrowingEvaluator eval(specs, &ds, psd);
    CurveSeries curve;
    curve.measures.push_back("gs");
    for (const auto& s : specs) curve.measures.push_back(s.label());
    curve.values.assign(K + 1, {});
    std::vector<char> seen(idx.labels.size(), 0);
    std::size_t gs = 0;
    detail::grow(oracle, std::move(pool), cfg.n, cfg.bias, cfg.bias_power, rng,
                 [&](std::size_t x, std::span<const double> dists) {
                   eval.add(x, dists);
                   if (!seen[idx.label_of[x]]) {
                     seen[idx.label_of[x]] = 1;
                     ++gs;
                   }
                   curve.values[0].push_back(static_cast<double>(gs));
                   for (std::size_t k = 0; k < K; ++k) curve.values[k + 1].push_back(eval.value(k));
                   curve.order.push_back(x);
                 });
    out.curves[run] = std::move(curve);
  });

  for (std::size_t k = 0; k <= K; ++k) {
    ScoreRow row;
    row.measure = out.curves[0].measures[k];
    for (const auto& c : out.curves) {
      row.per_run.push_back(dtw(to_incremental(c.values[k]), to_incremental(c.values[0]), cfg.normalize));
    }
    row.summary = summarize(row.per_run);
    out.rows.push_back(std::move(row));
  }
  return out;
}

enum class ProtocolKind { fixed, growing };

struct SweepResult {
  ProtocolKind protocol = ProtocolKind::fixed;
  std::vector<double> t_grid;
  std::vector<Summary> scores;       // per t
  std::size_t best = 0;              // index into t_grid
  std::vector<ScoreRow> rows;        // full table: gs, extra measures, then one circles row per t
};

// Runs one protocol with a circles column per threshold (plus any extra
// measures on the same subsets). Best t maximizes mean rho (fixed) or
// minimizes mean DTW (growing).
template <DistanceSource D>
SweepResult threshold_sweep(const Dataset& ds, const D& oracle, ProtocolKind protocol,
                            const std::vector<double>& t_grid, const ProtocolConfig& cfg,
                            const std::vector<MeasureSpec>& extra = {}, const CirclesParams& base = {}) {
  if (t_grid.empty()) throw ValidationError("threshold grid is empty");
  std::vector<MeasureSpec> specs = extra;
  for (double t : t_grid) {
    auto s = MeasureSpec::make_circles(t, base.mode, base.restarts);
    s.circles.seed = base.seed;
    s.circles.exact_cap = base.exact_cap;
    s.circles.validate();
    specs.push_back(std::move(s));
  }
  SweepResult out;
  out.protocol = protocol;
  out.t_grid = t_grid;
  out.rows = protocol == ProtocolKind::fixed ? protocol_fixed(ds, oracle, specs, cfg).rows
                                             : protocol_growing(ds, oracle, specs, cfg).rows;
  const std::size_t first = 1 + extra.size();
  for (std::size_t k = 0; k < t_grid.size(); ++k) out.scores.push_back(out.rows[first + k].summary);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const bool better = protocol == ProtocolKind::fixed ? out.scores[k].mean > out.scores[out.best].mean
                                                        : out.scores[k].mean < out.scores[out.best].mean;
    if (better) out.best = k;
  }
  return out;
}

}  // namespace chemspace
