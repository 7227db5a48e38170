#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemspace/dataset.hpp"
#include "chemspace/measure.hpp"
#include "chemspace/oracle.hpp"
#include "chemspace/parallel.hpp"
#include "chemspace/random.hpp"

// Bounded property search for the two validity axioms and their corollaries.
// "Holds" means no counterexample turned up in the trials run, nothing more.

namespace chemspace {

inline constexpr double kAxiomTolerance = 1e-9;

// A small explicit metric space, optionally with fragment annotations so
// coverage can be evaluated on it too.
struct Universe {
  std::vector<std::vector<double>> matrix;
  std::optional<std::vector<std::vector<std::string>>> fragments;

  std::size_t size() const noexcept { return matrix.size(); }
  MatrixOracle oracle() const { return MatrixOracle::validated(matrix); }

  Dataset dataset() const {
    Dataset ds;
    for (std::size_t i = 0; i < size(); ++i) {
      MoleculeRecord rec;
      rec.id = "p" + std::to_string(i);
      rec.fp = Fingerprint(1);
      if (fragments) rec.fragments = (*fragments)[i];
      ds.add(std::move(rec));
    }
    return ds;
  }
};

// Measure of the points `set` of u.
inline double measure_on(const MeasureSpec& spec, const Universe& u, const std::vector<std::size_t>& set) {
  const MoleculeSet s(set, u.size());
  if (spec.kind == MeasureKind::coverage) {
    if (!u.fragments) throw AnnotationError("coverage needs fragment annotations on the universe");
    return static_cast<double>(coverage(u.dataset(), s, spec.reference));
  }
  return evaluate(spec, u.oracle(), s).value;
}

// a <= b, exactly for integer-valued measures.
inline bool at_most(const MeasureSpec& spec, double a, double b) {
  return integer_valued(spec.kind) ? a <= b : a <= b + kAxiomTolerance;
}

struct Counterexample {
  std::string property;      // monotonicity (left-hand side), rhs, dissimilarity
  std::string construction;  // how the instance was produced
  std::size_t trial = 0;
  Universe universe;
  std::vector<std::size_t> s1, s2;  // dissimilarity: {x1,x2,x*} and {x1,x2,x}
  double mu1 = 0.0, mu2 = 0.0, mu_union = 0.0;
  double a = 0.0, delta = 0.0;  // dissimilarity only
};

struct Verdict {
  bool holds = true;
  std::size_t trials = 0;  // trials evaluated (up to and including a failure)
  std::optional<Counterexample> counterexample;
  std::string note;

  std::string describe() const {
    if (!note.empty()) return note;
    if (holds) return "no counterexample in " + std::to_string(trials) + " trials";
    return counterexample->property + " violated at trial " + std::to_string(counterexample->trial) + " (" +
           counterexample->construction + ")";
  }
};

namespace detail {

inline std::vector<std::size_t> set_union(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

inline std::vector<std::size_t> set_minus(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  for (std::size_t x : a) {
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  }
  return out;
}

// Points in the unit square, Euclidean distance / sqrt(2). Some points repeat
// an earlier one; each point carries a random subset of 8 fragment ids.
inline Universe random_universe(Rng& rng, std::size_t n) {
  std::vector<std::pair<double, double>> pts;
  Universe u;
  u.fragments.emplace();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.bernoulli(0.1)) {
      const std::size_t src = rng.index(i);
      pts.push_back(pts[src]);
      u.fragments->push_back((*u.fragments)[src]);
      continue;
    }
    pts.emplace_back(rng.uniform(), rng.uniform());
    std::vector<std::string> f;
    for (int k = 0; k < 8; ++k) {
      if (rng.bernoulli(0.25)) f.push_back("f" + std::to_string(k));
    }
    u.fragments->push_back(std::move(f));
  }
  u.matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = pts[i].first - pts[j].first;
      const double dy = pts[i].second - pts[j].second;
      u.matrix[i][j] = std::sqrt(dx * dx + dy * dy) / std::sqrt(2.0);
    }
  }
  return u;
}

inline Universe geodesic_universe(double a, double delta) {
  Universe u;
  u.matrix = {{0.0, a, delta}, {a, 0.0, a - delta}, {delta, a - delta, 0.0}};
  u.fragments = std::vector<std::vector<std::string>>{{"f1"}, {"f2"}, {"f3"}};
  return u;
}

struct SplitInstance {
  std::string construction;
  Universe universe;
  std::vector<std::size_t> s1, s2;
};

// Fixed instances tried before random search: a midpoint inserted between two
// far points, a near-duplicate of one of them, and two tight far-apart pairs.
inline std::vector<SplitInstance> seeded_instances() {
  std::vector<SplitInstance> out;
  {
    // x1, x2 at distance 1; x* halfway
    SplitInstance s{"midpoint insertion", geodesic_universe(1.0, 0.5), {0, 1}, {2}};
    out.push_back(std::move(s));
  }
  {
    // x lies 0.01 from x1
    SplitInstance s{"near-duplicate insertion", geodesic_universe(1.0, 0.01), {0, 1}, {2}};
    out.push_back(std::move(s));
  }
  {
    Universe u;
    u.matrix = {{0.0, 0.1, 0.9, 0.9}, {0.1, 0.0, 0.9, 0.9}, {0.9, 0.9, 0.0, 0.1}, {0.9, 0.9, 0.1, 0.0}};
    u.fragments = std::vector<std::vector<std::string>>{{"f1"}, {"f1"}, {"f2"}, {"f2"}};
    out.push_back({"far-apart cluster pair", std::move(u), {0, 1}, {2, 3}});
  }
  return out;
}

inline SplitInstance random_split(Rng& rng) {
  SplitInstance inst;
  inst.construction = "random";
  const std::size_t n = rng.between(2, 12);
  inst.universe = random_universe(rng, n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng.index(3)) {
      case 0: inst.s1.push_back(i); break;
      case 1: inst.s2.push_back(i); break;
      default:
        inst.s1.push_back(i);
        inst.s2.push_back(i);
    }
  }
  return inst;
}

// Evaluates both inequalities on one split; fills a counterexample on failure.
inline std::optional<Counterexample> test_split(const MeasureSpec& spec, const SplitInstance& inst,
                                                std::size_t trial) {
  Counterexample cx;
  cx.construction = inst.construction;
  cx.trial = trial;
  cx.s1 = inst.s1;
  cx.s2 = inst.s2;
  cx.mu1 = measure_on(spec, inst.universe, inst.s1);
  cx.mu2 = measure_on(spec, inst.universe, inst.s2);
  cx.mu_union = measure_on(spec, inst.universe, set_union(inst.s1, inst.s2));
  if (!at_most(spec, std::max(cx.mu1, cx.mu2), cx.mu_union)) {
    cx.property = "monotonicity";
  } else if (!at_most(spec, cx.mu_union, cx.mu1 + cx.mu2)) {
    cx.property = "rhs";
  } else {
    return std::nullopt;
  }
  cx.universe = inst.universe;
  return cx;
}

}  // namespace detail

// max(mu(S1), mu(S2)) <= mu(S1 u S2) <= mu(S1) + mu(S2) over the seeded
// constructions, then random metric sets of 2-12 points.
inline Verdict check_subadditivity(const MeasureSpec& spec, std::size_t trials, std::uint64_t seed) {
  Verdict v;
  const auto seeded = detail::seeded_instances();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::optional<Counterexample> cx;
    if (trial < seeded.size()) {
      cx = detail::test_split(spec, seeded[trial], trial);
    } else {
      Rng rng(derive_seed(seed, 0xa1, trial));
      cx = detail::test_split(spec, detail::random_split(rng), trial);
    }
    v.trials = trial + 1;
    if (cx) {
      v.holds = false;
      v.counterexample = std::move(cx);
      return v;
    }
  }
  return v;
}

// Default geodesic grid: a in {0.1, ..., 1.0}, delta = k/20 * a for k = 1..19.
inline std::vector<std::pair<double, double>> geodesic_grid() {
  std::vector<std::pair<double, double>> grid;
  for (int ai = 1; ai <= 10; ++ai) {
    const double a = ai / 10.0;
    for (int k = 1; k <= 19; ++k) grid.emplace_back(a, a * k / 20.0);
  }
  return grid;
}

// mu({x1,x2,x*}) >= mu({x1,x2,x_delta}) on 3-point geodesic configurations.
inline Verdict check_dissimilarity(const MeasureSpec& spec,
                                   const std::vector<std::pair<double, double>>& grid = geodesic_grid()) {
  Verdict v;
  if (spec.kind == MeasureKind::coverage) {
    // Fragments are not tied to distances. With x1={f1}, x2={f2}, x*={f1}
    // and x={f3}, the midpoint adds nothing while x adds a fragment.
    Universe u;
    u.matrix = {{0.0, 1.0, 0.5, 0.1}, {1.0, 0.0, 0.5, 0.9}, {0.5, 0.5, 0.0, 0.4}, {0.1, 0.9, 0.4, 0.0}};
    u.fragments = std::vector<std::vector<std::string>>{{"f1"}, {"f2"}, {"f1"}, {"f3"}};
    Counterexample cx;
    cx.property = "dissimilarity";
    cx.construction = "fragment assignment (not distance-driven)";
    cx.universe = u;
    cx.s1 = {0, 1, 2};
    cx.s2 = {0, 1, 3};
    cx.mu1 = measure_on(spec, u, cx.s1);
    cx.mu2 = measure_on(spec, u, cx.s2);
    cx.a = 1.0;
    cx.delta = 0.1;
    v.holds = !(cx.mu1 < cx.mu2);
    v.trials = 1;
    if (!v.holds) {
      v.counterexample = std::move(cx);
      v.note = "fails by construction: fragment coverage ignores distances";
    }
    return v;
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [a, delta] = grid[k];
    const double mid = measure_on(spec, detail::geodesic_universe(a, a / 2), {0, 1, 2});
    const double other = measure_on(spec, detail::geodesic_universe(a, delta), {0, 1, 2});
    v.trials = k + 1;
    if (!at_most(spec, other, mid)) {
      Counterexample cx;
      cx.property = "dissimilarity";
      cx.construction = "geodesic grid";
      cx.trial = k;
      cx.universe = detail::geodesic_universe(a, delta);
      cx.s1 = {0, 1, 2};
      cx.s2 = {0, 1, 2};
      cx.mu1 = mid;
      cx.mu2 = other;
      cx.a = a;
      cx.delta = delta;
      v.holds = false;
      v.counterexample = std::move(cx);
      return v;
    }
  }
  return v;
}

// Re-evaluates a counterexample; true iff it still violates its property.
inline bool replay(const MeasureSpec& spec, const Counterexample& cx) {
  if (cx.property == "dissimilarity") {
    if (spec.kind == MeasureKind::coverage) {
      return measure_on(spec, cx.universe, cx.s1) < measure_on(spec, cx.universe, cx.s2);
    }
    const double mid = measure_on(spec, detail::geodesic_universe(cx.a, cx.a / 2), {0, 1, 2});
    const double other = measure_on(spec, cx.universe, cx.s2);
    return mid == cx.mu1 && other == cx.mu2 && !at_most(spec, other, mid);
  }
  const double mu1 = measure_on(spec, cx.universe, cx.s1);
  const double mu2 = measure_on(spec, cx.universe, cx.s2);
  const double mu_union = measure_on(spec, cx.universe, detail::set_union(cx.s1, cx.s2));
  if (mu1 != cx.mu1 || mu2 != cx.mu2 || mu_union != cx.mu_union) return false;
  if (cx.property == "monotonicity") return !at_most(spec, std::max(mu1, mu2), mu_union);
  return !at_most(spec, mu_union, mu1 + mu2);
}

struct CorollaryReport {
  Verdict subtraction;   // mu(S1) >= mu(S1 \ S2) >= mu(S1) - mu(S2)
  Verdict monotonicity;  // mu(S u {x}) >= mu(S) >= mu(S \ {x})
  Verdict dominance;     // S1 subset of S2 => mu(S1) <= mu(S2)
};

inline CorollaryReport check_corollaries(const MeasureSpec& spec, std::size_t trials, std::uint64_t seed) {
  CorollaryReport r;
  auto fail = [](Verdict& v, std::size_t trial, const char* what, const Universe& u, std::vector<std::size_t> s1,
                 std::vector<std::size_t> s2, double mu1, double mu2) {
    v.holds = false;
    Counterexample cx;
    cx.property = what;
    cx.construction = "random";
    cx.trial = trial;
    cx.universe = u;
    cx.s1 = std::move(s1);
    cx.s2 = std::move(s2);
    cx.mu1 = mu1;
    cx.mu2 = mu2;
    v.counterexample = std::move(cx);
  };
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, 0xc0, trial));
    const auto inst = detail::random_split(rng);
    const auto& u = inst.universe;
    if (r.subtraction.holds) {
      r.subtraction.trials = trial + 1;
      const double m1 = measure_on(spec, u, inst.s1);
      const double m2 = measure_on(spec, u, inst.s2);
      const double diff = measure_on(spec, u, detail::set_minus(inst.s1, inst.s2));
      if (!at_most(spec, diff, m1) || !at_most(spec, m1 - m2, diff)) {
        fail(r.subtraction, trial, "subtraction", u, inst.s1, inst.s2, m1, diff);
      }
    }
    if (r.monotonicity.holds) {
      r.monotonicity.trials = trial + 1;
      std::vector<std::size_t> s = inst.s1;
      const std::size_t x = rng.index(u.size());
      const auto with = detail::set_union(s, {x});
      const auto without = detail::set_minus(s, {x});
      const double m = measure_on(spec, u, s);
      const double up = measure_on(spec, u, with);
      const double down = measure_on(spec, u, without);
      if (!at_most(spec, m, up) || !at_most(spec, down, m)) {
        fail(r.monotonicity, trial, "monotonicity", u, s, {x}, m, at_most(spec, m, up) ? down : up);
      }
    }
    if (r.dominance.holds) {
      r.dominance.trials = trial + 1;
      const auto big = detail::set_union(inst.s1, inst.s2);
      const double small_mu = measure_on(spec, u, inst.s1);
      const double big_mu = measure_on(spec, u, big);
      if (!at_most(spec, small_mu, big_mu)) fail(r.dominance, trial, "dominance", u, inst.s1, big, small_mu, big_mu);
    }
  }
  return r;
}

struct Quadrant {
  bool subadditive = false;
  bool dissimilar = false;
  bool operator==(const Quadrant&) const = default;
};

// Classification the checks are expected to reproduce.
inline Quadrant expected_quadrant(MeasureKind k) {
  switch (k) {
    case MeasureKind::richness:
    case MeasureKind::circles: return {true, true};
    case MeasureKind::coverage: return {true, false};
    case MeasureKind::sum_diameter: return {false, false};
    default: return {false, true};
  }
}

struct AxiomReport {
  MeasureSpec measure;
  Verdict subadditive;
  Verdict dissimilar;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  Quadrant quadrant() const { return {subadditive.holds, dissimilar.holds}; }
  bool matches_expected() const { return quadrant() == expected_quadrant(measure.kind); }
};

inline std::vector<MeasureSpec> default_axiom_measures() {
  return parse_measure_list(
      "circles:t=0.5;richness;coverage;diversity;sum_diversity;diameter;sum_diameter;bottleneck;sum_bottleneck;dpp");
}

inline std::vector<AxiomReport> quadrant_table(const std::vector<MeasureSpec>& measures, std::size_t trials,
                                               std::uint64_t seed, std::size_t jobs = 1) {
  std::vector<AxiomReport> out(measures.size());
  detail::parallel_for(measures.size(), jobs, [&](std::size_t k) {
    out[k].measure = measures[k];
    out[k].trials = trials;
    out[k].seed = seed;
    out[k].subadditive = check_subadditivity(measures[k], trials, seed);
    out[k].dissimilar = check_dissimilarity(measures[k]);
  });
  return out;
}

}  // namespace chemspace
