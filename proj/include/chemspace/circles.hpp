#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "chemspace/error.hpp"
#include "chemspace/oracle.hpp"
#include "chemspace/random.hpp"

// #Circles: the largest subset whose members are pairwise farther apart than
// a threshold t. Equivalently the maximum independent set of the threshold
// graph, where i~j iff d(i,j) <= t.

namespace chemspace {

enum class CirclesMode { automatic, exact, greedy };

inline std::string_view to_string(CirclesMode m) {
  switch (m) {
    case CirclesMode::automatic: return "auto";
    case CirclesMode::exact: return "exact";
    case CirclesMode::greedy: return "greedy";
  }
  return "auto";
}

inline CirclesMode parse_circles_mode(std::string_view s) {
  if (s == "auto") return CirclesMode::automatic;
  if (s == "exact") return CirclesMode::exact;
  if (s == "greedy") return CirclesMode::greedy;
  throw ParseError("unknown circles mode '" + std::string(s) + "' (expected auto, exact or greedy)");
}

inline constexpr std::size_t kDefaultExactCap = 64;
inline constexpr std::size_t kDefaultRestarts = 8;

struct CirclesParams {
  double t = 0.75;
  CirclesMode mode = CirclesMode::automatic;
  std::size_t restarts = kDefaultRestarts;
  std::uint64_t seed = 0;
  std::size_t exact_cap = kDefaultExactCap;

  void validate() const {
    if (!(t >= 0.0 && t < 1.0)) {
      throw ValidationError("circles threshold t=" + std::to_string(t) + " outside [0,1)");
    }
    if (restarts < 1) throw ValidationError("circles restarts must be at least 1");
  }
};

struct PackingResult {
  std::size_t count = 0;
  std::vector<std::size_t> centers;  // indices into the measured source
  CirclesMode mode = CirclesMode::exact;
  bool optimal = false;
};

// Dense adjacency bitsets of the threshold graph.
class ThresholdGraph {
 public:
  using Word = std::uint64_t;

  template <DistanceSource D>
  ThresholdGraph(const D& d, double t) : n_(d.size()), words_((n_ + 63) / 64), adj_(n_ * words_, 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (d(i, j) <= t) {
          adj_[i * words_ + j / 64] |= Word{1} << (j % 64);
          adj_[j * words_ + i / 64] |= Word{1} << (i % 64);
        }
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t words() const noexcept { return words_; }
  const Word* neighbors(std::size_t i) const noexcept { return adj_.data() + i * words_; }
  bool adjacent(std::size_t i, std::size_t j) const noexcept {
    return (neighbors(i)[j / 64] >> (j % 64)) & 1U;
  }
  std::size_t edge_count() const noexcept {
    std::size_t c = 0;
    for (Word w : adj_) c += static_cast<std::size_t>(std::popcount(w));
    return c / 2;
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<Word> adj_;
};

namespace detail {

// Branch-and-bound maximum independent set. Upper bound: a greedy clique
// cover of the candidates (a colouring of the complement graph); branching on
// a candidate of maximum degree; vertices of candidate-degree <= 1 are taken
// without branching.
class MisSolver {
 public:
  using Word = ThresholdGraph::Word;

  explicit MisSolver(const ThresholdGraph& g) : g_(g), w_(g.words()) {}

  std::vector<std::size_t> solve(std::vector<std::size_t> initial) {
    const std::size_t n = g_.size();
    best_ = std::move(initial);
    std::vector<Word> cand(w_, 0);
    for (std::size_t i = 0; i < n; ++i) cand[i / 64] |= Word{1} << (i % 64);
    current_.clear();
    recurse(cand);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  static bool any(const std::vector<Word>& bits) {
    return std::any_of(bits.begin(), bits.end(), [](Word x) { return x != 0; });
  }

  std::size_t degree_in(std::size_t v, const std::vector<Word>& cand) const {
    const Word* nb = g_.neighbors(v);
    std::size_t c = 0;
    for (std::size_t k = 0; k < w_; ++k) c += static_cast<std::size_t>(std::popcount(nb[k] & cand[k]));
    return c;
  }

  template <class F>
  static void for_each_bit(const std::vector<Word>& bits, F&& f) {
    for (std::size_t k = 0; k < bits.size(); ++k) {
      Word x = bits[k];
      while (x) {
        const std::size_t b = static_cast<std::size_t>(std::countr_zero(x));
        f(k * 64 + b);
        x &= x - 1;
      }
    }
  }

  void take(std::size_t v, std::vector<Word>& cand) {
    current_.push_back(v);
    const Word* nb = g_.neighbors(v);
    for (std::size_t k = 0; k < w_; ++k) cand[k] &= ~nb[k];
    cand[v / 64] &= ~(Word{1} << (v % 64));
  }

  std::size_t clique_cover_bound(const std::vector<Word>& cand) {
    cliques_.clear();
    for_each_bit(cand, [&](std::size_t v) {
      const Word* nb = g_.neighbors(v);
      for (auto& clique : cliques_) {
        bool fits = true;
        for (std::size_t k = 0; k < w_ && fits; ++k) fits = (clique[k] & ~nb[k]) == 0;
        if (fits) {
          clique[v / 64] |= Word{1} << (v % 64);
          return;
        }
      }
      std::vector<Word> fresh(w_, 0);
      fresh[v / 64] |= Word{1} << (v % 64);
      cliques_.push_back(std::move(fresh));
    });
    return cliques_.size();
  }

  void recurse(std::vector<Word> cand) {
    const std::size_t mark = current_.size();
    // Reductions: candidates with at most one candidate neighbour.
    bool changed = true;
    while (changed) {
      changed = false;
      for_each_bit(std::vector<Word>(cand), [&](std::size_t v) {
        if (!((cand[v / 64] >> (v % 64)) & 1U)) return;
        if (degree_in(v, cand) <= 1) {
          take(v, cand);
          changed = true;
        }
      });
    }
    if (!any(cand)) {
      if (current_.size() > best_.size()) best_ = current_;
      current_.resize(mark);
      return;
    }
    if (current_.size() + clique_cover_bound(cand) <= best_.size()) {
      current_.resize(mark);
      return;
    }
    std::size_t pick = 0;
    std::size_t pick_deg = 0;
    bool first = true;
    for_each_bit(cand, [&](std::size_t v) {
      const std::size_t deg = degree_in(v, cand);
      if (first || deg > pick_deg) {
        pick = v;
        pick_deg = deg;
        first = false;
      }
    });
    {
      std::vector<Word> with = cand;
      take(pick, with);
      recurse(std::move(with));
      current_.pop_back();
    }
    cand[pick / 64] &= ~(Word{1} << (pick % 64));
    recurse(std::move(cand));
    current_.resize(mark);
  }

  const ThresholdGraph& g_;
  std::size_t w_;
  std::vector<std::size_t> best_;
  std::vector<std::size_t> current_;
  std::vector<std::vector<Word>> cliques_;
};

// Sphere exclusion in the given scan order.
template <DistanceSource D>
std::vector<std::size_t> sphere_exclusion(const D& d, double t, std::span<const std::size_t> order) {
  std::vector<std::size_t> centers;
  for (std::size_t i : order) {
    const bool clear = std::all_of(centers.begin(), centers.end(), [&](std::size_t c) { return d(i, c) > t; });
    if (clear) centers.push_back(i);
  }
  return centers;
}

}  // namespace detail

// Best-of-k sphere exclusion: the first scan follows input order, the rest
// follow permutations seeded from params.seed.
template <DistanceSource D>
PackingResult circles_greedy(const D& d, const CirclesParams& params) {
  params.validate();
  const std::size_t n = d.size();
  PackingResult out;
  out.mode = CirclesMode::greedy;
  out.optimal = false;
  if (n == 0) return out;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(params.seed, 0x5be7e5c1ULL));
  for (std::size_t r = 0; r < params.restarts; ++r) {
    if (r > 0) rng.shuffle(order);
    auto centers = detail::sphere_exclusion(d, params.t, order);
    if (centers.size() > out.count) {
      out.count = centers.size();
      out.centers = std::move(centers);
    }
    if (out.count == n) break;
  }
  std::sort(out.centers.begin(), out.centers.end());
  return out;
}

template <DistanceSource D>
PackingResult circles_exact(const D& d, const CirclesParams& params) {
  params.validate();
  const std::size_t n = d.size();
  if (n > params.exact_cap) {
    throw CapacityError("exact #Circles refuses " + std::to_string(n) + " points (cap " +
                        std::to_string(params.exact_cap) + "); use mode=greedy or raise the cap");
  }
  PackingResult out;
  out.mode = CirclesMode::exact;
  out.optimal = true;
  if (n == 0) return out;
  ThresholdGraph g(d, params.t);
  CirclesParams seed_params = params;
  seed_params.restarts = 1;
  auto initial = circles_greedy(d, seed_params).centers;
  detail::MisSolver solver(g);
  out.centers = solver.solve(std::move(initial));
  out.count = out.centers.size();
  return out;
}

template <DistanceSource D>
PackingResult circles_auto(const D& d, const CirclesParams& params) {
  switch (params.mode) {
    case CirclesMode::exact: return circles_exact(d, params);
    case CirclesMode::greedy: return circles_greedy(d, params);
    case CirclesMode::automatic: break;
  }
  return d.size() <= params.exact_cap ? circles_exact(d, params) : circles_greedy(d, params);
}

namespace detail {

inline PackingResult to_global(PackingResult r, const MoleculeSet& s) {
  for (auto& c : r.centers) c = s[c];
  return r;
}

}  // namespace detail

template <DistanceSource D>
PackingResult circles_exact(const MoleculeSet& s, const D& d, const CirclesParams& p) {
  return detail::to_global(circles_exact(restrict_to(d, s), p), s);
}
template <DistanceSource D>
PackingResult circles_greedy(const MoleculeSet& s, const D& d, const CirclesParams& p) {
  return detail::to_global(circles_greedy(restrict_to(d, s), p), s);
}
template <DistanceSource D>
PackingResult circles_auto(const MoleculeSet& s, const D& d, const CirclesParams& p) {
  return detail::to_global(circles_auto(restrict_to(d, s), p), s);
}

// True when every pair of centers is farther apart than t.
template <DistanceSource D>
bool is_packing(const D& d, std::span<const std::size_t> centers, double t) {
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      if (!(d(centers[a], centers[b]) > t)) return false;
    }
  }
  return true;
}

}  // namespace chemspace
