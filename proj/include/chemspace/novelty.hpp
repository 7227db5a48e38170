#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chemspace/circles.hpp"
#include "chemspace/error.hpp"
#include "chemspace/fingerprint.hpp"
#include "chemspace/oracle.hpp"

namespace chemspace {

// Which members a candidate is scored against.
enum class NoveltyReference { population, centers };

// Distances from one candidate to the members of S. The candidate need not be
// part of the oracle, so scorers take a callable giving d(x, S[k]).
struct NoveltyContext {
  std::vector<std::size_t> members;  // indices into the reference oracle
  double t = 0.6;

  void validate() const {
    if (!(t >= 0.0 && t < 1.0)) throw ValidationError("novelty threshold t must lie in [0, 1)");
  }
};

namespace detail {

inline void require_nonempty(const NoveltyContext& ctx, const char* what) {
  if (ctx.members.empty()) throw ValidationError(std::string(what) + " needs a nonempty reference set");
}

}  // namespace detail

// Mean distance from x to S.
template <class DistanceTo>
double novelty_diversity(DistanceTo&& dist, const NoveltyContext& ctx) {
  detail::require_nonempty(ctx, "novelty_diversity");
  long double sum = 0;
  for (std::size_t m : ctx.members) sum += dist(m);
  return static_cast<double>(sum / static_cast<long double>(ctx.members.size()));
}

// Nearest-neighbour distance from x to S.
template <class DistanceTo>
double novelty_sumbottleneck(DistanceTo&& dist, const NoveltyContext& ctx) {
  detail::require_nonempty(ctx, "novelty_sumbottleneck");
  double best = 1.0;
  for (std::size_t m : ctx.members) best = std::min(best, dist(m));
  return best;
}

// 1 iff x is farther than t from every member. An empty S admits anything.
template <class DistanceTo>
int novelty_circles(DistanceTo&& dist, const NoveltyContext& ctx) {
  ctx.validate();
  for (std::size_t m : ctx.members) {
    if (!(dist(m) > ctx.t)) return 0;
  }
  return 1;
}

// Scores fingerprints that are not in the reference set.
class NoveltyScorer {
 public:
  NoveltyScorer(std::vector<Fingerprint> reference, double t, NoveltyReference against = NoveltyReference::population,
                std::uint64_t seed = 0)
      : reference_(std::move(reference)) {
    ctx_.t = t;
    ctx_.validate();
    if (against == NoveltyReference::centers && !reference_.empty()) {
      CirclesParams p;
      p.t = t;
      p.mode = CirclesMode::greedy;
      p.seed = seed;
      const FingerprintOracle o(reference_);
      ctx_.members = circles_greedy(o, p).centers;
    } else {
      ctx_.members.resize(reference_.size());
      for (std::size_t i = 0; i < reference_.size(); ++i) ctx_.members[i] = i;
    }
  }

  const NoveltyContext& context() const noexcept { return ctx_; }

  double diversity(const Fingerprint& x) const { return novelty_diversity(DistanceTo{this, &x}, ctx_); }
  double sumbottleneck(const Fingerprint& x) const { return novelty_sumbottleneck(DistanceTo{this, &x}, ctx_); }
  int circles(const Fingerprint& x) const { return novelty_circles(DistanceTo{this, &x}, ctx_); }

 private:
  struct DistanceTo {
    const NoveltyScorer* self;
    const Fingerprint* x;
    double operator()(std::size_t m) const { return tanimoto_distance(*x, self->reference_[m]); }
  };

  std::vector<Fingerprint> reference_;
  NoveltyContext ctx_;
};

}  // namespace chemspace
