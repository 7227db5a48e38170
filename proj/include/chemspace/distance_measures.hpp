#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "chemspace/oracle.hpp"

// Distance-based measures. Every function takes a DistanceSource whose points
// are exactly the members of the set being measured (use restrict_to to view
// a subset of a larger oracle). Sets with fewer than two points measure 0.

namespace chemspace {

using Accum = long double;

// Mean pairwise distance, 2/(n(n-1)) * sum_{i<j} d(i,j).
template <DistanceSource D>
double diversity(const D& d) {
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  Accum sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += d(i, j);
  }
  return static_cast<double>(2 * sum / (static_cast<Accum>(n) * static_cast<Accum>(n - 1)));
}

// sum_x 1/(n-1) sum_{y != x} d(x,y), i.e. n * diversity.
template <DistanceSource D>
double sum_diversity(const D& d) {
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  Accum sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += d(i, j);
  }
  return static_cast<double>(2 * sum / static_cast<Accum>(n - 1));
}

template <DistanceSource D>
double diameter(const D& d) {
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, static_cast<double>(d(i, j)));
  }
  return best;
}

namespace detail {

// Per-point farthest (want_max) or nearest neighbour distance.
template <DistanceSource D>
std::vector<double> row_extrema(const D& d, bool want_max) {
  const std::size_t n = d.size();
  std::vector<double> ext(n, want_max ? -1.0 : std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = d(i, j);
      if (want_max) {
        ext[i] = std::max(ext[i], v);
        ext[j] = std::max(ext[j], v);
      } else {
        ext[i] = std::min(ext[i], v);
        ext[j] = std::min(ext[j], v);
      }
    }
  }
  return ext;
}

inline double ordered_sum(const std::vector<double>& v) {
  Accum s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s);
}

}  // namespace detail

// sum_x max_{y != x} d(x,y).
template <DistanceSource D>
double sum_diameter(const D& d) {
  if (d.size() < 2) return 0.0;
  return detail::ordered_sum(detail::row_extrema(d, true));
}

template <DistanceSource D>
double bottleneck(const D& d) {
  const std::size_t n = d.size();
  if (n < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, static_cast<double>(d(i, j)));
  }
  return best;
}

// Nearest-neighbour distance sum.
template <DistanceSource D>
double sum_bottleneck(const D& d) {
  if (d.size() < 2) return 0.0;
  return detail::ordered_sum(detail::row_extrema(d, false));
}

// Values within this distance of zero are reported as exactly 0.
inline constexpr double kDeterminantClamp = 1e-12;
// Largest set whose similarity determinant is computed.
inline constexpr std::size_t kDppMaxSize = 2048;

struct DppValue {
  double value = 0.0;  // clamped, non-negative
  double raw = 0.0;    // determinant as computed

  // Negative beyond round-off: the similarity matrix is not PSD.
  bool indefinite() const noexcept { return raw < -kDeterminantClamp; }
};

// Determinant of a dense row-major matrix by LU with partial pivoting.
inline long double determinant(std::vector<long double> a, std::size_t n) {
  long double det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    long double best = std::fabs(a[c * n + c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double v = std::fabs(a[r * n + c]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0) return 0;
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[pivot * n + k]);
      det = -det;
    }
    const long double p = a[c * n + c];
    det *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / p;
      if (f == 0) continue;
      for (std::size_t k = c + 1; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

// det of the similarity matrix [1 - d(i,j)] with unit diagonal.
template <DistanceSource D>
DppValue dpp_detail(const D& d) {
  const std::size_t n = d.size();
  if (n < 2) return {};
  std::vector<long double> s(n * n, 1.0L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const long double v = 1.0L - static_cast<long double>(d(i, j));
      s[i * n + j] = v;
      s[j * n + i] = v;
    }
  }
  DppValue out;
  out.raw = static_cast<double>(determinant(std::move(s), n));
  // Tanimoto similarity matrices are PSD, so only round-off goes negative.
  // Explicit metrics need not be; those report 0 with the raw value kept.
  out.value = std::max(out.raw, 0.0);
  return out;
}

template <DistanceSource D>
double dpp(const D& d) {
  return dpp_detail(d).value;
}

namespace detail {

template <class D>
concept IdentityKeyed = requires(const D& d, std::size_t i, std::size_t j) {
  { d.identical(i, j) } -> std::convertible_to<bool>;
  { d.hash(i) } -> std::convertible_to<std::uint64_t>;
};

template <class V>
concept KeyedView = requires(const V& v) {
  v.source();
  v.global(std::size_t{0});
} && IdentityKeyed<std::remove_cvref_t<decltype(std::declval<const V&>().source())>>;

}  // namespace detail

// Number of distinct points, where points at distance 0 are the same molecule.
template <DistanceSource D>
std::size_t richness(const D& d) {
  const std::size_t n = d.size();
  if constexpr (detail::KeyedView<D>) {
    const auto& src = d.source();
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    buckets.reserve(n);
    std::size_t unique = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t g = d.global(a);
      auto& bucket = buckets[src.hash(g)];
      const bool seen = std::any_of(bucket.begin(), bucket.end(),
                                    [&](std::size_t other) { return src.identical(g, other); });
      if (!seen) {
        bucket.push_back(g);
        ++unique;
      }
    }
    return unique;
  } else {
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < n; ++i) {
      const bool seen = std::any_of(reps.begin(), reps.end(), [&](std::size_t r) { return d(i, r) == 0.0; });
      if (!seen) reps.push_back(i);
    }
    return reps.size();
  }
}

// Subset overloads: measure(S, d).
template <DistanceSource D>
double diversity(const MoleculeSet& s, const D& d) { return diversity(restrict_to(d, s)); }
template <DistanceSource D>
double sum_diversity(const MoleculeSet& s, const D& d) { return sum_diversity(restrict_to(d, s)); }
template <DistanceSource D>
double diameter(const MoleculeSet& s, const D& d) { return diameter(restrict_to(d, s)); }
template <DistanceSource D>
double sum_diameter(const MoleculeSet& s, const D& d) { return sum_diameter(restrict_to(d, s)); }
template <DistanceSource D>
double bottleneck(const MoleculeSet& s, const D& d) { return bottleneck(restrict_to(d, s)); }
template <DistanceSource D>
double sum_bottleneck(const MoleculeSet& s, const D& d) { return sum_bottleneck(restrict_to(d, s)); }
template <DistanceSource D>
double dpp(const MoleculeSet& s, const D& d) { return dpp(restrict_to(d, s)); }
template <DistanceSource D>
std::size_t richness(const MoleculeSet& s, const D& d) { return richness(restrict_to(d, s)); }

}  // namespace chemspace
