#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "chemspace/error.hpp"

namespace chemspace {

// 1-based ranks; tied values share the average of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

struct Correlation {
  double value = 0.0;
  bool degenerate = false;  // one side had zero variance
};

inline Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("correlation of series with different lengths");
  if (xs.size() < 2) throw ValidationError("correlation needs at least two observations");
  const auto n = static_cast<long double>(xs.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long double dx = xs[i] - mx;
    const long double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return {0.0, true};
  const double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  return {std::clamp(r, -1.0, 1.0), false};
}

inline Correlation spearman_detail(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("correlation of series with different lengths");
  return pearson(average_ranks(xs), average_ranks(ys));
}

inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  return spearman_detail(xs, ys).value;
}

// z-score a series; a constant series maps to zeros.
inline std::vector<double> z_normalize(std::vector<double> xs) {
  if (xs.empty()) return xs;
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<long double>(xs.size());
  long double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<long double>(xs.size());
  const long double sd = std::sqrt(var);
  for (double& x : xs) x = sd > 0 ? static_cast<double>((x - mean) / sd) : 0.0;
  return xs;
}

// Dynamic time warping with |a_i - b_j| local cost and no window.
inline double dtw(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ValidationError("dtw needs nonempty series");
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = std::abs(a[i - 1] - b[j - 1]) + best;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

inline double dtw(const std::vector<double>& a, const std::vector<double>& b, bool normalize) {
  return normalize ? dtw(z_normalize(a), z_normalize(b)) : dtw(a, b);
}

// First difference; step 1 keeps its value.
inline std::vector<double> to_incremental(const std::vector<double>& cumulative) {
  std::vector<double> out(cumulative.size());
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    out[i] = i == 0 ? cumulative[0] : cumulative[i] - cumulative[i - 1];
  }
  return out;
}

inline std::vector<double> to_cumulative(const std::vector<double>& incremental) {
  std::vector<double> out(incremental.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < incremental.size(); ++i) {
    acc += incremental[i];
    out[i] = acc;
  }
  return out;
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for fewer than two values
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  long double acc = 0;
  for (double x : xs) acc += x;
  const long double mean = acc / static_cast<long double>(xs.size());
  s.mean = static_cast<double>(mean);
  if (xs.size() > 1) {
    long double ss = 0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    s.stddev = static_cast<double>(std::sqrt(ss / static_cast<long double>(xs.size() - 1)));
  }
  return s;
}

}  // namespace chemspace
