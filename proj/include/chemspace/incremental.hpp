#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "chemspace/circles.hpp"
#include "chemspace/coverage.hpp"
#include "chemspace/dataset.hpp"
#include "chemspace/distance_measures.hpp"
#include "chemspace/error.hpp"
#include "chemspace/measure.hpp"

// Running measure values for a set that only grows. Each add() costs one pass
// over the current members instead of re-measuring from scratch; #Circles is
// still recomputed per step.

namespace chemspace {

// Lower-triangular store of the distances among the members added so far.
class GrowingMatrix {
 public:
  std::size_t size() const noexcept { return rows_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    return i > j ? rows_[i][j] : rows_[j][i];
  }

  void push(std::span<const double> to_existing) {
    if (to_existing.size() != rows_.size()) {
      throw DimensionError("expected " + std::to_string(rows_.size()) + " distances, got " +
                           std::to_string(to_existing.size()));
    }
    rows_.emplace_back(to_existing.begin(), to_existing.end());
  }

 private:
  std::vector<std::vector<double>> rows_;
};

class GrowingEvaluator {
 public:
  // psd: the similarity matrices of this source are positive semidefinite
  // (true for Tanimoto), so a singular prefix keeps the determinant at 0.
  GrowingEvaluator(std::vector<MeasureSpec> specs, const Dataset* dataset = nullptr, bool psd = true)
      : specs_(std::move(specs)), dataset_(dataset), psd_(psd) {
    for (const auto& s : specs_) {
      if (s.kind == MeasureKind::coverage && dataset_ == nullptr) {
        throw AnnotationError("coverage needs a dataset with fragment annotations");
      }
    }
    hits_.resize(specs_.size());
  }

  const std::vector<MeasureSpec>& specs() const noexcept { return specs_; }
  std::size_t size() const noexcept { return members_.size(); }
  const GrowingMatrix& distances() const noexcept { return d_; }
  const std::vector<std::size_t>& members() const noexcept { return members_; }

  // Adds dataset record `global`; to_existing[k] is its distance to the k-th
  // member added before it.
  void add(std::size_t global, std::span<const double> to_existing) {
    const std::size_t k = members_.size();
    d_.push(to_existing);
    members_.push_back(global);

    bool duplicate = false;
    double row_min = std::numeric_limits<double>::infinity();
    double row_max = -1.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = to_existing[j];
      pair_sum_ += v;
      duplicate = duplicate || v == 0.0;
      row_min = std::min(row_min, v);
      row_max = std::max(row_max, v);
      nearest_[j] = std::min(nearest_[j], v);
      farthest_[j] = std::max(farthest_[j], v);
      diameter_ = std::max(diameter_, v);
      bottleneck_ = std::min(bottleneck_, v);
    }
    nearest_.push_back(row_min);
    farthest_.push_back(row_max);
    if (!duplicate) ++unique_;
    extend_dpp();

    for (std::size_t s = 0; s < specs_.size(); ++s) {
      if (specs_[s].kind != MeasureKind::coverage) continue;
      const auto& rec = (*dataset_)[global];
      if (!rec.fragments) throw AnnotationError("record '" + rec.id + "' has no fragment annotation");
      for (const auto& f : *rec.fragments) {
        if (specs_[s].reference.contains(f)) hits_[s].insert(f);
      }
    }
  }

  double value(std::size_t s) const {
    const auto& spec = specs_.at(s);
    const std::size_t n = members_.size();
    const bool pairs = n >= 2;
    switch (spec.kind) {
      case MeasureKind::richness: return static_cast<double>(unique_);
      case MeasureKind::diversity:
        return pairs ? static_cast<double>(2 * pair_sum_ / (static_cast<Accum>(n) * static_cast<Accum>(n - 1))) : 0.0;
      case MeasureKind::sum_diversity:
        return pairs ? static_cast<double>(2 * pair_sum_ / static_cast<Accum>(n - 1)) : 0.0;
      case MeasureKind::diameter: return pairs ? diameter_ : 0.0;
      case MeasureKind::sum_diameter: return pairs ? detail::ordered_sum(farthest_) : 0.0;
      case MeasureKind::bottleneck: return pairs ? bottleneck_ : 0.0;
      case MeasureKind::sum_bottleneck: return pairs ? detail::ordered_sum(nearest_) : 0.0;
      case MeasureKind::dpp: {
        if (n > kDppMaxSize) throw CapacityError("dpp is computed exactly only up to " + std::to_string(kDppMaxSize) + " molecules");
        return pairs ? std::max(dpp_raw_, 0.0) : 0.0;
      }
      case MeasureKind::coverage: return static_cast<double>(hits_[s].size());
      case MeasureKind::circles: return static_cast<double>(circles_auto(d_, spec.circles).count);
    }
    return 0.0;
  }

  std::vector<double> values() const {
    std::vector<double> out(specs_.size());
    for (std::size_t s = 0; s < specs_.size(); ++s) out[s] = value(s);
    return out;
  }

 private:
  bool tracks_dpp() const {
    return std::any_of(specs_.begin(), specs_.end(), [](const MeasureSpec& s) { return s.kind == MeasureKind::dpp; });
  }

  // Appends one row to the Cholesky factor of the similarity matrix. A zero
  // pivot on a PSD source pins the determinant at 0; anything else that
  // breaks the factorization falls back to LU on the whole set.
  void extend_dpp() {
    if (!tracks_dpp()) return;
    const std::size_t k = members_.size() - 1;
    if (k + 1 > kDppMaxSize) return;
    if (singular_) {
      dpp_raw_ = 0.0;
      return;
    }
    if (fallback_) {
      dpp_raw_ = dpp_detail(d_).raw;
      return;
    }
    std::vector<long double> row(k + 1);
    for (std::size_t j = 0; j < k; ++j) {
      long double v = 1.0L - static_cast<long double>(d_(k, j));
      for (std::size_t p = 0; p < j; ++p) v -= row[p] * chol_[j][p];
      row[j] = v / chol_[j][j];
    }
    long double pivot = 1.0L;
    for (std::size_t p = 0; p < k; ++p) pivot -= row[p] * row[p];
    if (pivot > kDeterminantClamp) {
      row[k] = std::sqrt(pivot);
      chol_.push_back(std::move(row));
      log_det_ += std::log(pivot);
      dpp_raw_ = k == 0 ? 0.0 : static_cast<double>(std::exp(log_det_));
    } else if (psd_ && pivot > -kDeterminantClamp) {
      singular_ = true;
      dpp_raw_ = 0.0;
    } else {
      fallback_ = true;
      dpp_raw_ = dpp_detail(d_).raw;
    }
  }

  std::vector<MeasureSpec> specs_;
  const Dataset* dataset_;
  bool psd_;

  GrowingMatrix d_;
  std::vector<std::size_t> members_;
  Accum pair_sum_ = 0;
  std::size_t unique_ = 0;
  double diameter_ = 0.0;
  double bottleneck_ = std::numeric_limits<double>::infinity();
  std::vector<double> nearest_, farthest_;
  std::vector<std::unordered_set<std::string_view>> hits_;

  std::vector<std::vector<long double>> chol_;
  long double log_det_ = 0;
  double dpp_raw_ = 0.0;
  bool singular_ = false;
  bool fallback_ = false;
};

}  // namespace chemspace
