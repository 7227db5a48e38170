#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chemspace/dataset.hpp"
#include "chemspace/error.hpp"
#include "chemspace/fingerprint.hpp"

namespace chemspace {

// Anything answering symmetric pairwise distances in [0, 1] over points 0..size()-1.
template <class D>
concept DistanceSource = requires(const D& d, std::size_t i, std::size_t j) {
  { d.size() } -> std::convertible_to<std::size_t>;
  { d(i, j) } -> std::convertible_to<double>;
};

inline constexpr double kMetricTolerance = 1e-9;

// Tanimoto distances computed on demand from packed fingerprints stored
// contiguously (one row of words per point).
class FingerprintOracle {
 public:
  FingerprintOracle() = default;

  explicit FingerprintOracle(std::span<const Fingerprint> fps) {
    n_ = fps.size();
    if (n_ == 0) return;
    width_ = fps.front().width();
    stride_ = Fingerprint::word_count(width_);
    words_.resize(n_ * stride_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (fps[i].width() != width_) {
        throw DimensionError("fingerprint " + std::to_string(i) + " has width " +
                             std::to_string(fps[i].width()) + ", expected " + std::to_string(width_));
      }
      std::copy(fps[i].words().begin(), fps[i].words().end(), words_.begin() + i * stride_);
    }
  }

  explicit FingerprintOracle(const Dataset& ds) : FingerprintOracle(ds.fingerprints()) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t width() const noexcept { return width_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return detail::tanimoto_words(row(i), row(j), stride_);
  }

  std::span<const Fingerprint::Word> words(std::size_t i) const noexcept { return {row(i), stride_}; }

  bool identical(std::size_t i, std::size_t j) const noexcept {
    return std::equal(row(i), row(i) + stride_, row(j));
  }

  std::uint64_t hash(std::size_t i) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t k = 0; k < stride_; ++k) {
      h ^= row(i)[k] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  const Fingerprint::Word* row(std::size_t i) const noexcept { return words_.data() + i * stride_; }

  std::size_t n_ = 0;
  std::size_t width_ = 0;
  std::size_t stride_ = 0;
  std::vector<Fingerprint::Word> words_;
};

// Dense symmetric distance matrix.
class MatrixOracle {
 public:
  MatrixOracle() = default;

  // Validates and stores `values` (row-major n x n). Entries within the
  // tolerance of the bounds are clamped, and the upper triangle wins.
  static MatrixOracle validated(std::size_t n, std::vector<double> values) {
    if (values.size() != n * n) {
      throw ValidationError("distance matrix has " + std::to_string(values.size()) +
                            " entries, expected " + std::to_string(n * n));
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& { return values[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = at(i, j);
        if (!std::isfinite(v) || v < -kMetricTolerance || v > 1.0 + kMetricTolerance) {
          throw ValidationError("distance d(" + std::to_string(i) + "," + std::to_string(j) + ")=" +
                                format_real(v) + " outside [0,1]");
        }
      }
      if (std::abs(at(i, i)) > kMetricTolerance) {
        throw ValidationError("diagonal d(" + std::to_string(i) + "," + std::to_string(i) + ")=" +
                              format_real(at(i, i)) + " is not zero");
      }
      at(i, i) = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::abs(at(i, j) - at(j, i)) > kMetricTolerance) {
          throw ValidationError("asymmetric entries d(" + std::to_string(i) + "," + std::to_string(j) +
                                ")=" + format_real(at(i, j)) + " vs d(" + std::to_string(j) + "," +
                                std::to_string(i) + ")=" + format_real(at(j, i)));
        }
        const double v = std::clamp(at(i, j), 0.0, 1.0);
        at(i, j) = v;
        at(j, i) = v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const double via = at(i, k) + at(k, j);
          if (at(i, j) > via + kMetricTolerance) {
            throw ValidationError("triangle inequality violated for (" + std::to_string(i) + ", " +
                                  std::to_string(k) + ", " + std::to_string(j) + "): d(" +
                                  std::to_string(i) + "," + std::to_string(j) + ")=" +
                                  format_real(at(i, j)) + " > d(" + std::to_string(i) + "," +
                                  std::to_string(k) + ")+d(" + std::to_string(k) + "," +
                                  std::to_string(j) + ")=" + format_real(via));
          }
        }
      }
    }
    return MatrixOracle(n, std::move(values));
  }

  static MatrixOracle validated(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> values;
    values.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) {
        throw ValidationError("distance matrix row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
      }
      values.insert(values.end(), rows[i].begin(), rows[i].end());
    }
    return validated(n, std::move(values));
  }

  // Copies every pairwise distance of `source`. No validation: the source is
  // trusted to be a metric already.
  template <class D>
  static MatrixOracle materialize(const D& source) {
    const std::size_t n = source.size();
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = source(i, j);
        values[i * n + j] = v;
        values[j * n + i] = v;
      }
    }
    return MatrixOracle(n, std::move(values));
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }

 private:
  MatrixOracle(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {}

  static std::string format_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }

  std::size_t n_ = 0;
  std::vector<double> values_;
};

// Reads an n x n CSV of reals and validates it as a metric.
inline MatrixOracle parse_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<double> row;
    for (auto cell : detail::split(view, ',')) {
      cell = detail::trim(cell);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("matrix line " + std::to_string(lineno) + ": invalid number '" + std::string(cell) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return MatrixOracle::validated(rows);
}

inline MatrixOracle load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open distance matrix '" + path + "'");
  return parse_matrix_csv(in);
}

// Either a fingerprint-backed Tanimoto source or an explicit matrix.
class DistanceOracle {
 public:
  explicit DistanceOracle(FingerprintOracle fp) : impl_(std::move(fp)) {}
  explicit DistanceOracle(MatrixOracle m) : impl_(std::move(m)) {}

  std::size_t size() const noexcept {
    return std::visit([](const auto& o) { return o.size(); }, impl_);
  }
  double operator()(std::size_t i, std::size_t j) const {
    return std::visit([&](const auto& o) { return o(i, j); }, impl_);
  }

  // Calls f with the concrete oracle so hot loops avoid per-query dispatch.
  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(std::forward<F>(f), impl_);
  }

  bool fingerprint_backed() const noexcept { return std::holds_alternative<FingerprintOracle>(impl_); }

 private:
  std::variant<FingerprintOracle, MatrixOracle> impl_;
};

inline DistanceOracle build_oracle(const Dataset& ds) {
  if (ds.empty()) throw ValidationError("cannot build a distance oracle over an empty dataset");
  return DistanceOracle(FingerprintOracle(ds));
}

inline DistanceOracle build_oracle(const Dataset& ds, const std::string& matrix_path) {
  auto m = load_matrix_csv(matrix_path);
  if (!ds.empty() && m.size() != ds.size()) {
    throw ValidationError("distance matrix is " + std::to_string(m.size()) + "x" + std::to_string(m.size()) +
                          " but the dataset has " + std::to_string(ds.size()) + " records");
  }
  return DistanceOracle(std::move(m));
}

// Distances restricted to a subset, re-indexed 0..k-1.
template <DistanceSource D>
class SubsetView {
 public:
  SubsetView(const D& source, std::span<const std::size_t> indices) : source_(&source), indices_(indices) {}

  std::size_t size() const noexcept { return indices_.size(); }
  double operator()(std::size_t a, std::size_t b) const { return (*source_)(indices_[a], indices_[b]); }
  std::size_t global(std::size_t a) const noexcept { return indices_[a]; }
  const D& source() const noexcept { return *source_; }

 private:
  const D* source_;
  std::span<const std::size_t> indices_;
};

template <DistanceSource D>
SubsetView<D> restrict_to(const D& source, const MoleculeSet& set) {
  return SubsetView<D>(source, set.indices());
}

template <DistanceSource D>
SubsetView<D> restrict_to(const D& source, std::span<const std::size_t> indices) {
  return SubsetView<D>(source, indices);
}

}  // namespace chemspace
