#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chemspace/error.hpp"
#include "chemspace/fingerprint.hpp"

namespace chemspace {

struct MoleculeRecord {
  std::string id;
  Fingerprint fp;
  std::optional<std::string> label;
  // Sorted, unique fragment ids; nullopt when the record carries no annotation.
  std::optional<std::vector<std::string>> fragments;
};

// Records with unique ids and a common fingerprint width.
class Dataset {
 public:
  Dataset() = default;

  void add(MoleculeRecord record) {
    if (records_.empty()) {
      width_ = record.fp.width();
    } else if (record.fp.width() != width_) {
      throw DimensionError("record '" + record.id + "' has fingerprint width " +
                           std::to_string(record.fp.width()) + ", dataset width is " +
                           std::to_string(width_));
    }
    if (!ids_.emplace(record.id, records_.size()).second) {
      throw ValidationError("duplicate molecule id '" + record.id + "'");
    }
    if (record.fragments) {
      auto& f = *record.fragments;
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
    }
    records_.push_back(std::move(record));
  }

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::size_t width() const noexcept { return width_; }

  const MoleculeRecord& operator[](std::size_t i) const { return records_[i]; }
  const std::vector<MoleculeRecord>& records() const noexcept { return records_; }
  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

  std::optional<std::size_t> find(const std::string& id) const {
    auto it = ids_.find(id);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  bool all_labeled() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const MoleculeRecord& r) { return r.label.has_value(); });
  }

  bool all_annotated() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const MoleculeRecord& r) { return r.fragments.has_value(); });
  }

  std::vector<Fingerprint> fingerprints() const {
    std::vector<Fingerprint> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.fp);
    return out;
  }

 private:
  std::vector<MoleculeRecord> records_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::size_t width_ = 0;
};

// Ordered indices into a dataset (or oracle) without repeats.
class MoleculeSet {
 public:
  MoleculeSet() = default;

  // Validates against a universe of `universe_size` points.
  MoleculeSet(std::vector<std::size_t> indices, std::size_t universe_size) : indices_(std::move(indices)) {
    std::unordered_set<std::size_t> seen;
    seen.reserve(indices_.size());
    for (std::size_t i : indices_) {
      if (i >= universe_size) {
        throw ValidationError("set index " + std::to_string(i) + " out of range (universe size " +
                              std::to_string(universe_size) + ")");
      }
      if (!seen.insert(i).second) {
        throw ValidationError("set index " + std::to_string(i) + " repeated");
      }
    }
  }

  static MoleculeSet all(std::size_t n) {
    MoleculeSet s;
    s.indices_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.indices_[i] = i;
    return s;
  }

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

 private:
  std::vector<std::size_t> indices_;
};

enum class FingerprintFormat { automatic, hex, bits };

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool is_bitstring(std::string_view s) {
  return !s.empty() && s.find_first_not_of("01") == std::string_view::npos;
}

}  // namespace detail

// Parses the dataset TSV: `id<TAB>fingerprint[<TAB>label[<TAB>fragments]]`.
// In automatic mode a file whose fingerprint fields are all 0/1 strings is read
// as bitstrings, anything else as hex.
inline Dataset parse_dataset(std::istream& in, FingerprintFormat format = FingerprintFormat::automatic) {
  struct Row {
    std::size_t line;
    std::string id;
    std::string fp;
    std::optional<std::string> label;
    std::optional<std::vector<std::string>> fragments;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  bool all_bits = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    const auto trimmed = detail::trim(view);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    // split before trimming so an empty trailing fragment column survives
    const auto cols = detail::split(view, '\t');
    if (cols.size() < 2 || cols.size() > 4) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 2 to 4 tab-separated columns, got " +
                       std::to_string(cols.size()));
    }
    Row row;
    row.line = lineno;
    row.id = std::string(detail::trim(cols[0]));
    row.fp = std::string(detail::trim(cols[1]));
    if (row.id.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty id");
    if (cols.size() >= 3) {
      auto label = detail::trim(cols[2]);
      if (!label.empty()) row.label = std::string(label);
    }
    if (cols.size() == 4) {
      std::vector<std::string> frags;
      for (auto f : detail::split(detail::trim(cols[3]), ',')) {
        f = detail::trim(f);
        if (!f.empty()) frags.emplace_back(f);
      }
      row.fragments = std::move(frags);
    }
    all_bits = all_bits && detail::is_bitstring(row.fp);
    rows.push_back(std::move(row));
  }

  const bool as_bits = format == FingerprintFormat::bits || (format == FingerprintFormat::automatic && all_bits);
  Dataset ds;
  for (auto& row : rows) {
    MoleculeRecord rec;
    try {
      rec.fp = as_bits ? Fingerprint::from_bits(row.fp) : Fingerprint::from_hex(row.fp);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(row.line) + ": " + e.what());
    }
    rec.id = std::move(row.id);
    rec.label = std::move(row.label);
    rec.fragments = std::move(row.fragments);
    try {
      ds.add(std::move(rec));
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(row.line) + ": " + e.what());
    }
  }
  return ds;
}

inline Dataset load_dataset(const std::string& path, FingerprintFormat format = FingerprintFormat::automatic) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path + "'");
  return parse_dataset(in, format);
}

inline void write_dataset(std::ostream& out, const Dataset& ds) {
  for (const auto& r : ds) {
    out << r.id << '\t' << r.fp.to_hex();
    if (r.label || r.fragments) out << '\t' << r.label.value_or("");
    if (r.fragments) {
      out << '\t';
      for (std::size_t k = 0; k < r.fragments->size(); ++k) {
        if (k) out << ',';
        out << (*r.fragments)[k];
      }
    }
    out << '\n';
  }
}

// One fragment id per line; blank lines and '#' comments ignored.
inline std::vector<std::string> parse_universe(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto v = detail::trim(line);
    if (v.empty() || v.front() == '#') continue;
    out.emplace_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::string> load_universe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open universe file '" + path + "'");
  return parse_universe(in);
}

}  // namespace chemspace
