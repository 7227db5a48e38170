#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "chemspace/dataset.hpp"
#include "chemspace/error.hpp"

namespace chemspace {

enum class ReferenceKind { FG, RS, BM, custom };

inline std::string_view to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::FG: return "FG";
    case ReferenceKind::RS: return "RS";
    case ReferenceKind::BM: return "BM";
    case ReferenceKind::custom: return "custom";
  }
  return "custom";
}

inline ReferenceKind parse_reference_kind(std::string_view s) {
  if (s == "FG" || s == "fg") return ReferenceKind::FG;
  if (s == "RS" || s == "rs") return ReferenceKind::RS;
  if (s == "BM" || s == "bm") return ReferenceKind::BM;
  if (s == "custom") return ReferenceKind::custom;
  throw ParseError("unknown reference kind '" + std::string(s) + "' (expected FG, RS, BM or custom)");
}

// The reference collection R. Without an explicit universe every fragment id
// is a reference, so coverage counts the distinct fragments present in S.
struct ReferenceSet {
  ReferenceKind kind = ReferenceKind::custom;
  std::optional<std::unordered_set<std::string>> universe;

  bool contains(const std::string& fragment) const {
    return !universe || universe->count(fragment) > 0;
  }
};

// |{ y in R : some x in S contains y }|.
inline std::size_t coverage(const Dataset& ds, const MoleculeSet& s, const ReferenceSet& ref) {
  std::unordered_set<std::string_view> hit;
  for (std::size_t i : s) {
    const auto& rec = ds[i];
    if (!rec.fragments) {
      throw AnnotationError("record '" + rec.id + "' has no fragment annotation");
    }
    for (const auto& f : *rec.fragments) {
      if (ref.contains(f)) hit.insert(f);
    }
  }
  return hit.size();
}

}  // namespace chemspace
