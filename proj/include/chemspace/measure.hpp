#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "chemspace/circles.hpp"
#include "chemspace/coverage.hpp"
#include "chemspace/dataset.hpp"
#include "chemspace/distance_measures.hpp"
#include "chemspace/error.hpp"
#include "chemspace/oracle.hpp"

namespace chemspace {

enum class MeasureKind {
  richness,
  diversity,
  sum_diversity,
  diameter,
  sum_diameter,
  bottleneck,
  sum_bottleneck,
  dpp,
  coverage,
  circles,
};

inline constexpr MeasureKind kAllMeasureKinds[] = {
    MeasureKind::richness,   MeasureKind::diversity,      MeasureKind::sum_diversity, MeasureKind::diameter,
    MeasureKind::sum_diameter, MeasureKind::bottleneck,   MeasureKind::sum_bottleneck, MeasureKind::dpp,
    MeasureKind::coverage,   MeasureKind::circles,
};

inline std::string_view to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::richness: return "richness";
    case MeasureKind::diversity: return "diversity";
    case MeasureKind::sum_diversity: return "sum_diversity";
    case MeasureKind::diameter: return "diameter";
    case MeasureKind::sum_diameter: return "sum_diameter";
    case MeasureKind::bottleneck: return "bottleneck";
    case MeasureKind::sum_bottleneck: return "sum_bottleneck";
    case MeasureKind::dpp: return "dpp";
    case MeasureKind::coverage: return "coverage";
    case MeasureKind::circles: return "circles";
  }
  return "?";
}

// Integer-valued measures are compared exactly rather than with a tolerance.
inline bool integer_valued(MeasureKind k) {
  return k == MeasureKind::richness || k == MeasureKind::coverage || k == MeasureKind::circles;
}

inline bool distance_based(MeasureKind k) {
  return k != MeasureKind::richness && k != MeasureKind::coverage && k != MeasureKind::circles;
}

// A measure with its parameters, e.g. `circles:t=0.75,mode=greedy`.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::richness;
  CirclesParams circles;              // kind == circles
  ReferenceSet reference;             // kind == coverage
  std::optional<std::string> universe_path;
  std::vector<std::pair<std::string, std::string>> params;  // as written, for labels

  std::string label() const {
    std::string out(to_string(kind));
    for (std::size_t k = 0; k < params.size(); ++k) {
      out += k == 0 ? ':' : ',';
      out += params[k].first + "=" + params[k].second;
    }
    return out;
  }

  static MeasureSpec make(MeasureKind kind) {
    MeasureSpec s;
    s.kind = kind;
    return s;
  }

  static MeasureSpec make_circles(double t, CirclesMode mode = CirclesMode::automatic,
                                  std::size_t restarts = kDefaultRestarts) {
    MeasureSpec s;
    s.kind = MeasureKind::circles;
    s.circles.t = t;
    s.circles.mode = mode;
    s.circles.restarts = restarts;
    s.params.emplace_back("t", format_param(t));
    if (mode != CirclesMode::automatic) s.params.emplace_back("mode", std::string(to_string(mode)));
    if (restarts != kDefaultRestarts) s.params.emplace_back("restarts", std::to_string(restarts));
    return s;
  }

  static MeasureSpec make_coverage(ReferenceKind ref) {
    MeasureSpec s;
    s.kind = MeasureKind::coverage;
    s.reference.kind = ref;
    s.params.emplace_back("ref", std::string(to_string(ref)));
    return s;
  }

  static std::string format_param(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  }
};

namespace detail {

inline double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("parameter " + std::string(key) + ": invalid number '" + std::string(text) + "'");
  }
  return v;
}

inline std::uint64_t parse_uint(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("parameter " + std::string(key) + ": invalid integer '" + std::string(text) + "'");
  }
  return v;
}

inline std::optional<MeasureSpec> measure_by_name(std::string_view name) {
  static const std::pair<std::string_view, MeasureKind> kNames[] = {
      {"richness", MeasureKind::richness},
      {"diversity", MeasureKind::diversity},
      {"sum_diversity", MeasureKind::sum_diversity},
      {"sumdiversity", MeasureKind::sum_diversity},
      {"diameter", MeasureKind::diameter},
      {"sum_diameter", MeasureKind::sum_diameter},
      {"sumdiameter", MeasureKind::sum_diameter},
      {"bottleneck", MeasureKind::bottleneck},
      {"sum_bottleneck", MeasureKind::sum_bottleneck},
      {"sumbottleneck", MeasureKind::sum_bottleneck},
      {"sumbot", MeasureKind::sum_bottleneck},
      {"dpp", MeasureKind::dpp},
      {"coverage", MeasureKind::coverage},
      {"circles", MeasureKind::circles},
  };
  for (const auto& [n, k] : kNames) {
    if (n == name) return MeasureSpec::make(k);
  }
  if (name == "fg" || name == "FG") return MeasureSpec::make_coverage(ReferenceKind::FG);
  if (name == "rs" || name == "RS") return MeasureSpec::make_coverage(ReferenceKind::RS);
  if (name == "bm" || name == "BM") return MeasureSpec::make_coverage(ReferenceKind::BM);
  return std::nullopt;
}

}  // namespace detail

// Parses `name[:key=value,...]`.
inline MeasureSpec parse_measure_spec(std::string_view text) {
  text = detail::trim(text);
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  auto found = detail::measure_by_name(name);
  if (!found) throw ParseError("unknown measure '" + std::string(name) + "'");
  MeasureSpec spec = std::move(*found);
  bool have_t = false;
  if (colon != std::string_view::npos) {
    for (auto item : detail::split(text.substr(colon + 1), ',')) {
      item = detail::trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("measure '" + std::string(name) + "': parameter '" + std::string(item) + "' lacks '='");
      }
      const std::string key(detail::trim(item.substr(0, eq)));
      const std::string value(detail::trim(item.substr(eq + 1)));
      bool known = false;
      if (spec.kind == MeasureKind::circles) {
        known = true;
        if (key == "t") {
          spec.circles.t = detail::parse_real(key, value);
          have_t = true;
        } else if (key == "mode") {
          spec.circles.mode = parse_circles_mode(value);
        } else if (key == "restarts") {
          spec.circles.restarts = detail::parse_uint(key, value);
        } else if (key == "seed") {
          spec.circles.seed = detail::parse_uint(key, value);
        } else if (key == "cap") {
          spec.circles.exact_cap = detail::parse_uint(key, value);
        } else {
          known = false;
        }
      } else if (spec.kind == MeasureKind::coverage) {
        known = true;
        if (key == "ref") {
          spec.reference.kind = parse_reference_kind(value);
        } else if (key == "universe") {
          spec.universe_path = value;
        } else {
          known = false;
        }
      }
      if (!known) {
        throw ParseError("measure '" + std::string(to_string(spec.kind)) + "' has no parameter '" + key + "'");
      }
      auto existing = std::find_if(spec.params.begin(), spec.params.end(),
                                   [&](const auto& p) { return p.first == key; });
      if (existing != spec.params.end()) {
        existing->second = value;
      } else {
        spec.params.emplace_back(key, value);
      }
    }
  }
  if (spec.kind == MeasureKind::circles) {
    if (!have_t) throw ParseError("measure 'circles' requires a threshold parameter t");
    spec.circles.validate();
  }
  return spec;
}

// Splits a measure list. Commas separate measures, but a token of the form
// key=value continues the parameter list of the preceding measure, so
// "richness,circles:t=0.7,mode=greedy" is two measures. ';' always separates.
inline std::vector<MeasureSpec> parse_measure_list(std::string_view text) {
  std::vector<std::string> groups;
  for (auto chunk : detail::split(text, ';')) {
    for (auto token : detail::split(chunk, ',')) {
      token = detail::trim(token);
      if (token.empty()) continue;
      const bool continues = token.find('=') != std::string_view::npos && token.find(':') == std::string_view::npos;
      if (continues) {
        if (groups.empty()) throw ParseError("parameter '" + std::string(token) + "' has no measure");
        groups.back() += groups.back().find(':') == std::string::npos ? ":" : ",";
        groups.back() += std::string(token);
      } else {
        groups.emplace_back(token);
      }
    }
  }
  std::vector<MeasureSpec> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(parse_measure_spec(g));
  return out;
}

using MetaValue = std::variant<bool, std::int64_t, double, std::string>;

struct MeasureResult {
  MeasureSpec spec;
  double value = 0.0;
  std::size_t set_size = 0;
  std::map<std::string, MetaValue> metadata;
};

// What a measure may need besides distances.
struct MeasureInputs {
  const Dataset* dataset = nullptr;  // required by coverage
};

template <DistanceSource D>
MeasureResult evaluate(const MeasureSpec& spec, const D& oracle, const MoleculeSet& set,
                       const MeasureInputs& inputs = {}) {
  MeasureResult r;
  r.spec = spec;
  r.set_size = set.size();
  const auto view = restrict_to(oracle, set);
  switch (spec.kind) {
    case MeasureKind::richness: r.value = static_cast<double>(richness(view)); break;
    case MeasureKind::diversity: r.value = diversity(view); break;
    case MeasureKind::sum_diversity: r.value = sum_diversity(view); break;
    case MeasureKind::diameter: r.value = diameter(view); break;
    case MeasureKind::sum_diameter: r.value = sum_diameter(view); break;
    case MeasureKind::bottleneck: r.value = bottleneck(view); break;
    case MeasureKind::sum_bottleneck: r.value = sum_bottleneck(view); break;
    case MeasureKind::dpp: {
      if (set.size() > kDppMaxSize) {
        throw CapacityError("dpp is computed exactly only up to " + std::to_string(kDppMaxSize) +
                            " molecules (got " + std::to_string(set.size()) +
                            "); the determinant underflows beyond that, measure a subsample instead");
      }
      const auto v = dpp_detail(view);
      r.value = v.value;
      r.metadata["raw_determinant"] = v.raw;
      if (v.indefinite()) r.metadata["indefinite"] = true;
      break;
    }
    case MeasureKind::coverage: {
      if (inputs.dataset == nullptr) throw AnnotationError("coverage needs a dataset with fragment annotations");
      r.value = static_cast<double>(coverage(*inputs.dataset, set, spec.reference));
      r.metadata["reference"] = std::string(to_string(spec.reference.kind));
      break;
    }
    case MeasureKind::circles: {
      const auto packing = circles_auto(view, spec.circles);
      r.value = static_cast<double>(packing.count);
      r.metadata["mode"] = std::string(to_string(packing.mode));
      r.metadata["optimal"] = packing.optimal;
      if (packing.mode == CirclesMode::greedy) {
        r.metadata["restarts"] = static_cast<std::int64_t>(spec.circles.restarts);
      }
      break;
    }
  }
  return r;
}

inline MeasureResult evaluate(const MeasureSpec& spec, const DistanceOracle& oracle, const MoleculeSet& set,
                              const MeasureInputs& inputs = {}) {
  return oracle.visit([&](const auto& o) { return evaluate(spec, o, set, inputs); });
}

}  // namespace chemspace
