#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chemspace/dataset.hpp"
#include "chemspace/error.hpp"
#include "chemspace/fingerprint.hpp"
#include "chemspace/random.hpp"

namespace chemspace {

struct SyntheticConfig {
  std::size_t classes = 50;
  std::size_t per_class = 40;
  std::size_t width = 256;
  std::size_t core_bits = 32;
  double flip_prob = 0.05;
  // Annotate each record with "fragments": one id per nonzero byte of the
  // fingerprint (byte position + value), so coverage can run on synthetic data.
  bool fragments = true;

  void validate() const {
    if (classes == 0 || per_class == 0) throw ValidationError("synthetic data needs at least one class and sample");
    if (width == 0) throw ValidationError("fingerprint width must be positive");
    if (core_bits > width) {
      throw ValidationError("core_bits " + std::to_string(core_bits) + " exceeds width " + std::to_string(width));
    }
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) throw ValidationError("flip_prob must lie in [0, 1]");
  }
};

namespace detail {

inline std::vector<std::string> byte_fragments(const Fingerprint& fp) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::vector<std::string> out;
  for (std::size_t start = 0; start < fp.width(); start += 8) {
    unsigned value = 0;
    for (std::size_t b = start; b < start + 8 && b < fp.width(); ++b) value = (value << 1) | (fp.test(b) ? 1u : 0u);
    if (value == 0) continue;
    std::string id = "b" + std::to_string(start / 8) + ":";
    id += kHex[(value >> 4) & 0xf];
    id += kHex[value & 0xf];
    out.push_back(std::move(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string class_label(std::size_t c, std::size_t classes) {
  std::string digits = std::to_string(c);
  const std::size_t w = std::to_string(classes - 1).size();
  return "class" + std::string(w - digits.size(), '0') + digits;
}

}  // namespace detail

// Per class: a fixed random core; each sample copies it and flips every bit
// with probability flip_prob.
inline Dataset generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(derive_seed(seed, 0x5e7d));
  std::vector<std::size_t> positions(cfg.width);
  for (std::size_t i = 0; i < cfg.width; ++i) positions[i] = i;

  Dataset ds;
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    const auto core = Fingerprint::from_indices(cfg.width, rng.sample(positions, cfg.core_bits));
    const std::string label = detail::class_label(c, cfg.classes);
    for (std::size_t k = 0; k < cfg.per_class; ++k) {
      Fingerprint fp = core;
      for (std::size_t b = 0; b < cfg.width; ++b) {
        if (rng.bernoulli(cfg.flip_prob)) fp.flip(b);
      }
      MoleculeRecord rec;
      rec.id = "syn" + std::to_string(c * cfg.per_class + k);
      if (cfg.fragments) rec.fragments = detail::byte_fragments(fp);
      rec.fp = std::move(fp);
      rec.label = label;
      ds.add(std::move(rec));
    }
  }
  return ds;
}

}  // namespace chemspace
