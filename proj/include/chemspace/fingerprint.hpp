#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemspace/error.hpp"

namespace chemspace {

// Fixed-width binary fingerprint packed into 64-bit words. Bit i lives in
// word i / 64 at position i % 64; bits past `width` are always zero.
class Fingerprint {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Fingerprint() = default;
  explicit Fingerprint(std::size_t width) : width_(width), words_(word_count(width), 0) {}

  static constexpr std::size_t word_count(std::size_t width) noexcept {
    return (width + kWordBits - 1) / kWordBits;
  }

  // Hex text, most-significant digit first: the last digit holds bits 0..3.
  static Fingerprint from_hex(std::string_view hex) {
    if (hex.empty()) throw ParseError("empty hex fingerprint");
    Fingerprint fp(hex.size() * 4);
    for (std::size_t k = 0; k < hex.size(); ++k) {
      const int nibble = hex_value(hex[k]);
      if (nibble < 0) {
        throw ParseError("invalid hex digit '" + std::string(1, hex[k]) + "' in fingerprint '" +
                         std::string(hex) + "'");
      }
      const std::size_t base = (hex.size() - 1 - k) * 4;
      for (std::size_t b = 0; b < 4; ++b) {
        if (nibble & (1 << b)) fp.set(base + b);
      }
    }
    return fp;
  }

  // 0/1 text, most-significant first, so from_bits("1100") == from_hex("c").
  static Fingerprint from_bits(std::string_view bits) {
    if (bits.empty()) throw ParseError("empty bitstring fingerprint");
    Fingerprint fp(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) {
      const char c = bits[k];
      if (c == '1') {
        fp.set(bits.size() - 1 - k);
      } else if (c != '0') {
        throw ParseError("invalid character '" + std::string(1, c) + "' in bitstring '" +
                         std::string(bits) + "'");
      }
    }
    return fp;
  }

  static Fingerprint from_indices(std::size_t width, std::span<const std::size_t> on_bits) {
    Fingerprint fp(width);
    for (std::size_t i : on_bits) fp.set(i);
    return fp;
  }

  std::size_t width() const noexcept { return width_; }
  std::span<const Word> words() const noexcept { return words_; }

  bool test(std::size_t i) const {
    check_index(i);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool on = true) {
    check_index(i);
    const Word mask = Word{1} << (i % kWordBits);
    if (on) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) { set(i, !test(i)); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t digits = (width_ + 3) / 4;
    std::string out(digits, '0');
    for (std::size_t d = 0; d < digits; ++d) {
      int nibble = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        const std::size_t i = d * 4 + b;
        if (i < width_ && test(i)) nibble |= 1 << b;
      }
      out[digits - 1 - d] = kDigits[nibble];
    }
    return out;
  }

  std::string to_bits() const {
    std::string out(width_, '0');
    for (std::size_t i = 0; i < width_; ++i) {
      if (test(i)) out[width_ - 1 - i] = '1';
    }
    return out;
  }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  static int hex_value(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  void check_index(std::size_t i) const {
    if (i >= width_) {
      throw DimensionError("bit index " + std::to_string(i) + " out of range for width " +
                           std::to_string(width_));
    }
  }

  std::size_t width_ = 0;
  std::vector<Word> words_;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& fp) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ fp.width();
    for (auto w : fp.words()) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

namespace detail {

// Tanimoto distance over raw word spans of equal length. Two empty
// fingerprints are treated as identical (distance 0).
inline double tanimoto_words(const Fingerprint::Word* a, const Fingerprint::Word* b,
                             std::size_t n) noexcept {
  std::uint64_t inter = 0;
  std::uint64_t uni = 0;
  for (std::size_t k = 0; k < n; ++k) {
    inter += static_cast<std::uint64_t>(std::popcount(a[k] & b[k]));
    uni += static_cast<std::uint64_t>(std::popcount(a[k] | b[k]));
  }
  if (uni == 0) return 0.0;
  return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace detail

// 1 - |a AND b| / |a OR b|.
inline double tanimoto_distance(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) {
    throw DimensionError("fingerprint width mismatch: " + std::to_string(a.width()) + " vs " +
                         std::to_string(b.width()));
  }
  return detail::tanimoto_words(a.words().data(), b.words().data(), a.words().size());
}

inline double tanimoto_similarity(const Fingerprint& a, const Fingerprint& b) {
  return 1.0 - tanimoto_distance(a, b);
}

}  // namespace chemspace
