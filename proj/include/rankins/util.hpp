// util.hpp
// Small shared helpers: deterministic seed derivation, FNV-1a digests,
// locale-independent float formatting and parsing.

#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include "rankins/errors.hpp"

namespace rankins {

// splitmix64 step; used to fan one master seed out into decorrelated
// sub-seeds (seed per purpose, per year, per tree).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive a sub-seed from a master seed and a salt. Fixed mapping: the same
// (seed, salt) pair always yields the same stream seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  return splitmix64(master ^ splitmix64(salt));
}

// FNV-1a 64-bit over a byte range.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[v & 0xf];
    v >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf, 16);
}

// Shortest round-trip decimal form of a double; locale independent.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IngestError("unparsable number in " + what + ": '" +
                      std::string(s) + "'");
  }
  return v;
}

inline long parse_long(std::string_view s, const std::string& what) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IngestError("unparsable integer in " + what + ": '" +
                      std::string(s) + "'");
  }
  return v;
}

}  // namespace rankins
