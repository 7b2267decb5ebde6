#pragma once

#include <cstdint>
#include <string_view>

namespace melotype {

// FNV-1a, 64 bit. Used for split bucketing and artifact fingerprints; this is
// a stable identifier, not a cryptographic digest.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Finalizer from the splitmix64 generator; mixes a 64-bit value thoroughly.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace melotype
