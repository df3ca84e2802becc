#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "weakiso/error.hpp"

namespace weakiso {

/// Desk-scale resource limits. Every exhaustive routine consults one of these
/// before it starts; `from_env()` lets WEAKISO_MAX_N lift the dimension caps.
struct Guards {
  int spectrum_max_n = 14;  // pairwise distance scans
  int search_max_n = 7;     // automorphism search
  int brute_force_max_n = 3;
  std::uint64_t enumerate_limit = std::uint64_t{1} << 25;  // raw parameter tuples

  static Guards defaults() { return Guards{}; }

  static Guards from_env() {
    Guards g;
    if (const char* raw = std::getenv("WEAKISO_MAX_N"); raw != nullptr && *raw) {
      char* end = nullptr;
      const long v = std::strtol(raw, &end, 10);
      if (end != raw && v > 0) {
        g.spectrum_max_n = static_cast<int>(v);
        g.search_max_n = static_cast<int>(v);
      }
    }
    return g;
  }
};

inline void require_guard(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ResourceGuard, what);
}

}  // namespace weakiso
