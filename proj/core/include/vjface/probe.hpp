#pragma once

#include <cstdint>

namespace vjface::probe {

/// Per-thread count of integral-table reads. Tests reset it and compare
/// before/after values to check the constant-lookup budget of rectangle sums.
inline std::uint64_t& table_lookups() noexcept {
  thread_local std::uint64_t count = 0;
  return count;
}

}  // namespace vjface::probe
