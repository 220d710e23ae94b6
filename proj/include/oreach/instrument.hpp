#pragma once

#include <cstdint>

// Adjacency-access counting, compiled in only for the instrumented library
// variant (OREACH_INSTRUMENT_ADJACENCY). Counters are per thread.
namespace oreach::instrument {

inline thread_local std::uint64_t adjacency_accesses = 0;

inline void note_adjacency_access() noexcept { ++adjacency_accesses; }

inline std::uint64_t adjacency_access_count() noexcept {
  return adjacency_accesses;
}

}  // namespace oreach::instrument
