#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace oreach {

enum class Verdict : std::uint8_t { kUnknown, kReachable, kUnreachable };

// Sufficient conditions used to decide a query without traversal, plus the
// tags for trivial queries and for answers produced by a fallback search.
enum class Observation : std::uint8_t {
  kNone,
  kSameVertex,  // s = t
  kB2,          // different weakly connected components
  kB3,          // same strongly connected component (original graph only)
  kB4,          // tau(t) < tau(s)
  kB5,          // F(t) <= F(s)
  kB6,          // B(s) <= B(t)
  kT1,
  kT2,
  kT3,
  kT4,
  kT5,
  kT6,
  kS1,
  kS2,
  kS3,
  kFallback,
};

inline constexpr std::size_t kObservationCount =
    static_cast<std::size_t>(Observation::kFallback) + 1;

constexpr std::size_t index_of(Observation o) noexcept {
  return static_cast<std::size_t>(o);
}

constexpr std::string_view name_of(Observation o) noexcept {
  constexpr std::array<std::string_view, kObservationCount> kNames = {
      "none", "EQ", "B2", "B3", "B4", "B5", "B6", "T1", "T2",
      "T3",   "T4", "T5", "T6", "S1", "S2", "S3", "fallback"};
  return kNames[index_of(o)];
}

// Outcome of a single constant-time test.
struct Decision {
  Verdict verdict = Verdict::kUnknown;
  Observation by = Observation::kNone;

  constexpr bool decisive() const noexcept {
    return verdict != Verdict::kUnknown;
  }

  static constexpr Decision reachable(Observation o) noexcept {
    return {Verdict::kReachable, o};
  }
  static constexpr Decision unreachable(Observation o) noexcept {
    return {Verdict::kUnreachable, o};
  }
  static constexpr Decision unknown() noexcept { return {}; }

  friend constexpr bool operator==(const Decision&, const Decision&) = default;
};

}  // namespace oreach
