#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oreach/graph.hpp"
#include "oreach/observation.hpp"
#include "oreach/toporder.hpp"

namespace oreach {

enum class CandidateSource : std::uint8_t {
  kSlimLevel,      // on a forward or backward level with at most h vertices
  kRandomCentral,  // drawn from vertices with a central forward level
  kRandomFill,     // drawn from all remaining vertices (tiny graphs only)
};

struct CandidatePool {
  std::vector<Vertex> candidates;
  std::vector<CandidateSource> sources;  // parallel to candidates

  std::size_t size() const noexcept { return candidates.size(); }
};

// True when level i lies in [L/5, 4L/5] for L = max_level.
constexpr bool is_central_level(std::uint32_t level,
                                std::uint32_t max_level) noexcept {
  return 5 * static_cast<std::uint64_t>(level) >= max_level &&
         5 * static_cast<std::uint64_t>(level) <=
             4 * static_cast<std::uint64_t>(max_level);
}

// Collects up to k*p candidates: slim forward levels in ascending level order,
// then slim backward levels, each level in ascending id order. A short pool is
// topped up uniformly at random from unused vertices with a central forward
// level, then from any unused vertex.
CandidatePool select_candidates(const DiGraph& dag,
                                const LevelAssignment& levels, std::uint32_t k,
                                std::uint32_t p, std::uint32_t h, Rng& rng);

// Dense bit vector over the vertices.
class VertexBits {
 public:
  VertexBits() = default;
  explicit VertexBits(Vertex n) : n_(n), words_((n + std::size_t{63}) / 64, 0) {}

  Vertex size() const noexcept { return n_; }
  bool test(Vertex v) const noexcept { return (words_[v >> 6] >> (v & 63)) & 1U; }
  void set(Vertex v) noexcept { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  std::uint64_t count() const noexcept;

  friend bool operator==(const VertexBits&, const VertexBits&) = default;

 private:
  Vertex n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ReachSets {
  VertexBits out;  // R+(v), including v
  VertexBits in;   // R-(v), including v
};

ReachSets reach_sets(const DiGraph& dag, Vertex v);

struct ReachCounts {
  std::uint64_t out = 0;
  std::uint64_t in = 0;

  std::uint64_t product() const noexcept { return out * in; }
  friend bool operator==(const ReachCounts&, const ReachCounts&) = default;
};

// |R+(v)| and |R-(v)| for every candidate. The parallel kernel gives each
// thread its own visited-epoch scratch; results match the serial kernel.
std::vector<ReachCounts> candidate_reach_counts(const DiGraph& dag,
                                                std::span<const Vertex> candidates,
                                                Execution exec);

// Supportive vertices and their per-vertex reachability masks. Bit i of
// fwd_mask(w) is set iff supports[i] reaches w; bit i of bwd_mask(w) is set
// iff w reaches supports[i].
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(Vertex n, std::uint32_t k_requested, std::vector<Vertex> supports);

  std::uint32_t k_requested() const noexcept { return k_requested_; }
  const std::vector<Vertex>& supports() const noexcept { return supports_; }
  std::size_t words_per_vertex() const noexcept { return words_; }
  // Serialized width of one mask: ceil(k/8) bytes.
  std::size_t mask_bytes() const noexcept { return (k_requested_ + 7) / 8; }

  std::span<const std::uint64_t> fwd_mask(Vertex v) const noexcept {
    return {fwd_.data() + v * words_, words_};
  }
  std::span<const std::uint64_t> bwd_mask(Vertex v) const noexcept {
    return {bwd_.data() + v * words_, words_};
  }
  std::span<std::uint64_t> fwd_mask(Vertex v) noexcept {
    return {fwd_.data() + v * words_, words_};
  }
  std::span<std::uint64_t> bwd_mask(Vertex v) noexcept {
    return {bwd_.data() + v * words_, words_};
  }

  bool fwd_bit(Vertex v, std::uint32_t slot) const noexcept {
    return (fwd_[v * words_ + slot / 64] >> (slot % 64)) & 1U;
  }
  bool bwd_bit(Vertex v, std::uint32_t slot) const noexcept {
    return (bwd_[v * words_ + slot / 64] >> (slot % 64)) & 1U;
  }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::uint32_t k_requested_ = 0;
  std::vector<Vertex> supports_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> fwd_;
  std::vector<std::uint64_t> bwd_;
};

// Keeps the min(k, |pool|) candidates with the largest |R+| * |R-| (ties to
// the smaller id) and fills their masks.
SupportSet pick_supports(const CandidatePool& pool, const DiGraph& dag,
                         std::uint32_t k, Execution exec = Execution::kParallel);

// S1: some support v with s in R-(v) and t in R+(v).
inline Decision support_positive(const SupportSet& ss, Vertex s,
                                 Vertex t) noexcept {
  const auto s_in = ss.bwd_mask(s);
  const auto t_out = ss.fwd_mask(t);
  for (std::size_t i = 0; i < s_in.size(); ++i) {
    if ((s_in[i] & t_out[i]) != 0) return Decision::reachable(Observation::kS1);
  }
  return Decision::unknown();
}

// S2: some v reaching s but not t. S3: some v reached by t but not by s.
inline Decision support_negative(const SupportSet& ss, Vertex s,
                                 Vertex t) noexcept {
  const auto s_out = ss.fwd_mask(s);
  const auto t_out = ss.fwd_mask(t);
  for (std::size_t i = 0; i < s_out.size(); ++i) {
    if ((s_out[i] & ~t_out[i]) != 0) {
      return Decision::unreachable(Observation::kS2);
    }
  }
  const auto s_in = ss.bwd_mask(s);
  const auto t_in = ss.bwd_mask(t);
  for (std::size_t i = 0; i < s_in.size(); ++i) {
    if ((~s_in[i] & t_in[i]) != 0) {
      return Decision::unreachable(Observation::kS3);
    }
  }
  return Decision::unknown();
}

inline Decision answer_S(const SupportSet& ss, Vertex s, Vertex t) noexcept {
  const Decision pos = support_positive(ss, s, t);
  return pos.decisive() ? pos : support_negative(ss, s, t);
}

}  // namespace oreach
