#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "oreach/graph.hpp"
#include "oreach/types.hpp"

namespace oreach {

inline constexpr std::uint64_t kDefaultMatrixCapBytes = std::uint64_t{4} << 30;

// Full transitive closure, one bit per ordered pair, rows packed in 64-bit
// words. The diagonal is set.
class ReachMatrix {
 public:
  ReachMatrix() = default;
  explicit ReachMatrix(Vertex n);

  Vertex size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  bool reachable(Vertex s, Vertex t) const noexcept {
    return (bits_[s * words_per_row_ + (t >> 6)] >> (t & 63)) & 1U;
  }

  std::span<const std::uint64_t> row(Vertex s) const noexcept {
    return {bits_.data() + s * words_per_row_, words_per_row_};
  }
  std::span<std::uint64_t> row(Vertex s) noexcept {
    return {bits_.data() + s * words_per_row_, words_per_row_};
  }

  // Set bits excluding the diagonal.
  std::uint64_t count_reachable_pairs() const noexcept;

  friend bool operator==(const ReachMatrix&, const ReachMatrix&) = default;

 private:
  Vertex n_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::uint64_t matrix_bytes(Vertex n) noexcept;

// One BFS per source row. Rows are independent, so the parallel kernel
// splits them across threads; the serial kernel is the reference.
// Throws CapacityError when the matrix would exceed cap_bytes.
ReachMatrix build_matrix(const DiGraph& g, Execution exec = Execution::kParallel,
                         std::uint64_t cap_bytes = kDefaultMatrixCapBytes);

inline bool matrix_query(const ReachMatrix& mx, Vertex s, Vertex t) noexcept {
  return mx.reachable(s, t);
}

// Reachability ratio over the n(n-1) non-trivial ordered pairs.
// Throws UndefinedRatioError for n < 2.
double reachability_rho(const ReachMatrix& mx);

// Work done by a traversal: vertices removed from a queue and edges scanned.
struct SearchWork {
  std::uint64_t expanded = 0;
  std::uint64_t edges_scanned = 0;
};

// Plain BFS from s with early exit on t. Scratch is reused between calls.
class BfsSearch {
 public:
  explicit BfsSearch(const DiGraph& g);
  bool reachable(Vertex s, Vertex t, SearchWork* work = nullptr);

 private:
  const DiGraph* g_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> queue_;
};

// Bidirectional BFS without pruning, alternating one expansion per side.
class BiBfsSearch {
 public:
  explicit BiBfsSearch(const DiGraph& g);
  bool reachable(Vertex s, Vertex t, SearchWork* work = nullptr);

 private:
  const DiGraph* g_;
  std::vector<std::uint32_t> fwd_seen_;
  std::vector<std::uint32_t> bwd_seen_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> fwd_queue_;
  std::vector<Vertex> bwd_queue_;
};

bool bfs_query(const DiGraph& g, Vertex s, Vertex t);
bool bibfs_query(const DiGraph& g, Vertex s, Vertex t);

}  // namespace oreach
