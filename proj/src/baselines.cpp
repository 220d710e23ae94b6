#include "oreach/baselines.hpp"

#include <bit>
#include <string>

namespace oreach {
namespace {

// Fills `row` with R+(s) using `queue` as scratch. The row doubles as the
// visited set.
void fill_row(const DiGraph& g, Vertex s, std::span<std::uint64_t> row,
              std::vector<Vertex>& queue) {
  queue.clear();
  queue.push_back(s);
  row[s >> 6] |= std::uint64_t{1} << (s & 63);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Vertex w : g.out(queue[head])) {
      std::uint64_t& word = row[w >> 6];
      const std::uint64_t bit = std::uint64_t{1} << (w & 63);
      if ((word & bit) == 0) {
        word |= bit;
        queue.push_back(w);
      }
    }
  }
}

// Starts a new epoch on a stamp array, clearing it on wrap-around.
std::uint32_t bump(std::uint32_t& epoch, std::vector<std::uint32_t>& stamps) {
  if (++epoch == 0) {
    std::fill(stamps.begin(), stamps.end(), 0);
    epoch = 1;
  }
  return epoch;
}

}  // namespace

ReachMatrix::ReachMatrix(Vertex n)
    : n_(n),
      words_per_row_((static_cast<std::size_t>(n) + 63) / 64),
      bits_(static_cast<std::size_t>(n) * words_per_row_, 0) {}

std::uint64_t ReachMatrix::count_reachable_pairs() const noexcept {
  std::uint64_t total = 0;
  for (std::uint64_t word : bits_) total += std::popcount(word);
  return total - n_;
}

std::uint64_t matrix_bytes(Vertex n) noexcept {
  return static_cast<std::uint64_t>(n) * ((static_cast<std::uint64_t>(n) + 63) / 64) * 8;
}

ReachMatrix build_matrix(const DiGraph& g, Execution exec,
                         std::uint64_t cap_bytes) {
  const Vertex n = g.num_vertices();
  if (matrix_bytes(n) > cap_bytes) {
    throw CapacityError("reachability matrix for n = " + std::to_string(n) +
                        " needs " + std::to_string(matrix_bytes(n)) +
                        " bytes, cap is " + std::to_string(cap_bytes));
  }
  ReachMatrix mx(n);
  if (exec == Execution::kSerial) {
    std::vector<Vertex> queue;
    queue.reserve(n);
    for (Vertex s = 0; s < n; ++s) fill_row(g, s, mx.row(s), queue);
    return mx;
  }
#pragma omp parallel
  {
    std::vector<Vertex> queue;
    queue.reserve(n);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s) {
      fill_row(g, static_cast<Vertex>(s), mx.row(static_cast<Vertex>(s)), queue);
    }
  }
  return mx;
}

double reachability_rho(const ReachMatrix& mx) {
  const std::uint64_t n = mx.size();
  if (n < 2) throw UndefinedRatioError("reachability is undefined for n < 2");
  return static_cast<double>(mx.count_reachable_pairs()) /
         static_cast<double>(n * (n - 1));
}

BfsSearch::BfsSearch(const DiGraph& g)
    : g_(&g), seen_(g.num_vertices(), 0) {
  queue_.reserve(g.num_vertices());
}

bool BfsSearch::reachable(Vertex s, Vertex t, SearchWork* work) {
  if (s == t) return true;
  const std::uint32_t epoch = bump(epoch_, seen_);
  SearchWork local;
  queue_.clear();
  queue_.push_back(s);
  seen_[s] = epoch;
  bool found = false;
  for (std::size_t head = 0; head < queue_.size() && !found; ++head) {
    ++local.expanded;
    for (Vertex w : g_->out(queue_[head])) {
      ++local.edges_scanned;
      if (w == t) {
        found = true;
        break;
      }
      if (seen_[w] != epoch) {
        seen_[w] = epoch;
        queue_.push_back(w);
      }
    }
  }
  if (work != nullptr) *work = local;
  return found;
}

BiBfsSearch::BiBfsSearch(const DiGraph& g)
    : g_(&g), fwd_seen_(g.num_vertices(), 0), bwd_seen_(g.num_vertices(), 0) {
  fwd_queue_.reserve(g.num_vertices());
  bwd_queue_.reserve(g.num_vertices());
}

bool BiBfsSearch::reachable(Vertex s, Vertex t, SearchWork* work) {
  if (s == t) return true;
  // Both stamp arrays share one epoch counter.
  const std::uint32_t epoch = bump(epoch_, fwd_seen_);
  if (epoch == 1) std::fill(bwd_seen_.begin(), bwd_seen_.end(), 0);
  SearchWork local;
  fwd_queue_.assign(1, s);
  bwd_queue_.assign(1, t);
  fwd_seen_[s] = epoch;
  bwd_seen_[t] = epoch;
  std::size_t fwd_head = 0;
  std::size_t bwd_head = 0;
  bool found = false;
  while (!found && fwd_head < fwd_queue_.size() &&
         bwd_head < bwd_queue_.size()) {
    ++local.expanded;
    for (Vertex w : g_->out(fwd_queue_[fwd_head++])) {
      ++local.edges_scanned;
      if (bwd_seen_[w] == epoch) {
        found = true;
        break;
      }
      if (fwd_seen_[w] != epoch) {
        fwd_seen_[w] = epoch;
        fwd_queue_.push_back(w);
      }
    }
    if (found || fwd_head == fwd_queue_.size()) break;
    ++local.expanded;
    for (Vertex w : g_->in(bwd_queue_[bwd_head++])) {
      ++local.edges_scanned;
      if (fwd_seen_[w] == epoch) {
        found = true;
        break;
      }
      if (bwd_seen_[w] != epoch) {
        bwd_seen_[w] = epoch;
        bwd_queue_.push_back(w);
      }
    }
  }
  if (work != nullptr) *work = local;
  return found;
}

bool bfs_query(const DiGraph& g, Vertex s, Vertex t) {
  BfsSearch search(g);
  return search.reachable(s, t);
}

bool bibfs_query(const DiGraph& g, Vertex s, Vertex t) {
  BiBfsSearch search(g);
  return search.reachable(s, t);
}

}  // namespace oreach
