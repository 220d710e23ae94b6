#include "oreach/graph.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace oreach {
namespace {

// Counting sort of edges into CSR form, keyed by `key`, emitting `value`.
template <typename Key, typename Value>
void fill_csr(Vertex n, std::span<const Edge> edges, Key key, Value value,
              std::vector<std::uint64_t>& offsets,
              std::vector<Vertex>& targets) {
  offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) ++offsets[key(e) + 1];
  for (Vertex v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  targets.resize(edges.size());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges) targets[cursor[key(e)]++] = value(e);
}

}  // namespace

DiGraph DiGraph::from_edges(Vertex n, std::span<const Edge> edges,
                            Cleanup* cleanup) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  Cleanup counts;
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n) {
      throw FormatError("edge (" + std::to_string(e.from) + ", " +
                        std::to_string(e.to) + ") has an endpoint >= n = " +
                        std::to_string(n));
    }
    if (e.from == e.to) {
      ++counts.self_loops;
      continue;
    }
    kept.push_back(e);
  }
  std::sort(kept.begin(), kept.end());
  const auto last = std::unique(kept.begin(), kept.end());
  counts.duplicates = static_cast<std::size_t>(kept.end() - last);
  kept.erase(last, kept.end());
  if (cleanup != nullptr) *cleanup = counts;

  DiGraph g;
  g.n_ = n;
  // kept is sorted by (from, to), so both passes leave neighbor lists sorted.
  fill_csr(
      n, kept, [](const Edge& e) { return e.from; },
      [](const Edge& e) { return e.to; }, g.out_offsets_, g.out_targets_);
  fill_csr(
      n, kept, [](const Edge& e) { return e.to; },
      [](const Edge& e) { return e.from; }, g.in_offsets_, g.in_targets_);
  return g;
}

std::vector<Edge> DiGraph::edges() const {
  std::vector<Edge> result;
  result.reserve(out_targets_.size());
  for (Vertex u = 0; u < n_; ++u) {
    for (std::uint64_t i = out_offsets_[u]; i < out_offsets_[u + 1]; ++i) {
      result.push_back({u, out_targets_[i]});
    }
  }
  return result;
}

DiGraph DiGraph::reversed() const {
  DiGraph r;
  r.n_ = n_;
  r.out_offsets_ = in_offsets_;
  r.out_targets_ = in_targets_;
  r.in_offsets_ = out_offsets_;
  r.in_targets_ = out_targets_;
  return r;
}

std::uint64_t DiGraph::checksum() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(n_);
  mix(out_targets_.size());
  for (std::uint64_t o : out_offsets_) mix(o);
  for (Vertex v : out_targets_) mix(v);
  return h;
}

CondensationMap scc_condense(const DiGraph& g) {
  constexpr Vertex kUnvisited = kNoVertex;
  const Vertex n = g.num_vertices();
  std::vector<Vertex> index(n, kUnvisited);
  std::vector<Vertex> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> component(n, kNoVertex);
  std::vector<Vertex> scc_stack;

  struct Frame {
    Vertex v;
    std::uint32_t cursor;
  };
  std::vector<Frame> calls;
  Vertex next_index = 0;
  Vertex num_components = 0;

  auto open = [&](Vertex v) {
    index[v] = low[v] = next_index++;
    scc_stack.push_back(v);
    on_stack[v] = 1;
    calls.push_back({v, 0});
  };

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    open(root);
    while (!calls.empty()) {
      Frame& frame = calls.back();
      const Vertex v = frame.v;
      const auto succ = g.out(v);
      if (frame.cursor < succ.size()) {
        const Vertex w = succ[frame.cursor++];
        if (index[w] == kUnvisited) {
          open(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      calls.pop_back();
      if (low[v] == index[v]) {
        Vertex w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          component[w] = num_components;
        } while (w != v);
        ++num_components;
      }
      if (!calls.empty()) {
        Vertex& parent_low = low[calls.back().v];
        parent_low = std::min(parent_low, low[v]);
      }
    }
  }

  // Tarjan finishes sink components first; flip so ids follow a topological
  // order of the condensation.
  CondensationMap result;
  result.scc_of.resize(n);
  result.rep_of.assign(num_components, kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex c = num_components - 1 - component[v];
    result.scc_of[v] = c;
    if (result.rep_of[c] == kNoVertex) result.rep_of[c] = v;
  }
  std::vector<Edge> condensed;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex w : g.out(u)) {
      if (result.scc_of[u] != result.scc_of[w]) {
        condensed.push_back({result.scc_of[u], result.scc_of[w]});
      }
    }
  }
  result.dag = DiGraph::from_edges(num_components, condensed);
  return result;
}

std::vector<Vertex> weak_components(const DiGraph& g) {
  const Vertex n = g.num_vertices();
  std::vector<Vertex> comp(n, kNoVertex);
  std::vector<Vertex> queue;
  queue.reserve(n);
  Vertex next = 0;
  for (Vertex root = 0; root < n; ++root) {
    if (comp[root] != kNoVertex) continue;
    queue.clear();
    queue.push_back(root);
    comp[root] = next;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (auto nbrs : {g.out(v), g.in(v)}) {
        for (Vertex w : nbrs) {
          if (comp[w] == kNoVertex) {
            comp[w] = next;
            queue.push_back(w);
          }
        }
      }
    }
    ++next;
  }
  return comp;
}

LevelAssignment topological_levels(const DiGraph& dag) {
  const Vertex n = dag.num_vertices();
  LevelAssignment levels;
  levels.fwd.assign(n, 0);
  levels.bwd.assign(n, 0);

  std::vector<std::uint32_t> pending(n);
  std::vector<Vertex> order;
  order.reserve(n);
  for (Vertex v = 0; v < n; ++v) {
    pending[v] = static_cast<std::uint32_t>(dag.in_degree(v));
    if (pending[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vertex v = order[head];
    for (Vertex w : dag.out(v)) {
      levels.fwd[w] = std::max(levels.fwd[w], levels.fwd[v] + 1);
      if (--pending[w] == 0) order.push_back(w);
    }
  }
  if (order.size() != n) {
    throw AcyclicityError("graph has a cycle: " +
                          std::to_string(n - order.size()) +
                          " vertices never became sources");
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    for (Vertex w : dag.out(v)) {
      levels.bwd[v] = std::max(levels.bwd[v], levels.bwd[w] + 1);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    levels.fwd_max = std::max(levels.fwd_max, levels.fwd[v]);
    levels.bwd_max = std::max(levels.bwd_max, levels.bwd[v]);
  }
  return levels;
}

}  // namespace oreach
