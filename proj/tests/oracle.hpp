#pragma once

// Brute-force ground truth for small graphs, independent of the library's
// traversal code. Everything here works on plain edge lists.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "oreach/graph.hpp"

namespace oracle {

using oreach::Edge;
using oreach::Vertex;

// Reflexive transitive closure by Warshall's algorithm.
class Closure {
 public:
  Closure(Vertex n, const std::vector<Edge>& edges)
      : n_(n), r_(static_cast<std::size_t>(n) * n, 0) {
    for (Vertex v = 0; v < n; ++v) at(v, v) = 1;
    for (const Edge& e : edges) at(e.from, e.to) = 1;
    for (Vertex k = 0; k < n; ++k) {
      for (Vertex i = 0; i < n; ++i) {
        if (!at(i, k)) continue;
        for (Vertex j = 0; j < n; ++j) {
          if (at(k, j)) at(i, j) = 1;
        }
      }
    }
  }

  explicit Closure(const oreach::DiGraph& g) : Closure(g.num_vertices(), g.edges()) {}

  Vertex size() const { return n_; }
  bool operator()(Vertex s, Vertex t) const {
    return r_[static_cast<std::size_t>(s) * n_ + t] != 0;
  }

  std::uint64_t positive_pairs() const {
    std::uint64_t c = 0;
    for (Vertex s = 0; s < n_; ++s) {
      for (Vertex t = 0; t < n_; ++t) c += s != t && (*this)(s, t);
    }
    return c;
  }

 private:
  char& at(Vertex i, Vertex j) { return r_[static_cast<std::size_t>(i) * n_ + j]; }

  Vertex n_;
  std::vector<char> r_;
};

// Edges i -> j for i < j, each present with the given probability, under a
// random relabelling so that ids carry no topological information.
inline std::vector<Edge> random_dag_edges(Vertex n, double density,
                                          std::mt19937_64& rng) {
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), Vertex{0});
  std::shuffle(label.begin(), label.end(), rng);
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.push_back({label[i], label[j]});
    }
  }
  return edges;
}

inline oreach::DiGraph random_dag(Vertex n, double density, std::mt19937_64& rng) {
  const auto edges = random_dag_edges(n, density, rng);
  return oreach::DiGraph::from_edges(n, edges);
}

// Arbitrary digraph, cycles and self-loops included.
inline std::vector<Edge> random_digraph_edges(Vertex n, std::size_t m,
                                              std::mt19937_64& rng) {
  std::vector<Edge> edges;
  if (n == 0) return edges;
  std::uniform_int_distribution<Vertex> pick(0, n - 1);
  for (std::size_t i = 0; i < m; ++i) edges.push_back({pick(rng), pick(rng)});
  return edges;
}

// Same-SCC relation from mutual reachability.
inline bool same_scc(const Closure& c, Vertex u, Vertex v) {
  return c(u, v) && c(v, u);
}

// Undirected connectivity by repeated relaxation of component labels.
inline std::vector<Vertex> weak_labels(Vertex n, const std::vector<Edge>& edges) {
  std::vector<Vertex> label(n);
  std::iota(label.begin(), label.end(), Vertex{0});
  for (bool changed = true; changed;) {
    changed = false;
    for (const Edge& e : edges) {
      const Vertex m = std::min(label[e.from], label[e.to]);
      if (label[e.from] != m || label[e.to] != m) {
        label[e.from] = label[e.to] = m;
        changed = true;
      }
    }
  }
  return label;
}

// Longest path from any source, and to any sink.
inline std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>
longest_path_levels(Vertex n, const std::vector<Edge>& edges) {
  std::vector<std::uint32_t> fwd(n, 0);
  std::vector<std::uint32_t> bwd(n, 0);
  for (Vertex round = 0; round < n; ++round) {
    for (const Edge& e : edges) {
      fwd[e.to] = std::max(fwd[e.to], fwd[e.from] + 1);
      bwd[e.from] = std::max(bwd[e.from], bwd[e.to] + 1);
    }
  }
  return {fwd, bwd};
}

}  // namespace oracle
