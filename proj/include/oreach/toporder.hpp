#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "oreach/baselines.hpp"
#include "oreach/graph.hpp"
#include "oreach/observation.hpp"

namespace oreach {

using Rng = std::mt19937_64;

enum class Flavor : std::uint8_t { kForward, kBackward };

// A topological ordering extended with per-vertex range indices.
//
// Forward flavor: hi_or_lo is High(v), the largest position certainly
// reachable from v through the block of vertices placed while v was on the
// DFS stack; mx_or_mn is Max(v), the largest position of any vertex v
// reaches. pos(v) <= High(v) <= Max(v).
//
// Backward flavor: hi_or_lo is Low(v), the smallest position of a vertex that
// certainly reaches v; mx_or_mn is Min(v), the smallest position of any vertex
// reaching v. Min(v) <= Low(v) <= pos(v).
struct ExtTopOrder {
  Flavor flavor = Flavor::kForward;
  std::uint64_t seed = 0;
  std::vector<Vertex> pos;
  std::vector<Vertex> hi_or_lo;
  std::vector<Vertex> mx_or_mn;

  Vertex size() const noexcept { return static_cast<Vertex>(pos.size()); }

  friend bool operator==(const ExtTopOrder&, const ExtTopOrder&) = default;
};

// Depth-first topological sort that places each vertex at the front of the
// ordering when it finishes. DFS roots are taken from start_order, then from
// every vertex in id order so that all vertices are placed. When rng is
// non-null, each vertex's children are visited in a random order; otherwise
// in stored (ascending id) order. The graph itself is never modified.
// Throws AcyclicityError when a back edge is found.
ExtTopOrder extended_topsort(const DiGraph& dag,
                             std::span<const Vertex> start_order, Rng* rng);

// Runs extended_topsort on the reverse graph starting from its sources (the
// sinks of dag, shuffled when rng is non-null) and mirrors the result into a
// backward-flavor ordering of dag.
ExtTopOrder extended_topsort_backward(const DiGraph& dag, Rng* rng);

// Randomized orderings as used by the index: roots are all sources, shuffled.
ExtTopOrder random_forward_order(const DiGraph& dag, std::uint64_t seed);
ExtTopOrder random_backward_order(const DiGraph& dag, std::uint64_t seed);

// Constant-time test of one ordering, s != t. Forward flavor applies B4, T1,
// T2, T3; backward flavor applies B4, T4, T5, T6.
inline Decision answer_T(const ExtTopOrder& ord, Vertex s, Vertex t) noexcept {
  const Vertex ps = ord.pos[s];
  const Vertex pt = ord.pos[t];
  if (pt < ps) return Decision::unreachable(Observation::kB4);
  if (ord.flavor == Flavor::kForward) {
    if (pt <= ord.hi_or_lo[s]) return Decision::reachable(Observation::kT1);
    const Vertex max = ord.mx_or_mn[s];
    if (pt > max) return Decision::unreachable(Observation::kT2);
    if (pt == max) return Decision::reachable(Observation::kT3);
  } else {
    if (ord.hi_or_lo[t] <= ps) return Decision::reachable(Observation::kT4);
    const Vertex min = ord.mx_or_mn[t];
    if (ps < min) return Decision::unreachable(Observation::kT5);
    if (ps == min) return Decision::reachable(Observation::kT6);
  }
  return Decision::unknown();
}

// Counts of what one ordering can decide, against a full closure.
struct AnalysisReport {
  std::uint64_t negatives = 0;           // |N|
  std::uint64_t negatives_witnessed = 0; // |N(tau)|: pairs with pos(t) < pos(s)
  std::uint64_t positives = 0;           // |P|
  std::uint64_t positives_answered = 0;  // |P(tau)|
  std::optional<double> rho_minus;       // unset when |N| = 0
  std::optional<double> rho_plus;        // unset when |P| = 0
};

AnalysisReport ordering_analysis(const ExtTopOrder& ord,
                                 const ReachMatrix& oracle);

}  // namespace oreach
