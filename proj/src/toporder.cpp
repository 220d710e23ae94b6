#include "oreach/toporder.hpp"

#include <algorithm>
#include <string>

namespace oreach {
namespace {

struct Frame {
  Vertex v;
  std::uint64_t cursor;  // index into the scratch child array
  std::uint64_t end;
};

std::vector<Vertex> sources_of(const DiGraph& g) {
  std::vector<Vertex> sources;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (g.in_degree(v) == 0) sources.push_back(v);
  }
  return sources;
}

}  // namespace

ExtTopOrder extended_topsort(const DiGraph& dag,
                             std::span<const Vertex> start_order, Rng* rng) {
  const Vertex n = dag.num_vertices();
  ExtTopOrder ord;
  ord.flavor = Flavor::kForward;
  ord.pos.assign(n, kNoVertex);
  ord.hi_or_lo.assign(n, 0);
  ord.mx_or_mn.assign(n, 0);

  // Per-vertex child lists copied into one scratch array and shuffled there
  // on first visit.
  std::vector<Vertex> children;
  std::vector<std::uint64_t> begin(static_cast<std::size_t>(n) + 1, 0);
  children.reserve(dag.num_edges());
  for (Vertex v = 0; v < n; ++v) {
    const auto succ = dag.out(v);
    children.insert(children.end(), succ.begin(), succ.end());
    begin[v + 1] = children.size();
  }

  enum : std::uint8_t { kNew, kOpen, kDone };
  std::vector<std::uint8_t> state(n, kNew);
  std::vector<Frame> stack;
  // Next free position, counting down from n - 1.
  std::int64_t front = static_cast<std::int64_t>(n) - 1;

  auto open = [&](Vertex v) {
    state[v] = kOpen;
    ord.hi_or_lo[v] = static_cast<Vertex>(front);
    if (rng != nullptr) {
      std::shuffle(children.begin() + begin[v], children.begin() + begin[v + 1],
                   *rng);
    }
    stack.push_back({v, begin[v], begin[v + 1]});
  };

  auto run_from = [&](Vertex root) {
    if (state[root] != kNew) return;
    open(root);
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.cursor < top.end) {
        const Vertex w = children[top.cursor++];
        if (state[w] == kNew) {
          open(w);
        } else if (state[w] == kOpen) {
          throw AcyclicityError("cycle through vertex " + std::to_string(w));
        }
        continue;
      }
      const Vertex v = top.v;
      stack.pop_back();
      const Vertex p = static_cast<Vertex>(front--);
      ord.pos[v] = p;
      Vertex max = p;
      for (Vertex w : dag.out(v)) max = std::max(max, ord.mx_or_mn[w]);
      ord.mx_or_mn[v] = max;
      state[v] = kDone;
    }
  };

  for (Vertex root : start_order) run_from(root);
  for (Vertex root = 0; root < n; ++root) run_from(root);
  return ord;
}

ExtTopOrder extended_topsort_backward(const DiGraph& dag, Rng* rng) {
  const DiGraph reverse = dag.reversed();
  std::vector<Vertex> roots = sources_of(reverse);
  if (rng != nullptr) std::shuffle(roots.begin(), roots.end(), *rng);
  ExtTopOrder mirrored = extended_topsort(reverse, roots, rng);

  const Vertex last = dag.num_vertices() == 0 ? 0 : dag.num_vertices() - 1;
  ExtTopOrder ord;
  ord.flavor = Flavor::kBackward;
  ord.pos.resize(dag.num_vertices());
  ord.hi_or_lo.resize(dag.num_vertices());
  ord.mx_or_mn.resize(dag.num_vertices());
  for (Vertex v = 0; v < dag.num_vertices(); ++v) {
    ord.pos[v] = last - mirrored.pos[v];
    ord.hi_or_lo[v] = last - mirrored.hi_or_lo[v];
    ord.mx_or_mn[v] = last - mirrored.mx_or_mn[v];
  }
  return ord;
}

ExtTopOrder random_forward_order(const DiGraph& dag, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vertex> roots = sources_of(dag);
  std::shuffle(roots.begin(), roots.end(), rng);
  ExtTopOrder ord = extended_topsort(dag, roots, &rng);
  ord.seed = seed;
  return ord;
}

ExtTopOrder random_backward_order(const DiGraph& dag, std::uint64_t seed) {
  Rng rng(seed);
  ExtTopOrder ord = extended_topsort_backward(dag, &rng);
  ord.seed = seed;
  return ord;
}

AnalysisReport ordering_analysis(const ExtTopOrder& ord,
                                 const ReachMatrix& oracle) {
  AnalysisReport report;
  const Vertex n = ord.size();
  for (Vertex s = 0; s < n; ++s) {
    for (Vertex t = 0; t < n; ++t) {
      if (s == t) continue;
      if (oracle.reachable(s, t)) {
        ++report.positives;
        if (answer_T(ord, s, t).verdict == Verdict::kReachable) {
          ++report.positives_answered;
        }
      } else {
        ++report.negatives;
      }
      if (ord.pos[t] < ord.pos[s]) ++report.negatives_witnessed;
    }
  }
  if (report.negatives > 0) {
    report.rho_minus = static_cast<double>(report.negatives_witnessed) /
                       static_cast<double>(report.negatives);
  }
  if (report.positives > 0) {
    report.rho_plus = static_cast<double>(report.positives_answered) /
                      static_cast<double>(report.positives);
  }
  return report;
}

}  // namespace oreach
