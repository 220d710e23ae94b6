#include <doctest.h>

#include "oracle.hpp"
#include "oreach/toporder.hpp"

using namespace oreach;

namespace {

const std::vector<Edge> kDiamond = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
const std::vector<Edge> kPath = {{0, 1}, {1, 2}};

// Checks every structural promise of one ordering against the closure.
void check_ordering(const DiGraph& g, const ExtTopOrder& ord,
                    const oracle::Closure& closure) {
  const Vertex n = g.num_vertices();
  REQUIRE(ord.size() == n);
  std::vector<Vertex> at(n, kNoVertex);
  for (Vertex v = 0; v < n; ++v) {
    REQUIRE(ord.pos[v] < n);
    REQUIRE(at[ord.pos[v]] == kNoVertex);
    at[ord.pos[v]] = v;
  }
  for (const Edge& e : g.edges()) REQUIRE(ord.pos[e.from] < ord.pos[e.to]);

  for (Vertex v = 0; v < n; ++v) {
    const Vertex p = ord.pos[v];
    if (ord.flavor == Flavor::kForward) {
      const Vertex high = ord.hi_or_lo[v];
      const Vertex max = ord.mx_or_mn[v];
      REQUIRE(p <= high);
      REQUIRE(high <= max);
      for (Vertex q = p; q <= high; ++q) REQUIRE(closure(v, at[q]));
      REQUIRE(closure(v, at[max]));
      for (Vertex q = max + 1; q < n; ++q) REQUIRE_FALSE(closure(v, at[q]));
    } else {
      const Vertex low = ord.hi_or_lo[v];
      const Vertex min = ord.mx_or_mn[v];
      REQUIRE(min <= low);
      REQUIRE(low <= p);
      for (Vertex q = low; q <= p; ++q) REQUIRE(closure(at[q], v));
      REQUIRE(closure(at[min], v));
      for (Vertex q = 0; q < min; ++q) REQUIRE_FALSE(closure(at[q], v));
    }
  }
}

}  // namespace

TEST_SUITE("toporder") {

TEST_CASE("diamond with fixed child order") {
  const DiGraph g = DiGraph::from_edges(4, kDiamond);
  const std::vector<Vertex> start = {0};
  const ExtTopOrder ord = extended_topsort(g, start, nullptr);
  CHECK(ord.flavor == Flavor::kForward);
  CHECK(ord.pos == std::vector<Vertex>{0, 2, 1, 3});
  CHECK(ord.hi_or_lo == std::vector<Vertex>{3, 3, 1, 3});
  CHECK(ord.mx_or_mn == std::vector<Vertex>{3, 3, 3, 3});

  const Decision d03 = answer_T(ord, 0, 3);
  CHECK(d03.verdict == Verdict::kReachable);
  CHECK(d03.by == Observation::kT1);
  const Decision d23 = answer_T(ord, 2, 3);
  CHECK(d23.verdict == Verdict::kReachable);
  CHECK(d23.by == Observation::kT3);
  const Decision d30 = answer_T(ord, 3, 0);
  CHECK(d30.verdict == Verdict::kUnreachable);
  CHECK(d30.by == Observation::kB4);
}

TEST_CASE("path orderings") {
  const DiGraph g = DiGraph::from_edges(3, kPath);
  const std::vector<Vertex> start = {0};
  const ExtTopOrder fwd = extended_topsort(g, start, nullptr);
  CHECK(fwd.pos == std::vector<Vertex>{0, 1, 2});
  CHECK(fwd.hi_or_lo == std::vector<Vertex>{2, 2, 2});
  CHECK(fwd.mx_or_mn == std::vector<Vertex>{2, 2, 2});

  const ExtTopOrder bwd = extended_topsort_backward(g, nullptr);
  CHECK(bwd.flavor == Flavor::kBackward);
  CHECK(bwd.pos == std::vector<Vertex>{0, 1, 2});
  CHECK(bwd.hi_or_lo == std::vector<Vertex>{0, 0, 0});
  CHECK(bwd.mx_or_mn == std::vector<Vertex>{0, 0, 0});
}

TEST_CASE("backward diamond keeps min <= low <= pos") {
  const DiGraph g = DiGraph::from_edges(4, kDiamond);
  const ExtTopOrder bwd = extended_topsort_backward(g, nullptr);
  check_ordering(g, bwd, oracle::Closure(g));
  // The reverse DFS starts at 3 and visits 1 before 2.
  CHECK(bwd.pos == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(bwd.hi_or_lo == std::vector<Vertex>{0, 0, 2, 0});
  CHECK(bwd.mx_or_mn == std::vector<Vertex>{0, 0, 0, 0});
}

TEST_CASE("an empty start order still places every vertex") {
  const DiGraph g = DiGraph::from_edges(4, kDiamond);
  const ExtTopOrder ord = extended_topsort(g, {}, nullptr);
  check_ordering(g, ord, oracle::Closure(g));
}

TEST_CASE("cycles are rejected") {
  const std::vector<Edge> cycle = {{0, 1}, {1, 0}};
  const DiGraph g = DiGraph::from_edges(2, cycle);
  const std::vector<Vertex> start = {0};
  CHECK_THROWS_AS(extended_topsort(g, start, nullptr), AcyclicityError);
  CHECK_THROWS_AS(random_backward_order(g, 1), AcyclicityError);
}

TEST_CASE("ordering analysis on small graphs") {
  const DiGraph e = DiGraph::from_edges(3, {});
  const AnalysisReport empty = ordering_analysis(random_forward_order(e, 0),
                                                 build_matrix(e));
  CHECK(empty.negatives == 6);
  CHECK(empty.negatives_witnessed == 3);
  CHECK(empty.positives == 0);
  CHECK_FALSE(empty.rho_plus.has_value());
  CHECK(*empty.rho_minus == doctest::Approx(0.5));
}

TEST_CASE("property: distinct orderings witness distinct pair sets") {
  std::mt19937_64 rng(71);
  int distinct = 0;
  for (int round = 0; round < 40; ++round) {
    const Vertex n = 2 + static_cast<Vertex>(rng() % 12);
    const DiGraph g = oracle::random_dag(n, 0.2, rng);
    const ExtTopOrder a = random_forward_order(g, rng());
    const ExtTopOrder b = random_backward_order(g, rng());
    if (a.pos == b.pos) continue;
    ++distinct;
    bool differs = false;
    for (Vertex s = 0; s < n && !differs; ++s) {
      for (Vertex t = 0; t < n; ++t) {
        if ((a.pos[t] < a.pos[s]) != (b.pos[t] < b.pos[s])) differs = true;
      }
    }
    CHECK(differs);
  }
  CHECK(distinct > 0);
}

TEST_CASE("property: orderings honour their range indices") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 80; ++round) {
    const Vertex n = 1 + static_cast<Vertex>(rng() % 40);
    const DiGraph g = oracle::random_dag(n, 0.05 + 0.3 * (round % 4) / 3.0, rng);
    const oracle::Closure closure(g);
    check_ordering(g, random_forward_order(g, rng()), closure);
    check_ordering(g, random_backward_order(g, rng()), closure);
  }
}

TEST_CASE("property: T answers are sound") {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 60; ++round) {
    const Vertex n = 2 + static_cast<Vertex>(rng() % 30);
    const DiGraph g = oracle::random_dag(n, 0.15, rng);
    const oracle::Closure closure(g);
    for (const ExtTopOrder& ord :
         {random_forward_order(g, rng()), random_backward_order(g, rng())}) {
      for (Vertex s = 0; s < n; ++s) {
        for (Vertex t = 0; t < n; ++t) {
          if (s == t) continue;
          const Decision d = answer_T(ord, s, t);
          if (d.decisive()) {
            REQUIRE((d.verdict == Verdict::kReachable) == closure(s, t));
          }
        }
      }
    }
  }
}

TEST_CASE("property: each ordering witnesses half of all pairs") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 40; ++round) {
    const Vertex n = 2 + static_cast<Vertex>(rng() % 30);
    const DiGraph g = oracle::random_dag(n, 0.2, rng);
    const ReachMatrix mx = build_matrix(g);
    const std::uint64_t half = std::uint64_t{n} * (n - 1) / 2;
    for (const ExtTopOrder& ord :
         {random_forward_order(g, rng()), random_backward_order(g, rng())}) {
      CHECK(ordering_analysis(ord, mx).negatives_witnessed == half);
    }
    CHECK(reachability_rho(mx) <= 0.5);
  }
}

TEST_CASE("a total order admits exactly one ordering") {
  std::vector<Edge> complete;
  for (Vertex i = 0; i < 4; ++i) {
    for (Vertex j = i + 1; j < 4; ++j) complete.push_back({i, j});
  }
  const DiGraph g = DiGraph::from_edges(4, complete);
  CHECK(reachability_rho(build_matrix(g)) == 0.5);
  const ExtTopOrder a = random_forward_order(g, 1);
  const ExtTopOrder b = random_forward_order(g, 2);
  const ExtTopOrder c = random_backward_order(g, 3);
  CHECK(a.pos == b.pos);
  CHECK(a.pos == c.pos);
  const AnalysisReport r = ordering_analysis(a, build_matrix(g));
  CHECK(*r.rho_minus == 1.0);
}

TEST_CASE("orderings are deterministic per seed") {
  std::mt19937_64 rng(67);
  const DiGraph g = oracle::random_dag(60, 0.08, rng);
  CHECK(random_forward_order(g, 9) == random_forward_order(g, 9));
  CHECK(random_backward_order(g, 9) == random_backward_order(g, 9));
}

}  // TEST_SUITE
