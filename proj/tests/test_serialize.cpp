#include <doctest.h>

#include <sstream>

#include "oracle.hpp"
#include "oreach/index.hpp"

using namespace oreach;

namespace {

const std::vector<Edge> kDiamond = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};

void check_same_index(const ReachIndex& a, const ReachIndex& b) {
  CHECK(a.params == b.params);
  CHECK(a.wcc == b.wcc);
  CHECK(a.levels.fwd == b.levels.fwd);
  CHECK(a.levels.bwd == b.levels.bwd);
  CHECK(a.levels.fwd_max == b.levels.fwd_max);
  CHECK(a.levels.bwd_max == b.levels.bwd_max);
  CHECK(a.orderings == b.orderings);
  CHECK(a.supports == b.supports);
}

void write_u32(std::vector<std::byte>& bytes, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes[at + i] = static_cast<std::byte>(v >> (8 * i));
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("diamond round trip") {
  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  const ReachIndex ix = build_index(d, IndexParams{2, 1, 4, 8, 3});
  const auto bytes = serialize_index(ix);
  CHECK(bytes.size() == index_header_bytes(ix) + 4 * 38);
  const ReachIndex back = deserialize_index(bytes, &d);
  check_same_index(ix, back);
  for (Vertex s = 0; s < 4; ++s) {
    for (Vertex t = 0; t < 4; ++t) {
      CHECK(try_observations(ix, s, t).decision ==
            try_observations(back, s, t).decision);
      CHECK(pruned_bibfs(ix, s, t) == pruned_bibfs(back, s, t));
    }
  }
}

TEST_CASE("default parameters take 64 bytes per vertex") {
  std::mt19937_64 rng(3);
  const DiGraph g = oracle::random_dag(300, 0.02, rng);
  const ReachIndex ix = build_index(g, IndexParams{});
  CHECK(ix.record_bytes() == 64);
  CHECK(serialize_index(ix).size() == index_header_bytes(ix) + 64 * 300);
}

TEST_CASE("stream helpers") {
  std::mt19937_64 rng(5);
  const DiGraph g = oracle::random_dag(80, 0.05, rng);
  const ReachIndex ix = build_index(g, IndexParams{5, 20, 3, 4, 9});
  std::stringstream buf;
  write_index(buf, ix);
  check_same_index(ix, read_index(buf, &g));
}

TEST_CASE("property: round trips preserve every answer") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    const Vertex n = 1 + static_cast<Vertex>(rng() % 60);
    const DiGraph g = oracle::random_dag(n, 0.1, rng);
    const IndexParams ip{static_cast<std::uint32_t>(rng() % 7),
                         static_cast<std::uint32_t>(rng() % 70), 2, 3, rng()};
    const ReachIndex ix = build_index(g, ip);
    const ReachIndex back = deserialize_index(serialize_index(ix), &g);
    check_same_index(ix, back);
    const ReachIndex detached = deserialize_index(serialize_index(ix), nullptr);
    CHECK(detached.graph == nullptr);
    for (Vertex s = 0; s < n; ++s) {
      for (Vertex t = 0; t < n; ++t) {
        REQUIRE(try_observations(ix, s, t).decision ==
                try_observations(detached, s, t).decision);
      }
    }
  }
}

TEST_CASE("corrupt streams are rejected") {
  const DiGraph d = DiGraph::from_edges(4, kDiamond);
  const ReachIndex ix = build_index(d, IndexParams{2, 1, 4, 8, 0});
  const auto good = serialize_index(ix);

  SUBCASE("truncation") {
    for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{30},
                            good.size() - 1}) {
      std::vector<std::byte> bytes(good.begin(), good.begin() + cut);
      CHECK_THROWS_AS(deserialize_index(bytes, &d), FormatError);
    }
  }
  SUBCASE("trailing bytes") {
    auto bytes = good;
    bytes.push_back(std::byte{0});
    CHECK_THROWS_AS(deserialize_index(bytes, &d), FormatError);
  }
  SUBCASE("magic") {
    auto bytes = good;
    bytes[0] = std::byte{'X'};
    CHECK_THROWS_AS(deserialize_index(bytes, &d), FormatError);
  }
  SUBCASE("version") {
    auto bytes = good;
    write_u32(bytes, 8, kIndexFormatVersion + 1);
    CHECK_THROWS_AS(deserialize_index(bytes, &d), FormatError);
  }
  SUBCASE("checksum") {
    const std::vector<Edge> other = {{0, 1}, {0, 2}, {1, 3}};
    const DiGraph g = DiGraph::from_edges(4, other);
    CHECK_THROWS_AS(deserialize_index(good, &g), FormatError);
    CHECK_NOTHROW(deserialize_index(good, nullptr));
  }
  SUBCASE("positions") {
    auto bytes = good;
    // The first ordering's pos of vertex 1 is made to collide with vertex 0.
    const std::size_t header = index_header_bytes(ix);
    const std::size_t record = ix.record_bytes();
    std::uint32_t pos0 = 0;
    for (int i = 0; i < 4; ++i) {
      pos0 |= static_cast<std::uint32_t>(bytes[header + 12 + i]) << (8 * i);
    }
    write_u32(bytes, header + record + 12, pos0);
    CHECK_THROWS_AS(deserialize_index(bytes, &d), FormatError);
  }
}

}  // TEST_SUITE
