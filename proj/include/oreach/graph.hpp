#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "oreach/types.hpp"

#ifdef OREACH_INSTRUMENT_ADJACENCY
#include "oreach/instrument.hpp"
#endif

namespace oreach {

// Immutable simple digraph. Forward and reverse adjacency are kept as two
// compressed sparse row arrays; neighbor lists are sorted by id.
class DiGraph {
 public:
  DiGraph() = default;

  // Builds a simple graph on n vertices. Self-loops and parallel edges are
  // dropped and counted. Throws FormatError on an endpoint >= n.
  struct Cleanup {
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
  };
  static DiGraph from_edges(Vertex n, std::span<const Edge> edges,
                            Cleanup* cleanup = nullptr);

  Vertex num_vertices() const noexcept { return n_; }
  std::uint64_t num_edges() const noexcept { return out_targets_.size(); }

  std::span<const Vertex> out(Vertex v) const noexcept {
#ifdef OREACH_INSTRUMENT_ADJACENCY
    instrument::note_adjacency_access();
#endif
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const Vertex> in(Vertex v) const noexcept {
#ifdef OREACH_INSTRUMENT_ADJACENCY
    instrument::note_adjacency_access();
#endif
    return {in_targets_.data() + in_offsets_[v],
            in_targets_.data() + in_offsets_[v + 1]};
  }

  std::size_t out_degree(Vertex v) const noexcept {
    return out_offsets_[v + 1] - out_offsets_[v];
  }
  std::size_t in_degree(Vertex v) const noexcept {
    return in_offsets_[v + 1] - in_offsets_[v];
  }

  std::vector<Edge> edges() const;

  // Same vertices, every edge flipped.
  DiGraph reversed() const;

  // FNV-1a over n and the forward adjacency; identifies the graph an index
  // was built for.
  std::uint64_t checksum() const noexcept;

  friend bool operator==(const DiGraph&, const DiGraph&) = default;

 private:
  Vertex n_ = 0;
  std::vector<std::uint64_t> out_offsets_{0};
  std::vector<Vertex> out_targets_;
  std::vector<std::uint64_t> in_offsets_{0};
  std::vector<Vertex> in_targets_;
};

enum class GraphFormat : std::uint8_t { kEdgeList, kGra };

std::optional<GraphFormat> parse_format_name(std::string_view name);

// A parsed file. When the input ids were not exactly 0..n-1, original_ids
// maps each dense id back to the id used in the file.
struct ParsedGraph {
  DiGraph graph;
  std::vector<std::uint32_t> original_ids;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;

  bool remapped() const noexcept { return !original_ids.empty(); }
  std::optional<Vertex> to_dense(std::uint64_t original) const;
};

ParsedGraph parse_graph(std::istream& in, GraphFormat format);
ParsedGraph load_graph(const std::filesystem::path& path, GraphFormat format);

void write_graph(std::ostream& out, const DiGraph& g, GraphFormat format);

// Two columns "original dense", one line per vertex.
void write_remap(std::ostream& out, const ParsedGraph& parsed);

struct CondensationMap {
  std::vector<Vertex> scc_of;  // per original vertex
  DiGraph dag;                 // one vertex per SCC
  std::vector<Vertex> rep_of;  // smallest original vertex of each SCC

  Vertex num_sccs() const noexcept { return dag.num_vertices(); }
};

// Iterative Tarjan. SCC ids are numbered so that every condensed edge goes
// from a smaller to a larger id.
CondensationMap scc_condense(const DiGraph& g);

// Dense component ids, ignoring edge direction. Components are numbered by
// their smallest vertex.
std::vector<Vertex> weak_components(const DiGraph& g);

struct LevelAssignment {
  std::vector<std::uint32_t> fwd;
  std::vector<std::uint32_t> bwd;
  std::uint32_t fwd_max = 0;
  std::uint32_t bwd_max = 0;
};

// Forward levels by Kahn's algorithm with a FIFO queue, backward levels over
// the same order reversed. Throws AcyclicityError on a cycle.
LevelAssignment topological_levels(const DiGraph& dag);

}  // namespace oreach
