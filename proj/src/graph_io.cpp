#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "oreach/graph.hpp"

namespace oreach {
namespace {

struct RawEdge {
  std::uint32_t from;
  std::uint32_t to;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool is_comment(std::string_view line) {
  return !line.empty() && (line.front() == '#' || line.front() == '%');
}

// Splits off the next whitespace-delimited token; empty when exhausted.
std::string_view next_token(std::string_view& rest) {
  const auto first = rest.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    rest = {};
    return {};
  }
  rest.remove_prefix(first);
  const auto end = rest.find_first_of(" \t\r");
  std::string_view token = rest.substr(0, end);
  rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
  return token;
}

std::uint32_t parse_id(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a vertex id, got '" +
                               std::string(token) + "'");
  }
  if (value > std::numeric_limits<std::uint32_t>::max() - 1) {
    throw ParseError(line, "vertex id " + std::string(token) +
                               " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(value);
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Finishes a parse given the declared id set (sorted, unique) and raw edges
// in original ids.
ParsedGraph finish(std::vector<std::uint32_t> ids,
                   const std::vector<RawEdge>& raw) {
  ParsedGraph parsed;
  const bool dense =
      ids.empty() || ids.back() == static_cast<std::uint32_t>(ids.size() - 1);
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  if (dense) {
    for (const RawEdge& e : raw) edges.push_back({e.from, e.to});
  } else {
    auto dense_of = [&ids](std::uint32_t original) {
      return static_cast<Vertex>(
          std::lower_bound(ids.begin(), ids.end(), original) - ids.begin());
    };
    for (const RawEdge& e : raw) {
      edges.push_back({dense_of(e.from), dense_of(e.to)});
    }
    parsed.original_ids = std::move(ids);
  }
  DiGraph::Cleanup cleanup;
  const Vertex n = dense ? static_cast<Vertex>(ids.size())
                         : static_cast<Vertex>(parsed.original_ids.size());
  parsed.graph = DiGraph::from_edges(n, edges, &cleanup);
  parsed.self_loops_dropped = cleanup.self_loops;
  parsed.duplicates_dropped = cleanup.duplicates;
  return parsed;
}

ParsedGraph parse_edge_list(std::istream& in) {
  std::vector<RawEdge> raw;
  std::vector<std::uint32_t> ids;
  std::string buffer;
  std::size_t line_no = 0;
  while (std::getline(in, buffer)) {
    ++line_no;
    std::string_view line = trim(buffer);
    if (line.empty() || is_comment(line)) continue;
    std::string_view rest = line;
    const std::string_view a = next_token(rest);
    const std::string_view b = next_token(rest);
    if (b.empty() || !next_token(rest).empty()) {
      throw ParseError(line_no, "expected exactly two ids per line");
    }
    const RawEdge e{parse_id(a, line_no), parse_id(b, line_no)};
    raw.push_back(e);
    ids.push_back(e.from);
    ids.push_back(e.to);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return finish(std::move(ids), raw);
}

ParsedGraph parse_gra(std::istream& in) {
  std::string buffer;
  std::size_t line_no = 0;
  std::uint64_t declared = 0;
  bool have_count = false;
  bool header_skipped = false;
  while (!have_count && std::getline(in, buffer)) {
    ++line_no;
    const std::string_view line = trim(buffer);
    if (line.empty() || is_comment(line)) continue;
    if (all_digits(line)) {
      declared = parse_id(line, line_no);
      have_count = true;
    } else if (!header_skipped) {
      header_skipped = true;
    } else {
      throw ParseError(line_no, "expected the vertex count");
    }
  }
  if (!have_count) throw FormatError("gra input has no vertex count");

  std::vector<std::uint32_t> ids;
  ids.reserve(declared);
  std::vector<RawEdge> raw;
  while (ids.size() < declared && std::getline(in, buffer)) {
    ++line_no;
    std::string_view rest = trim(buffer);
    if (rest.empty() || is_comment(rest)) continue;
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line_no, "expected '<id>: <targets> #'");
    }
    const std::uint32_t source = parse_id(trim(rest.substr(0, colon)), line_no);
    rest.remove_prefix(colon + 1);
    bool terminated = false;
    for (std::string_view tok = next_token(rest); !tok.empty();
         tok = next_token(rest)) {
      if (tok == "#") {
        terminated = true;
        break;
      }
      raw.push_back({source, parse_id(tok, line_no)});
    }
    if (!terminated || !trim(rest).empty()) {
      throw ParseError(line_no, "adjacency line must end with '#'");
    }
    ids.push_back(source);
  }
  if (ids.size() != declared) {
    throw FormatError("gra input declares " + std::to_string(declared) +
                      " vertices but lists " + std::to_string(ids.size()));
  }
  while (std::getline(in, buffer)) {
    ++line_no;
    const std::string_view line = trim(buffer);
    if (!line.empty() && !is_comment(line)) {
      throw FormatError("gra input has content after " +
                        std::to_string(declared) + " adjacency lines (line " +
                        std::to_string(line_no) + ")");
    }
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw FormatError("gra input lists a vertex twice");
  }
  for (const RawEdge& e : raw) {
    if (!std::binary_search(ids.begin(), ids.end(), e.to)) {
      throw FormatError("gra edge target " + std::to_string(e.to) +
                        " is not a declared vertex");
    }
  }
  return finish(std::move(ids), raw);
}

}  // namespace

std::optional<GraphFormat> parse_format_name(std::string_view name) {
  if (name == "edge-list" || name == "edgelist") return GraphFormat::kEdgeList;
  if (name == "gra") return GraphFormat::kGra;
  return std::nullopt;
}

std::optional<Vertex> ParsedGraph::to_dense(std::uint64_t original) const {
  if (!remapped()) {
    if (original < graph.num_vertices()) return static_cast<Vertex>(original);
    return std::nullopt;
  }
  const auto it = std::lower_bound(original_ids.begin(), original_ids.end(),
                                   original);
  if (it == original_ids.end() || *it != original) return std::nullopt;
  return static_cast<Vertex>(it - original_ids.begin());
}

ParsedGraph parse_graph(std::istream& in, GraphFormat format) {
  return format == GraphFormat::kGra ? parse_gra(in) : parse_edge_list(in);
}

ParsedGraph load_graph(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_graph(in, format);
}

void write_graph(std::ostream& out, const DiGraph& g, GraphFormat format) {
  const Vertex n = g.num_vertices();
  if (format == GraphFormat::kGra) {
    out << "graph_for_greach\n" << n << '\n';
    for (Vertex v = 0; v < n; ++v) {
      out << v << ':';
      for (Vertex w : g.out(v)) out << ' ' << w;
      out << " #\n";
    }
    return;
  }
  out << "# n=" << n << " m=" << g.num_edges() << '\n';
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : g.out(v)) out << v << ' ' << w << '\n';
  }
}

void write_remap(std::ostream& out, const ParsedGraph& parsed) {
  const Vertex n = parsed.graph.num_vertices();
  for (Vertex v = 0; v < n; ++v) {
    out << (parsed.remapped() ? parsed.original_ids[v] : v) << ' ' << v
        << '\n';
  }
}

}  // namespace oreach
