#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "oreach/index.hpp"

namespace oreach {
namespace {

constexpr std::array<char, 8> kMagic = {'O', 'R', 'E', 'A', 'C', 'H', 'I', 'X'};

class Writer {
 public:
  explicit Writer(std::vector<std::byte>& out) : out_(&out) {}

  void u8(std::uint8_t v) { out_->push_back(static_cast<std::byte>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }

 private:
  std::vector<std::byte>* out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> in) : in_(in) {}

  std::size_t remaining() const noexcept { return in_.size() - at_; }

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[at_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(in_[at_++]) << (8 * i);
    }
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(in_[at_++]) << (8 * i);
    }
    return v;
  }

 private:
  void need(std::size_t bytes) const {
    if (remaining() < bytes) throw FormatError("index stream is truncated");
  }

  std::span<const std::byte> in_;
  std::size_t at_ = 0;
};

// Writes the low `bytes` bytes of a multi-word mask.
void put_mask(Writer& w, std::span<const std::uint64_t> mask,
              std::size_t bytes) {
  for (std::size_t b = 0; b < bytes; ++b) {
    w.u8(static_cast<std::uint8_t>(mask[b / 8] >> (8 * (b % 8))));
  }
}

void get_mask(Reader& r, std::span<std::uint64_t> mask, std::size_t bytes) {
  for (std::size_t b = 0; b < bytes; ++b) {
    mask[b / 8] |= static_cast<std::uint64_t>(r.u8()) << (8 * (b % 8));
  }
}

void check_permutation(const std::vector<Vertex>& pos) {
  std::vector<char> used(pos.size(), 0);
  for (Vertex p : pos) {
    if (p >= pos.size() || used[p]) {
      throw FormatError("ordering positions are not a permutation");
    }
    used[p] = 1;
  }
}

}  // namespace

std::size_t index_header_bytes(const ReachIndex& ix) noexcept {
  return kIndexFixedHeaderBytes + 4 * ix.supports.supports().size();
}

std::vector<std::byte> serialize_index(const ReachIndex& ix) {
  const Vertex n = ix.num_vertices();
  std::vector<std::byte> bytes;
  bytes.reserve(index_header_bytes(ix) +
                static_cast<std::size_t>(n) * ix.record_bytes());
  Writer w(bytes);
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kIndexFormatVersion);
  w.u32(n);
  w.u32(ix.params.t);
  w.u32(ix.params.k);
  w.u32(ix.params.p);
  w.u32(ix.params.h);
  w.u64(ix.params.seed);
  w.u64(ix.graph != nullptr ? ix.graph->checksum() : 0);
  const auto& supports = ix.supports.supports();
  w.u32(static_cast<std::uint32_t>(supports.size()));
  for (Vertex v : supports) w.u32(v);

  const std::size_t mask_bytes = ix.supports.mask_bytes();
  for (Vertex v = 0; v < n; ++v) {
    w.u32(ix.wcc[v]);
    w.u32(ix.levels.fwd[v]);
    w.u32(ix.levels.bwd[v]);
    for (const ExtTopOrder& ord : ix.orderings) {
      w.u32(ord.pos[v]);
      w.u32(ord.hi_or_lo[v]);
      w.u32(ord.mx_or_mn[v]);
    }
    put_mask(w, ix.supports.fwd_mask(v), mask_bytes);
    put_mask(w, ix.supports.bwd_mask(v), mask_bytes);
  }
  return bytes;
}

void write_index(std::ostream& out, const ReachIndex& ix) {
  const std::vector<std::byte> bytes = serialize_index(ix);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed to write index");
}

ReachIndex deserialize_index(std::span<const std::byte> bytes,
                             const DiGraph* dag) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) {
      throw FormatError("not an index file (bad magic)");
    }
  }
  if (const std::uint32_t version = r.u32(); version != kIndexFormatVersion) {
    throw FormatError("unsupported index version " + std::to_string(version));
  }
  ReachIndex ix;
  const Vertex n = r.u32();
  ix.params.t = r.u32();
  ix.params.k = r.u32();
  ix.params.p = r.u32();
  ix.params.h = r.u32();
  ix.params.seed = r.u64();
  const std::uint64_t checksum = r.u64();
  if (dag != nullptr) {
    if (dag->num_vertices() != n || dag->checksum() != checksum) {
      throw FormatError("index was built for a different graph");
    }
    ix.graph = dag;
  }
  const std::uint32_t support_count = r.u32();
  if (support_count > ix.params.k || support_count > n) {
    throw FormatError("support count exceeds k");
  }
  if (r.remaining() < 4ULL * support_count) {
    throw FormatError("index stream is truncated");
  }
  std::vector<Vertex> supports(support_count);
  for (Vertex& v : supports) {
    v = r.u32();
    if (v >= n) throw FormatError("support id out of range");
  }

  const std::size_t record = index_record_bytes(ix.params.t, ix.params.k);
  if (r.remaining() != static_cast<std::uint64_t>(n) * record) {
    throw FormatError("index stream has " + std::to_string(r.remaining()) +
                      " record bytes, expected " +
                      std::to_string(static_cast<std::uint64_t>(n) * record));
  }

  ix.wcc.resize(n);
  ix.levels.fwd.resize(n);
  ix.levels.bwd.resize(n);
  const std::uint32_t forward_count = (ix.params.t + 1) / 2;
  ix.orderings.resize(ix.params.t);
  for (std::uint32_t i = 0; i < ix.params.t; ++i) {
    ExtTopOrder& ord = ix.orderings[i];
    ord.flavor = i < forward_count ? Flavor::kForward : Flavor::kBackward;
    ord.seed = derive_seed(ix.params.seed, i);
    ord.pos.resize(n);
    ord.hi_or_lo.resize(n);
    ord.mx_or_mn.resize(n);
  }
  ix.supports = SupportSet(n, ix.params.k, std::move(supports));
  const std::size_t mask_bytes = ix.supports.mask_bytes();
  for (Vertex v = 0; v < n; ++v) {
    ix.wcc[v] = r.u32();
    ix.levels.fwd[v] = r.u32();
    ix.levels.bwd[v] = r.u32();
    for (ExtTopOrder& ord : ix.orderings) {
      ord.pos[v] = r.u32();
      ord.hi_or_lo[v] = r.u32();
      ord.mx_or_mn[v] = r.u32();
    }
    get_mask(r, ix.supports.fwd_mask(v), mask_bytes);
    get_mask(r, ix.supports.bwd_mask(v), mask_bytes);
  }

  for (Vertex v = 0; v < n; ++v) {
    if (ix.wcc[v] >= n || ix.levels.fwd[v] >= n || ix.levels.bwd[v] >= n) {
      throw FormatError("vertex record out of range");
    }
    ix.levels.fwd_max = std::max(ix.levels.fwd_max, ix.levels.fwd[v]);
    ix.levels.bwd_max = std::max(ix.levels.bwd_max, ix.levels.bwd[v]);
  }
  for (const ExtTopOrder& ord : ix.orderings) {
    check_permutation(ord.pos);
    for (Vertex v = 0; v < n; ++v) {
      if (ord.hi_or_lo[v] >= n || ord.mx_or_mn[v] >= n) {
        throw FormatError("ordering index out of range");
      }
    }
  }
  return ix;
}

ReachIndex read_index(std::istream& in, const DiGraph* dag) {
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  return deserialize_index(std::as_bytes(std::span(raw)), dag);
}

}  // namespace oreach
