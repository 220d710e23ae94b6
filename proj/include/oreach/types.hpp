#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace oreach {

// Dense vertex id. Inputs with more than 2^32 vertices are not supported.
using Vertex = std::uint32_t;

inline constexpr Vertex kNoVertex = ~Vertex{0};

struct Edge {
  Vertex from = 0;
  Vertex to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Selects between the OpenMP kernels and their serial reference versions.
// Both produce identical results.
enum class Execution : std::uint8_t { kSerial, kParallel };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input line. line() is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Structurally inconsistent input: bad counts, magic, version, checksum or
// truncated streams.
class FormatError : public Error {
 public:
  using Error::Error;
};

class AcyclicityError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An answer disagreed with ground truth. Never recoverable.
class CorrectnessError : public Error {
 public:
  using Error::Error;
};

class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

}  // namespace oreach
