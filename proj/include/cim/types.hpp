#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cim {

/// Dense node index in [0, node_count).
using NodeId = std::uint32_t;
/// Dense edge index into the CSR edge arrays.
using EdgeId = std::uint64_t;
/// Original node label as found in the input file.
using NodeLabel = std::int64_t;
/// Dense community id in [0, community_count).
using CommunityId = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cim
