#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgraph {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Thrown when a requested computation exceeds a configured resource budget
/// (point-set size, table size, output size).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a map cannot be reduced modulo the requested prime, e.g. a
/// conjugating matrix whose determinant vanishes mod p.
struct BadReductionError : std::runtime_error {
    explicit BadReductionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fgraph
