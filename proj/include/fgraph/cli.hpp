#pragma once

#include <string>

#include "fgraph/maps.hpp"

namespace fgraph::cli {

/// Entry point for the command-line tool. Exit codes: 0 success,
/// 1 verification failure, 2 usage error.
int run(int argc, const char* const* argv);

/// Inline map mini-language: power:d, cheby:d, poly:c0,c1,..., random:k[:seed[:d]],
/// split:(spec)x(spec)..., conj:file.json, or a path to a JSON spec.
maps::MapSpec parse_map_arg(const std::string& arg);

}  // namespace fgraph::cli
