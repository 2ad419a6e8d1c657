#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fgraph/common.hpp"
#include "fgraph/maps.hpp"

namespace fgraph::graph {

// ---------------------------------------------------------------------------
// Dense functional graph on A^N(F_p) or P^N(F_p): one out-edge per point,
// succ[i] = index of the image of point i.
// ---------------------------------------------------------------------------

struct SuccessorTable {
    maps::SpaceDesc space;
    std::vector<u32> succ;

    u64 size() const { return succ.size(); }
};

/// (tail m, minimal period n): f^m(x) is periodic with m minimal, n is the
/// minimal period of the cycle x falls onto.
struct OrbitStats {
    u32 tail = 0;
    u32 period = 1;
    bool operator==(const OrbitStats&) const = default;
};

struct GraphStats {
    std::map<u64, u64> per_count;  // n -> #Per_n
    std::map<u64, u64> pre_count;  // m -> #Pre_m (m = 0 row is the periodic points)
    u64 total_periodic = 0;
    u64 max_tail = 0;
    u64 leaf_count = 0;

    bool operator==(const GraphStats&) const = default;
};

struct BuildOptions {
    u64 max_points = 100'000'000;  // explicit resource error beyond this
    unsigned threads = 0;          // 0 = hardware concurrency
};

/// Point-level map used to fill tables without exposing spec internals.
using PointFn = std::function<u64(u64)>;

SuccessorTable build_successor_table(const maps::MapSpec& spec, const maps::SpaceDesc& space,
                                     const BuildOptions& opts = {});
SuccessorTable build_successor_table(const PointFn& fn, const maps::SpaceDesc& space,
                                     const BuildOptions& opts = {});

/// Full census in O(#space): cycles found by in-degree peeling, tails by a
/// reverse breadth-first sweep from the cycles.
struct Census {
    std::vector<OrbitStats> orbits;  // one entry per point
    GraphStats stats;
};
Census orbit_census(const SuccessorTable& table);

/// Exact in-degree of every point.
std::vector<u32> preimage_census(const SuccessorTable& table);

/// Number of points with no preimages.
u64 leaves(const SuccessorTable& table);

/// Graphviz DOT text, one node per point labeled with its coordinates and,
/// when orbit stats are supplied, its (tail, period) pair. Capped at 10^4
/// points for readability.
std::string export_dot(const SuccessorTable& table, std::span<const OrbitStats> annotations = {});

/// CSV rows "n_or_m,kind,count" with kind in {per, pre}.
std::string stats_to_csv(const GraphStats& stats);
std::string stats_to_json(const GraphStats& stats);

}  // namespace fgraph::graph
