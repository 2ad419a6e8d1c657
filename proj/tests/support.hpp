#pragma once

// Test-side oracles, independent of the library's census path.

#include <random>
#include <vector>

#include "fgraph/graph.hpp"

namespace testsupport {

using fgraph::u32;
using fgraph::u64;

/// (tail, period) of one point by Floyd tortoise-hare iteration; no shared
/// state with orbit_census.
inline fgraph::graph::OrbitStats floyd_stats(const std::vector<u32>& succ, u64 start) {
    auto step = [&](u64 i) { return (u64)succ[i]; };
    u64 slow = step(start), fast = step(step(start));
    while (slow != fast) {
        slow = step(slow);
        fast = step(step(fast));
    }
    u32 period = 1;
    for (u64 x = step(slow); x != slow; x = step(x)) ++period;
    u32 tail = 0;
    u64 a = start, b = slow;
    while (a != b) {
        a = step(a);
        b = step(b);
        ++tail;
    }
    return {tail, period};
}

/// Number of weakly connected components by union-find.
inline u64 component_count(const std::vector<u32>& succ) {
    std::vector<u32> parent(succ.size());
    for (u32 i = 0; i < succ.size(); ++i) parent[i] = i;
    std::function<u32(u32)> find = [&](u32 x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (u32 i = 0; i < succ.size(); ++i) {
        u32 a = find(i), b = find(succ[i]);
        if (a != b) parent[a] = b;
    }
    u64 roots = 0;
    for (u32 i = 0; i < succ.size(); ++i)
        if (find(i) == i) ++roots;
    return roots;
}

/// Uniform random successor table on n points.
inline fgraph::graph::SuccessorTable random_table(u64 n, u64 seed, u64 p_label = 2) {
    fgraph::graph::SuccessorTable t;
    t.space = fgraph::maps::SpaceDesc::affine(1, p_label);  // descriptor is cosmetic here
    t.succ.resize(n);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> pick(0, n - 1);
    for (u64 i = 0; i < n; ++i) t.succ[i] = (u32)pick(rng);
    return t;
}

}  // namespace testsupport
