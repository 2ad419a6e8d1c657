#include "fgraph/graph.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace fgraph::graph {

SuccessorTable build_successor_table(const PointFn& fn, const maps::SpaceDesc& space,
                                     const BuildOptions& opts) {
    const u64 n = space.size();
    if (n > opts.max_points)
        throw ResourceError("space has " + std::to_string(n) + " points, cap is " +
                            std::to_string(opts.max_points));
    if (n > UINT32_MAX) throw ResourceError("space exceeds 32-bit indexing");

    SuccessorTable table;
    table.space = space;
    table.succ.resize(n);

    unsigned workers = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    if (workers <= 1 || n < 1u << 16) {
        for (u64 i = 0; i < n; ++i) table.succ[i] = (u32)fn(i);
        return table;
    }
    std::vector<std::thread> pool;
    u64 chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        u64 lo = w * chunk, hi = std::min<u64>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (u64 i = lo; i < hi; ++i) table.succ[i] = (u32)fn(i);
        });
    }
    for (auto& t : pool) t.join();
    return table;
}

SuccessorTable build_successor_table(const maps::MapSpec& spec, const maps::SpaceDesc& space,
                                     const BuildOptions& opts) {
    if (spec.dim != space.dim)
        throw std::invalid_argument("build_successor_table: spec/space dimension mismatch");
    maps::Evaluator ev(spec, space.p, opts.max_points);
    if (space.kind == maps::Space::Affine)
        return build_successor_table([&](u64 i) { return ev.affine_index(i); }, space, opts);
    return build_successor_table([&](u64 i) { return ev.projective_index(i); }, space, opts);
}

Census orbit_census(const SuccessorTable& table) {
    const u64 n = table.size();
    Census out;
    out.orbits.assign(n, OrbitStats{});
    if (n == 0) return out;

    std::vector<u32> indeg(n, 0);
    for (u64 i = 0; i < n; ++i) ++indeg[table.succ[i]];
    for (u64 i = 0; i < n; ++i)
        if (indeg[i] == 0) ++out.stats.leaf_count;

    // Peel non-periodic points: repeatedly remove in-degree-zero vertices.
    // Whatever survives lies on a cycle.
    std::vector<u32> live = indeg;
    std::vector<u32> work;
    work.reserve(1024);
    for (u64 i = 0; i < n; ++i)
        if (live[i] == 0) work.push_back((u32)i);
    while (!work.empty()) {
        u32 u = work.back();
        work.pop_back();
        u32 v = table.succ[u];
        if (--live[v] == 0) work.push_back(v);
    }

    // Walk each surviving cycle once to assign minimal periods.
    std::vector<bool> periodic(n, false);
    for (u64 i = 0; i < n; ++i) periodic[i] = live[i] > 0;
    std::vector<bool> visited(n, false);
    for (u64 i = 0; i < n; ++i) {
        if (!periodic[i] || visited[i]) continue;
        u32 len = 0;
        u32 u = (u32)i;
        do {
            ++len;
            u = table.succ[u];
        } while (u != i);
        u = (u32)i;
        do {
            visited[u] = true;
            out.orbits[u] = {0, len};
            u = table.succ[u];
        } while (u != i);
        out.stats.per_count[len] += len;
        out.stats.total_periodic += len;
    }

    // Reverse adjacency by counting sort, then BFS outward from the cycles:
    // tail(w) = tail(succ(w)) + 1, period inherited from the cycle reached.
    std::vector<u64> offset(n + 1, 0);
    for (u64 i = 0; i < n; ++i) offset[i + 1] = offset[i] + indeg[i];
    std::vector<u32> preds(n);
    {
        std::vector<u64> cursor(offset.begin(), offset.end() - 1);
        for (u64 i = 0; i < n; ++i) preds[cursor[table.succ[i]]++] = (u32)i;
    }
    std::vector<u32> queue;
    queue.reserve(n);
    for (u64 i = 0; i < n; ++i)
        if (periodic[i]) queue.push_back((u32)i);
    for (size_t head = 0; head < queue.size(); ++head) {
        u32 u = queue[head];
        const OrbitStats& su = out.orbits[u];
        for (u64 j = offset[u]; j < offset[u + 1]; ++j) {
            u32 w = preds[j];
            if (periodic[w]) continue;
            out.orbits[w] = {su.tail + 1, su.period};
            queue.push_back(w);
        }
    }

    for (u64 i = 0; i < n; ++i) {
        u32 t = out.orbits[i].tail;
        ++out.stats.pre_count[t];
        out.stats.max_tail = std::max<u64>(out.stats.max_tail, t);
    }
    return out;
}

std::vector<u32> preimage_census(const SuccessorTable& table) {
    std::vector<u32> indeg(table.size(), 0);
    for (u64 i = 0; i < table.size(); ++i) ++indeg[table.succ[i]];
    return indeg;
}

u64 leaves(const SuccessorTable& table) {
    auto indeg = preimage_census(table);
    u64 count = 0;
    for (u32 d : indeg)
        if (d == 0) ++count;
    return count;
}

namespace {

std::string point_label(const maps::SpaceDesc& space, u64 index) {
    auto coords = maps::decode_point(space, index);
    std::string s = "(";
    const char* sep = space.kind == maps::Space::Projective ? ":" : ",";
    for (size_t i = 0; i < coords.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(coords[i]);
    }
    s += ")";
    return s;
}

}  // namespace

std::string export_dot(const SuccessorTable& table, std::span<const OrbitStats> annotations) {
    constexpr u64 kDotCap = 10'000;
    if (table.size() > kDotCap)
        throw ResourceError("DOT export capped at " + std::to_string(kDotCap) + " points");
    if (!annotations.empty() && annotations.size() != table.size())
        throw std::invalid_argument("export_dot: annotation size mismatch");

    std::ostringstream os;
    os << "digraph functional_graph {\n";
    for (u64 i = 0; i < table.size(); ++i) {
        os << "  n" << i << " [label=\"" << point_label(table.space, i);
        if (!annotations.empty())
            os << "\\n(" << annotations[i].tail << "," << annotations[i].period << ")";
        os << "\"];\n";
    }
    for (u64 i = 0; i < table.size(); ++i) os << "  n" << i << " -> n" << table.succ[i] << ";\n";
    os << "}\n";
    return os.str();
}

std::string stats_to_csv(const GraphStats& stats) {
    std::ostringstream os;
    os << "n_or_m,kind,count\n";
    for (auto [n, c] : stats.per_count) os << n << ",per," << c << "\n";
    for (auto [m, c] : stats.pre_count) os << m << ",pre," << c << "\n";
    return os.str();
}

std::string stats_to_json(const GraphStats& stats) {
    nlohmann::json j;
    for (auto [n, c] : stats.per_count) j["per"][std::to_string(n)] = c;
    for (auto [m, c] : stats.pre_count) j["pre"][std::to_string(m)] = c;
    j["total_periodic"] = stats.total_periodic;
    j["max_tail"] = stats.max_tail;
    j["leaf_count"] = stats.leaf_count;
    return j.dump(2);
}

}  // namespace fgraph::graph
