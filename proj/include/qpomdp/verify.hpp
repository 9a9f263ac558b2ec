#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpomdp/model.hpp"
#include "qpomdp/policy.hpp"

namespace qpomdp {

// Exact certificate: the policy wins almost surely iff every bottom
// strongly-connected component of the induced chain has an even minimum
// priority. Node indices refer to the (state, memory) pairs listed in
// `nodes`; only reachable pairs appear.
struct Certificate {
    struct Component {
        std::vector<std::uint32_t> nodes;
        int min_priority;
    };
    bool ok = false;
    std::vector<std::pair<StateId, std::uint32_t>> nodes;
    std::vector<Component> bottom_components;
};

Certificate check(const Pomdp& m, const Policy& p);

// One line per bottom component: node list and minimum priority, then the
// verdict line.
std::string format_certificate(const Certificate& c, const Pomdp& m, const Policy& p);

// Monte Carlo sanity statistics, never a verdict. Each episode runs `steps`
// steps; the tail is the second half. Lock step = first step whose memory
// carries a nonempty claimed set (requires annotations; -1 when never).
struct SimStats {
    long episodes = 0;
    long steps = 0;
    std::map<int, long> tail_min_priority; // episodes by min priority over the tail
    std::map<int, long> final_priority;    // episodes by priority of the last state
    std::map<long, long> lock_step;        // episodes by first claimed step
};

// Episodes run in parallel; per-episode generators are seeded from the master
// seed alone, so the statistics do not depend on the thread count. The serial
// variant is the reference the parallel path is tested against.
SimStats simulate(const Pomdp& m, const Policy& p, long steps, long episodes,
                  std::uint64_t seed);
SimStats simulate_serial(const Pomdp& m, const Policy& p, long steps, long episodes,
                         std::uint64_t seed);

std::string format_sim_stats(const SimStats& s);

// Bottom strongly-connected components of a directed graph given as
// adjacency lists; nodes unreachable from `roots` are ignored. Returned
// components are sorted by smallest member.
std::vector<std::vector<std::uint32_t>> bottom_sccs(
    const std::vector<std::vector<std::uint32_t>>& adj,
    const std::vector<std::uint32_t>& roots);

} // namespace qpomdp
