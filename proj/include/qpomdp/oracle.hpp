#pragma once

#include <cstdint>
#include <optional>

#include "qpomdp/model.hpp"
#include "qpomdp/policy.hpp"
#include "qpomdp/util.hpp"

namespace qpomdp {

// Brute-force ground truth on tiny instances: searches every observation-
// based policy with up to `max_memory` memory states, action choice = any
// nonempty action subset per memory (played uniformly), memory update a
// deterministic function of (memory, observation, played action). That is
// exactly the shape the solver emits, so within the memory bound a solver
// witness always lies inside the searched class. Returns the first certified
// witness in canonical search order, or NoWithinSpec.
//
// The verdict is class-relative: NoWithinSpec means no policy of this shape
// wins, not that none exists at all.
enum class OracleVerdict { Yes, NoWithinSpec };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::NoWithinSpec;
    std::optional<Policy> witness;
    std::uint64_t policies_checked = 0; // completed candidates evaluated
};

// Hard input caps (|S| <= 8, |A| <= 3, |Z| <= 4, k <= 3); beyond them a
// CapError is thrown, as it is when the node budget in `caps` runs out.
// oracle_decide splits the search across threads at the first real branching
// point; the serial variant walks the identical tree in one thread and exists
// as the reference the parallel path is tested against.
OracleResult oracle_decide(const Pomdp& m, int max_memory, const Caps& caps);
OracleResult oracle_decide_serial(const Pomdp& m, int max_memory, const Caps& caps);

} // namespace qpomdp
