#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpomdp/model.hpp"

namespace qpomdp {

// Finite-memory controller. Action selection is uniform over act[m]; the
// memory update upd[m][z * num_actions + a] is deterministic and may be NONE
// for (m, z, a) triples the controller can never reach. The first observation
// selects the initial memory through `init` (one entry per possible initial
// observation class). Memories optionally carry the belief support Y, the
// claimed-recurrent subset B, and the claimed even level they were extracted
// from; verification does not need them, they make witnesses auditable.
struct Policy {
    static constexpr std::uint32_t NONE = UINT32_MAX;

    struct Annot {
        bool present = false;
        Support y, b;
        int level = 0;
    };

    std::vector<std::string> memory_names;
    std::vector<std::pair<ObsId, std::uint32_t>> init; // sorted by observation
    std::vector<std::vector<ActionId>> act;            // per memory, sorted
    std::vector<std::vector<std::uint32_t>> upd;       // [m][z*nA+a]
    std::vector<Annot> annot;

    std::size_t num_memories() const { return memory_names.size(); }
    std::uint32_t initial_for(ObsId z) const; // NONE when unmapped
};

// Structural problems of a policy against a model (shape, ranges, emptiness).
std::vector<std::string> validate_policy(const Pomdp& m, const Policy& p);

// .qpol text format; parsing needs the model for name resolution.
Policy parse_policy(const std::string& text, const Pomdp& m);
std::string write_policy(const Policy& p, const Pomdp& m);

} // namespace qpomdp
