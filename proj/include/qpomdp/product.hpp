#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qpomdp/model.hpp"
#include "qpomdp/objective.hpp"

namespace qpomdp {

// Synchronous product with a deterministic parity automaton. The automaton
// reads the label of the state being entered; the initial automaton state
// has already read the initial model state's label. Product observation is
// the model observation (the automaton run stays hidden); priority comes
// from the automaton. Only reachable pairs are kept and unused observations
// are pruned.
Pomdp automaton_product(const Pomdp& labeled, const Dpa& dpa, const Caps& caps);

// Compacts priorities to the minimal contiguous 1- or 2-based range that
// preserves, for every run, the parity of the minimum priority seen
// infinitely often: order and parity survive, adjacent values of equal
// parity merge. Returns old -> new.
std::map<int, int> normalize_priorities(Pomdp& m);

enum class ReduceCase { Identity, ReachSink, Unsupported };

struct Reduction {
    Pomdp model;
    ReduceCase kase;
};

// Parity -> coBüchi for the two shapes handled exactly:
//  (a) priorities already within {1,2}: identity.
//  (b) reach shape: the priority-2 states form a closed (absorbing) set and
//      every other state carries the single odd priority 3. One absorbing
//      priority-2 sink is added, the closed set's outgoing edges are
//      redirected to it, and odd states are relabeled to 1.
// Anything else returns Unsupported with the input model untouched; the
// caller then solves the parity objective directly.
Reduction reduce_to_cobuchi(const Pomdp& m);

// Memory element of the projected policy after both heuristics: a belief
// support Y, the subset B claimed recurrent, and the even level claimed for
// the locked class (0 while B is empty).
struct MemoryElement {
    Support y;
    Support b;
    int level = 0;
    bool operator<(const MemoryElement& o) const {
        if (y != o.y) return y < o.y;
        if (b != o.b) return b < o.b;
        return level < o.level;
    }
    bool operator==(const MemoryElement& o) const {
        return y == o.y && b == o.b && level == o.level;
    }
};

using MemId = std::uint32_t;
using ProdId = std::uint32_t;

// One (action, next-observation) branch out of a memory element: the updated
// support, the closure set K, and the selectable B' choices. menu[0] is the
// canonical keep choice (B' = K, or the reset when K is empty); later entries
// lock or widen. An empty menu means the closure is violated and every
// transition of claimed states into this branch goes to Lose.
struct Branch {
    ObsId z;
    Support y_next;
    Support k;
    std::vector<MemId> menu;
};

// The belief-observation product. States are (s, m) pairs with s in m.y,
// plus the absorbing Lose sink (product state 0). The observation of (s, m)
// is m itself; priorities follow the claimed/transient rule.
struct BeliefObsPomdp {
    const Pomdp* base = nullptr;
    std::vector<MemoryElement> memories;           // index = MemId
    std::vector<std::vector<ProdId>> states_of;    // per memory, its product states
    std::vector<StateId> base_state;               // per product state (Lose: 0, unused)
    std::vector<MemId> memory_of;                  // per product state (Lose: own id)
    std::vector<int> phat;                         // per product state
    std::vector<std::vector<std::vector<Branch>>> branches; // [mem][action] -> branches
    int odd_transient = 0;
    MemId lose_mem = 0;
    std::vector<MemId> initial_memories;           // one per initial observation class
    std::vector<ProdId> initial_states;

    std::size_t num_states() const { return base_state.size(); }
    std::size_t num_memories() const { return memories.size(); }
    ProdId state_of(MemId m, StateId s) const;
};

// Builds the product over the reachable memory elements. Levels are the even
// priorities present in the model (for coBüchi inputs that is just 2).
BeliefObsPomdp build_product(const Pomdp& m, const Caps& caps);

// Debug rendering of the product as an ordinary model file: composite
// actions become "a__<selector digits>" action columns is not expressible,
// so the dump fixes the keep selector everywhere (menu index 0).
Pomdp dump_product_model(const BeliefObsPomdp& g);

} // namespace qpomdp
