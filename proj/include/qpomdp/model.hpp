#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpomdp/prob.hpp"
#include "qpomdp/util.hpp"

namespace qpomdp {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;
using ObsId = std::uint32_t;

struct TransEntry {
    StateId to;
    Prob p;
};

// One transition distribution, entries sorted by target state, no zero
// entries, no duplicate targets.
using Row = std::vector<TransEntry>;

// POMDP with a deterministic observation map, one priority per state, and an
// optional label per state (empty string = unlabeled). The initial condition
// is a distribution; most models start in a single state.
struct Pomdp {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> obs_names;
    std::vector<ObsId> obs_of;        // per state
    std::vector<int> priority;        // per state, >= 0
    std::vector<std::string> label_of; // per state, "" = none
    Row initial;                      // distribution over states
    std::vector<std::vector<Row>> trans; // [state][action]

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_actions() const { return action_names.size(); }
    std::size_t num_obs() const { return obs_names.size(); }

    int max_priority() const;

    // All structural problems, empty when the model is well formed.
    std::vector<std::string> validate() const;
    // Throws InputError listing the first few problems.
    void ensure_valid() const;
};

// A belief support: nonempty sorted set of states, all with one observation.
using Support = std::vector<StateId>;

// Support after playing `a` from `y` and observing `z`; nullopt when z has
// zero probability from every state of y under a.
std::optional<Support> belief_update(const Pomdp& m, const Support& y, ActionId a, ObsId z);

// Every support reachable from the initial belief (or from `seed`), sorted
// lexicographically. Throws CapError past max_supports.
std::vector<Support> reachable_belief_supports(const Pomdp& m, std::uint64_t max_supports);
std::vector<Support> reachable_belief_supports_from(const Pomdp& m, const Support& seed,
                                                    std::uint64_t max_supports);

// Largest reachable support size (the maxY in the product size bound).
std::size_t max_observation_size(const std::vector<Support>& supports);

// Observation signature before normalization: deterministic models name one
// observation per state; general ones attach a set or a distribution.
struct GeneralObs {
    std::vector<ObsId> det;                   // used when kind == Det
    std::vector<std::vector<ObsId>> sets;     // kind == Sets
    std::vector<std::vector<std::pair<ObsId, Prob>>> dists; // kind == Dists
    enum Kind { Det, Sets, Dists } kind = Det;
};

struct GeneralPomdp {
    Pomdp base; // obs_of left empty until normalized
    GeneralObs obs;
};

// Drops observations no state maps to, renumbering the rest in order.
void prune_unused_observations(Pomdp& m);

// Rewrites set-valued or randomized observation maps into the deterministic
// form the solver uses:
//  - singleton sets become a plain observation map,
//  - proper sets switch to the subset alphabet (each distinct set becomes one
//    deterministic observation),
//  - distributions split every state into (state, observation) copies.
// Mixed kinds inside one model are rejected.
Pomdp normalize_observations(const GeneralPomdp& g);

} // namespace qpomdp
