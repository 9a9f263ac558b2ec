#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpomdp/model.hpp"

namespace qpomdp {

// Deterministic parity automaton over label symbols. The alphabet always
// contains "_" (state carries no label); acceptance is min-priority-
// infinitely-often even over the run.
struct Dpa {
    std::vector<std::string> alphabet;
    std::vector<std::string> state_names;
    std::vector<std::vector<std::uint32_t>> delta; // [state][symbol]
    std::vector<int> priority;                     // per state
    std::uint32_t initial = 0;

    std::uint32_t symbol(const std::string& label) const; // "" means "_"
    std::size_t num_states() const { return state_names.size(); }
};

enum class ObjectiveKind {
    Liveness,        // reach T (the benchmark suite's name for it)
    Safety,          // stay inside T forever
    ReachAvoid,      // reach T, never touch A
    Sequencing,      // visit S1, then S2, ..., optionally avoiding A
    Coverage,        // visit every Si at least once, any order
    Recurrence,      // visit every Ri infinitely often
    RecurrenceAvoid, // visit every Ri infinitely often, every Fi finitely
    Parity,          // use the model's own priorities
    Automaton,       // explicit automaton over the listed sets
};

const char* kind_name(ObjectiveKind k);

struct Objective {
    ObjectiveKind kind = ObjectiveKind::Parity;
    // role letter -> member state names, in canonical role order
    std::vector<std::pair<std::string, std::vector<std::string>>> sets;
    std::optional<Dpa> automaton; // present exactly for kind Automaton
};

// .qobj text format.
Objective parse_objective(const std::string& text);
std::string write_objective(const Objective& o);

// The automaton for a named kind (or the stored one). Parity has none.
Dpa build_automaton(const Objective& o);

// Copy of the model with labels replaced by the objective's role letters.
// Unknown state names or a state in two sets are input errors.
Pomdp label_states(const Pomdp& m, const Objective& o);

} // namespace qpomdp
