#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpomdp/model.hpp"
#include "qpomdp/objective.hpp"
#include "qpomdp/policy.hpp"
#include "qpomdp/product.hpp"

namespace qpomdp {

enum class Verdict { AlmostSure, NotFoundInClass };

// Result of the memoryless analysis on the belief-observation product.
struct Solution {
    Verdict verdict = Verdict::NotFoundInClass;
    std::vector<char> winning_mem;               // per memory, survives pruning
    std::vector<std::vector<ActionId>> actions;  // per memory, the played set
    std::vector<char> core_mem;                  // per memory, in some level core
    std::vector<char> core_state;                // per product state
};

// Safe core for one claimed level: the greatest set of claimed product
// states of level-`level` memories inside W that some action set keeps
// closed, with every bottom component of the kept graph touching priority
// `level`. Returns per-memory core action sets alongside.
struct CoreResult {
    std::vector<char> in_core_mem;               // per memory
    std::vector<char> in_core_state;             // per product state
    std::vector<std::vector<ActionId>> actions;  // per memory (empty if not core)
};
CoreResult safe_core(const BeliefObsPomdp& g, const std::vector<char>& w, int level);

Solution almost_sure_win(const BeliefObsPomdp& g, const Caps& caps);

// Witness extraction; only valid for AlmostSure solutions. The policy drives
// the model the product was built from.
Policy extract_policy(const BeliefObsPomdp& g, const Solution& sol);

// The model the memoryless analysis runs on: objective applied (automaton
// product for template/automaton kinds), priorities normalized, coBüchi
// reduction when its two exact cases apply.
struct SolveModel {
    Pomdp model;
    ReduceCase reduce_case = ReduceCase::Unsupported;
    std::size_t states_before_reduction = 0;
    bool labeled_product = false; // false for parity objectives
};
SolveModel prepare_solve_model(const Pomdp& input, const Objective& obj, const Caps& caps);

// Full pipeline. On AlmostSure the returned policy has already passed the
// verifier's certificate; a certificate failure of a freshly extracted
// witness raises InternalError.
struct SolveOutput {
    SolveModel prep;
    Solution solution;
    std::size_t product_states = 0;   // belief-observation product size
    std::size_t product_memories = 0;
    std::size_t max_support = 0;      // largest belief support in the product
    std::optional<Policy> policy;
};
SolveOutput solve(const Pomdp& input, const Objective& obj, const Caps& caps,
                  bool want_policy = true);

} // namespace qpomdp
