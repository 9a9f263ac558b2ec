#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpomdp/model.hpp"
#include "qpomdp/objective.hpp"

namespace qpomdp {

// One deterministic benchmark instance: the model plus its objective.
struct BenchInstance {
    Pomdp model;
    Objective objective;
};

// Families: shuttle (small|medium|large), cheese (small|large _ easy|medium|
// hard), grid (4x4..8x8), rocksample (4_2_cap3 etc.), hallway / hallway2 /
// maze_a / maze_b / maze_c (liveness|sequencing|coverage|recurrence|
// recurrence_avoid). Unknown family/variant is an input error.
BenchInstance generate_bench(const std::string& family, const std::string& variant);

// The full benchmark table: (family, variant) in fixed row order.
std::vector<std::pair<std::string, std::string>> table1_rows();

struct BenchRow {
    std::string family, variant;
    long time_ms = 0;
    std::size_t states = 0;            // model (or automaton product) size
    std::size_t states_after = 0;      // after the coBüchi reduction
    bool direct_parity = false;        // reduction not applicable, solved directly
    std::string verdict;               // ALMOST-SURE | NOT-FOUND-IN-CLASS | timeout | cap
    std::string verified;              // yes | - | FAIL
    std::size_t product_states = 0;    // belief-observation product size
    std::size_t max_support = 0;       // largest belief support in the product
};

// Runs rows under a per-row wall-clock budget; rows never abort the suite.
// jobs > 1 solves rows concurrently, output order stays the spec order.
std::vector<BenchRow> run_suite(const std::vector<std::pair<std::string, std::string>>& rows,
                                double row_timeout_seconds, int jobs);

std::string format_table(const std::vector<BenchRow>& rows);
std::string format_csv(const std::vector<BenchRow>& rows);

} // namespace qpomdp
