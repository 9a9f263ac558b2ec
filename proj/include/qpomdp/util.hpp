#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "qpomdp/error.hpp"

namespace qpomdp {

// Cooperative wall-clock deadline. Hot loops call check() at coarse
// granularity; no deadline means check() is free apart from the branch.
class Deadline {
public:
    Deadline() = default;
    static Deadline after_seconds(double s) {
        Deadline d;
        d.end_ = clock::now() + std::chrono::duration_cast<clock::duration>(
                                    std::chrono::duration<double>(s));
        d.armed_ = true;
        return d;
    }
    bool expired() const { return armed_ && clock::now() >= end_; }
    void check(const char* what) const {
        if (expired()) throw DeadlineError(std::string(what) + ": deadline exceeded");
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point end_{};
    bool armed_ = false;
};

// Resource caps for the exploration phases plus an optional wall-clock
// deadline. The defaults are generous enough for every bundled benchmark;
// QPOMDP_CAP=<n> replaces max_supports and sets max_product_states to 4n.
struct Caps {
    std::uint64_t max_supports = 1u << 20;        // reachable belief supports
    std::uint64_t max_product_states = 1u << 22;  // belief-observation product
    std::uint64_t oracle_nodes = 200'000'000;     // brute-force search nodes
    Deadline deadline;

    static Caps from_env();
};

// splitmix64, used to derive independent per-episode seeds from one user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace qpomdp
