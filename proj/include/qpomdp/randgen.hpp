#pragma once

#include <cstdint>

#include "qpomdp/model.hpp"

namespace qpomdp {

// Deterministic generator for the bundled agreement corpus: tiny random
// models within the brute-force caps (at most 6 states, 2 actions, 3
// observations, priorities 1..3, exact rational probabilities). The same
// seed always yields byte-identical output, so the corpus under the test
// data can be regenerated and diffed.
Pomdp random_tiny_model(std::uint64_t seed);

} // namespace qpomdp
