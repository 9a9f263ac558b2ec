#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpomdp {

// A probability, exact when possible. Values written as "p/q" or as integers
// stay exact rationals (int64 numerator/denominator, reduced, den > 0);
// decimal literals are carried as doubles. Arithmetic keeps exactness while
// both operands are rational and the result fits, otherwise falls back to
// double. The writer reproduces rationals as "p/q" (integers without the
// "/1") and doubles via the shortest round-tripping decimal, so parse/write
// is an identity on canonical files.
class Prob {
public:
    Prob() : num_(0), den_(1), exact_(true), val_(0.0) {}
    static Prob from_ratio(std::int64_t num, std::int64_t den);
    static Prob from_double(double v);
    static Prob zero() { return Prob(); }
    static Prob one() { return from_ratio(1, 1); }

    bool exact() const { return exact_; }
    double value() const { return val_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return exact_ ? num_ == 0 : val_ == 0.0; }
    bool is_one() const { return exact_ ? (num_ == 1 && den_ == 1) : val_ == 1.0; }

    Prob operator+(const Prob& o) const;
    Prob operator*(const Prob& o) const;
    bool operator==(const Prob& o) const;
    bool operator!=(const Prob& o) const { return !(*this == o); }

    // Canonical text form used by all file writers.
    std::string text() const;

private:
    std::int64_t num_, den_;
    bool exact_;
    double val_;
};

// Parses "p/q", "n", or a decimal. Throws InputError on junk or on values
// outside [0, 1] when require_unit is set.
Prob parse_prob(const std::string& tok, bool require_unit = true);

// True when the probabilities form a distribution: exact sum == 1 if every
// entry is exact, otherwise |sum - 1| <= 1e-9.
bool sums_to_one(const std::vector<Prob>& ps);

// Shortest decimal that round-trips through double, for diagnostics and the
// canonical writer's double branch.
std::string format_double(double v);

} // namespace qpomdp
