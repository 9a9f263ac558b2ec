#include "qpomdp/randgen.hpp"

#include <algorithm>
#include <random>

#include "qpomdp/util.hpp"

namespace qpomdp {

Pomdp random_tiny_model(std::uint64_t seed) {
    std::uint64_t st = seed;
    std::mt19937_64 rng(splitmix64(st));
    auto pick = [&rng](std::uint64_t n) { return static_cast<std::uint32_t>(rng() % n); };

    Pomdp m;
    const std::uint32_t ns = 2 + pick(5); // 2..6
    const std::uint32_t na = 1 + pick(2); // 1..2
    const std::uint32_t nz = 1 + pick(std::min<std::uint32_t>(3, ns));
    for (std::uint32_t s = 0; s < ns; ++s) m.state_names.push_back("s" + std::to_string(s));
    for (std::uint32_t a = 0; a < na; ++a) m.action_names.push_back("a" + std::to_string(a));
    for (std::uint32_t z = 0; z < nz; ++z) m.obs_names.push_back("z" + std::to_string(z));
    m.obs_of.resize(ns);
    for (std::uint32_t s = 0; s < ns; ++s) m.obs_of[s] = s < nz ? s : pick(nz);
    m.priority.resize(ns);
    for (std::uint32_t s = 0; s < ns; ++s) m.priority[s] = 1 + static_cast<int>(pick(3));
    m.label_of.assign(ns, "");

    auto distribution = [&](std::uint32_t max_support) {
        Row row;
        std::uint32_t k = 1 + pick(max_support);
        std::vector<StateId> targets;
        while (targets.size() < k) {
            StateId t = pick(ns);
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        std::sort(targets.begin(), targets.end());
        for (StateId t : targets) row.push_back({t, Prob::from_ratio(1, k)});
        return row;
    };

    // every fourth instance starts from a two-state belief
    m.initial = distribution(pick(4) == 0 ? 2 : 1);
    m.trans.assign(ns, std::vector<Row>(na));
    for (std::uint32_t s = 0; s < ns; ++s)
        for (std::uint32_t a = 0; a < na; ++a) m.trans[s][a] = distribution(2);
    m.ensure_valid();
    return m;
}

} // namespace qpomdp
