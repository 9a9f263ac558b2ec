#include "qpomdp/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qpomdp/error.hpp"

namespace qpomdp {

int Pomdp::max_priority() const {
    int m = 1;
    for (int p : priority) m = std::max(m, p);
    return m;
}

std::vector<std::string> Pomdp::validate() const {
    std::vector<std::string> out;
    const std::size_t n = num_states();
    auto complain = [&](std::string msg) { out.push_back(std::move(msg)); };

    if (n == 0) complain("no states");
    if (num_actions() == 0) complain("no actions");
    if (num_obs() == 0) complain("no observations");
    if (obs_of.size() != n) complain("observation map size mismatch");
    if (priority.size() != n) complain("priority list size mismatch");
    if (label_of.size() != n) complain("label list size mismatch");
    if (trans.size() != n) complain("transition table size mismatch");
    if (!out.empty()) return out; // shapes are off, the rest would just crash

    for (std::size_t s = 0; s < n; ++s) {
        if (obs_of[s] >= num_obs())
            complain("state " + state_names[s] + ": observation id out of range");
        if (priority[s] < 0)
            complain("state " + state_names[s] + ": negative priority");
        if (trans[s].size() != num_actions()) {
            complain("state " + state_names[s] + ": missing action rows");
            continue;
        }
        for (std::size_t a = 0; a < num_actions(); ++a) {
            const Row& row = trans[s][a];
            if (row.empty()) {
                complain("state " + state_names[s] + ", action " + action_names[a] +
                         ": no transitions");
                continue;
            }
            std::vector<Prob> ps;
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (row[i].to >= n)
                    complain("state " + state_names[s] + ": transition target out of range");
                if (i > 0 && row[i].to <= row[i - 1].to)
                    complain("state " + state_names[s] + ", action " + action_names[a] +
                             ": targets not strictly sorted");
                if (row[i].p.is_zero())
                    complain("state " + state_names[s] + ", action " + action_names[a] +
                             ": zero-probability entry");
                ps.push_back(row[i].p);
            }
            if (!sums_to_one(ps))
                complain("state " + state_names[s] + ", action " + action_names[a] +
                         ": probabilities do not sum to 1");
        }
    }

    if (initial.empty()) {
        complain("no initial distribution");
    } else {
        std::vector<Prob> ps;
        for (std::size_t i = 0; i < initial.size(); ++i) {
            if (initial[i].to >= n) complain("initial distribution target out of range");
            if (i > 0 && initial[i].to <= initial[i - 1].to)
                complain("initial distribution targets not strictly sorted");
            ps.push_back(initial[i].p);
        }
        if (!sums_to_one(ps)) complain("initial distribution does not sum to 1");
    }

    std::set<std::string> seen;
    for (const auto& nm : state_names)
        if (!seen.insert(nm).second) complain("duplicate state name " + nm);
    seen.clear();
    for (const auto& nm : action_names)
        if (!seen.insert(nm).second) complain("duplicate action name " + nm);
    seen.clear();
    for (const auto& nm : obs_names)
        if (!seen.insert(nm).second) complain("duplicate observation name " + nm);

    return out;
}

void Pomdp::ensure_valid() const {
    auto problems = validate();
    if (problems.empty()) return;
    std::string msg = "invalid model:";
    std::size_t shown = std::min<std::size_t>(problems.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + problems[i];
    if (problems.size() > shown)
        msg += "\n  (" + std::to_string(problems.size() - shown) + " more)";
    throw InputError(msg);
}

std::optional<Support> belief_update(const Pomdp& m, const Support& y, ActionId a, ObsId z) {
    Support next;
    for (StateId s : y)
        for (const TransEntry& e : m.trans[s][a])
            if (m.obs_of[e.to] == z) next.push_back(e.to);
    if (next.empty()) return std::nullopt;
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    return next;
}

namespace {

std::vector<Support> explore_supports(const Pomdp& m, std::vector<Support> frontier,
                                      std::uint64_t max_supports) {
    std::set<Support> seen(frontier.begin(), frontier.end());
    std::vector<Support> queue = std::move(frontier);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Support y = queue[head]; // copy: queue may reallocate below
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            for (ObsId z = 0; z < m.num_obs(); ++z) {
                auto next = belief_update(m, y, a, z);
                if (!next) continue;
                if (seen.insert(*next).second) {
                    if (seen.size() > max_supports)
                        throw CapError("belief support count exceeds cap (" +
                                       std::to_string(max_supports) + ")");
                    queue.push_back(std::move(*next));
                }
            }
        }
    }
    return {seen.begin(), seen.end()}; // std::set iterates in sorted order
}

} // namespace

std::vector<Support> reachable_belief_supports(const Pomdp& m, std::uint64_t max_supports) {
    // The initial belief splits by observation before the first action.
    std::map<ObsId, Support> by_obs;
    for (const TransEntry& e : m.initial) by_obs[m.obs_of[e.to]].push_back(e.to);
    std::vector<Support> roots;
    for (auto& [z, y] : by_obs) {
        std::sort(y.begin(), y.end());
        roots.push_back(std::move(y));
    }
    return explore_supports(m, std::move(roots), max_supports);
}

std::vector<Support> reachable_belief_supports_from(const Pomdp& m, const Support& seed,
                                                    std::uint64_t max_supports) {
    return explore_supports(m, {seed}, max_supports);
}

std::size_t max_observation_size(const std::vector<Support>& supports) {
    std::size_t m = 0;
    for (const auto& y : supports) m = std::max(m, y.size());
    return m;
}

void prune_unused_observations(Pomdp& m) {
    std::vector<char> used(m.num_obs(), 0);
    for (ObsId z : m.obs_of) used[z] = 1;
    std::vector<ObsId> remap(m.num_obs(), 0);
    std::vector<std::string> names;
    for (std::size_t z = 0; z < m.num_obs(); ++z)
        if (used[z]) {
            remap[z] = static_cast<ObsId>(names.size());
            names.push_back(m.obs_names[z]);
        }
    if (names.size() == m.num_obs()) return;
    m.obs_names = std::move(names);
    for (ObsId& z : m.obs_of) z = remap[z];
}

Pomdp normalize_observations(const GeneralPomdp& g) {
    const Pomdp& base = g.base;
    const std::size_t n = base.state_names.size();

    if (g.obs.kind == GeneralObs::Det) {
        Pomdp out = base;
        out.obs_of = g.obs.det;
        return out;
    }

    if (g.obs.kind == GeneralObs::Sets) {
        // Each distinct set becomes one observation of the subset alphabet.
        if (g.obs.sets.size() != n) throw InputError("observation set list size mismatch");
        std::map<std::vector<ObsId>, ObsId> index;
        Pomdp out = base;
        out.obs_names.clear();
        out.obs_of.assign(n, 0);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<ObsId> set = g.obs.sets[s];
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            if (set.empty()) throw InputError("state " + base.state_names[s] + ": empty observation set");
            auto [it, fresh] = index.emplace(set, static_cast<ObsId>(index.size()));
            if (fresh) {
                std::string nm;
                for (ObsId z : set) {
                    if (!nm.empty()) nm += "_";
                    nm += base.obs_names[z];
                }
                out.obs_names.push_back(nm);
            }
            out.obs_of[s] = it->second;
        }
        return out;
    }

    // Randomized observation map: split each state into (state, observation)
    // copies so the observation becomes part of the state and deterministic.
    if (g.obs.dists.size() != n) throw InputError("observation distribution list size mismatch");
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<Prob> ps;
        for (auto& [z, p] : g.obs.dists[s]) {
            if (z >= base.obs_names.size())
                throw InputError("state " + base.state_names[s] + ": observation id out of range");
            ps.push_back(p);
        }
        if (!sums_to_one(ps))
            throw InputError("state " + base.state_names[s] +
                             ": observation distribution does not sum to 1");
    }

    Pomdp out;
    out.action_names = base.action_names;
    out.obs_names = base.obs_names;
    // pair ids, dense: only pairs with positive emission probability exist
    std::set<std::string> taken;
    std::vector<std::vector<std::pair<ObsId, StateId>>> copies(n); // per state: (z, new id)
    for (std::size_t s = 0; s < n; ++s) {
        for (auto& [z, p] : g.obs.dists[s]) {
            if (p.is_zero()) continue;
            StateId id = static_cast<StateId>(out.state_names.size());
            std::string nm = base.state_names[s] + "__" + base.obs_names[z];
            while (!taken.insert(nm).second) nm += "x";
            out.state_names.push_back(nm);
            out.obs_of.push_back(z);
            out.priority.push_back(base.priority[s]);
            out.label_of.push_back(base.label_of[s]);
            copies[s].push_back({z, id});
        }
    }
    auto expand = [&](const Row& row) {
        std::map<StateId, Prob> acc;
        for (const TransEntry& e : row) {
            for (auto& [z, p] : g.obs.dists[e.to]) {
                if (p.is_zero()) continue;
                StateId id = 0;
                for (auto& [zz, cid] : copies[e.to])
                    if (zz == z) id = cid;
                Prob mass = e.p * p;
                auto it = acc.find(id);
                if (it == acc.end())
                    acc.emplace(id, mass);
                else
                    it->second = it->second + mass;
            }
        }
        Row out_row;
        for (auto& [id, p] : acc) out_row.push_back({id, p});
        return out_row;
    };
    out.trans.resize(out.state_names.size());
    for (std::size_t s = 0; s < n; ++s)
        for (auto& [z, id] : copies[s]) {
            (void)z;
            out.trans[id].resize(base.action_names.size());
            for (std::size_t a = 0; a < base.action_names.size(); ++a)
                out.trans[id][a] = expand(base.trans[s][a]);
        }
    out.initial = expand(base.initial);
    return out;
}

} // namespace qpomdp
