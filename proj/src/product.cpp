#include "qpomdp/product.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qpomdp/error.hpp"

namespace qpomdp {

Pomdp automaton_product(const Pomdp& labeled, const Dpa& dpa, const Caps& caps) {
    labeled.ensure_valid();
    // per-state symbol, read once
    std::vector<std::uint32_t> sym(labeled.num_states());
    for (std::size_t s = 0; s < labeled.num_states(); ++s)
        sym[s] = dpa.symbol(labeled.label_of[s]);

    std::map<std::pair<StateId, std::uint32_t>, StateId> index;
    std::vector<std::pair<StateId, std::uint32_t>> pairs;
    std::set<std::string> taken;
    Pomdp out;
    out.action_names = labeled.action_names;
    out.obs_names = labeled.obs_names;

    auto intern = [&](StateId s, std::uint32_t q) {
        auto key = std::make_pair(s, q);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (pairs.size() >= caps.max_product_states)
            throw CapError("automaton product exceeds state cap");
        StateId id = static_cast<StateId>(pairs.size());
        index.emplace(key, id);
        pairs.push_back(key);
        std::string nm = labeled.state_names[s] + "__" + dpa.state_names[q];
        while (!taken.insert(nm).second) nm += "x";
        out.state_names.push_back(nm);
        out.obs_of.push_back(labeled.obs_of[s]);
        out.priority.push_back(dpa.priority[q]);
        out.label_of.push_back(labeled.label_of[s]);
        return id;
    };

    for (const TransEntry& e : labeled.initial) {
        StateId id = intern(e.to, dpa.delta[dpa.initial][sym[e.to]]);
        out.initial.push_back({id, e.p});
    }
    std::sort(out.initial.begin(), out.initial.end(),
              [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });

    for (StateId id = 0; id < pairs.size(); ++id) {
        caps.deadline.check("automaton product");
        auto [s, q] = pairs[id];
        out.trans.resize(pairs.size());
        out.trans[id].resize(labeled.num_actions());
        for (ActionId a = 0; a < labeled.num_actions(); ++a) {
            Row row;
            for (const TransEntry& e : labeled.trans[s][a])
                row.push_back({intern(e.to, dpa.delta[q][sym[e.to]]), e.p});
            std::sort(row.begin(), row.end(),
                      [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });
            out.trans[id][a] = std::move(row);
        }
    }
    out.trans.resize(pairs.size()); // in case the last intern grew `pairs`
    for (auto& per_state : out.trans) per_state.resize(labeled.num_actions());

    prune_unused_observations(out);
    out.ensure_valid();
    return out;
}

std::map<int, int> normalize_priorities(Pomdp& m) {
    std::set<int> distinct(m.priority.begin(), m.priority.end());
    std::map<int, int> remap;
    int prev_new = 0;
    for (int p : distinct) {
        if (remap.empty()) {
            prev_new = (p % 2 == 0) ? 2 : 1;
        } else if (p % 2 != prev_new % 2) {
            ++prev_new;
        } // same parity as the previous run: merge
        remap[p] = prev_new;
    }
    for (int& p : m.priority) p = remap[p];
    return remap;
}

Reduction reduce_to_cobuchi(const Pomdp& m) {
    std::set<int> distinct(m.priority.begin(), m.priority.end());
    bool within_cobuchi = true;
    for (int p : distinct) within_cobuchi = within_cobuchi && (p == 1 || p == 2);
    if (within_cobuchi) return {m, ReduceCase::Identity};

    // reach shape: priorities {2,3} with the 2-region closed
    bool shape = distinct == std::set<int>{2, 3};
    if (shape) {
        for (std::size_t s = 0; s < m.num_states() && shape; ++s) {
            if (m.priority[s] != 2) continue;
            for (const auto& row : m.trans[s])
                for (const TransEntry& e : row) shape = shape && m.priority[e.to] == 2;
        }
    }
    if (!shape) return {m, ReduceCase::Unsupported};

    Pomdp out = m;
    std::set<std::string> names(out.state_names.begin(), out.state_names.end());
    std::string sink_name = "sink";
    while (names.count(sink_name)) sink_name += "_";
    std::set<std::string> obs_names(out.obs_names.begin(), out.obs_names.end());
    std::string sink_obs = "sink";
    while (obs_names.count(sink_obs)) sink_obs += "_";

    StateId sink = static_cast<StateId>(out.num_states());
    ObsId sink_z = static_cast<ObsId>(out.num_obs());
    out.state_names.push_back(sink_name);
    out.obs_names.push_back(sink_obs);
    out.obs_of.push_back(sink_z);
    out.priority.push_back(2);
    out.label_of.push_back("");
    out.trans.push_back(std::vector<Row>(out.num_actions(), Row{{sink, Prob::one()}}));

    for (std::size_t s = 0; s + 1 < out.num_states(); ++s) {
        if (out.priority[s] == 2) {
            for (ActionId a = 0; a < out.num_actions(); ++a)
                out.trans[s][a] = Row{{sink, Prob::one()}};
        } else {
            out.priority[s] = 1;
        }
    }
    out.ensure_valid();
    return {std::move(out), ReduceCase::ReachSink};
}

ProdId BeliefObsPomdp::state_of(MemId m, StateId s) const {
    const Support& y = memories[m].y;
    auto it = std::lower_bound(y.begin(), y.end(), s);
    if (it == y.end() || *it != s) throw InternalError("state not in memory support");
    return states_of[m][static_cast<std::size_t>(it - y.begin())];
}

namespace {

struct Builder {
    const Pomdp& base;
    const Caps& caps;
    BeliefObsPomdp g;
    std::map<MemoryElement, MemId> index;
    std::set<Support> supports_seen;
    std::vector<int> levels; // even priorities present, ascending

    explicit Builder(const Pomdp& m, const Caps& c) : base(m), caps(c) {
        g.base = &m;
        std::set<int> evens;
        for (int p : m.priority)
            if (p % 2 == 0) evens.insert(p);
        levels.assign(evens.begin(), evens.end());
        int maxp = m.max_priority();
        g.odd_transient = maxp % 2 == 0 ? maxp + 1 : maxp + 2;

        // Lose sink: memory 0, product state 0
        MemoryElement lose;
        lose.level = -1;
        g.memories.push_back(lose);
        g.states_of.push_back({0});
        g.base_state.push_back(0);
        g.memory_of.push_back(0);
        g.phat.push_back(1);
        g.branches.emplace_back(m.num_actions());
        g.lose_mem = 0;
    }

    MemId intern(MemoryElement me) {
        auto it = index.find(me);
        if (it != index.end()) return it->second;
        MemId id = static_cast<MemId>(g.memories.size());
        index.emplace(me, id);
        supports_seen.insert(me.y);
        if (supports_seen.size() > caps.max_supports)
            throw CapError("reachable belief supports exceed cap (" +
                           std::to_string(caps.max_supports) + ")");
        if (g.base_state.size() + me.y.size() > caps.max_product_states)
            throw CapError("belief-observation product exceeds state cap (" +
                           std::to_string(caps.max_product_states) + ")");
        std::vector<ProdId> states;
        for (StateId s : me.y) {
            ProdId pid = static_cast<ProdId>(g.base_state.size());
            g.base_state.push_back(s);
            g.memory_of.push_back(id);
            bool claimed = std::binary_search(me.b.begin(), me.b.end(), s);
            g.phat.push_back(claimed ? base.priority[s] : g.odd_transient);
            states.push_back(pid);
        }
        g.memories.push_back(std::move(me));
        g.states_of.push_back(std::move(states));
        g.branches.emplace_back(); // filled when processed
        return id;
    }

    void process(MemId mid) {
        // copies: intern() grows g.memories/g.branches while we work
        const MemoryElement me = g.memories[mid];
        std::vector<std::vector<Branch>> per_action(base.num_actions());
        for (ActionId a = 0; a < base.num_actions(); ++a) {
            // claimed-successor closure, shared across observations
            Support closure;
            for (StateId s : me.b)
                for (const TransEntry& e : base.trans[s][a]) closure.push_back(e.to);
            std::sort(closure.begin(), closure.end());
            closure.erase(std::unique(closure.begin(), closure.end()), closure.end());

            for (ObsId z = 0; z < base.num_obs(); ++z) {
                auto yn = belief_update(base, me.y, a, z);
                if (!yn) continue;
                Branch br;
                br.z = z;
                br.y_next = *yn;
                std::set_intersection(closure.begin(), closure.end(), br.y_next.begin(),
                                      br.y_next.end(), std::back_inserter(br.k));
                build_menu(me, br);
                per_action[a].push_back(std::move(br));
            }
        }
        g.branches[mid] = std::move(per_action);
    }

    Support lock_set(const Support& y, int level) const {
        Support out;
        for (StateId s : y)
            if (base.priority[s] >= level) out.push_back(s);
        return out;
    }

    void build_menu(const MemoryElement& me, Branch& br) {
        if (!me.b.empty()) {
            // claim continues at the same level, or the branch is hopeless
            for (StateId s : br.k)
                if (base.priority[s] < me.level) return; // empty menu = forced Lose
            MemoryElement keep;
            keep.y = br.y_next;
            if (br.k.empty()) {
                keep.b = {};
                keep.level = 0;
            } else {
                keep.b = br.k;
                keep.level = me.level;
            }
            br.menu.push_back(intern(keep));
            Support widened = lock_set(br.y_next, me.level);
            if (!widened.empty() && widened != br.k) {
                // widened always contains k here (k members have priority >= level)
                MemoryElement w{br.y_next, widened, me.level};
                br.menu.push_back(intern(w));
            }
        } else {
            MemoryElement stay{br.y_next, {}, 0};
            br.menu.push_back(intern(stay));
            for (int level : levels) {
                Support locked = lock_set(br.y_next, level);
                if (locked.empty()) continue;
                MemoryElement lock{br.y_next, locked, level};
                br.menu.push_back(intern(lock));
            }
        }
    }

    void run() {
        // initial belief split by observation class
        std::map<ObsId, Support> by_obs;
        for (const TransEntry& e : base.initial) by_obs[base.obs_of[e.to]].push_back(e.to);
        for (auto& [z, y] : by_obs) {
            std::sort(y.begin(), y.end());
            MemId m0 = intern(MemoryElement{y, {}, 0});
            g.initial_memories.push_back(m0);
        }
        for (const TransEntry& e : base.initial) {
            MemId m0 = index.at(MemoryElement{by_obs[base.obs_of[e.to]], {}, 0});
            g.initial_states.push_back(g.state_of(m0, e.to));
        }

        for (MemId mid = 1; mid < g.memories.size(); ++mid) {
            if ((mid & 0x3f) == 0) caps.deadline.check("product construction");
            process(mid);
        }
    }
};

} // namespace

BeliefObsPomdp build_product(const Pomdp& m, const Caps& caps) {
    Builder b(m, caps);
    b.run();
    return std::move(b.g);
}

Pomdp dump_product_model(const BeliefObsPomdp& g) {
    const Pomdp& base = *g.base;
    Pomdp out;
    std::size_t max_menu = 1;
    for (const auto& per_action : g.branches)
        for (const auto& branches : per_action)
            for (const Branch& br : branches) max_menu = std::max(max_menu, br.menu.size());
    for (std::size_t j = 0; j < max_menu; ++j)
        for (const auto& a : base.action_names)
            out.action_names.push_back(a + "__c" + std::to_string(j));

    std::set<std::string> taken;
    for (ProdId v = 0; v < g.num_states(); ++v) {
        std::string nm = v == 0 ? std::string("Lose")
                                : base.state_names[g.base_state[v]] + "__m" +
                                      std::to_string(g.memory_of[v]);
        while (!taken.insert(nm).second) nm += "x";
        out.state_names.push_back(nm);
        out.obs_of.push_back(g.memory_of[v]);
        out.priority.push_back(g.phat[v]);
        out.label_of.push_back("");
    }
    for (MemId m = 0; m < g.num_memories(); ++m)
        out.obs_names.push_back("m" + std::to_string(m));

    out.trans.assign(g.num_states(), {});
    for (ProdId v = 0; v < g.num_states(); ++v) {
        out.trans[v].resize(out.action_names.size());
        for (std::size_t j = 0; j < max_menu; ++j) {
            for (ActionId a = 0; a < base.num_actions(); ++a) {
                Row row;
                if (v == 0) {
                    row.push_back({0, Prob::one()});
                } else {
                    StateId s = g.base_state[v];
                    MemId m = g.memory_of[v];
                    for (const TransEntry& e : base.trans[s][a]) {
                        ObsId z = base.obs_of[e.to];
                        const Branch* hit = nullptr;
                        for (const Branch& br : g.branches[m][a])
                            if (br.z == z) hit = &br;
                        if (!hit || hit->menu.empty()) {
                            row.push_back({0, e.p}); // forced Lose
                            continue;
                        }
                        MemId target = hit->menu[std::min(j, hit->menu.size() - 1)];
                        row.push_back({g.state_of(target, e.to), e.p});
                    }
                }
                // merge duplicate targets (several entries may force Lose)
                std::sort(row.begin(), row.end(),
                          [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });
                Row merged;
                for (const TransEntry& e : row) {
                    if (!merged.empty() && merged.back().to == e.to)
                        merged.back().p = merged.back().p + e.p;
                    else
                        merged.push_back(e);
                }
                out.trans[v][j * base.num_actions() + a] = std::move(merged);
            }
        }
    }
    for (std::size_t i = 0; i < g.initial_states.size(); ++i)
        out.initial.push_back({g.initial_states[i], base.initial[i].p});
    std::sort(out.initial.begin(), out.initial.end(),
              [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });
    prune_unused_observations(out);
    out.ensure_valid();
    return out;
}

} // namespace qpomdp
