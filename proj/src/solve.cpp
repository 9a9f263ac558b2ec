#include "qpomdp/solve.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "qpomdp/error.hpp"
#include "qpomdp/verify.hpp"

namespace qpomdp {

namespace {

// Levels actually claimable in this product, ascending.
std::vector<int> claim_levels(const BeliefObsPomdp& g) {
    std::set<int> ls;
    for (const MemoryElement& m : g.memories)
        if (!m.b.empty()) ls.insert(m.level);
    return {ls.begin(), ls.end()};
}

} // namespace

CoreResult safe_core(const BeliefObsPomdp& g, const std::vector<char>& w, int level) {
    const std::size_t nm = g.num_memories();
    CoreResult r;
    r.in_core_mem.assign(nm, 0);
    r.in_core_state.assign(g.num_states(), 0);
    r.actions.assign(nm, {});
    for (MemId m = 1; m < nm; ++m)
        r.in_core_mem[m] = w[m] && !g.memories[m].b.empty() && g.memories[m].level == level;

    auto keep_ok = [&](const Branch& br) {
        if (br.menu.empty()) return false;
        MemId keep = br.menu[0];
        return br.k.empty() ? static_cast<bool>(w[keep])
                            : static_cast<bool>(r.in_core_mem[keep]);
    };

    bool changed = true;
    while (changed) {
        changed = false;

        // action sets against the current core snapshot, then apply drops
        std::vector<std::vector<ActionId>> next_actions(nm);
        for (MemId m = 1; m < nm; ++m) {
            if (!r.in_core_mem[m]) continue;
            for (ActionId a = 0; a < g.base->num_actions(); ++a) {
                bool ok = true;
                for (const Branch& br : g.branches[m][a]) ok = ok && keep_ok(br);
                if (ok) next_actions[m].push_back(a);
            }
            if (next_actions[m].empty()) {
                r.in_core_mem[m] = 0;
                changed = true;
            }
        }
        r.actions = std::move(next_actions);
        if (changed) continue; // recompute action sets against the shrunk core

        // recurrence witness: every bottom component of the claimed graph
        // under the core actions must touch priority `level`
        std::vector<ProdId> nodes;
        std::vector<std::uint32_t> node_id(g.num_states(), UINT32_MAX);
        for (MemId m = 1; m < nm; ++m) {
            if (!r.in_core_mem[m]) continue;
            for (StateId s : g.memories[m].b) {
                ProdId v = g.state_of(m, s);
                node_id[v] = static_cast<std::uint32_t>(nodes.size());
                nodes.push_back(v);
            }
        }
        std::vector<std::vector<std::uint32_t>> adj(nodes.size());
        for (std::uint32_t i = 0; i < nodes.size(); ++i) {
            ProdId v = nodes[i];
            MemId m = g.memory_of[v];
            StateId s = g.base_state[v];
            for (ActionId a : r.actions[m]) {
                for (const TransEntry& e : g.base->trans[s][a]) {
                    ObsId z = g.base->obs_of[e.to];
                    for (const Branch& br : g.branches[m][a]) {
                        if (br.z != z) continue;
                        ProdId t = g.state_of(br.menu[0], e.to);
                        adj[i].push_back(node_id[t]);
                    }
                }
            }
            std::sort(adj[i].begin(), adj[i].end());
            adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
        }
        std::vector<std::uint32_t> roots(nodes.size());
        for (std::uint32_t i = 0; i < nodes.size(); ++i) roots[i] = i;
        for (const auto& scc : bottom_sccs(adj, roots)) {
            bool witness = false;
            for (std::uint32_t i : scc) witness = witness || g.phat[nodes[i]] == level;
            if (!witness) {
                for (std::uint32_t i : scc) {
                    MemId m = g.memory_of[nodes[i]];
                    if (r.in_core_mem[m]) {
                        r.in_core_mem[m] = 0;
                        changed = true;
                    }
                }
            }
        }
    }

    for (MemId m = 1; m < nm; ++m)
        if (r.in_core_mem[m])
            for (StateId s : g.memories[m].b) r.in_core_state[g.state_of(m, s)] = 1;
    return r;
}

namespace {

// A memory is usable inside W when every branch of some action offers a
// W-choice; returns that action filter.
std::vector<ActionId> usable_actions(const BeliefObsPomdp& g, const std::vector<char>& w,
                                     MemId m) {
    std::vector<ActionId> out;
    for (ActionId a = 0; a < g.base->num_actions(); ++a) {
        bool ok = true;
        for (const Branch& br : g.branches[m][a]) {
            bool any = false;
            for (MemId c : br.menu) any = any || w[c];
            ok = ok && any;
        }
        if (ok) out.push_back(a);
    }
    return out;
}

struct CoreAggregate {
    std::vector<char> mem;
    std::vector<char> state;
    std::vector<std::vector<ActionId>> actions;
};

CoreAggregate all_cores(const BeliefObsPomdp& g, const std::vector<char>& w) {
    CoreAggregate agg;
    agg.mem.assign(g.num_memories(), 0);
    agg.state.assign(g.num_states(), 0);
    agg.actions.assign(g.num_memories(), {});
    for (int level : claim_levels(g)) {
        CoreResult cr = safe_core(g, w, level);
        for (MemId m = 1; m < g.num_memories(); ++m) {
            if (!cr.in_core_mem[m]) continue;
            agg.mem[m] = 1;
            agg.actions[m] = cr.actions[m];
        }
        for (ProdId v = 0; v < g.num_states(); ++v)
            if (cr.in_core_state[v]) agg.state[v] = 1;
    }
    return agg;
}

// Reverse adjacency of the exploration graph: core memories move by their
// core actions with the keep choice, other memories by every usable action
// and every W-choice.
std::vector<std::vector<ProdId>> reverse_graph(const BeliefObsPomdp& g,
                                               const std::vector<char>& w,
                                               const CoreAggregate& agg,
                                               const std::vector<std::vector<ActionId>>& usable) {
    std::vector<std::vector<ProdId>> radj(g.num_states());
    for (MemId m = 1; m < g.num_memories(); ++m) {
        if (!w[m]) continue;
        const bool core = agg.mem[m];
        const std::vector<ActionId>& acts = core ? agg.actions[m] : usable[m];
        for (StateId s : g.memories[m].y) {
            ProdId v = g.state_of(m, s);
            for (ActionId a : acts) {
                for (const TransEntry& e : g.base->trans[s][a]) {
                    ObsId z = g.base->obs_of[e.to];
                    for (const Branch& br : g.branches[m][a]) {
                        if (br.z != z) continue;
                        if (core) {
                            radj[g.state_of(br.menu[0], e.to)].push_back(v);
                        } else {
                            for (MemId c : br.menu)
                                if (w[c]) radj[g.state_of(c, e.to)].push_back(v);
                        }
                    }
                }
            }
        }
    }
    return radj;
}

} // namespace

Solution almost_sure_win(const BeliefObsPomdp& g, const Caps& caps) {
    const std::size_t nm = g.num_memories();
    std::vector<char> w(nm, 1);
    w[g.lose_mem] = 0;

    std::vector<std::vector<ActionId>> usable(nm);
    CoreAggregate agg;

    bool outer_changed = true;
    while (outer_changed) {
        caps.deadline.check("solver fixpoint");
        outer_changed = false;

        // closure-safe actions, to a local fixpoint
        bool u_changed = true;
        while (u_changed) {
            u_changed = false;
            for (MemId m = 1; m < nm; ++m) {
                if (!w[m]) continue;
                usable[m] = usable_actions(g, w, m);
                if (usable[m].empty()) {
                    w[m] = 0;
                    u_changed = true;
                    outer_changed = true;
                }
            }
        }

        agg = all_cores(g, w);
        std::deque<ProdId> queue;
        std::vector<char> reached(g.num_states(), 0);
        for (ProdId v = 0; v < g.num_states(); ++v)
            if (agg.state[v]) {
                reached[v] = 1;
                queue.push_back(v);
            }
        if (queue.empty()) {
            // nothing claimable: everything loses
            for (MemId m = 1; m < nm; ++m) w[m] = 0;
            break;
        }
        auto radj = reverse_graph(g, w, agg, usable);
        while (!queue.empty()) {
            ProdId v = queue.front();
            queue.pop_front();
            for (ProdId u : radj[v])
                if (!reached[u]) {
                    reached[u] = 1;
                    queue.push_back(u);
                }
        }
        for (MemId m = 1; m < nm; ++m) {
            if (!w[m]) continue;
            bool all = true;
            for (ProdId v : g.states_of[m]) all = all && reached[v];
            if (!all) {
                w[m] = 0;
                outer_changed = true;
            }
        }
    }

    Solution sol;
    sol.winning_mem = w;
    sol.core_mem = agg.mem;
    sol.core_state = agg.state;
    sol.actions.assign(nm, {});
    for (MemId m = 1; m < nm; ++m) {
        if (!w[m]) continue;
        sol.actions[m] = agg.mem[m] ? agg.actions[m] : usable[m];
    }
    bool win = !g.initial_memories.empty();
    for (MemId m0 : g.initial_memories) win = win && w[m0];
    sol.verdict = win ? Verdict::AlmostSure : Verdict::NotFoundInClass;
    return sol;
}

namespace {

using SelectorTable = std::vector<std::vector<std::vector<MemId>>>; // [mem][action][branch]

// Forward adjacency of the chain induced by (actions, selectors), restricted
// to what is reachable from the initial states.
std::vector<std::vector<std::uint32_t>> chain_adj(const BeliefObsPomdp& g,
                                                  const Solution& sol,
                                                  const SelectorTable& sel) {
    std::vector<std::vector<std::uint32_t>> adj(g.num_states());
    std::vector<char> seen(g.num_states(), 0);
    std::deque<ProdId> queue;
    for (ProdId v : g.initial_states)
        if (!seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        ProdId v = queue.front();
        queue.pop_front();
        MemId m = g.memory_of[v];
        StateId s = g.base_state[v];
        std::set<ProdId> targets;
        for (ActionId a : sol.actions[m]) {
            for (const TransEntry& e : g.base->trans[s][a]) {
                ObsId z = g.base->obs_of[e.to];
                const auto& branches = g.branches[m][a];
                for (std::size_t bi = 0; bi < branches.size(); ++bi) {
                    if (branches[bi].z != z) continue;
                    targets.insert(g.state_of(sel[m][a][bi], e.to));
                }
            }
        }
        for (ProdId t : targets) {
            adj[v].push_back(t);
            if (!seen[t]) {
                seen[t] = 1;
                queue.push_back(t);
            }
        }
    }
    return adj;
}

// Distance of every state to the target set, over reversed edges; UINT32_MAX
// when unreachable.
std::vector<std::uint32_t> distances_to(const std::vector<std::vector<ProdId>>& radj,
                                        const std::vector<char>& target) {
    std::vector<std::uint32_t> dist(radj.size(), UINT32_MAX);
    std::deque<ProdId> queue;
    for (ProdId v = 0; v < radj.size(); ++v)
        if (target[v]) {
            dist[v] = 0;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        ProdId v = queue.front();
        queue.pop_front();
        for (ProdId u : radj[v])
            if (dist[u] == UINT32_MAX) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
    }
    return dist;
}

} // namespace

Policy extract_policy(const BeliefObsPomdp& g, const Solution& sol) {
    if (sol.verdict != Verdict::AlmostSure)
        throw InternalError("extract_policy called on a NotFoundInClass solution");
    const std::vector<char>& w = sol.winning_mem;

    // union exploration graph distances guide the first selector choice
    std::vector<std::vector<ActionId>> usable(g.num_memories());
    for (MemId m = 1; m < g.num_memories(); ++m)
        if (w[m] && !sol.core_mem[m]) usable[m] = sol.actions[m];
    CoreAggregate agg;
    agg.mem.assign(g.num_memories(), 0);
    agg.state = sol.core_state;
    agg.actions.assign(g.num_memories(), {});
    for (MemId m = 1; m < g.num_memories(); ++m)
        if (sol.core_mem[m]) {
            agg.mem[m] = 1;
            agg.actions[m] = sol.actions[m];
        }
    auto radj = reverse_graph(g, w, agg, usable);
    std::vector<std::uint32_t> dist = distances_to(radj, sol.core_state);

    auto pick = [&](MemId m, ActionId, const Branch& br,
                    const std::vector<std::uint32_t>& d) -> MemId {
        bool core = sol.core_mem[m];
        if (core) return br.menu[0];
        MemId best = Policy::NONE;
        std::uint64_t best_score = UINT64_MAX;
        for (MemId c : br.menu) {
            if (!w[c]) continue;
            std::uint64_t score = 0;
            for (StateId s : br.y_next) {
                std::uint32_t dv = d[g.state_of(c, s)];
                score = std::max<std::uint64_t>(score, dv);
            }
            if (score < best_score) {
                best_score = score;
                best = c;
            }
        }
        if (best == Policy::NONE) throw InternalError("no winning selector choice on a branch");
        return best;
    };

    SelectorTable sel(g.num_memories());
    for (MemId m = 1; m < g.num_memories(); ++m) {
        if (!w[m]) continue;
        sel[m].assign(g.base->num_actions(), {});
        for (ActionId a : sol.actions[m]) {
            const auto& branches = g.branches[m][a];
            sel[m][a].assign(branches.size(), Policy::NONE);
            for (std::size_t bi = 0; bi < branches.size(); ++bi)
                sel[m][a][bi] = pick(m, a, branches[bi], dist);
        }
    }

    // repair: the induced chain must bottom out inside the claimed cores
    std::vector<std::vector<std::uint32_t>> adj;
    for (int round = 0;; ++round) {
        adj = chain_adj(g, sol, sel);
        std::vector<char> bad(g.num_states(), 0);
        bool any_bad = false;
        for (const auto& scc : bottom_sccs(adj, g.initial_states)) {
            bool inside = true;
            for (std::uint32_t v : scc) inside = inside && sol.core_state[v];
            if (!inside) {
                any_bad = true;
                for (std::uint32_t v : scc) bad[v] = 1;
            }
        }
        if (!any_bad) break;
        if (round >= 32)
            throw InternalError("policy extraction failed to reach the claimed cores");
        // recompute selectors against chain distances, treating the bad
        // components as unreachable so the choice moves away from them
        std::vector<std::vector<ProdId>> chain_radj(g.num_states());
        for (ProdId v = 0; v < g.num_states(); ++v)
            for (std::uint32_t t : adj[v])
                if (!bad[v]) chain_radj[t].push_back(v);
        std::vector<std::uint32_t> cd = distances_to(chain_radj, sol.core_state);
        for (ProdId v = 0; v < g.num_states(); ++v)
            if (bad[v]) cd[v] = UINT32_MAX;
        // fall back to union-graph distances where the chain has no path yet
        for (ProdId v = 0; v < g.num_states(); ++v)
            if (cd[v] == UINT32_MAX && !bad[v]) cd[v] = (dist[v] == UINT32_MAX ? UINT32_MAX : dist[v] + (1u << 20));
        for (MemId m = 1; m < g.num_memories(); ++m) {
            if (!w[m] || sol.core_mem[m]) continue;
            for (ActionId a : sol.actions[m]) {
                const auto& branches = g.branches[m][a];
                for (std::size_t bi = 0; bi < branches.size(); ++bi)
                    sel[m][a][bi] = pick(m, a, branches[bi], cd);
            }
        }
    }

    // rename reachable memories densely in breadth-first order
    std::vector<std::uint32_t> rename(g.num_memories(), Policy::NONE);
    std::vector<MemId> order;
    std::deque<MemId> queue;
    for (MemId m0 : g.initial_memories)
        if (rename[m0] == Policy::NONE) {
            rename[m0] = static_cast<std::uint32_t>(order.size());
            order.push_back(m0);
            queue.push_back(m0);
        }
    std::vector<char> state_reach(g.num_states(), 0);
    {
        std::deque<ProdId> q2(g.initial_states.begin(), g.initial_states.end());
        for (ProdId v : g.initial_states) state_reach[v] = 1;
        while (!q2.empty()) {
            ProdId v = q2.front();
            q2.pop_front();
            for (std::uint32_t t : adj[v])
                if (!state_reach[t]) {
                    state_reach[t] = 1;
                    q2.push_back(t);
                }
        }
    }
    while (!queue.empty()) {
        MemId m = queue.front();
        queue.pop_front();
        for (ActionId a : sol.actions[m]) {
            const auto& branches = g.branches[m][a];
            for (std::size_t bi = 0; bi < branches.size(); ++bi) {
                // only follow selector targets some state actually enters
                bool entered = false;
                for (StateId s : branches[bi].y_next)
                    entered = entered || state_reach[g.state_of(sel[m][a][bi], s)];
                if (!entered) continue;
                MemId t = sel[m][a][bi];
                if (rename[t] == Policy::NONE) {
                    rename[t] = static_cast<std::uint32_t>(order.size());
                    order.push_back(t);
                    queue.push_back(t);
                }
            }
        }
    }

    Policy p;
    const std::size_t na = g.base->num_actions();
    const std::size_t nz = g.base->num_obs();
    p.memory_names.resize(order.size());
    p.act.resize(order.size());
    p.upd.assign(order.size(), std::vector<std::uint32_t>(na * nz, Policy::NONE));
    p.annot.resize(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        MemId m = order[i];
        p.memory_names[i] = "m" + std::to_string(i);
        p.act[i] = sol.actions[m];
        const MemoryElement& me = g.memories[m];
        p.annot[i].present = true;
        p.annot[i].y = me.y;
        p.annot[i].b = me.b;
        p.annot[i].level = me.b.empty() ? 0 : me.level;
        for (ActionId a : sol.actions[m]) {
            const auto& branches = g.branches[m][a];
            for (std::size_t bi = 0; bi < branches.size(); ++bi) {
                MemId t = sel[m][a][bi];
                if (rename[t] == Policy::NONE) continue; // never entered
                p.upd[i][branches[bi].z * na + a] = rename[t];
            }
        }
    }
    for (std::size_t i = 0; i < g.initial_memories.size(); ++i) {
        MemId m0 = g.initial_memories[i];
        ObsId z = g.base->obs_of[g.memories[m0].y.front()];
        p.init.push_back({z, rename[m0]});
    }
    std::sort(p.init.begin(), p.init.end());
    return p;
}

SolveModel prepare_solve_model(const Pomdp& input, const Objective& obj, const Caps& caps) {
    SolveModel out;
    Pomdp work;
    if (obj.kind == ObjectiveKind::Parity) {
        work = input;
        work.ensure_valid();
        out.labeled_product = false;
    } else {
        Pomdp labeled = label_states(input, obj);
        Dpa dpa = build_automaton(obj);
        work = automaton_product(labeled, dpa, caps);
        out.labeled_product = true;
    }
    normalize_priorities(work);
    out.states_before_reduction = work.num_states();
    Reduction red = reduce_to_cobuchi(work);
    out.model = std::move(red.model);
    out.reduce_case = red.kase;
    return out;
}

SolveOutput solve(const Pomdp& input, const Objective& obj, const Caps& caps, bool want_policy) {
    SolveOutput out;
    out.prep = prepare_solve_model(input, obj, caps);
    BeliefObsPomdp g = build_product(out.prep.model, caps);
    out.product_states = g.num_states();
    out.product_memories = g.num_memories();
    for (const MemoryElement& me : g.memories)
        out.max_support = std::max(out.max_support, me.y.size());
    out.solution = almost_sure_win(g, caps);
    if (want_policy && out.solution.verdict == Verdict::AlmostSure) {
        Policy p = extract_policy(g, out.solution);
        Certificate cert = check(out.prep.model, p);
        if (!cert.ok)
            throw InternalError("extracted witness failed certification");
        out.policy = std::move(p);
    }
    return out;
}

} // namespace qpomdp
