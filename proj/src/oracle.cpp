#include "qpomdp/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>

#include "qpomdp/error.hpp"

namespace qpomdp {

namespace {

constexpr int KMAX = 3;
constexpr int ZMAX = 4;
constexpr int AMAX = 3;

// Partial policy under construction. Memories are named in discovery order,
// so a target of a fresh decision is either an existing memory or the next
// unused index; that canonical naming is what keeps the search free of
// renaming duplicates. Updates are keyed on (memory, observation, played
// action), the same shape the solver emits, so every solver witness within
// the memory bound lies inside this class.
struct Assign {
    int k = 1;
    int used = 0;
    std::array<int, ZMAX> init;
    std::array<unsigned, KMAX> sup;
    std::array<std::array<int, ZMAX * AMAX>, KMAX> upd; // slot = z * na + a
    // search depth at which each decision was made (-1 = forced before the
    // search), the raw material for conflict-directed backjumping
    std::array<int, ZMAX> init_depth;
    std::array<int, KMAX> sup_depth;
    std::array<std::array<int, ZMAX * AMAX>, KMAX> upd_depth;
    Assign() {
        init.fill(-1);
        sup.fill(0);
        for (auto& row : upd) row.fill(-1);
        init_depth.fill(-1);
        sup_depth.fill(-1);
        for (auto& row : upd_depth) row.fill(-1);
    }
};

struct Derived {
    enum Kind { None, Init, Support, Update } kind = None;
    int z = -1, mem = -1;
    bool prune = false; // a closed fully-decided bottom component has odd minimum
    // deepest decision a failing component depends on; every assignment that
    // keeps the decisions up to this depth loses, whatever comes later
    int prune_depth = INT32_MAX;
};

// Scratch space for derive(). The search calls derive once per node, many
// millions of times on hard no-instances, so everything is preallocated and
// the graph lives in flat fixed-stride buffers.
struct Scratch {
    int nv = 0;     // n * KMAX
    int stride = 0; // out-degree bound: num_actions * n
    std::vector<char> seen, complete;
    std::vector<std::uint32_t> queue, adj;
    std::vector<int> deg;
    // per-node decision depths feeding the backjump computation
    std::vector<int> path_depth, node_dec;
    // Tarjan
    std::vector<int> idx, low, comp, stack, frame_v, frame_e;
    std::vector<char> onstack;
    std::vector<int> comp_min, comp_closed, comp_bottom, comp_path, comp_dec;

    void init(const Pomdp& m) {
        nv = static_cast<int>(m.num_states()) * KMAX;
        stride = static_cast<int>(m.num_actions() * m.num_states());
        seen.assign(nv, 0);
        complete.assign(nv, 0);
        queue.resize(nv);
        adj.resize(static_cast<std::size_t>(nv) * stride);
        deg.assign(nv, 0);
        path_depth.assign(nv, 0);
        node_dec.assign(nv, 0);
        idx.assign(nv, -1);
        low.resize(nv);
        comp.assign(nv, -1);
        stack.resize(nv);
        frame_v.resize(nv + 1);
        frame_e.resize(nv + 1);
        onstack.assign(nv, 0);
        comp_min.resize(nv);
        comp_closed.resize(nv);
        comp_bottom.resize(nv);
        comp_path.resize(nv);
        comp_dec.resize(nv);
    }
};

// One sweep over the decided part of the induced chain. Yields the first
// undecided decision point in discovery order (the next branching of the
// search) and whether the decided part already seals the verdict.
Derived derive(const Pomdp& m, const Assign& st, const std::vector<ObsId>& init_classes,
               Scratch& sc) {
    Derived d;
    const std::size_t na = m.num_actions();
    int qh = 0, qt = 0;
    auto visit = [&](StateId s, int mem, int pd) {
        int v = static_cast<int>(s) * KMAX + mem;
        if (!sc.seen[v]) {
            sc.seen[v] = 1;
            sc.path_depth[v] = pd;
            sc.queue[qt++] = static_cast<std::uint32_t>(v);
        }
        return v;
    };
    auto note = [&](Derived::Kind kind, int z, int mem) {
        if (d.kind == Derived::None) {
            d.kind = kind;
            d.z = z;
            d.mem = mem;
        }
    };
    for (ObsId z : init_classes) {
        if (st.init[z] < 0) {
            note(Derived::Init, static_cast<int>(z), -1);
            continue;
        }
        for (const TransEntry& e : m.initial)
            if (m.obs_of[e.to] == z) visit(e.to, st.init[z], st.init_depth[z]);
    }
    while (qh < qt) {
        int v = static_cast<int>(sc.queue[qh++]);
        StateId s = static_cast<StateId>(v / KMAX);
        int mem = v % KMAX;
        sc.complete[v] = 1;
        sc.deg[v] = 0;
        sc.node_dec[v] = st.sup_depth[mem];
        if (st.sup[mem] == 0) {
            note(Derived::Support, -1, mem);
            sc.complete[v] = 0;
            continue;
        }
        std::uint32_t* row = sc.adj.data() + static_cast<std::size_t>(v) * sc.stride;
        for (ActionId a = 0; a < na; ++a) {
            if (!(st.sup[mem] >> a & 1u)) continue;
            for (const TransEntry& e : m.trans[s][a]) {
                ObsId z2 = m.obs_of[e.to];
                int slot = static_cast<int>(z2 * na + a);
                if (st.upd[mem][slot] < 0) {
                    note(Derived::Update, slot, mem);
                    sc.complete[v] = 0;
                    continue;
                }
                sc.node_dec[v] = std::max(sc.node_dec[v], st.upd_depth[mem][slot]);
                int pd = std::max({sc.path_depth[v], st.sup_depth[mem], st.upd_depth[mem][slot]});
                row[sc.deg[v]++] = static_cast<std::uint32_t>(visit(e.to, st.upd[mem][slot], pd));
            }
        }
    }

    // iterative Tarjan over the visited part; components pop with their
    // minimum priority and closedness, bottomness = no edge leaving them
    int ncomp = 0, top = 0;
    int tick = 0;
    for (int r = 0; r < qt; ++r) {
        int root = static_cast<int>(sc.queue[r]);
        if (sc.idx[root] >= 0) continue;
        int fp = 0;
        sc.frame_v[0] = root;
        sc.frame_e[0] = 0;
        sc.idx[root] = sc.low[root] = tick++;
        sc.stack[top++] = root;
        sc.onstack[root] = 1;
        while (fp >= 0) {
            int v = sc.frame_v[fp];
            if (sc.frame_e[fp] < sc.deg[v]) {
                int w = static_cast<int>(sc.adj[static_cast<std::size_t>(v) * sc.stride +
                                                sc.frame_e[fp]++]);
                if (sc.idx[w] < 0) {
                    sc.idx[w] = sc.low[w] = tick++;
                    sc.stack[top++] = w;
                    sc.onstack[w] = 1;
                    ++fp;
                    sc.frame_v[fp] = w;
                    sc.frame_e[fp] = 0;
                } else if (sc.onstack[w]) {
                    sc.low[v] = std::min(sc.low[v], sc.idx[w]);
                }
            } else {
                if (sc.low[v] == sc.idx[v]) {
                    int c = ncomp++;
                    sc.comp_min[c] = INT32_MAX;
                    sc.comp_closed[c] = 1;
                    sc.comp_bottom[c] = 1;
                    for (;;) {
                        int w = sc.stack[--top];
                        sc.onstack[w] = 0;
                        sc.comp[w] = c;
                        sc.comp_min[c] = std::min(sc.comp_min[c], m.priority[w / KMAX]);
                        sc.comp_closed[c] = sc.comp_closed[c] && sc.complete[w];
                        if (w == v) break;
                    }
                }
                --fp;
                if (fp >= 0) {
                    int p = sc.frame_v[fp];
                    sc.low[p] = std::min(sc.low[p], sc.low[v]);
                }
            }
        }
    }
    for (int r = 0; r < qt; ++r) {
        int v = static_cast<int>(sc.queue[r]);
        for (int e = 0; e < sc.deg[v]; ++e) {
            int w = static_cast<int>(sc.adj[static_cast<std::size_t>(v) * sc.stride + e]);
            if (sc.comp[w] != sc.comp[v]) sc.comp_bottom[sc.comp[v]] = 0;
        }
    }
    for (int c = 0; c < ncomp; ++c)
        if (sc.comp_bottom[c] && sc.comp_closed[c] && sc.comp_min[c] % 2 != 0) d.prune = true;

    // reset only what was touched
    for (int r = 0; r < qt; ++r) {
        int v = static_cast<int>(sc.queue[r]);
        sc.seen[v] = 0;
        sc.idx[v] = -1;
        sc.comp[v] = -1;
    }
    return d;
}

struct Engine {
    const Pomdp& m;
    const std::vector<ObsId>& init_classes;
    const Caps& caps;
    std::atomic<std::uint64_t>& nodes;
    std::uint64_t checked = 0;
    std::optional<Assign> win;
    // set once a lower-indexed sibling subtree has won; this subtree's answer
    // can no longer matter, so it stops
    const std::atomic<int>* stop_above = nullptr;
    int my_index = 0;
    Scratch sc;

    bool dfs(Assign& st) {
        if (stop_above && stop_above->load(std::memory_order_relaxed) < my_index) return false;
        if (nodes.fetch_add(1, std::memory_order_relaxed) + 1 > caps.oracle_nodes)
            throw CapError("brute-force search exceeded its node budget");
        caps.deadline.check("brute-force search");
        Derived d = derive(m, st, init_classes, sc);
        if (d.kind == Derived::None) {
            ++checked;
            if (!d.prune) {
                win = st;
                return true;
            }
            return false;
        }
        if (d.prune) return false;
        return expand(st, d, [&](Assign& s2) { return dfs(s2); });
    }

    // Canonical alternative order: memory targets ascending with the fresh
    // memory last, action supports by ascending bitmask.
    template <typename Rec>
    bool expand(Assign& st, const Derived& d, Rec rec) {
        if (d.kind == Derived::Support) {
            unsigned full = (1u << m.num_actions()) - 1;
            for (unsigned mask = 1; mask <= full; ++mask) {
                st.sup[d.mem] = mask;
                bool w = rec(st);
                st.sup[d.mem] = 0;
                if (w) return true;
            }
            return false;
        }
        int limit = st.used < st.k ? st.used + 1 : st.used;
        for (int t = 0; t < limit; ++t) {
            bool fresh = t == st.used;
            if (fresh) ++st.used;
            if (d.kind == Derived::Init)
                st.init[d.z] = t;
            else
                st.upd[d.mem][d.z] = t;
            bool w = rec(st);
            if (d.kind == Derived::Init)
                st.init[d.z] = -1;
            else
                st.upd[d.mem][d.z] = -1;
            if (fresh) --st.used;
            if (w) return true;
        }
        return false;
    }
};

Policy make_policy(const Pomdp& m, const Assign& st, const std::vector<ObsId>& init_classes) {
    Policy p;
    const std::size_t na = m.num_actions();
    const std::size_t nz = m.num_obs();
    p.memory_names.resize(st.used);
    p.act.resize(st.used);
    p.upd.assign(st.used, std::vector<std::uint32_t>(na * nz, Policy::NONE));
    p.annot.resize(st.used);
    for (int i = 0; i < st.used; ++i) {
        p.memory_names[i] = "m" + std::to_string(i);
        for (ActionId a = 0; a < na; ++a)
            if (st.sup[i] >> a & 1u) p.act[i].push_back(a);
        for (std::size_t slot = 0; slot < na * nz; ++slot) {
            if (st.upd[i][slot] < 0) continue;
            p.upd[i][slot] = static_cast<std::uint32_t>(st.upd[i][slot]);
        }
    }
    for (ObsId z : init_classes) p.init.push_back({z, static_cast<std::uint32_t>(st.init[z])});
    std::sort(p.init.begin(), p.init.end());
    return p;
}

OracleResult run(const Pomdp& m, int max_memory, const Caps& caps, bool parallel) {
    if (max_memory < 1) throw InputError("memory bound must be at least 1");
    if (m.num_states() > 8 || m.num_actions() > 3 || m.num_obs() > 4 || max_memory > KMAX)
        throw CapError("instance outside the brute-force caps (8 states, 3 actions, 4 observations, 3 memories)");
    m.ensure_valid();

    std::vector<ObsId> init_classes;
    for (const TransEntry& e : m.initial) init_classes.push_back(m.obs_of[e.to]);
    std::sort(init_classes.begin(), init_classes.end());
    init_classes.erase(std::unique(init_classes.begin(), init_classes.end()), init_classes.end());

    OracleResult result;
    std::atomic<std::uint64_t> nodes{0};
    Scratch peel_sc;
    peel_sc.init(m);
    for (int k = 1; k <= max_memory; ++k) {
        Assign root;
        root.k = k;

        // peel forced decisions so the parallel split lands on a real branch
        Derived split;
        int width = 0;
        bool leaf = false, leaf_win = false;
        for (;;) {
            Derived d = derive(m, root, init_classes, peel_sc);
            if (d.kind == Derived::None) {
                leaf = true;
                leaf_win = !d.prune;
                ++result.policies_checked;
                break;
            }
            if (d.prune) {
                leaf = true;
                break;
            }
            width = d.kind == Derived::Support
                        ? static_cast<int>((1u << m.num_actions()) - 1)
                        : (root.used < k ? root.used + 1 : root.used);
            if (width > 1) {
                split = d;
                break;
            }
            // single alternative: commit it and keep walking
            if (d.kind == Derived::Support) {
                root.sup[d.mem] = 1;
            } else {
                if (root.used == 0) ++root.used;
                if (d.kind == Derived::Init)
                    root.init[d.z] = 0;
                else
                    root.upd[d.mem][d.z] = 0;
            }
        }
        if (leaf) {
            if (leaf_win) {
                result.verdict = OracleVerdict::Yes;
                result.witness = make_policy(m, root, init_classes);
                return result;
            }
            continue;
        }

        std::vector<std::optional<Assign>> wins(width);
        std::vector<std::uint64_t> counts(width, 0);
        std::vector<std::string> errors(width);
        std::atomic<int> found{INT32_MAX};

        auto run_alt = [&](int i) {
            Assign st = root;
            Engine eng{m, init_classes, caps, nodes, 0, std::nullopt,
                       parallel ? &found : nullptr, i, {}};
            eng.sc.init(m);
            try {
                if (split.kind == Derived::Support) {
                    st.sup[split.mem] = static_cast<unsigned>(i + 1);
                } else {
                    if (i == st.used) ++st.used;
                    if (split.kind == Derived::Init)
                        st.init[split.z] = i;
                    else
                        st.upd[split.mem][split.z] = i;
                }
                if (eng.dfs(st)) {
                    wins[i] = eng.win;
                    int cur = found.load(std::memory_order_relaxed);
                    while (i < cur && !found.compare_exchange_weak(cur, i)) {
                    }
                }
            } catch (const CapError& e) {
                errors[i] = e.what();
            }
            counts[i] = eng.checked;
        };
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (int i = 0; i < width; ++i) run_alt(i);
        } else {
            for (int i = 0; i < width; ++i) {
                run_alt(i);
                if (wins[i]) break; // serial search stops at the first witness
            }
        }
        for (int i = 0; i < width; ++i) result.policies_checked += counts[i];
        for (int i = 0; i < width; ++i) {
            if (wins[i]) {
                result.verdict = OracleVerdict::Yes;
                result.witness = make_policy(m, *wins[i], init_classes);
                return result;
            }
            if (!errors[i].empty()) throw CapError(errors[i]);
        }
    }
    return result;
}

} // namespace

OracleResult oracle_decide(const Pomdp& m, int max_memory, const Caps& caps) {
    return run(m, max_memory, caps, true);
}

OracleResult oracle_decide_serial(const Pomdp& m, int max_memory, const Caps& caps) {
    return run(m, max_memory, caps, false);
}

} // namespace qpomdp
