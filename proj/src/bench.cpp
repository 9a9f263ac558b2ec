#include "qpomdp/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "qpomdp/error.hpp"
#include "qpomdp/solve.hpp"
#include "qpomdp/verify.hpp"

namespace qpomdp {

namespace {

// Small deterministic model assembler; rows are materialized sorted at the
// end so regeneration is byte-stable.
struct Builder {
    Pomdp m;
    std::map<std::string, StateId> sid;
    std::map<std::string, ObsId> zid;
    std::vector<std::map<StateId, Prob>> rows; // index = s * na + a, filled in finish

    struct Arc {
        StateId s;
        ActionId a;
        StateId t;
        Prob p;
    };
    std::vector<Arc> arcs;

    ActionId action(const std::string& name) {
        m.action_names.push_back(name);
        return static_cast<ActionId>(m.action_names.size() - 1);
    }
    ObsId obs(const std::string& name) {
        auto [it, fresh] = zid.emplace(name, static_cast<ObsId>(m.obs_names.size()));
        if (fresh) m.obs_names.push_back(name);
        return it->second;
    }
    StateId state(const std::string& name, const std::string& obsname, int pri) {
        auto [it, fresh] = sid.emplace(name, static_cast<StateId>(m.state_names.size()));
        if (fresh) {
            m.state_names.push_back(name);
            m.obs_of.push_back(obs(obsname));
            m.priority.push_back(pri);
            m.label_of.push_back("");
        }
        return it->second;
    }
    void arc(StateId s, ActionId a, StateId t, Prob p) { arcs.push_back({s, a, t, p}); }
    void det(StateId s, ActionId a, StateId t) { arc(s, a, t, Prob::one()); }
    void start(StateId s, Prob p) { m.initial.push_back({s, p}); }

    Pomdp finish() {
        const std::size_t na = m.num_actions();
        std::vector<std::map<StateId, Prob>> acc(m.num_states() * na);
        for (const Arc& e : arcs) {
            auto& cell = acc[e.s * na + e.a];
            auto it = cell.find(e.t);
            if (it == cell.end())
                cell.emplace(e.t, e.p);
            else
                it->second = it->second + e.p;
        }
        m.trans.assign(m.num_states(), std::vector<Row>(na));
        for (StateId s = 0; s < m.num_states(); ++s)
            for (ActionId a = 0; a < na; ++a)
                for (const auto& [t, p] : acc[s * na + a]) m.trans[s][a].push_back({t, p});
        std::sort(m.initial.begin(), m.initial.end(),
                  [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });
        m.ensure_valid();
        return std::move(m);
    }
};

Objective parity_objective() {
    Objective o;
    o.kind = ObjectiveKind::Parity;
    return o;
}

// Two space stations joined by a corridor of `slots` cells. The shuttle
// (MRV/LRV: most/least recently visited station) docks by backing up;
// driving forward into a station bumps. Backing into the LRV dock delivers,
// which is the even-priority event; bumps carry priority 1. Docking at a
// station makes it the most recently visited one, so the state space is
// named relative to the last delivery and the delivered dock becomes MRV.
BenchInstance gen_shuttle(int slots) {
    Builder b;
    ActionId f = b.action("forward"), t = b.action("turn"), k = b.action("backup");
    StateId dockL = b.state("dock_lrv", "odock_lrv", 3);
    StateId outMf = b.state("out_mrv_face", "osee_mrv", 3);
    // corridor cells indexed from the LRV side; facing is part of the state
    std::vector<StateId> spM(slots), spL(slots);
    for (int i = 0; i < slots; ++i)
        spM[i] = b.state("space" + std::to_string(i + 1) + "_face_mrv", "onothing", 3);
    StateId outLa = b.state("out_lrv_away", "onothing", 3);
    StateId outMa = b.state("out_mrv_away", "onothing", 3);
    for (int i = 0; i < slots; ++i)
        spL[i] = b.state("space" + std::to_string(i + 1) + "_face_lrv", "onothing", 3);
    StateId outLf = b.state("out_lrv_face", "osee_lrv", 3);
    StateId dockM = b.state("dock_mrv", "odock_mrv", 3);
    StateId deliver = b.state("deliver", "odelivered", 2);
    StateId bumpL = b.state("bump_lrv", "obump", 1);
    StateId bumpM = b.state("bump_mrv", "obump", 1);
    b.start(dockM, Prob::one());

    // undocking drives forward out of the dock, so the shuttle exits facing away
    b.det(dockM, f, outMa);
    b.det(dockM, t, dockM);
    b.det(dockM, k, dockM);
    b.det(dockL, f, outLa);
    b.det(dockL, t, dockL);
    b.det(dockL, k, dockL);

    // at a station door, facing it: backing away is unreliable and may spin around
    b.det(outMf, f, bumpM);
    b.det(outMf, t, outMa);
    b.arc(outMf, k, spM[slots - 1], Prob::from_ratio(3, 10));
    b.arc(outMf, k, outMf, Prob::from_ratio(4, 10));
    b.arc(outMf, k, outMa, Prob::from_ratio(3, 10));
    b.det(outLf, f, bumpL);
    b.det(outLf, t, outLa);
    b.arc(outLf, k, spL[0], Prob::from_ratio(3, 10));
    b.arc(outLf, k, outLf, Prob::from_ratio(4, 10));
    b.arc(outLf, k, outLa, Prob::from_ratio(3, 10));

    // at a station door with the back to it: backup docks, into the LRV it delivers
    b.det(outMa, f, spL[slots - 1]);
    b.det(outMa, t, outMf);
    b.arc(outMa, k, dockM, Prob::from_ratio(7, 10));
    b.arc(outMa, k, outMa, Prob::from_ratio(3, 10));
    b.det(outLa, f, spM[0]);
    b.det(outLa, t, outLf);
    b.arc(outLa, k, deliver, Prob::from_ratio(7, 10));
    b.arc(outLa, k, outLa, Prob::from_ratio(3, 10));

    for (int i = 0; i < slots; ++i) {
        // open space: forward is reliable, backup mostly works but may also
        // behave like a turn followed by a backup
        b.det(spM[i], f, i == slots - 1 ? outMf : spM[i + 1]);
        b.det(spM[i], t, spL[i]);
        b.arc(spM[i], k, i == 0 ? outLa : spM[i - 1], Prob::from_ratio(8, 10));
        b.arc(spM[i], k, spM[i], Prob::from_ratio(1, 10));
        b.arc(spM[i], k, i == slots - 1 ? outMa : spL[i + 1], Prob::from_ratio(1, 10));
        b.det(spL[i], f, i == 0 ? outLf : spL[i - 1]);
        b.det(spL[i], t, spM[i]);
        b.arc(spL[i], k, i == slots - 1 ? outMa : spL[i + 1], Prob::from_ratio(8, 10));
        b.arc(spL[i], k, spL[i], Prob::from_ratio(1, 10));
        b.arc(spL[i], k, i == 0 ? outLa : spM[i - 1], Prob::from_ratio(1, 10));
    }
    for (ActionId a : {f, t, k}) {
        b.det(deliver, a, dockM); // the station just visited becomes the MRV
        b.det(bumpM, a, outMf);
        b.det(bumpL, a, outLf);
    }
    return {b.finish(), parity_objective()};
}

// Three-row cheese maze: a top corridor, shafts under alternating columns,
// and cells under the shafts of which exactly one holds the cheese. Finding
// the cheese restarts the hunt; the other bottom cells are poisoned.
BenchInstance gen_cheese(bool large, const std::string& difficulty) {
    Builder b;
    ActionId n = b.action("n"), e = b.action("e"), s = b.action("s"), w = b.action("w");
    const int width = large ? 11 : 5;
    const int goal_col = large ? 4 : 2;
    auto top_obs = [&](int x) {
        if (!large) {
            if (x == 0) return std::string("oc0");
            if (x == 2) return std::string("oc2");
            if (x == 4) return std::string("oc4");
            return std::string("oc13");
        }
        if (x == 0) return std::string("oc0");
        if (x == 10) return std::string("oc10");
        return x % 2 ? std::string("oodd") : std::string("oeven");
    };
    std::vector<StateId> top(width);
    std::map<int, StateId> shaft, bottom;
    for (int x = 0; x < width; ++x) top[x] = b.state("t" + std::to_string(x), top_obs(x), 3);
    for (int x = 0; x < width; x += 2) {
        shaft[x] = b.state("sh" + std::to_string(x), "oshaft", 3);
        bool goal = x == goal_col;
        bottom[x] = b.state("b" + std::to_string(x), goal ? "ogoal" : "opoison", goal ? 2 : 1);
    }
    for (int x = 0; x < width; ++x) {
        b.det(top[x], n, top[x]);
        b.det(top[x], e, x + 1 < width ? top[x + 1] : top[x]);
        b.det(top[x], w, x > 0 ? top[x - 1] : top[x]);
        b.det(top[x], s, shaft.count(x) ? shaft[x] : top[x]);
    }
    for (auto [x, sh] : shaft) {
        b.det(sh, n, top[x]);
        b.det(sh, s, bottom[x]);
        b.det(sh, e, sh);
        b.det(sh, w, sh);
    }
    std::vector<StateId> restart;
    if (!large) {
        if (difficulty == "easy")
            restart = {top[0], top[2], top[4]};
        else if (difficulty == "medium")
            restart = {top[0], top[1], top[2], top[3], top[4]};
        else
            restart = {top[0], top[1], top[2], top[3], top[4], shaft[0], shaft[2], shaft[4]};
    } else {
        if (difficulty == "easy")
            restart = {top[0], top[4], top[8]};
        else if (difficulty == "medium")
            restart = {top[0], top[2], top[4], top[6], top[8]};
        else
            for (int x = 0; x < width; ++x) restart.push_back(top[x]);
    }
    Prob share = Prob::from_ratio(1, static_cast<std::int64_t>(restart.size()));
    for (auto [x, bt] : bottom) {
        if (x == goal_col) {
            for (ActionId a : {n, e, s, w})
                for (StateId r : restart) b.arc(bt, a, r, share);
        } else {
            // poison is a dead end but can be climbed out of
            b.det(bt, n, shaft[x]);
            for (ActionId a : {e, s, w}) b.det(bt, a, bt);
        }
    }
    b.start(shaft[goal_col], Prob::one());
    return {b.finish(), parity_objective()};
}

// Two n-by-n grid copies that differ only in where the traps sit, entered
// with a fair coin. Reaching the shared goal corner restarts the same copy;
// traps are ordinary cells carrying priority 1 and their own observation.
BenchInstance gen_grid(int n) {
    Builder b;
    ActionId an = b.action("n"), ae = b.action("e"), as_ = b.action("s"), aw = b.action("w");
    std::set<std::pair<int, int>> traps[2];
    for (int c = 1; c < n; ++c) traps[0].insert({1, c});
    traps[0].insert({n - 1, 1});
    traps[1].insert({1, 1});
    for (int c = 3; c < n; ++c) traps[1].insert({1, c});
    traps[1].insert({2, 1});
    traps[1].insert({n - 1, 1});

    auto name = [&](int copy, int r, int c) {
        return std::string(copy ? "b" : "a") + std::to_string(r) + "_" + std::to_string(c);
    };
    auto cell = [&](int copy, int r, int c) {
        bool goal = r == n - 1 && c == n - 1;
        bool trap = traps[copy].count({r, c}) > 0;
        return b.state(name(copy, r, c), goal ? "ogoal" : trap ? "otrap" : "oblank",
                       goal ? 2 : trap ? 1 : 3);
    };
    for (int copy = 0; copy < 2; ++copy)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) cell(copy, r, c);
    StateId init = b.state("init", "oinit", 3);
    b.start(init, Prob::one());
    for (ActionId a : {an, ae, as_, aw}) {
        b.arc(init, a, cell(0, 0, 0), Prob::from_ratio(1, 2));
        b.arc(init, a, cell(1, 0, 0), Prob::from_ratio(1, 2));
    }
    for (int copy = 0; copy < 2; ++copy)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                StateId from = cell(copy, r, c);
                if (r == n - 1 && c == n - 1) {
                    for (ActionId a : {an, ae, as_, aw}) b.det(from, a, cell(copy, 0, 0));
                    continue;
                }
                auto go = [&](ActionId a, int r2, int c2) {
                    bool in = r2 >= 0 && r2 < n && c2 >= 0 && c2 < n;
                    b.det(from, a, in ? cell(copy, r2, c2) : from);
                };
                go(an, r - 1, c);
                go(ae, r, c + 1);
                go(as_, r + 1, c);
                go(aw, r, c - 1);
            }
    return {b.finish(), parity_objective()};
}

// Rover on an n-by-n field with k rocks of hidden quality. Moving costs one
// fuel unit; landing on a fresh good rock refuels to the cap and tags the
// rock as spent. When every good rock is spent the others regrow. Running
// dry, or idling on a rock without a fresh refuel, is the odd event.
BenchInstance gen_rocksample(int k, int cap) {
    const int n = 4;
    std::vector<std::pair<int, int>> rocks =
        k == 2 ? std::vector<std::pair<int, int>>{{1, 2}, {3, 0}}
               : std::vector<std::pair<int, int>>{{1, 3}, {0, 0}, {2, 1}};
    const std::pair<int, int> base{0, 2};
    Builder b;
    ActionId an = b.action("n"), ae = b.action("e"), as_ = b.action("s"), aw = b.action("w");
    auto rock_at = [&](int x, int y) {
        for (std::size_t i = 0; i < rocks.size(); ++i)
            if (rocks[i] == std::make_pair(x, y)) return static_cast<int>(i);
        return -1;
    };
    auto name = [&](int x, int y, int g, int t, int f) {
        return "p" + std::to_string(x) + "_" + std::to_string(y) + "_g" + std::to_string(g) +
               "_t" + std::to_string(t) + "_f" + std::to_string(f);
    };
    auto cell = [&](int x, int y, int g, int t, int f) {
        bool on_rock = rock_at(x, y) >= 0;
        int pri = (f == 0 || (on_rock && f < cap)) ? 1 : 2;
        std::string o = on_rock ? (f == cap ? "ogood" : "obad") : "oother";
        return b.state(name(x, y, g, t, f), o, pri);
    };
    const int gmax = 1 << k;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int g = 0; g < gmax; ++g)
                for (int t = 0; t < gmax; ++t)
                    for (int f = 0; f <= cap; ++f) cell(x, y, g, t, f);
    StateId init = b.state("init", "oinit", 2);
    b.start(init, Prob::one());
    Prob share = Prob::from_ratio(1, gmax - 1);
    for (ActionId a : {an, ae, as_, aw})
        for (int g = 1; g < gmax; ++g)
            b.arc(init, a, cell(base.first, base.second, g, 0, cap), share);

    const int dx[4] = {0, 1, 0, -1}, dy[4] = {1, 0, -1, 0}; // n e s w
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int g = 0; g < gmax; ++g)
                for (int t = 0; t < gmax; ++t)
                    for (int f = 0; f <= cap; ++f) {
                        StateId from = cell(x, y, g, t, f);
                        for (int d = 0; d < 4; ++d) {
                            ActionId a = d == 0 ? an : d == 1 ? ae : d == 2 ? as_ : aw;
                            if (f == 0) {
                                b.det(from, a, from);
                                continue;
                            }
                            int x2 = x + dx[d], y2 = y + dy[d];
                            if (x2 < 0 || x2 >= n || y2 < 0 || y2 >= n) {
                                x2 = x;
                                y2 = y;
                            }
                            int f2 = f - 1, t2 = t;
                            int ri = rock_at(x2, y2);
                            if (ri >= 0 && (g >> ri & 1) && !(t >> ri & 1)) {
                                f2 = cap;
                                t2 = t | 1 << ri;
                                if ((t2 & g) == g)
                                    t2 = __builtin_popcount(static_cast<unsigned>(g)) == 1
                                             ? 0
                                             : 1 << ri;
                            }
                            b.det(from, a, cell(x2, y2, g, t2, f2));
                        }
                    }
    return {b.finish(), parity_objective()};
}

// Shared machinery for the two heading-based hallway maps: three actions
// (forward with 0.8 success, exact quarter turns), observations are the
// wall pattern relative to the heading.
struct HallwaySpec {
    std::set<std::pair<int, int>> cells;
    std::vector<std::pair<int, int>> starts;
    std::map<std::string, std::pair<int, int>> regions; // letter -> alcove cell
    int ystep; // +1 when the map was read with y growing upward
};

Pomdp build_hallway(const HallwaySpec& h, std::map<std::string, std::vector<std::string>>& out_regions) {
    Builder b;
    ActionId fwd = b.action("fwd"), left = b.action("left"), right = b.action("right");
    const char* hn[4] = {"n", "e", "s", "w"};
    const int dx[4] = {0, 1, 0, -1};
    const int dy4[4] = {1, 0, -1, 0};
    auto step = [&](std::pair<int, int> c, int heading) {
        return std::make_pair(c.first + dx[heading], c.second + h.ystep * dy4[heading]);
    };
    auto signature = [&](std::pair<int, int> c, int heading) {
        std::string sig = "w";
        for (int rel = 0; rel < 4; ++rel) {
            int abs_dir = (heading + rel) % 4;
            sig += h.cells.count(step(c, abs_dir)) ? '0' : '1';
        }
        return sig;
    };
    auto name = [&](std::pair<int, int> c, int heading) {
        return "c" + std::to_string(c.first) + "_" + std::to_string(c.second) + "_" + hn[heading];
    };
    for (const auto& c : h.cells)
        for (int d = 0; d < 4; ++d) b.state(name(c, d), signature(c, d), 3);
    StateId start = b.state("start", "ostart", 3);
    StateId lost = b.state("lost", "olost", 3);
    b.start(start, Prob::one());
    Prob share = Prob::from_ratio(1, static_cast<std::int64_t>(h.starts.size()) * 4);
    for (ActionId a : {fwd, left, right}) {
        for (const auto& c : h.starts)
            for (int d = 0; d < 4; ++d) b.arc(start, a, b.state(name(c, d), signature(c, d), 3), share);
        b.det(lost, a, lost);
    }
    for (const auto& c : h.cells)
        for (int d = 0; d < 4; ++d) {
            StateId from = b.state(name(c, d), signature(c, d), 3);
            auto ahead = step(c, d);
            if (h.cells.count(ahead)) {
                b.arc(from, fwd, b.state(name(ahead, d), signature(ahead, d), 3),
                      Prob::from_ratio(4, 5));
                b.arc(from, fwd, from, Prob::from_ratio(1, 5));
            } else {
                b.det(from, fwd, from);
            }
            // turns share the 4/5 success rate of forward moves
            b.arc(from, left, b.state(name(c, (d + 3) % 4), signature(c, (d + 3) % 4), 3),
                  Prob::from_ratio(4, 5));
            b.arc(from, left, from, Prob::from_ratio(1, 5));
            b.arc(from, right, b.state(name(c, (d + 1) % 4), signature(c, (d + 1) % 4), 3),
                  Prob::from_ratio(4, 5));
            b.arc(from, right, from, Prob::from_ratio(1, 5));
        }
    for (const auto& [letter, c] : h.regions)
        for (int d = 0; d < 4; ++d) out_regions[letter].push_back(name(c, d));
    return b.finish();
}

// Region-observation grid mazes: four deterministic moves, walls and blocked
// cells bounce, region cells announce their letter.
struct MazeSpec {
    int width, height;
    std::set<std::pair<int, int>> blocked;
    std::vector<std::pair<int, int>> starts;
    std::map<std::string, std::vector<std::pair<int, int>>> regions;
};

Pomdp build_maze(const MazeSpec& z, std::map<std::string, std::vector<std::string>>& out_regions) {
    Builder b;
    ActionId an = b.action("n"), ae = b.action("e"), as_ = b.action("s"), aw = b.action("w");
    auto region_of = [&](int x, int y) {
        for (const auto& [letter, cells] : z.regions)
            for (const auto& c : cells)
                if (c == std::make_pair(x, y)) return "o" + letter;
        return std::string("oblank");
    };
    auto free_cell = [&](int x, int y) {
        return x >= 0 && x < z.width && y >= 0 && y < z.height && !z.blocked.count({x, y});
    };
    auto name = [&](int x, int y) { return "c" + std::to_string(x) + "_" + std::to_string(y); };
    for (int y = 0; y < z.height; ++y)
        for (int x = 0; x < z.width; ++x)
            if (free_cell(x, y)) b.state(name(x, y), region_of(x, y), 3);
    StateId start = b.state("start", "ostart", 3);
    b.start(start, Prob::one());
    Prob share = Prob::from_ratio(1, static_cast<std::int64_t>(z.starts.size()));
    for (ActionId a : {an, ae, as_, aw})
        for (const auto& c : z.starts)
            b.arc(start, a, b.state(name(c.first, c.second), region_of(c.first, c.second), 3),
                  share);
    const int dx[4] = {0, 1, 0, -1}, dy[4] = {1, 0, -1, 0}; // y grows upward
    for (int y = 0; y < z.height; ++y)
        for (int x = 0; x < z.width; ++x) {
            if (!free_cell(x, y)) continue;
            StateId from = b.state(name(x, y), region_of(x, y), 3);
            for (int d = 0; d < 4; ++d) {
                ActionId a = d == 0 ? an : d == 1 ? ae : d == 2 ? as_ : aw;
                int x2 = x + dx[d], y2 = y + dy[d];
                if (free_cell(x2, y2))
                    b.det(from, a, b.state(name(x2, y2), region_of(x2, y2), 3));
                else
                    b.det(from, a, from);
            }
        }
    for (const auto& [letter, cells] : z.regions)
        for (const auto& c : cells) out_regions[letter].push_back(name(c.first, c.second));
    return b.finish();
}

Objective map_objective(const std::string& variant,
                        const std::map<std::string, std::vector<std::string>>& regions) {
    Objective o;
    auto r = [&](const char* letter) { return regions.at(letter); };
    if (variant == "liveness") {
        o.kind = ObjectiveKind::Liveness;
        o.sets = {{"T", r("D")}};
    } else if (variant == "sequencing") {
        o.kind = ObjectiveKind::Sequencing;
        o.sets = {{"S1", r("A")}, {"S2", r("B")}, {"S3", r("D")}, {"A", r("C")}};
    } else if (variant == "coverage") {
        o.kind = ObjectiveKind::Coverage;
        o.sets = {{"S1", r("A")}, {"S2", r("B")}, {"S3", r("C")}};
    } else if (variant == "recurrence") {
        o.kind = ObjectiveKind::Recurrence;
        o.sets = {{"R1", r("A")}, {"R2", r("C")}};
    } else if (variant == "recurrence_avoid") {
        o.kind = ObjectiveKind::RecurrenceAvoid;
        o.sets = {{"R1", r("A")}, {"R2", r("D")}, {"F1", r("B")}, {"F2", r("C")}};
    } else {
        throw InputError("unknown objective variant '" + variant + "'");
    }
    return o;
}

HallwaySpec hallway1_spec() {
    HallwaySpec h;
    h.ystep = -1; // read with y growing downward: alcoves hang under the corridor
    for (int x = 0; x <= 10; ++x) h.cells.insert({x, 0});
    h.cells.insert({2, 1});
    h.cells.insert({4, 1});
    h.cells.insert({6, 1});
    h.cells.insert({8, 1});
    h.starts = {{0, 0}, {3, 0}, {5, 0}, {7, 0}, {10, 0}};
    h.regions = {{"A", {2, 1}}, {"B", {4, 1}}, {"C", {6, 1}}, {"D", {8, 1}}};
    return h;
}

HallwaySpec hallway2_spec() {
    HallwaySpec h;
    h.ystep = 1;
    for (int x = 2; x <= 6; ++x)
        for (int y = 1; y <= 5; ++y) h.cells.insert({x, y});
    for (int y = 2; y <= 4; ++y) {
        h.cells.erase({3, y});
        h.cells.erase({5, y});
    }
    h.cells.insert({1, 4});
    h.cells.insert({1, 2});
    h.cells.insert({7, 4});
    h.cells.insert({7, 2});
    h.starts = {{2, 5}, {6, 5}, {2, 3}, {6, 3}, {2, 1}, {6, 1}};
    h.regions = {{"A", {1, 4}}, {"B", {7, 4}}, {"C", {1, 2}}, {"D", {7, 2}}};
    return h;
}

MazeSpec maze_a_spec() {
    MazeSpec z;
    z.width = 10;
    z.height = 10;
    for (int y = 3; y <= 8; ++y) z.blocked.insert({2, y});
    for (int x = 3; x <= 6; ++x) z.blocked.insert({x, 3});
    for (int y = 3; y <= 8; ++y) z.blocked.insert({7, y});
    z.starts = {{4, 6}, {6, 6}, {4, 8}, {6, 8}};
    z.regions["A"] = {{0, 8}, {1, 8}};
    z.regions["B"] = {{8, 8}, {9, 8}};
    for (int x = 3; x <= 6; ++x) z.regions["C"].push_back({x, 4});
    for (int x = 0; x <= 9; ++x) z.regions["D"].push_back({x, 0});
    return z;
}

MazeSpec maze_b_spec() {
    MazeSpec z;
    z.width = 10;
    z.height = 10;
    for (int x = 0; x <= 3; ++x)
        for (int y = 1; y <= 2; ++y) z.blocked.insert({x, y});
    for (int x = 7; x <= 9; ++x) z.blocked.insert({x, 1});
    for (int y = 1; y <= 6; ++y) z.blocked.insert({7, y});
    for (int x = 3; x <= 6; ++x) z.blocked.insert({x, 6});
    z.starts = {{8, 3}, {9, 3}};
    z.regions["A"] = {{8, 2}, {9, 2}};
    z.regions["B"] = {{4, 9}, {5, 9}};
    for (int x = 3; x <= 6; ++x) z.regions["C"].push_back({x, 5});
    for (int x = 0; x <= 9; ++x) z.regions["D"].push_back({x, 0});
    return z;
}

MazeSpec maze_c_spec() {
    MazeSpec z;
    z.width = 9;
    z.height = 7;
    z.blocked = {{7, 5}, {7, 6}, {8, 6}, {7, 3}, {7, 0}, {7, 1}, {8, 0}};
    z.starts = {{0, 2}, {0, 3}, {0, 4}, {1, 3}};
    for (int x = 0; x <= 6; ++x) {
        z.regions["A"].push_back({x, 0});
        z.regions["A"].push_back({x, 6});
    }
    z.regions["B"] = {{7, 4}};
    z.regions["C"] = {{7, 2}};
    for (int y = 1; y <= 5; ++y) z.regions["D"].push_back({8, y});
    return z;
}

BenchInstance gen_map(const std::string& family, const std::string& variant) {
    std::map<std::string, std::vector<std::string>> regions;
    Pomdp model;
    if (family == "hallway")
        model = build_hallway(hallway1_spec(), regions);
    else if (family == "hallway2")
        model = build_hallway(hallway2_spec(), regions);
    else if (family == "maze_a")
        model = build_maze(maze_a_spec(), regions);
    else if (family == "maze_b")
        model = build_maze(maze_b_spec(), regions);
    else
        model = build_maze(maze_c_spec(), regions);
    return {std::move(model), map_objective(variant, regions)};
}

} // namespace

BenchInstance generate_bench(const std::string& family, const std::string& variant) {
    if (family == "shuttle") {
        int slots = variant == "small" ? 1 : variant == "medium" ? 2 : variant == "large" ? 3 : 0;
        if (!slots) throw InputError("unknown shuttle variant '" + variant + "'");
        return gen_shuttle(slots);
    }
    if (family == "cheese") {
        auto us = variant.find('_');
        if (us != std::string::npos) {
            std::string size = variant.substr(0, us), diff = variant.substr(us + 1);
            if ((size == "small" || size == "large") &&
                (diff == "easy" || diff == "medium" || diff == "hard"))
                return gen_cheese(size == "large", diff);
        }
        throw InputError("unknown cheese variant '" + variant + "'");
    }
    if (family == "grid") {
        if (variant.size() == 3 && variant[1] == 'x' && variant[0] == variant[2] &&
            variant[0] >= '4' && variant[0] <= '8')
            return gen_grid(variant[0] - '0');
        throw InputError("unknown grid variant '" + variant + "'");
    }
    if (family == "rocksample") {
        if (variant == "4_2_cap3") return gen_rocksample(2, 3);
        if (variant == "4_2_cap4") return gen_rocksample(2, 4);
        if (variant == "4_3_cap3") return gen_rocksample(3, 3);
        if (variant == "4_3_cap4") return gen_rocksample(3, 4);
        throw InputError("unknown rocksample variant '" + variant + "'");
    }
    if (family == "hallway" || family == "hallway2" || family == "maze_a" ||
        family == "maze_b" || family == "maze_c")
        return gen_map(family, variant);
    throw InputError("unknown benchmark family '" + family + "'");
}

std::vector<std::pair<std::string, std::string>> table1_rows() {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const char* v : {"small", "medium", "large"}) rows.push_back({"shuttle", v});
    for (const char* s : {"small", "large"})
        for (const char* d : {"easy", "medium", "hard"})
            rows.push_back({"cheese", std::string(s) + "_" + d});
    for (const char* v : {"4x4", "5x5", "6x6", "7x7", "8x8"}) rows.push_back({"grid", v});
    for (const char* v : {"4_2_cap3", "4_2_cap4", "4_3_cap3", "4_3_cap4"})
        rows.push_back({"rocksample", v});
    for (const char* f : {"hallway", "hallway2", "maze_a", "maze_b", "maze_c"})
        for (const char* v : {"liveness", "sequencing", "coverage", "recurrence",
                              "recurrence_avoid"})
            rows.push_back({f, v});
    return rows;
}

namespace {

BenchRow run_row(const std::string& family, const std::string& variant,
                 double row_timeout_seconds) {
    BenchRow row;
    row.family = family;
    row.variant = variant;
    auto t0 = std::chrono::steady_clock::now();
    try {
        BenchInstance inst = generate_bench(family, variant);
        Caps caps = Caps::from_env();
        if (row_timeout_seconds > 0) caps.deadline = Deadline::after_seconds(row_timeout_seconds);
        SolveOutput out = solve(inst.model, inst.objective, caps);
        row.states = out.prep.states_before_reduction;
        row.states_after = out.prep.model.num_states();
        row.direct_parity = out.prep.reduce_case == ReduceCase::Unsupported;
        row.product_states = out.product_states;
        row.max_support = out.max_support;
        if (out.solution.verdict == Verdict::AlmostSure) {
            row.verdict = "ALMOST-SURE";
            Certificate cert = check(out.prep.model, *out.policy);
            row.verified = cert.ok ? "yes" : "FAIL";
        } else {
            row.verdict = "NOT-FOUND-IN-CLASS";
            row.verified = "-";
        }
    } catch (const DeadlineError&) {
        row.verdict = "timeout";
        row.verified = "-";
    } catch (const CapError&) {
        row.verdict = "cap";
        row.verified = "-";
    } catch (const std::exception& e) {
        row.verdict = std::string("error: ") + e.what();
        row.verified = "-";
    }
    auto t1 = std::chrono::steady_clock::now();
    row.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return row;
}

} // namespace

std::vector<BenchRow> run_suite(const std::vector<std::pair<std::string, std::string>>& rows,
                                double row_timeout_seconds, int jobs) {
    std::vector<BenchRow> out(rows.size());
    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
        for (std::size_t i = 0; i < rows.size(); ++i)
            out[i] = run_row(rows[i].first, rows[i].second, row_timeout_seconds);
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i)
            out[i] = run_row(rows[i].first, rows[i].second, row_timeout_seconds);
    }
    return out;
}

std::string format_table(const std::vector<BenchRow>& rows) {
    std::vector<std::array<std::string, 9>> cells;
    cells.push_back({"family", "variant", "time_ms", "states", "after", "verdict", "cert",
                     "product", "maxY"});
    for (const BenchRow& r : rows)
        cells.push_back({r.family, r.variant, std::to_string(r.time_ms),
                         std::to_string(r.states),
                         r.direct_parity ? std::string("direct") : std::to_string(r.states_after),
                         r.verdict, r.verified, std::to_string(r.product_states),
                         std::to_string(r.max_support)});
    std::array<std::size_t, 9> width{};
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    std::string out;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += "  ";
            bool right = i == 2 || i == 3 || i == 4 || i == 7 || i == 8;
            if (right)
                out += std::string(width[i] - row[i].size(), ' ') + row[i];
            else
                out += row[i] + std::string(width[i] - row[i].size(), ' ');
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    }
    return out;
}

std::string format_csv(const std::vector<BenchRow>& rows) {
    std::string out =
        "family,variant,time_ms,states,states_after,verdict,verified,direct_parity,"
        "product_states,max_support\n";
    for (const BenchRow& r : rows) {
        out += r.family + "," + r.variant + "," + std::to_string(r.time_ms) + "," +
               std::to_string(r.states) + "," + std::to_string(r.states_after) + "," + r.verdict +
               "," + r.verified + "," + (r.direct_parity ? "1" : "0") + "," +
               std::to_string(r.product_states) + "," + std::to_string(r.max_support) + "\n";
    }
    return out;
}

} // namespace qpomdp
