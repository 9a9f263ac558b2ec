#include "qpomdp/verify.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <random>
#include <unordered_map>

#include "qpomdp/error.hpp"
#include "qpomdp/util.hpp"

namespace qpomdp {

std::vector<std::vector<std::uint32_t>> bottom_sccs(
    const std::vector<std::vector<std::uint32_t>>& adj,
    const std::vector<std::uint32_t>& roots) {
    const std::size_t n = adj.size();
    std::vector<char> reach(n, 0);
    {
        std::deque<std::uint32_t> queue;
        for (std::uint32_t r : roots)
            if (!reach[r]) {
                reach[r] = 1;
                queue.push_back(r);
            }
        while (!queue.empty()) {
            std::uint32_t v = queue.front();
            queue.pop_front();
            for (std::uint32_t t : adj[v])
                if (!reach[t]) {
                    reach[t] = 1;
                    queue.push_back(t);
                }
        }
    }

    // iterative Tarjan over the reachable part
    constexpr std::uint32_t UNSET = UINT32_MAX;
    std::vector<std::uint32_t> index(n, UNSET), low(n, 0), comp(n, UNSET);
    std::vector<char> onstack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::vector<std::uint32_t>> comps;
    std::uint32_t counter = 0;
    struct Frame {
        std::uint32_t v;
        std::size_t next;
    };
    std::vector<Frame> frames;
    for (std::uint32_t start = 0; start < n; ++start) {
        if (!reach[start] || index[start] != UNSET) continue;
        frames.push_back({start, 0});
        index[start] = low[start] = counter++;
        stack.push_back(start);
        onstack[start] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.next < adj[f.v].size()) {
                std::uint32_t w = adj[f.v][f.next++];
                if (index[w] == UNSET) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    onstack[w] = 1;
                    frames.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::uint32_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<std::uint32_t> c;
                    for (;;) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        onstack[w] = 0;
                        comp[w] = static_cast<std::uint32_t>(comps.size());
                        c.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(c.begin(), c.end());
                    comps.push_back(std::move(c));
                }
            }
        }
    }

    std::vector<std::vector<std::uint32_t>> bottoms;
    for (const auto& c : comps) {
        bool bottom = true;
        for (std::uint32_t v : c)
            for (std::uint32_t t : adj[v]) bottom = bottom && comp[t] == comp[v];
        if (bottom) bottoms.push_back(c);
    }
    std::sort(bottoms.begin(), bottoms.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return bottoms;
}

namespace {

struct Chain {
    std::vector<std::pair<StateId, std::uint32_t>> nodes;
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<std::uint32_t> roots;
};

Chain induced_chain(const Pomdp& m, const Policy& p) {
    auto bad = validate_policy(m, p);
    if (!bad.empty()) throw InputError("policy does not fit the model: " + bad[0]);

    Chain ch;
    const std::uint64_t nm = p.num_memories();
    const std::size_t na = m.num_actions();
    std::unordered_map<std::uint64_t, std::uint32_t> id;
    std::deque<std::uint32_t> queue;
    auto intern = [&](StateId s, std::uint32_t mem) {
        std::uint64_t key = static_cast<std::uint64_t>(s) * nm + mem;
        auto [it, fresh] = id.emplace(key, static_cast<std::uint32_t>(ch.nodes.size()));
        if (fresh) {
            ch.nodes.push_back({s, mem});
            ch.adj.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    for (const TransEntry& e : m.initial) {
        ObsId z = m.obs_of[e.to];
        std::uint32_t mem = p.initial_for(z);
        if (mem == Policy::NONE)
            throw InputError("policy has no initial memory for observation '" +
                             m.obs_names[z] + "'");
        ch.roots.push_back(intern(e.to, mem));
    }
    while (!queue.empty()) {
        std::uint32_t v = queue.front();
        queue.pop_front();
        auto [s, mem] = ch.nodes[v];
        for (ActionId a : p.act[mem]) {
            for (const TransEntry& e : m.trans[s][a]) {
                ObsId z = m.obs_of[e.to];
                std::uint32_t mt = p.upd[mem][z * na + a];
                if (mt == Policy::NONE)
                    throw InputError("policy update missing for memory '" +
                                     p.memory_names[mem] + "', observation '" +
                                     m.obs_names[z] + "', action '" + m.action_names[a] + "'");
                // intern may grow adj, so take the target before indexing
                std::uint32_t w = intern(e.to, mt);
                ch.adj[v].push_back(w);
            }
        }
        std::sort(ch.adj[v].begin(), ch.adj[v].end());
        ch.adj[v].erase(std::unique(ch.adj[v].begin(), ch.adj[v].end()), ch.adj[v].end());
    }
    return ch;
}

} // namespace

Certificate check(const Pomdp& m, const Policy& p) {
    Chain ch = induced_chain(m, p);
    Certificate cert;
    cert.nodes = ch.nodes;
    cert.ok = true;
    for (const auto& scc : bottom_sccs(ch.adj, ch.roots)) {
        Certificate::Component comp;
        comp.nodes = scc;
        comp.min_priority = INT_MAX;
        for (std::uint32_t v : scc)
            comp.min_priority = std::min(comp.min_priority, m.priority[ch.nodes[v].first]);
        cert.ok = cert.ok && comp.min_priority % 2 == 0;
        cert.bottom_components.push_back(std::move(comp));
    }
    return cert;
}

std::string format_certificate(const Certificate& c, const Pomdp& m, const Policy& p) {
    std::string out;
    out += "chain nodes: " + std::to_string(c.nodes.size()) + "\n";
    for (std::size_t i = 0; i < c.bottom_components.size(); ++i) {
        const auto& comp = c.bottom_components[i];
        out += "bottom component " + std::to_string(i) + ": min priority " +
               std::to_string(comp.min_priority) +
               (comp.min_priority % 2 == 0 ? " (even):" : " (odd):");
        std::size_t shown = std::min<std::size_t>(comp.nodes.size(), 12);
        for (std::size_t j = 0; j < shown; ++j) {
            auto [s, mem] = c.nodes[comp.nodes[j]];
            out += " " + m.state_names[s] + "/" + p.memory_names[mem];
        }
        if (shown < comp.nodes.size())
            out += " [+" + std::to_string(comp.nodes.size() - shown) + " more]";
        out += "\n";
    }
    out += std::string("certificate: ") + (c.ok ? "PASS" : "FAIL") + "\n";
    return out;
}

namespace {

struct EpisodeOut {
    int tail_min = INT_MAX;
    int final_pri = 0;
    long lock = -1;
    bool mismatch = false;
};

EpisodeOut run_episode(const Pomdp& m, const Policy& p, long steps, std::uint64_t seed,
                       long episode) {
    const std::size_t na = m.num_actions();
    std::uint64_t st = seed + static_cast<std::uint64_t>(episode);
    std::mt19937_64 rng(splitmix64(st));
    auto u01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    auto sample = [&](const Row& row) {
        double u = u01(), acc = 0.0;
        for (const TransEntry& t : row) {
            acc += t.p.value();
            if (u < acc) return t.to;
        }
        return row.back().to;
    };
    EpisodeOut out;
    StateId s = sample(m.initial);
    std::uint32_t mem = p.initial_for(m.obs_of[s]);
    if (mem == Policy::NONE) {
        out.mismatch = true;
        return out;
    }
    const long tail_from = steps / 2 + 1;
    for (long t = 0; t <= steps; ++t) {
        if (t >= tail_from) out.tail_min = std::min(out.tail_min, m.priority[s]);
        if (out.lock < 0 && p.annot[mem].present && !p.annot[mem].b.empty()) out.lock = t;
        if (t == steps) break;
        const auto& acts = p.act[mem];
        ActionId a = acts[rng() % acts.size()];
        StateId s2 = sample(m.trans[s][a]);
        std::uint32_t mt = p.upd[mem][m.obs_of[s2] * na + a];
        if (mt == Policy::NONE) {
            out.mismatch = true;
            return out;
        }
        s = s2;
        mem = mt;
    }
    out.final_pri = m.priority[s];
    return out;
}

SimStats run_episodes(const Pomdp& m, const Policy& p, long steps, long episodes,
                      std::uint64_t seed, bool parallel) {
    if (steps < 1 || episodes < 1) throw InputError("simulate needs steps >= 1 and episodes >= 1");
    auto bad = validate_policy(m, p);
    if (!bad.empty()) throw InputError("policy does not fit the model: " + bad[0]);

    std::vector<EpisodeOut> eps(static_cast<std::size_t>(episodes));
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long e = 0; e < episodes; ++e)
            eps[static_cast<std::size_t>(e)] = run_episode(m, p, steps, seed, e);
    } else {
        for (long e = 0; e < episodes; ++e)
            eps[static_cast<std::size_t>(e)] = run_episode(m, p, steps, seed, e);
    }

    SimStats stats;
    stats.episodes = episodes;
    stats.steps = steps;
    for (const EpisodeOut& out : eps) {
        if (out.mismatch)
            throw InputError("policy left undefined on a trajectory the model can realize");
        stats.tail_min_priority[out.tail_min]++;
        stats.final_priority[out.final_pri]++;
        stats.lock_step[out.lock]++;
    }
    return stats;
}

} // namespace

SimStats simulate(const Pomdp& m, const Policy& p, long steps, long episodes,
                  std::uint64_t seed) {
    return run_episodes(m, p, steps, episodes, seed, true);
}

SimStats simulate_serial(const Pomdp& m, const Policy& p, long steps, long episodes,
                         std::uint64_t seed) {
    return run_episodes(m, p, steps, episodes, seed, false);
}

std::string format_sim_stats(const SimStats& s) {
    std::string out = "episodes " + std::to_string(s.episodes) + ", steps " +
                      std::to_string(s.steps) + " (tail = second half)\n";
    for (const auto& [pri, count] : s.tail_min_priority)
        out += "tail min priority " + std::to_string(pri) + ": " + std::to_string(count) +
               " episode" + (count == 1 ? "" : "s") + "\n";
    for (const auto& [pri, count] : s.final_priority)
        out += "final priority " + std::to_string(pri) + ": " + std::to_string(count) +
               " episode" + (count == 1 ? "" : "s") + "\n";
    for (const auto& [step, count] : s.lock_step) {
        if (step < 0)
            out += "never claimed a lock: " + std::to_string(count) + " episode" +
                   (count == 1 ? "" : "s") + "\n";
        else
            out += "lock claimed at step " + std::to_string(step) + ": " +
                   std::to_string(count) + " episode" + (count == 1 ? "" : "s") + "\n";
    }
    return out;
}

} // namespace qpomdp
