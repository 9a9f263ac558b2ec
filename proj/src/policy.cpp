#include "qpomdp/policy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qpomdp/error.hpp"
#include "qpomdp/ingest.hpp"

namespace qpomdp {

std::uint32_t Policy::initial_for(ObsId z) const {
    auto it = std::lower_bound(init.begin(), init.end(), z,
                               [](const auto& e, ObsId v) { return e.first < v; });
    if (it == init.end() || it->first != z) return NONE;
    return it->second;
}

std::vector<std::string> validate_policy(const Pomdp& m, const Policy& p) {
    std::vector<std::string> bad;
    const std::size_t n = p.num_memories();
    const std::size_t na = m.num_actions();
    const std::size_t nz = m.num_obs();
    if (n == 0) bad.push_back("policy has no memories");
    if (p.act.size() != n || p.upd.size() != n || p.annot.size() != n)
        bad.push_back("per-memory tables do not match the memory count");
    if (p.init.empty()) bad.push_back("no initial memory entries");
    for (std::size_t i = 0; i + 1 < p.init.size(); ++i)
        if (p.init[i].first >= p.init[i + 1].first)
            bad.push_back("initial entries not strictly sorted by observation");
    for (const auto& [z, mi] : p.init) {
        if (z >= nz) bad.push_back("initial entry names an unknown observation");
        if (mi >= n) bad.push_back("initial entry names an unknown memory");
    }
    for (std::size_t i = 0; i < std::min(n, p.act.size()); ++i) {
        const auto& acts = p.act[i];
        if (acts.empty())
            bad.push_back("memory " + p.memory_names[i] + " selects no action");
        for (std::size_t j = 0; j < acts.size(); ++j) {
            if (acts[j] >= na) {
                bad.push_back("memory " + p.memory_names[i] + " selects an unknown action");
                break;
            }
            if (j > 0 && acts[j - 1] >= acts[j]) {
                bad.push_back("memory " + p.memory_names[i] + " action set not strictly sorted");
                break;
            }
        }
    }
    for (std::size_t i = 0; i < std::min(n, p.upd.size()); ++i) {
        if (p.upd[i].size() != na * nz) {
            bad.push_back("memory " + p.memory_names[i] + " has a malformed update table");
            continue;
        }
        for (std::uint32_t t : p.upd[i])
            if (t != Policy::NONE && t >= n) {
                bad.push_back("memory " + p.memory_names[i] + " updates to an unknown memory");
                break;
            }
    }
    for (std::size_t i = 0; i < std::min(n, p.annot.size()); ++i) {
        const auto& an = p.annot[i];
        if (!an.present) continue;
        auto sorted_states = [&](const Support& v) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (v[j] >= m.num_states()) return false;
                if (j > 0 && v[j - 1] >= v[j]) return false;
            }
            return true;
        };
        if (an.y.empty() || !sorted_states(an.y) || !sorted_states(an.b))
            bad.push_back("memory " + p.memory_names[i] + " has a malformed annotation");
        else if (!std::includes(an.y.begin(), an.y.end(), an.b.begin(), an.b.end()))
            bad.push_back("memory " + p.memory_names[i] + " claims states outside its support");
        if (an.level < 0)
            bad.push_back("memory " + p.memory_names[i] + " has a negative level");
    }
    return bad;
}

namespace {

[[noreturn]] void fail(int lineno, const std::string& msg) { throw ParseError(msg, lineno); }

std::uint32_t lookup(const std::map<std::string, std::uint32_t>& byname,
                     const std::string& tok, const char* what, int lineno) {
    auto it = byname.find(tok);
    if (it == byname.end()) fail(lineno, std::string("unknown ") + what + " '" + tok + "'");
    return it->second;
}

} // namespace

Policy parse_policy(const std::string& text, const Pomdp& m) {
    auto lines = tokenize_file(text);
    if (lines.empty() || lines[0].toks.size() != 2 || lines[0].toks[0] != "QPOL" ||
        lines[0].toks[1] != "v1")
        fail(lines.empty() ? 1 : lines[0].lineno, "expected header 'QPOL v1'");

    std::map<std::string, std::uint32_t> states, actions, obs;
    for (StateId s = 0; s < m.num_states(); ++s) states[m.state_names[s]] = s;
    for (ActionId a = 0; a < m.num_actions(); ++a) actions[m.action_names[a]] = a;
    for (ObsId z = 0; z < m.num_obs(); ++z) obs[m.obs_names[z]] = z;

    Policy p;
    std::map<std::string, std::uint32_t> mems;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& t = lines[li].toks;
        if (t[0] != "mem:") continue;
        if (t.size() < 2 || !is_identifier(t[1])) fail(lines[li].lineno, "mem: needs a name");
        if (!mems.emplace(t[1], static_cast<std::uint32_t>(p.memory_names.size())).second)
            fail(lines[li].lineno, "duplicate memory '" + t[1] + "'");
        p.memory_names.push_back(t[1]);
    }
    const std::size_t n = p.memory_names.size();
    const std::size_t na = m.num_actions();
    p.act.resize(n);
    p.upd.assign(n, std::vector<std::uint32_t>(na * m.num_obs(), Policy::NONE));
    p.annot.resize(n);

    std::set<std::uint32_t> act_seen;
    std::set<ObsId> init_seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& t = lines[li].toks;
        const int ln = lines[li].lineno;
        if (t[0] == "mem:") {
            std::uint32_t mi = mems.at(t[1]);
            if (t.size() == 2) continue;
            // mem: name Y { s... } B { s... } level N
            std::size_t i = 2;
            auto expect = [&](const char* tok) {
                if (i >= t.size() || t[i] != tok)
                    fail(ln, std::string("expected '") + tok + "' in the annotation");
                ++i;
            };
            auto read_set = [&]() {
                Support v;
                expect("{");
                while (i < t.size() && t[i] != "}")
                    v.push_back(lookup(states, t[i++], "state", ln));
                expect("}");
                std::sort(v.begin(), v.end());
                if (std::adjacent_find(v.begin(), v.end()) != v.end())
                    fail(ln, "repeated state in the annotation");
                return v;
            };
            expect("Y");
            Support y = read_set();
            expect("B");
            Support b = read_set();
            expect("level");
            if (i >= t.size()) fail(ln, "missing level value");
            int level = 0;
            try {
                std::size_t pos = 0;
                level = std::stoi(t[i], &pos);
                if (pos != t[i].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail(ln, "bad level value '" + t[i] + "'");
            }
            ++i;
            if (i != t.size()) fail(ln, "trailing tokens after the annotation");
            p.annot[mi].present = true;
            p.annot[mi].y = std::move(y);
            p.annot[mi].b = std::move(b);
            p.annot[mi].level = level;
        } else if (t[0] == "init:") {
            if (t.size() != 3) fail(ln, "init: needs an observation and a memory");
            ObsId z = lookup(obs, t[1], "observation", ln);
            std::uint32_t mi = lookup(mems, t[2], "memory", ln);
            if (!init_seen.insert(z).second)
                fail(ln, "repeated initial entry for observation '" + t[1] + "'");
            p.init.push_back({z, mi});
        } else if (t[0] == "act:") {
            if (t.size() < 3) fail(ln, "act: needs a memory and at least one action");
            std::uint32_t mi = lookup(mems, t[1], "memory", ln);
            if (!act_seen.insert(mi).second)
                fail(ln, "repeated act: line for memory '" + t[1] + "'");
            for (std::size_t i = 2; i < t.size(); ++i)
                p.act[mi].push_back(lookup(actions, t[i], "action", ln));
            std::sort(p.act[mi].begin(), p.act[mi].end());
            if (std::adjacent_find(p.act[mi].begin(), p.act[mi].end()) != p.act[mi].end())
                fail(ln, "repeated action for memory '" + t[1] + "'");
        } else if (t[0] == "upd:") {
            if (t.size() != 5) fail(ln, "upd: needs memory, observation, action, memory");
            std::uint32_t mi = lookup(mems, t[1], "memory", ln);
            ObsId z = lookup(obs, t[2], "observation", ln);
            ActionId a = lookup(actions, t[3], "action", ln);
            std::uint32_t mt = lookup(mems, t[4], "memory", ln);
            std::uint32_t& slot = p.upd[mi][z * na + a];
            if (slot != Policy::NONE) fail(ln, "repeated update for this (memory, observation, action)");
            slot = mt;
        } else {
            fail(ln, "unknown directive '" + t[0] + "'");
        }
    }
    std::sort(p.init.begin(), p.init.end());

    auto bad = validate_policy(m, p);
    if (!bad.empty()) {
        std::string msg = "invalid policy:";
        for (std::size_t i = 0; i < bad.size() && i < 5; ++i) msg += "\n  " + bad[i];
        throw InputError(msg);
    }
    return p;
}

std::string write_policy(const Policy& p, const Pomdp& m) {
    auto bad = validate_policy(m, p);
    if (!bad.empty()) throw InputError("refusing to write an invalid policy: " + bad[0]);
    std::string out = "QPOL v1\n";
    const std::size_t na = m.num_actions();
    for (std::size_t i = 0; i < p.num_memories(); ++i) {
        out += "mem: " + p.memory_names[i];
        if (p.annot[i].present) {
            out += " Y {";
            for (StateId s : p.annot[i].y) out += " " + m.state_names[s];
            out += " } B {";
            for (StateId s : p.annot[i].b) out += " " + m.state_names[s];
            out += " } level " + std::to_string(p.annot[i].level);
        }
        out += "\n";
    }
    for (const auto& [z, mi] : p.init)
        out += "init: " + m.obs_names[z] + " " + p.memory_names[mi] + "\n";
    for (std::size_t i = 0; i < p.num_memories(); ++i) {
        out += "act: " + p.memory_names[i];
        for (ActionId a : p.act[i]) out += " " + m.action_names[a];
        out += "\n";
    }
    for (std::size_t i = 0; i < p.num_memories(); ++i)
        for (ObsId z = 0; z < m.num_obs(); ++z)
            for (ActionId a = 0; a < na; ++a) {
                std::uint32_t t = p.upd[i][z * na + a];
                if (t == Policy::NONE) continue;
                out += "upd: " + p.memory_names[i] + " " + m.obs_names[z] + " " +
                       m.action_names[a] + " " + p.memory_names[t] + "\n";
            }
    return out;
}

} // namespace qpomdp
