#include "qpomdp/objective.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "qpomdp/error.hpp"
#include "qpomdp/ingest.hpp"

namespace qpomdp {

std::uint32_t Dpa::symbol(const std::string& label) const {
    const std::string& want = label.empty() ? std::string("_") : label;
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == want) return static_cast<std::uint32_t>(i);
    // Letters the automaton does not mention carry no information for it.
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == "_") return static_cast<std::uint32_t>(i);
    throw InternalError("automaton alphabet lacks '_'");
}

const char* kind_name(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::Liveness: return "liveness";
        case ObjectiveKind::Safety: return "safety";
        case ObjectiveKind::ReachAvoid: return "reach_avoid";
        case ObjectiveKind::Sequencing: return "sequencing";
        case ObjectiveKind::Coverage: return "coverage";
        case ObjectiveKind::Recurrence: return "recurrence";
        case ObjectiveKind::RecurrenceAvoid: return "recurrence_avoid";
        case ObjectiveKind::Parity: return "parity";
        case ObjectiveKind::Automaton: return "automaton";
    }
    throw InternalError("bad objective kind");
}

namespace {

std::optional<ObjectiveKind> kind_from_name(const std::string& s) {
    for (ObjectiveKind k :
         {ObjectiveKind::Liveness, ObjectiveKind::Safety, ObjectiveKind::ReachAvoid,
          ObjectiveKind::Sequencing, ObjectiveKind::Coverage, ObjectiveKind::Recurrence,
          ObjectiveKind::RecurrenceAvoid, ObjectiveKind::Parity, ObjectiveKind::Automaton})
        if (s == kind_name(k)) return k;
    return std::nullopt;
}

// Expected role letters for a kind, given how many sets were supplied.
// Numbered roles (S1..Sk, R1..Rk, F1..Fm) are validated by shape.
void check_roles(const Objective& o) {
    auto have = [&](const std::string& letter) {
        for (auto& [l, _] : o.sets)
            if (l == letter) return true;
        return false;
    };
    auto numbered = [&](const std::string& prefix) {
        int k = 0;
        while (have(prefix + std::to_string(k + 1))) ++k;
        return k;
    };
    std::size_t expected = 0;
    switch (o.kind) {
        case ObjectiveKind::Liveness:
        case ObjectiveKind::Safety:
            if (!have("T")) throw InputError("objective needs set T");
            expected = 1;
            break;
        case ObjectiveKind::ReachAvoid:
            if (!have("T") || !have("A")) throw InputError("reach_avoid needs sets T and A");
            expected = 2;
            break;
        case ObjectiveKind::Sequencing: {
            int k = numbered("S");
            if (k == 0) throw InputError("sequencing needs sets S1..Sk");
            expected = static_cast<std::size_t>(k) + (have("A") ? 1 : 0);
            break;
        }
        case ObjectiveKind::Coverage: {
            int k = numbered("S");
            if (k == 0) throw InputError("coverage needs sets S1..Sk");
            if (k > 12) throw InputError("coverage limited to 12 sets");
            expected = static_cast<std::size_t>(k);
            break;
        }
        case ObjectiveKind::Recurrence: {
            int k = numbered("R");
            if (k == 0) throw InputError("recurrence needs sets R1..Rk");
            if (k > 12) throw InputError("recurrence limited to 12 sets");
            expected = static_cast<std::size_t>(k);
            break;
        }
        case ObjectiveKind::RecurrenceAvoid: {
            int k = numbered("R");
            int f = numbered("F");
            if (k == 0 || f == 0)
                throw InputError("recurrence_avoid needs sets R1..Rk and F1..Fm");
            if (k > 12) throw InputError("recurrence_avoid limited to 12 recurrence sets");
            expected = static_cast<std::size_t>(k + f);
            break;
        }
        case ObjectiveKind::Parity:
            expected = 0;
            break;
        case ObjectiveKind::Automaton:
            expected = o.sets.size();
            break;
    }
    if (o.sets.size() != expected)
        throw InputError(std::string("unexpected sets for kind ") + kind_name(o.kind));
    for (auto& [letter, members] : o.sets)
        if (members.empty()) throw InputError("empty set " + letter);
}

// Canonical order of the sets per kind, for the writer and for stable
// automaton alphabets.
std::vector<std::string> role_order(const Objective& o) {
    auto numbered = [&](const std::string& prefix) {
        std::vector<std::string> out;
        for (int i = 1;; ++i) {
            std::string nm = prefix + std::to_string(i);
            bool found = false;
            for (auto& [l, _] : o.sets) found = found || l == nm;
            if (!found) break;
            out.push_back(nm);
        }
        return out;
    };
    std::vector<std::string> order;
    switch (o.kind) {
        case ObjectiveKind::Liveness:
        case ObjectiveKind::Safety: order = {"T"}; break;
        case ObjectiveKind::ReachAvoid: order = {"T", "A"}; break;
        case ObjectiveKind::Sequencing: {
            order = numbered("S");
            for (auto& [l, _] : o.sets)
                if (l == "A") order.push_back("A");
            break;
        }
        case ObjectiveKind::Coverage: order = numbered("S"); break;
        case ObjectiveKind::Recurrence: order = numbered("R"); break;
        case ObjectiveKind::RecurrenceAvoid: {
            order = numbered("R");
            auto fs = numbered("F");
            order.insert(order.end(), fs.begin(), fs.end());
            break;
        }
        case ObjectiveKind::Parity: break;
        case ObjectiveKind::Automaton: {
            for (auto& [l, _] : o.sets) order.push_back(l);
            std::sort(order.begin(), order.end());
            break;
        }
    }
    return order;
}

void canonicalize_sets(Objective& o) {
    check_roles(o);
    std::vector<std::pair<std::string, std::vector<std::string>>> sorted;
    for (const std::string& letter : role_order(o))
        for (auto& [l, members] : o.sets)
            if (l == letter) sorted.push_back({l, members});
    o.sets = std::move(sorted);
    std::set<std::string> seen;
    for (auto& [letter, members] : o.sets) {
        std::set<std::string> inside;
        for (const std::string& s : members) {
            if (!inside.insert(s).second)
                throw InputError("state " + s + " listed twice in set " + letter);
            if (!seen.insert(s).second)
                throw InputError("state " + s + " appears in two sets");
        }
    }
}

// Alphabet for a named kind: role letters in canonical order, then "_".
std::vector<std::string> make_alphabet(const Objective& o) {
    std::vector<std::string> a = role_order(o);
    a.push_back("_");
    return a;
}

struct DpaBuilder {
    Dpa d;
    std::map<std::string, std::uint32_t> sym;
    std::uint32_t add_state(const std::string& name, int pri) {
        d.state_names.push_back(name);
        d.priority.push_back(pri);
        d.delta.emplace_back(d.alphabet.size(), 0);
        return static_cast<std::uint32_t>(d.state_names.size() - 1);
    }
    void edge(std::uint32_t q, const std::string& s, std::uint32_t to) {
        d.delta[q][sym.at(s)] = to;
    }
    void default_edges(std::uint32_t q, std::uint32_t to) {
        for (auto& t : d.delta[q]) t = to;
    }
    explicit DpaBuilder(std::vector<std::string> alphabet) {
        d.alphabet = std::move(alphabet);
        for (std::size_t i = 0; i < d.alphabet.size(); ++i)
            sym[d.alphabet[i]] = static_cast<std::uint32_t>(i);
    }
};

} // namespace

Dpa build_automaton(const Objective& o) {
    if (o.kind == ObjectiveKind::Parity)
        throw InternalError("parity objective has no automaton");
    if (o.kind == ObjectiveKind::Automaton) return *o.automaton;

    DpaBuilder b(make_alphabet(o));
    auto numbered_count = [&](const std::string& prefix) {
        int k = 0;
        for (auto& [l, _] : o.sets)
            if (l.size() > prefix.size() && l.compare(0, prefix.size(), prefix) == 0) ++k;
        return k;
    };

    switch (o.kind) {
        case ObjectiveKind::Liveness: {
            // reach T: an accepting sink on T
            auto q0 = b.add_state("q0", 3);
            auto acc = b.add_state("acc", 2);
            b.default_edges(q0, q0);
            b.edge(q0, "T", acc);
            b.default_edges(acc, acc);
            break;
        }
        case ObjectiveKind::Safety: {
            auto q0 = b.add_state("q0", 2);
            auto rej = b.add_state("rej", 1);
            b.default_edges(q0, rej);
            b.edge(q0, "T", q0);
            b.default_edges(rej, rej);
            break;
        }
        case ObjectiveKind::ReachAvoid: {
            auto q0 = b.add_state("q0", 3);
            auto acc = b.add_state("acc", 2);
            auto rej = b.add_state("rej", 3); // absorbing, so odd value is free
            b.default_edges(q0, q0);
            b.edge(q0, "T", acc);
            b.edge(q0, "A", rej);
            b.default_edges(acc, acc);
            b.default_edges(rej, rej);
            break;
        }
        case ObjectiveKind::Sequencing: {
            int k = numbered_count("S");
            bool avoid = false;
            for (auto& [l, _] : o.sets) avoid = avoid || l == "A";
            std::vector<std::uint32_t> w;
            for (int i = 1; i <= k; ++i) w.push_back(b.add_state("w" + std::to_string(i), 3));
            auto acc = b.add_state("acc", 2);
            std::uint32_t rej = 0;
            if (avoid) rej = b.add_state("rej", 3);
            for (int i = 0; i < k; ++i) {
                b.default_edges(w[i], w[i]);
                b.edge(w[i], "S" + std::to_string(i + 1), i + 1 < k ? w[i + 1] : acc);
                if (avoid) b.edge(w[i], "A", rej);
            }
            b.default_edges(acc, acc);
            if (avoid) b.default_edges(rej, rej);
            break;
        }
        case ObjectiveKind::Coverage: {
            int k = numbered_count("S");
            std::uint32_t full = (1u << k) - 1;
            // proper subsets in mask order, then the accepting sink
            for (std::uint32_t v = 0; v < full; ++v)
                b.add_state("q" + std::to_string(v), 3);
            auto acc = b.add_state("acc", 2);
            for (std::uint32_t v = 0; v < full; ++v) {
                b.default_edges(v, v);
                for (int i = 0; i < k; ++i) {
                    std::uint32_t nv = v | (1u << i);
                    b.edge(v, "S" + std::to_string(i + 1), nv == full ? acc : nv);
                }
            }
            b.default_edges(acc, acc);
            break;
        }
        case ObjectiveKind::Recurrence:
        case ObjectiveKind::RecurrenceAvoid: {
            int k = numbered_count("R");
            std::uint32_t full = (1u << k) - 1;
            // subsets of collected-since-flash; the full set is the flash
            for (std::uint32_t v = 0; v <= full; ++v)
                b.add_state("q" + std::to_string(v), v == full ? 2 : 3);
            std::uint32_t bad = 0;
            int f = 0;
            if (o.kind == ObjectiveKind::RecurrenceAvoid) {
                f = numbered_count("F");
                bad = b.add_state("bad", 1);
            }
            auto step = [&](std::uint32_t from, std::uint32_t acting_as) {
                b.default_edges(from, acting_as);
                for (int i = 0; i < k; ++i)
                    b.edge(from, "R" + std::to_string(i + 1), acting_as | (1u << i));
                for (int j = 1; j <= f; ++j) b.edge(from, "F" + std::to_string(j), bad);
            };
            for (std::uint32_t v = 0; v < full; ++v) step(v, v);
            step(full, 0); // flash: behaves like the empty set
            if (o.kind == ObjectiveKind::RecurrenceAvoid) step(bad, 0);
            break;
        }
        default:
            throw InternalError("unhandled objective kind");
    }
    return b.d;
}

Pomdp label_states(const Pomdp& m, const Objective& o) {
    Pomdp out = m;
    std::fill(out.label_of.begin(), out.label_of.end(), "");
    std::map<std::string, StateId> index;
    for (std::size_t s = 0; s < m.num_states(); ++s)
        index[m.state_names[s]] = static_cast<StateId>(s);
    for (auto& [letter, members] : o.sets)
        for (const std::string& nm : members) {
            auto it = index.find(nm);
            if (it == index.end())
                throw InputError("objective set " + letter + " references unknown state " + nm);
            if (!out.label_of[it->second].empty())
                throw InputError("state " + nm + " labeled twice");
            out.label_of[it->second] = letter;
        }
    return out;
}

Objective parse_objective(const std::string& text) {
    auto lines = tokenize_file(text);
    if (lines.empty() || lines[0].toks.size() != 2 || lines[0].toks[0] != "OBJ" ||
        lines[0].toks[1] != "v1")
        throw ParseError("expected header 'OBJ v1'", lines.empty() ? 1 : lines[0].lineno);

    Objective o;
    bool have_kind = false;
    std::vector<std::string> auto_states;
    struct DeltaLine {
        std::string q, sym, to;
        int lineno;
    };
    std::vector<DeltaLine> deltas;
    std::vector<std::tuple<std::string, int, int>> pris; // state, value, lineno

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& tl = lines[i];
        const std::string& key = tl.toks[0];
        if (key == "kind:") {
            if (have_kind) throw ParseError("duplicate kind: line", tl.lineno);
            if (tl.toks.size() != 2) throw ParseError("kind: needs one name", tl.lineno);
            auto k = kind_from_name(tl.toks[1]);
            if (!k) throw ParseError("unknown objective kind '" + tl.toks[1] + "'", tl.lineno);
            o.kind = *k;
            have_kind = true;
        } else if (key == "set") {
            if (tl.toks.size() < 3 || tl.toks[1].empty() || tl.toks[1].back() != ':')
                throw ParseError("expected 'set <letter>: states...'", tl.lineno);
            std::string letter = tl.toks[1].substr(0, tl.toks[1].size() - 1);
            if (!is_identifier(letter)) throw ParseError("bad set name '" + letter + "'", tl.lineno);
            for (auto& [l, _] : o.sets)
                if (l == letter) throw ParseError("duplicate set " + letter, tl.lineno);
            std::vector<std::string> members(tl.toks.begin() + 2, tl.toks.end());
            for (auto& s : members)
                if (!is_identifier(s)) throw ParseError("bad state name '" + s + "'", tl.lineno);
            o.sets.push_back({letter, std::move(members)});
        } else if (key == "states:") {
            if (!auto_states.empty()) throw ParseError("duplicate states: line", tl.lineno);
            auto_states.assign(tl.toks.begin() + 1, tl.toks.end());
            if (auto_states.empty()) throw ParseError("empty automaton state list", tl.lineno);
        } else if (key == "delta:") {
            if (tl.toks.size() != 4) throw ParseError("delta: needs 'q sym q''", tl.lineno);
            deltas.push_back({tl.toks[1], tl.toks[2], tl.toks[3], tl.lineno});
        } else if (key == "pri:") {
            if (tl.toks.size() != 3) throw ParseError("pri: needs state and value", tl.lineno);
            int v = 0;
            auto r = std::from_chars(tl.toks[2].data(), tl.toks[2].data() + tl.toks[2].size(), v);
            if (r.ec != std::errc() || r.ptr != tl.toks[2].data() + tl.toks[2].size() || v < 0)
                throw ParseError("bad priority '" + tl.toks[2] + "'", tl.lineno);
            pris.push_back({tl.toks[1], v, tl.lineno});
        } else {
            throw ParseError("unknown section '" + key + "'", tl.lineno);
        }
    }
    if (!have_kind) throw ParseError("missing kind: line", 1);
    canonicalize_sets(o);

    if (o.kind == ObjectiveKind::Automaton) {
        if (auto_states.empty()) throw ParseError("automaton kind needs a states: line", 1);
        Dpa d;
        d.alphabet = make_alphabet(o);
        std::map<std::string, std::uint32_t> qidx, sidx;
        for (std::size_t i = 0; i < d.alphabet.size(); ++i)
            sidx[d.alphabet[i]] = static_cast<std::uint32_t>(i);
        for (const std::string& q : auto_states) {
            if (!is_identifier(q)) throw ParseError("bad automaton state '" + q + "'", 1);
            if (!qidx.emplace(q, static_cast<std::uint32_t>(d.state_names.size())).second)
                throw ParseError("duplicate automaton state " + q, 1);
            d.state_names.push_back(q);
        }
        d.priority.assign(d.num_states(), -1);
        const std::uint32_t none = UINT32_MAX;
        d.delta.assign(d.num_states(), std::vector<std::uint32_t>(d.alphabet.size(), none));
        for (auto& [q, v, lineno] : pris) {
            auto it = qidx.find(q);
            if (it == qidx.end()) throw ParseError("unknown automaton state '" + q + "'", lineno);
            if (d.priority[it->second] != -1)
                throw ParseError("duplicate pri: for " + q, lineno);
            d.priority[it->second] = v;
        }
        std::vector<DeltaLine> wildcards;
        for (auto& dl : deltas) {
            auto qi = qidx.find(dl.q);
            if (qi == qidx.end()) throw ParseError("unknown automaton state '" + dl.q + "'", dl.lineno);
            auto ti = qidx.find(dl.to);
            if (ti == qidx.end()) throw ParseError("unknown automaton state '" + dl.to + "'", dl.lineno);
            if (dl.sym == "*") {
                wildcards.push_back(dl);
                continue;
            }
            auto si = sidx.find(dl.sym);
            if (si == sidx.end()) throw ParseError("unknown symbol '" + dl.sym + "'", dl.lineno);
            if (d.delta[qi->second][si->second] != none)
                throw ParseError("duplicate delta for (" + dl.q + "," + dl.sym + ")", dl.lineno);
            d.delta[qi->second][si->second] = ti->second;
        }
        for (auto& dl : wildcards) {
            std::uint32_t q = qidx[dl.q], to = qidx[dl.to];
            for (auto& t : d.delta[q])
                if (t == none) t = to;
        }
        for (std::size_t q = 0; q < d.num_states(); ++q) {
            if (d.priority[q] == -1)
                throw ParseError("automaton state " + d.state_names[q] + " has no priority", 1);
            for (std::size_t s = 0; s < d.alphabet.size(); ++s)
                if (d.delta[q][s] == none)
                    throw ParseError("automaton transition missing for (" + d.state_names[q] +
                                         "," + d.alphabet[s] + ")",
                                     1);
        }
        d.initial = 0; // first listed state starts the run
        o.automaton = std::move(d);
    } else if (!auto_states.empty() || !deltas.empty() || !pris.empty()) {
        throw ParseError("automaton sections only allowed for kind automaton", 1);
    }
    return o;
}

std::string write_objective(const Objective& o) {
    std::string out = "OBJ v1\n";
    out += std::string("kind: ") + kind_name(o.kind) + "\n";
    for (auto& [letter, members] : o.sets) {
        out += "set " + letter + ":";
        for (const std::string& s : members) out += " " + s;
        out += "\n";
    }
    if (o.kind == ObjectiveKind::Automaton) {
        const Dpa& d = *o.automaton;
        out += "states:";
        for (const auto& q : d.state_names) out += " " + q;
        out += "\n";
        for (std::size_t q = 0; q < d.num_states(); ++q)
            for (std::size_t s = 0; s < d.alphabet.size(); ++s)
                out += "delta: " + d.state_names[q] + " " + d.alphabet[s] + " " +
                       d.state_names[d.delta[q][s]] + "\n";
        for (std::size_t q = 0; q < d.num_states(); ++q)
            out += "pri: " + d.state_names[q] + " " + std::to_string(d.priority[q]) + "\n";
    }
    return out;
}

} // namespace qpomdp
