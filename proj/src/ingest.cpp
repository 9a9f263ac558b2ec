#include "qpomdp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "qpomdp/error.hpp"

namespace qpomdp {

std::vector<TokenLine> tokenize_file(const std::string& text) {
    std::vector<TokenLine> out;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        TokenLine tl;
        tl.lineno = lineno;
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) tl.toks.push_back(tok);
        if (!tl.toks.empty()) out.push_back(std::move(tl));
    }
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

namespace {

int parse_int(const std::string& tok, int lineno, const char* what) {
    int v = 0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
        throw ParseError(std::string("bad ") + what + " '" + tok + "'", lineno);
    return v;
}

// Name table built from a declaration line; lookups are parse errors when
// the name was never declared.
struct Names {
    std::map<std::string, std::uint32_t> index;
    const char* what;
    std::uint32_t get(const std::string& nm, int lineno) const {
        auto it = index.find(nm);
        if (it == index.end())
            throw ParseError(std::string("unknown ") + what + " '" + nm + "'", lineno);
        return it->second;
    }
};

Names declare(const std::vector<std::string>& toks, int lineno, const char* what,
              std::vector<std::string>& out_names) {
    Names n;
    n.what = what;
    if (toks.size() < 2) throw ParseError(std::string("empty ") + what + " list", lineno);
    for (std::size_t i = 1; i < toks.size(); ++i) {
        if (!is_identifier(toks[i]))
            throw ParseError(std::string("bad ") + what + " name '" + toks[i] + "'", lineno);
        if (!n.index.emplace(toks[i], static_cast<std::uint32_t>(i - 1)).second)
            throw ParseError(std::string("duplicate ") + what + " '" + toks[i] + "'", lineno);
        out_names.push_back(toks[i]);
    }
    return n;
}

bool looks_like_prob(const std::string& tok) {
    // anything with '/', '.', exponent, or a plain integer
    for (char c : tok)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.' || c == 'e' ||
              c == 'E' || c == '-' || c == '+'))
            return false;
    return !tok.empty();
}

} // namespace

GeneralPomdp parse_model(const std::string& text) {
    auto lines = tokenize_file(text);
    if (lines.empty() || lines[0].toks.size() != 2 || lines[0].toks[0] != "QPOMDP" ||
        lines[0].toks[1] != "v1")
        throw ParseError("expected header 'QPOMDP v1'",
                         lines.empty() ? 1 : lines[0].lineno);

    GeneralPomdp g;
    Pomdp& m = g.base;
    Names states{{}, "state"}, actions{{}, "action"}, obs{{}, "observation"};
    bool have_states = false, have_actions = false, have_obs = false, have_start = false;

    // First pass: declarations (they may appear in any order but before use).
    struct Pending {
        std::vector<std::string> toks;
        int lineno;
    };
    std::vector<Pending> body;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& tl = lines[i];
        const std::string& key = tl.toks[0];
        if (key == "states:") {
            if (have_states) throw ParseError("duplicate states: section", tl.lineno);
            states = declare(tl.toks, tl.lineno, "state", m.state_names);
            have_states = true;
        } else if (key == "actions:") {
            if (have_actions) throw ParseError("duplicate actions: section", tl.lineno);
            actions = declare(tl.toks, tl.lineno, "action", m.action_names);
            have_actions = true;
        } else if (key == "observations:") {
            if (have_obs) throw ParseError("duplicate observations: section", tl.lineno);
            obs = declare(tl.toks, tl.lineno, "observation", m.obs_names);
            have_obs = true;
        } else {
            body.push_back({tl.toks, tl.lineno});
        }
    }
    if (!have_states) throw ParseError("missing states: section", 1);
    if (!have_actions) throw ParseError("missing actions: section", 1);
    if (!have_obs) throw ParseError("missing observations: section", 1);

    const std::size_t n = m.state_names.size();
    const std::size_t na = m.action_names.size();
    m.priority.assign(n, 0);
    m.label_of.assign(n, "");
    m.trans.assign(n, std::vector<Row>(na));

    // observation lines come in three shapes; they must agree across lines
    enum ObsForm { Unset, Det, Multi, Dist } form = Unset;
    std::vector<int> obs_seen(n, 0);
    g.obs.det.assign(n, 0);
    g.obs.sets.assign(n, {});
    g.obs.dists.assign(n, {});
    std::vector<int> pri_seen(n, 0);

    for (const auto& [toks, lineno] : body) {
        const std::string& key = toks[0];
        if (key == "obs:") {
            if (toks.size() < 3) throw ParseError("obs: needs a state and an observation", lineno);
            StateId s = states.get(toks[1], lineno);
            ObsForm f;
            if (toks.size() == 3)
                f = Det;
            else if (toks.size() == 4 && looks_like_prob(toks.back()) &&
                     !obs.index.count(toks.back()))
                f = Dist;
            else
                f = Multi;
            if (form == Unset) form = f;
            if (form != f) {
                // a one-observation line is both a deterministic entry and a
                // singleton set, so those two shapes may mix freely
                if ((form == Det && f == Multi) || (form == Multi && f == Det))
                    form = Multi;
                else
                    throw ParseError("mixed observation line forms", lineno);
            }
            if (f == Det) {
                if (obs_seen[s]++) throw ParseError("duplicate obs: line for state " + toks[1], lineno);
                g.obs.det[s] = obs.get(toks[2], lineno);
                g.obs.sets[s] = {g.obs.det[s]};
            } else if (f == Multi) {
                if (obs_seen[s]++) throw ParseError("duplicate obs: line for state " + toks[1], lineno);
                for (std::size_t i = 2; i < toks.size(); ++i)
                    g.obs.sets[s].push_back(obs.get(toks[i], lineno));
            } else {
                ObsId z = obs.get(toks[2], lineno);
                for (auto& [zz, p] : g.obs.dists[s])
                    if (zz == z) throw ParseError("duplicate obs: entry for state " + toks[1], lineno);
                g.obs.dists[s].push_back({z, parse_prob(toks[3])});
                obs_seen[s] = 1;
            }
        } else if (key == "start:") {
            if (have_start) throw ParseError("duplicate start: line", lineno);
            have_start = true;
            if (toks.size() < 3 || (toks.size() - 1) % 2 != 0)
                throw ParseError("start: needs state probability pairs", lineno);
            std::map<StateId, Prob> acc;
            for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
                StateId s = states.get(toks[i], lineno);
                if (acc.count(s)) throw ParseError("duplicate start entry " + toks[i], lineno);
                acc.emplace(s, parse_prob(toks[i + 1]));
            }
            for (auto& [s, p] : acc)
                if (!p.is_zero()) m.initial.push_back({s, p});
        } else if (key == "T:") {
            if (toks.size() != 5) throw ParseError("T: needs state action state probability", lineno);
            StateId s = states.get(toks[1], lineno);
            ActionId a = actions.get(toks[2], lineno);
            StateId t = states.get(toks[3], lineno);
            Prob p = parse_prob(toks[4]);
            for (const TransEntry& e : m.trans[s][a])
                if (e.to == t)
                    throw ParseError("duplicate transition " + toks[1] + " " + toks[2] + " " + toks[3],
                                     lineno);
            if (!p.is_zero()) m.trans[s][a].push_back({t, p});
        } else if (key == "priority:") {
            if (toks.size() != 3) throw ParseError("priority: needs state and value", lineno);
            StateId s = states.get(toks[1], lineno);
            if (pri_seen[s]++) throw ParseError("duplicate priority for state " + toks[1], lineno);
            int v = parse_int(toks[2], lineno, "priority");
            if (v < 0) throw ParseError("priority must be >= 0", lineno);
            m.priority[s] = v;
        } else if (key == "label:") {
            if (toks.size() != 3) throw ParseError("label: needs state and name", lineno);
            StateId s = states.get(toks[1], lineno);
            if (!is_identifier(toks[2])) throw ParseError("bad label '" + toks[2] + "'", lineno);
            if (!m.label_of[s].empty())
                throw ParseError("duplicate label for state " + toks[1], lineno);
            m.label_of[s] = toks[2];
        } else {
            throw ParseError("unknown section '" + key + "'", lineno);
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        if (!obs_seen[s])
            throw ParseError("state " + m.state_names[s] + " has no observation", 1);
        if (!pri_seen[s])
            throw ParseError("state " + m.state_names[s] + " has no priority", 1);
    }
    if (!have_start) throw ParseError("missing start: line", 1);
    for (auto& per_state : m.trans)
        for (Row& row : per_state)
            std::sort(row.begin(), row.end(),
                      [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });
    std::sort(m.initial.begin(), m.initial.end(),
              [](const TransEntry& x, const TransEntry& y) { return x.to < y.to; });

    g.obs.kind = form == Multi  ? GeneralObs::Sets
                 : form == Dist ? GeneralObs::Dists
                                : GeneralObs::Det;
    if (g.obs.kind == GeneralObs::Det) m.obs_of = g.obs.det;
    return g;
}

Pomdp load_model(const std::string& text) {
    GeneralPomdp g = parse_model(text);
    Pomdp m = normalize_observations(g);
    prune_unused_observations(m);
    m.ensure_valid();
    return m;
}

std::string write_model(const Pomdp& m) {
    if (m.obs_of.size() != m.state_names.size())
        throw InputError("write_model requires a deterministic observation map");
    std::string out = "QPOMDP v1\n";
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (const auto& x : xs) {
            s += " ";
            s += x;
        }
        return s;
    };
    out += "states:" + join(m.state_names) + "\n";
    out += "actions:" + join(m.action_names) + "\n";
    out += "observations:" + join(m.obs_names) + "\n";
    for (std::size_t s = 0; s < m.num_states(); ++s)
        out += "obs: " + m.state_names[s] + " " + m.obs_names[m.obs_of[s]] + "\n";
    out += "start:";
    for (const TransEntry& e : m.initial)
        out += " " + m.state_names[e.to] + " " + e.p.text();
    out += "\n";
    for (std::size_t s = 0; s < m.num_states(); ++s)
        for (std::size_t a = 0; a < m.num_actions(); ++a)
            for (const TransEntry& e : m.trans[s][a])
                out += "T: " + m.state_names[s] + " " + m.action_names[a] + " " +
                       m.state_names[e.to] + " " + e.p.text() + "\n";
    for (std::size_t s = 0; s < m.num_states(); ++s)
        out += "priority: " + m.state_names[s] + " " + std::to_string(m.priority[s]) + "\n";
    for (std::size_t s = 0; s < m.num_states(); ++s)
        if (!m.label_of[s].empty())
            out += "label: " + m.state_names[s] + " " + m.label_of[s] + "\n";
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
    if (!out.flush()) throw InputError("write failed for " + path);
}

} // namespace qpomdp
