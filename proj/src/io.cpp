#include "mapf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mapf {

namespace {

struct Fact {
    std::string name;
    std::vector<std::string> args;
};

std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

bool is_id(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

std::optional<int> to_int(std::string_view s) {
    int value = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
    return value;
}

// `name(arg,...).` with no nesting.
std::optional<Fact> parse_fact(std::string_view s) {
    auto open = s.find('(');
    if (open == std::string_view::npos || s.size() < open + 3 || s.substr(s.size() - 2) != ").") return std::nullopt;
    Fact f{std::string(trim(s.substr(0, open))), {}};
    auto body = s.substr(open + 1, s.size() - open - 3);
    for (;;) {
        auto comma = body.find(',');
        f.args.emplace_back(trim(body.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    return f;
}

template <class Fn>
void for_each_line(std::string_view text, Fn fn) {
    int number = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        fn(++number, text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

}  // namespace

Instance parse_instance(std::string_view text) {
    struct RawEdge {
        std::string from, to;
        std::optional<int> delta;
        int line;
    };
    std::set<std::string> vertices, agents;
    std::vector<RawEdge> edges;
    std::map<std::string, std::pair<std::string, int>> starts, goals;
    std::map<std::string, std::string> meta;
    std::optional<bool> weighted;

    for_each_line(text, [&](int line, std::string_view raw) {
        auto comment = raw.find('%');
        if (comment != std::string_view::npos) {
            auto note = trim(raw.substr(comment + 1));
            if (trim(raw.substr(0, comment)).empty()) {
                auto eq = note.find('=');
                if (eq != std::string_view::npos && is_id(trim(note.substr(0, eq))))
                    meta[std::string(trim(note.substr(0, eq)))] = std::string(trim(note.substr(eq + 1)));
            }
            raw = raw.substr(0, comment);
        }
        auto s = trim(raw);
        if (s.empty()) return;
        auto fact = parse_fact(s);
        if (!fact) throw ParseError(line, "expected a fact of the form name(args).");
        const auto& a = fact->args;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(fact->name == "edge" && i == 2) && !is_id(a[i]))
                throw ParseError(line, "malformed identifier '" + a[i] + "'");
        auto arity = [&](std::size_t n) {
            if (a.size() != n)
                throw ParseError(line, fact->name + " expects " + std::to_string(n) + " arguments");
        };
        if (fact->name == "vertex") {
            arity(1);
            vertices.insert(a[0]);
        } else if (fact->name == "agent") {
            arity(1);
            agents.insert(a[0]);
        } else if (fact->name == "edge") {
            if (a.size() != 2 && a.size() != 3) throw ParseError(line, "edge expects 2 or 3 arguments");
            bool w = a.size() == 3;
            if (weighted && *weighted != w) throw ParseError(line, "mixed weighted/unweighted edges");
            weighted = w;
            RawEdge e{a[0], a[1], std::nullopt, line};
            if (w) {
                e.delta = to_int(a[2]);
                if (!e.delta) throw ParseError(line, "malformed duration '" + a[2] + "'");
            }
            edges.push_back(std::move(e));
        } else if (fact->name == "start" || fact->name == "goal") {
            arity(2);
            auto& target = fact->name == "start" ? starts : goals;
            auto [it, fresh] = target.try_emplace(a[0], a[1], line);
            if (!fresh && it->second.first != a[1])
                throw ParseError(line, "second " + fact->name + " for agent " + a[0]);
        } else {
            throw ParseError(line, "unknown predicate '" + fact->name + "'");
        }
    });

    Instance inst;
    inst.meta = std::move(meta);
    auto& p = inst.problem;
    p.graph = Graph(std::vector<std::string>(vertices.begin(), vertices.end()));
    auto vertex = [&](const std::string& name, int line) {
        auto v = p.graph.find(name);
        if (!v) throw ParseError(line, "dangling vertex reference '" + name + "'");
        return *v;
    };
    std::vector<int> delta;
    for (const auto& e : edges) {
        auto idx = p.graph.add_edge(vertex(e.from, e.line), vertex(e.to, e.line));
        if (!e.delta) continue;
        if (idx < delta.size()) {
            if (delta[idx] != *e.delta) throw ParseError(e.line, "conflicting durations for one edge");
        } else {
            delta.push_back(*e.delta);
        }
    }
    if (weighted.value_or(false)) inst.delta = std::move(delta);

    for (const auto& [name, entry] : starts)
        if (!agents.count(name)) throw ParseError(entry.second, "start for undeclared agent " + name);
    for (const auto& [name, entry] : goals)
        if (!agents.count(name)) throw ParseError(entry.second, "goal for undeclared agent " + name);
    for (const auto& name : agents) {
        if (!starts.count(name) || !goals.count(name))
            throw ParseError(0, "start/goal not defined for agent " + name);
        p.agents.push_back(name);
        p.start.push_back(vertex(starts[name].first, starts[name].second));
        p.goal.push_back(vertex(goals[name].first, goals[name].second));
    }

    auto errors = inst.weighted() ? validate_problem(inst.with_sigma(SigmaMode::vf())) : validate_problem(p);
    if (!errors.empty()) {
        std::string all;
        for (const auto& e : errors) all += (all.empty() ? "" : "; ") + e;
        throw ParseError(0, all);
    }
    return inst;
}

std::string serialize_instance(const Instance& inst) {
    const auto& p = inst.problem;
    const auto& g = p.graph;
    std::ostringstream out;
    for (const auto& [key, value] : inst.meta) out << "% " << key << "=" << value << "\n";
    for (VertexId v = 0; v < g.num_vertices(); ++v) out << "vertex(" << g.name(v) << ").\n";
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        out << "edge(" << g.name(g.edges()[e].from) << "," << g.name(g.edges()[e].to);
        if (inst.delta) out << "," << (*inst.delta)[e];
        out << ").\n";
    }
    for (const auto& a : p.agents) out << "agent(" << a << ").\n";
    for (AgentId a = 0; a < p.num_agents(); ++a) out << "start(" << p.agents[a] << "," << g.name(p.start[a]) << ").\n";
    for (AgentId a = 0; a < p.num_agents(); ++a) out << "goal(" << p.agents[a] << "," << g.name(p.goal[a]) << ").\n";
    return out.str();
}

std::string emit_plan(const Problem& p, const Plan& plan) {
    std::ostringstream out;
    out << "plan length " << plan.length() << "\n";
    for (const auto& s : plan.strolls)
        for (const auto& m : moves_of(s))
            out << "move(" << p.agents[s.agent] << "," << p.graph.name(s.positions[m.depart].vertex()) << ","
                << p.graph.name(s.positions[m.arrive].vertex()) << "," << m.depart + 1 << ").\n";
    return out.str();
}

std::string emit_solution(const Problem& p, const OrderSolution& sol) {
    std::ostringstream out;
    for (AgentId a = 0; a < sol.paths.size(); ++a)
        for (std::size_t i = 0; i + 1 < sol.paths[a].size(); ++i)
            out << "move(" << p.agents[a] << "," << p.graph.name(sol.paths[a][i]) << ","
                << p.graph.name(sol.paths[a][i + 1]) << ").\n";
    for (const auto& r : sol.resolves)
        out << "resolve(" << p.agents[r.first] << "," << p.agents[r.second] << "," << p.graph.name(r.vertex)
            << ").\n";
    if (sol.mapping) out << dump_witness(*sol.mapping, p);
    out << emit_plan(p, sol.plan);
    return out.str();
}

Plan parse_plan(std::string_view text, const Instance& inst) {
    const auto& p = inst.problem;
    struct Step {
        int depart;
        VertexId from, to;
        int line;
    };
    std::optional<int> length;
    std::vector<std::vector<Step>> steps(p.num_agents());

    for_each_line(text, [&](int line, std::string_view raw) {
        auto comment = raw.find('%');
        auto s = trim(comment == std::string_view::npos ? raw : raw.substr(0, comment));
        if (s.empty() || s.front() == '(') return;  // witness line
        if (s.starts_with("plan length")) {
            auto n = to_int(trim(s.substr(11)));
            if (!n || *n < 0) throw ParseError(line, "malformed plan length");
            if (length) throw ParseError(line, "second plan length header");
            length = *n;
            return;
        }
        auto fact = parse_fact(s);
        if (!fact) throw ParseError(line, "expected a fact of the form name(args).");
        if (fact->name == "resolve" || fact->name == "prec") return;
        if (fact->name != "move") throw ParseError(line, "unknown predicate '" + fact->name + "'");
        if (fact->args.size() == 3) return;  // untimed
        if (fact->args.size() != 4) throw ParseError(line, "move expects 3 or 4 arguments");
        auto agent = p.find_agent(fact->args[0]);
        if (!agent) throw ParseError(line, "unknown agent '" + fact->args[0] + "'");
        auto u = p.graph.find(fact->args[1]), v = p.graph.find(fact->args[2]);
        if (!u || !v) throw ParseError(line, "unknown vertex in move");
        auto t = to_int(fact->args[3]);
        if (!t || *t < 1) throw ParseError(line, "malformed time '" + fact->args[3] + "'");
        steps[*agent].push_back({*t - 1, *u, *v, line});
    });
    if (!length) throw ParseError(0, "missing plan length header");

    Plan plan;
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        auto& agent_steps = steps[a];
        std::sort(agent_steps.begin(), agent_steps.end(), [](auto& l, auto& r) { return l.depart < r.depart; });
        Stroll s{a, {Position::at(p.start[a])}};
        for (const auto& st : agent_steps) {
            if (st.from != s.positions.back().vertex() || !s.positions.back().is_vertex())
                throw ParseError(st.line, "move does not start where " + p.agents[a] + " is");
            if (st.depart + 1 < static_cast<int>(s.positions.size()))
                throw ParseError(st.line, "overlapping moves for " + p.agents[a]);
            auto e = p.graph.edge_index(st.from, st.to);
            if (!e) throw ParseError(st.line, "move along a missing edge");
            while (static_cast<int>(s.positions.size()) <= st.depart) s.positions.push_back(s.positions.back());
            int duration = inst.delta ? (*inst.delta)[*e] : 1;
            for (int k = 1; k < duration; ++k) s.positions.push_back(Position::transit(st.from, st.to, k));
            s.positions.push_back(Position::at(st.to));
        }
        if (static_cast<int>(s.positions.size()) > *length + 1)
            throw ParseError(0, "moves of " + p.agents[a] + " exceed the plan length");
        while (static_cast<int>(s.positions.size()) <= *length) s.positions.push_back(s.positions.back());
        plan.strolls.push_back(std::move(s));
    }
    return plan;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace mapf
