#include <algorithm>
#include <map>
#include <sstream>

#include "socprac/lang.hpp"

namespace socprac {

namespace {

struct Line {
    std::vector<Token> toks;
    int number = 0;
};

std::vector<Line> split_lines(const std::string& text, const std::string& file) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
        ++n;
        auto toks = lex(raw, file, n, 1);
        if (toks.size() == 1) continue;
        out.push_back({std::move(toks), n});
    }
    return out;
}

class ModelReader {
public:
    ModelReader(const std::string& file) : file_(file) {}

    KripkeModel read(const std::string& text) {
        for (auto& line : split_lines(text, file_)) {
            cur_ = &line;
            pos_ = 0;
            statement();
        }
        return finish();
    }

private:
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, cur_->toks.size() - 1);
        return cur_->toks[i];
    }
    Token next() {
        Token t = peek();
        if (pos_ < cur_->toks.size() - 1) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg, const std::string& kind = "SyntaxError") const {
        std::string near = t.kind == Token::Kind::End ? "end of line" : "'" + t.text + "'";
        throw ParseError(kind, t.span, msg + " near " + near);
    }
    Token expect(const char* p) {
        if (!peek().is(p)) fail(peek(), std::string("expected '") + p + "'");
        return next();
    }
    bool accept(const char* p) {
        if (!peek().is(p)) return false;
        next();
        return true;
    }
    Token ident() {
        if (peek().kind != Token::Kind::Ident) fail(peek(), "expected identifier");
        return next();
    }
    void end() {
        if (peek().kind != Token::Kind::End) fail(peek(), "unexpected token");
    }
    std::vector<Token> ident_list() {
        std::vector<Token> out;
        if (peek().kind == Token::Kind::End) return out;
        do {
            out.push_back(ident());
        } while (accept(","));
        return out;
    }

    void declare(std::vector<std::string>& into, std::map<std::string, int>& seen, const Token& t) {
        if (seen.count(t.text)) fail(t, "already declared", "DuplicateDeclaration");
        seen[t.text] = static_cast<int>(into.size());
        into.push_back(t.text);
    }

    int world(const Token& t) const {
        auto it = world_idx_.find(t.text);
        if (it == world_idx_.end()) fail(t, "unknown world", "UnknownIdentifier");
        return it->second;
    }
    void agent(const Token& t) const {
        if (!agent_idx_.count(t.text)) fail(t, "unknown agent", "UnknownIdentifier");
    }
    Context& context(const Token& t) {
        for (auto& c : m_.contexts)
            if (c.name == t.text) return c;
        fail(t, "unknown context", "UnknownIdentifier");
    }
    void object(const Token& t) const {
        if (!m_.is_object(t.text)) fail(t, "unknown object", "UnknownIdentifier");
    }


    std::string atom_name(const Token& t) {
        if (t.kind == Token::Kind::Hashed) {
            if (t.text != "V") fail(t, "only violation atoms V#k may use '#'");
            std::string name = "V#" + t.tag;
            if (!atom_idx_.count(name)) {
                atom_idx_[name] = static_cast<int>(m_.atoms.size());
                m_.atoms.push_back(name);
            }
            return name;
        }
        if (t.kind != Token::Kind::Ident) fail(t, "expected atom");
        if (!atom_idx_.count(t.text)) fail(t, "unknown atom", "UnknownIdentifier");
        return t.text;
    }

    void relation(std::map<std::string, std::vector<std::pair<int, int>>>& rel, const std::string& who) {
        auto& pairs = rel[who];
        if (peek().ident("identity")) {
            next();
            for (int w = 0; w < static_cast<int>(m_.worlds.size()); ++w) pairs.emplace_back(w, w);
            end();
            return;
        }
        do {
            if (accept("{")) {  // equivalence cluster
                std::vector<int> ws;
                do {
                    ws.push_back(world(ident()));
                } while (accept(","));
                expect("}");
                for (int a : ws)
                    for (int b : ws) pairs.emplace_back(a, b);
                continue;
            }
            std::vector<int> from;
            if (accept("*")) {
                for (int w = 0; w < static_cast<int>(m_.worlds.size()); ++w) from.push_back(w);
            } else {
                from.push_back(world(ident()));
            }
            expect("->");
            int to = world(ident());
            for (int f : from) pairs.emplace_back(f, to);
        } while (accept(","));
        end();
    }

    Step step_label() {
        int n = m_.vocab.agent_count();
        if (peek().ident("skip")) {
            next();
            return Step::skip(n);
        }
        Token open = expect("{");
        std::vector<std::pair<GroupMask, ActionSet>> sparse;
        do {
            GroupMask g = 0;
            auto add_agent = [&](const Token& t) {
                agent(t);
                g |= GroupMask{1} << agent_idx_.at(t.text);
            };
            if (accept("{")) {
                do {
                    add_agent(ident());
                } while (accept(","));
                expect("}");
            } else {
                add_agent(ident());
            }
            expect(":");
            ActionSet a = 0;
            auto add_action = [&](const Token& t) {
                int i = m_.vocab.action_index(t.text);
                if (i < 0) {
                    ActionSet mask = m_.vocab.action_mask(t.text);
                    if (mask == 0) fail(t, "unknown action", "UnknownIdentifier");
                    if ((mask & (mask - 1)) != 0) fail(t, "ambiguous action; name the object");
                    a |= mask;
                } else {
                    a |= ActionSet{1} << i;
                }
            };
            if (accept("{")) {
                do {
                    add_action(ident());
                } while (accept(","));
                expect("}");
            } else {
                add_action(ident());
            }
            sparse.emplace_back(g, a);
        } while (accept(","));
        expect("}");
        try {
            return Step::complete(n, sparse);
        } catch (const StepError& e) {
            fail(open, e.what());
        }
    }

    void statement() {
        Token head = ident();
        const std::string& k = head.text;
        if (k == "objects" && peek().kind == Token::Kind::Ident) {
            Context& c = context(next());
            expect(":");
            for (const auto& t : ident_list()) {
                object(t);
                c.objects.push_back(t.text);
            }
            end();
            return;
        }
        if (k == "agents" || k == "actions" || k == "atoms" || k == "social" || k == "objects" || k == "values" ||
            k == "worlds" || k == "practice" || k == "order" || k == "universe") {
            expect(":");
            if (k == "agents") {
                auto agents = m_.vocab.agents();
                for (const auto& t : ident_list()) {
                    if (agent_idx_.count(t.text)) fail(t, "already declared", "DuplicateDeclaration");
                    agent_idx_[t.text] = static_cast<int>(agents.size());
                    agents.push_back(t.text);
                }
                if (agents.size() > static_cast<std::size_t>(kMaxAgents)) fail(head, "too many agents");
                m_.vocab = Vocabulary(agents, m_.vocab.actions());
            } else if (k == "actions") {
                auto actions = m_.vocab.actions();
                for (const auto& t : ident_list()) {
                    if (std::find(actions.begin(), actions.end(), t.text) != actions.end())
                        fail(t, "already declared", "DuplicateDeclaration");
                    actions.push_back(t.text);
                }
                if (actions.size() > static_cast<std::size_t>(kMaxActions)) fail(head, "too many actions");
                m_.vocab = Vocabulary(m_.vocab.agents(), actions);
            } else if (k == "atoms" || k == "social") {
                std::vector<Token> names;
                if (peek().kind != Token::Kind::End) {
                    do {
                        names.push_back(next());
                    } while (accept(","));
                }
                for (const auto& t : names) {
                    if (t.kind == Token::Kind::Hashed && k == "atoms") {
                        atom_name(t);
                        continue;
                    }
                    if (t.kind != Token::Kind::Ident) fail(t, "expected atom name");
                    static const std::vector<std::string> reserved = {"true", "false", "skip", "any"};
                    if (std::find(reserved.begin(), reserved.end(), t.text) != reserved.end())
                        fail(t, "reserved word");
                    declare(m_.atoms, atom_idx_, t);
                    if (k == "social") m_.social.insert(t.text);
                }
            } else if (k == "objects") {
                for (const auto& t : ident_list()) {
                    if (m_.is_object(t.text)) fail(t, "already declared", "DuplicateDeclaration");
                    m_.objects.push_back(t.text);
                }
            } else if (k == "values") {
                for (const auto& t : ident_list()) {
                    if (m_.is_value(t.text)) fail(t, "already declared", "DuplicateDeclaration");
                    m_.values.push_back(t.text);
                }
            } else if (k == "worlds") {
                for (const auto& t : ident_list()) declare(m_.worlds, world_idx_, t);
            } else if (k == "practice") {
                for (const auto& t : ident_list()) context(t).practice = true;
            } else if (k == "order") {
                do {
                    int a = world(ident());
                    expect("<");
                    int b = world(ident());
                    m_.order.emplace_back(a, b);
                } while (accept(","));
            } else if (k == "universe") {
                Token mode = ident();
                if (mode.text == "labels")
                    m_.universe_mode = UniverseMode::Labels;
                else if (mode.text == "full")
                    m_.universe_mode = UniverseMode::Full;
                else
                    fail(mode, "expected 'labels' or 'full'");
            }
            end();
            return;
        }
        if (k == "capability") {
            Token a = ident();
            agent(a);
            expect(":");
            auto& caps = m_.capability[a.text];
            for (const auto& t : ident_list()) {
                if (!m_.vocab.has_action_name(t.text)) fail(t, "unknown action", "UnknownIdentifier");
                caps.insert(t.text);
            }
            end();
            return;
        }
        if (k == "world") {
            int w = world(ident());
            expect(":");
            if (peek().kind != Token::Kind::End) {
                do {
                    true_atoms_[w].insert(atom_name(next()));
                } while (accept(","));
            }
            end();
            return;
        }
        if (k == "transition") {
            int from = world(ident());
            expect("->");
            int to = world(ident());
            expect(":");
            Step s = step_label();
            end();
            m_.transitions.push_back({from, s, to});
            return;
        }
        if (k == "belief" || k == "goal") {
            Token a = ident();
            agent(a);
            expect(":");
            relation(k == "belief" ? belief_ : goal_, a.text);
            return;
        }
        if (k == "value") {
            Token v = ident();
            if (!m_.is_value(v.text)) fail(v, "unknown value", "UnknownIdentifier");
            expect(":");
            auto& pairs = m_.value_order[v.text];
            do {
                int a = world(ident());
                expect("<");
                int b = world(ident());
                pairs.emplace_back(a, b);
            } while (accept(","));
            end();
            return;
        }
        if (k == "context") {
            Token c = ident();
            for (const auto& x : m_.contexts)
                if (x.name == c.text) fail(c, "already declared", "DuplicateDeclaration");
            expect(":");
            Context ctx;
            ctx.name = c.text;
            for (const auto& t : ident_list()) ctx.worlds.push_back(world(t));
            std::sort(ctx.worlds.begin(), ctx.worlds.end());
            ctx.worlds.erase(std::unique(ctx.worlds.begin(), ctx.worlds.end()), ctx.worlds.end());
            end();
            m_.contexts.push_back(std::move(ctx));
            return;
        }
        if (k == "roles" || k == "actors" || k == "places") {
            Context& c = context(ident());
            expect(":");
            if (k == "places") {
                if (peek().kind != Token::Kind::End) {
                    do {
                        if (peek().kind != Token::Kind::String) fail(peek(), "expected string");
                        c.places.push_back(next().text);
                    } while (accept(","));
                }
            } else {
                for (const auto& t : ident_list()) {
                    if (k == "actors") agent(t);
                    (k == "roles" ? c.roles : c.actors).push_back(t.text);
                }
            }
            end();
            return;
        }
        if (k == "play") {
            Token a = ident();
            agent(a);
            Token r = ident();
            if (!m_.is_role(r.text)) fail(r, "unknown role", "UnknownIdentifier");
            expect(":");
            for (const auto& t : ident_list()) m_.plays.push_back({a.text, r.text, world(t)});
            end();
            return;
        }
        if (k == "affords" || k == "available") {
            Context& c = context(ident());
            expect(":");
            expect("{");
            std::vector<std::string> objs;
            if (!peek().is("}")) {
                do {
                    Token o = ident();
                    object(o);
                    objs.push_back(o.text);
                } while (accept(","));
            }
            expect("}");
            std::sort(objs.begin(), objs.end());
            if (k == "available") {
                end();
                m_.available.push_back({c.name, objs});
                return;
            }
            std::vector<Token> rest(cur_->toks.begin() + static_cast<std::ptrdiff_t>(pos_), cur_->toks.end());
            ExprParser p(rest, &m_);
            auto act = p.action();
            p.expect_end();
            m_.affords.push_back({c.name, objs, print(*act)});
            return;
        }
        fail(head, "unknown statement");
    }

    KripkeModel finish() {
        int n = static_cast<int>(m_.worlds.size());
        m_.valuation.assign(n, std::vector<bool>(m_.atoms.size(), false));
        for (const auto& [w, set] : true_atoms_)
            for (const auto& a : set) m_.valuation[w][atom_idx_.at(a)] = true;
        int na = m_.vocab.agent_count();
        auto build = [&](std::map<std::string, std::vector<std::pair<int, int>>>& rel) {
            std::vector<std::vector<std::vector<int>>> out(na, std::vector<std::vector<int>>(n));
            for (auto& [agent, pairs] : rel) {
                int a = agent_idx_.at(agent);
                for (auto [x, y] : pairs) out[a][x].push_back(y);
            }
            for (auto& per : out)
                for (auto& v : per) {
                    std::sort(v.begin(), v.end());
                    v.erase(std::unique(v.begin(), v.end()), v.end());
                }
            return out;
        };
        m_.belief = build(belief_);
        m_.goal = build(goal_);
        m_.finalize();
        return std::move(m_);
    }

    std::string file_;
    KripkeModel m_;
    Line* cur_ = nullptr;
    std::size_t pos_ = 0;
    std::map<std::string, int> world_idx_, atom_idx_, agent_idx_;
    std::map<int, std::set<std::string>> true_atoms_;
    std::map<std::string, std::vector<std::pair<int, int>>> belief_, goal_;
};

}  // namespace

KripkeModel parse_model(const std::string& text, const std::string& file) {
    ModelReader r(file);
    return r.read(text);
}

namespace {
std::string list(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}
}  // namespace

std::string print_model(const KripkeModel& m) {
    std::ostringstream o;
    auto wl = [&](const std::vector<int>& ws) {
        std::vector<std::string> names;
        for (int w : ws) names.push_back(m.worlds[w]);
        return list(names);
    };
    o << "agents: " << list(m.vocab.agents()) << "\n";
    o << "actions: " << list(m.vocab.actions()) << "\n";
    for (const auto& a : m.vocab.agents()) {
        auto it = m.capability.find(a);
        if (it == m.capability.end()) continue;
        o << "capability " << a << ": " << list({it->second.begin(), it->second.end()}) << "\n";
    }
    std::vector<std::string> phys, soc;
    for (const auto& a : m.atoms) (m.is_social(a) ? soc : phys).push_back(a);
    o << "atoms: " << list(phys) << "\n";
    if (!soc.empty()) o << "social: " << list(soc) << "\n";
    if (!m.objects.empty()) o << "objects: " << list(m.objects) << "\n";
    if (!m.values.empty()) o << "values: " << list(m.values) << "\n";
    o << "worlds: " << list(m.worlds) << "\n";
    o << "universe: " << (m.universe_mode == UniverseMode::Full ? "full" : "labels") << "\n";
    for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w) {
        std::vector<std::string> t;
        for (std::size_t a = 0; a < m.atoms.size(); ++a)
            if (m.valuation[w][a]) t.push_back(m.atoms[a]);
        o << "world " << m.worlds[w] << ": " << list(t) << "\n";
    }
    for (const auto& t : m.transitions)
        o << "transition " << m.worlds[t.from] << " -> " << m.worlds[t.to] << ": " << t.label.str(m.vocab) << "\n";
    auto rel = [&](const char* name, const std::vector<std::vector<std::vector<int>>>& r) {
        for (int a = 0; a < m.vocab.agent_count(); ++a) {
            std::vector<std::string> pairs;
            for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w)
                for (int v : r[a][w]) pairs.push_back(m.worlds[w] + " -> " + m.worlds[v]);
            if (!pairs.empty()) o << name << " " << m.vocab.agents()[a] << ": " << list(pairs) << "\n";
        }
    };
    rel("belief", m.belief);
    rel("goal", m.goal);
    if (!m.order.empty()) {
        std::vector<std::string> e;
        for (auto [a, b] : m.order) e.push_back(m.worlds[a] + " < " + m.worlds[b]);
        o << "order: " << list(e) << "\n";
    }
    for (const auto& [v, pairs] : m.value_order) {
        if (pairs.empty()) continue;
        std::vector<std::string> e;
        for (auto [a, b] : pairs) e.push_back(m.worlds[a] + " < " + m.worlds[b]);
        o << "value " << v << ": " << list(e) << "\n";
    }
    std::vector<std::string> practices;
    for (const auto& c : m.contexts) {
        o << "context " << c.name << ": " << wl(c.worlds) << "\n";
        if (!c.roles.empty()) o << "roles " << c.name << ": " << list(c.roles) << "\n";
        if (!c.actors.empty()) o << "actors " << c.name << ": " << list(c.actors) << "\n";
        if (!c.objects.empty()) o << "objects " << c.name << ": " << list(c.objects) << "\n";
        if (!c.places.empty()) {
            std::vector<std::string> q;
            for (const auto& p : c.places) q.push_back("\"" + p + "\"");
            o << "places " << c.name << ": " << list(q) << "\n";
        }
        if (c.practice) practices.push_back(c.name);
    }
    if (!practices.empty()) o << "practice: " << list(practices) << "\n";
    std::map<std::pair<std::string, std::string>, std::vector<int>> plays;
    for (const auto& p : m.plays) plays[{p.agent, p.role}].push_back(p.world);
    for (auto& [key, ws] : plays) {
        std::sort(ws.begin(), ws.end());
        ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
        o << "play " << key.first << " " << key.second << ": " << wl(ws) << "\n";
    }
    for (const auto& f : m.affords) o << "affords " << f.context << ": {" << list(f.objects) << "} " << f.action << "\n";
    for (const auto& f : m.available) o << "available " << f.context << ": {" << list(f.objects) << "}\n";
    return o.str();
}

std::vector<Query> parse_queries(const std::string& text, const KripkeModel& m, const std::string& file) {
    std::vector<Query> out;
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
        ++n;
        auto toks = lex(raw, file, n, 1);
        if (toks.size() == 1) continue;
        if (!toks[0].ident("at")) throw ParseError("SyntaxError", toks[0].span, "expected 'at <world>:'");
        if (toks[1].kind != Token::Kind::Ident) throw ParseError("SyntaxError", toks[1].span, "expected world");
        int w = m.world_index(toks[1].text);
        if (w < 0) throw ParseError("UnknownIdentifier", toks[1].span, "unknown world '" + toks[1].text + "'");
        if (!toks[2].is(":")) throw ParseError("SyntaxError", toks[2].span, "expected ':'");
        std::size_t start = static_cast<std::size_t>(toks[2].span.column);
        ExprParser p(std::vector<Token>(toks.begin() + 3, toks.end()), &m);
        auto f = p.assertion();
        p.expect_end();
        out.push_back({w, f, raw.substr(std::min(start, raw.size())), n});
    }
    return out;
}

}  // namespace socprac
