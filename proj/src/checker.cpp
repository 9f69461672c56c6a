#include "socprac/checker.hpp"

#include <algorithm>
#include <bit>
#include <deque>

#include "socprac/interpret.hpp"
#include "socprac/lang.hpp"

namespace socprac {

namespace {
struct Scope {
    int& depth;
    std::function<void()> on_exit;
    Scope(int& d, std::function<void()> f) : depth(d), on_exit(std::move(f)) { ++depth; }
    ~Scope() {
        if (--depth == 0) on_exit();
    }
};
}  // namespace

#define QUERY_SCOPE()                                      \
    Scope scope_guard(depth_, [this] {                     \
        memo_.clear();                                     \
        compiled_.clear();                                 \
        compiled_coll_.clear();                            \
        arena_.clear();                                    \
        event_arena_.clear();                              \
    })

Checker::Checker(const KripkeModel& m, EvalOptions opts) : m_(m), opts_(opts), matcher_(m) {
    if (opts_.bound < 1 || opts_.trace_bound < 1) throw std::invalid_argument("bounds must be at least 1");
}

GroupMask Checker::group(const std::vector<std::string>& agents) const {
    return agents.empty() ? m_.vocab.all_agents() : m_.vocab.group_of(agents);
}

bool Checker::eval(const Assertion& a, int world) {
    QUERY_SCOPE();
    return ev(a, world);
}

bool Checker::ev(const Assertion& a, int world) {
    auto key = std::make_pair(&a, world);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = eval_core(a, world);
    memo_[key] = r;
    return r;
}

// ---- events ----

std::set<int> Checker::successors(const Event& e, int world, const std::string& role_ctx) {
    QUERY_SCOPE();
    return matcher_.successors(compile(e, world, role_ctx), world);
}

int Checker::compile(const Event& e, int world, const std::string& role_ctx) {
    QUERY_SCOPE();
    auto key = std::make_tuple(&e, world, role_ctx);
    if (auto it = compiled_.find(key); it != compiled_.end()) return it->second;
    int id = 0;
    switch (e.kind) {
        case Event::Kind::Perform: id = compile_collective(group(e.agents), *e.action, world, role_ctx); break;
        case Event::Kind::PerformRole: {
            auto players = role_players(e.role, world, role_ctx);
            if (players.empty()) {
                id = matcher_.empty();
                break;
            }
            GroupMask all = m_.vocab.group_of(players);
            if (is_monotone(*e.action)) {
                id = compile_collective(all, *e.action, world, role_ctx);
                break;
            }
            std::vector<int> parts;
            for (GroupMask s = all; s; s = (s - 1) & all) parts.push_back(compile_collective(s, *e.action, world, role_ctx));
            id = matcher_.unite(parts);
            break;
        }
        case Event::Kind::Skip: id = matcher_.skip(); break;
        case Event::Kind::Neg: id = matcher_.negate(compile(*e.lhs, world, role_ctx)); break;
        case Event::Kind::Seq:
            id = matcher_.compose(compile(*e.lhs, world, role_ctx), compile(*e.rhs, world, role_ctx));
            break;
        case Event::Kind::Par:
            id = matcher_.sync(compile(*e.lhs, world, role_ctx), compile(*e.rhs, world, role_ctx));
            break;
        case Event::Kind::Choice:
            id = matcher_.choice(compile(*e.lhs, world, role_ctx), compile(*e.rhs, world, role_ctx));
            break;
    }
    compiled_[key] = id;
    return id;
}

int Checker::compile_collective(GroupMask g, const Action& a, int world, const std::string& role_ctx) {
    QUERY_SCOPE();
    auto key = std::make_tuple(&a, g, world, role_ctx);
    if (auto it = compiled_coll_.find(key); it != compiled_coll_.end()) return it->second;
    int id = 0;
    switch (a.kind) {
        case Action::Kind::Atom: {
            ActionSet mask = m_.vocab.action_mask(a.name);
            if (!mask) throw EvalError("unknown action '" + a.name + "'");
            id = matcher_.pred(g, mask);
            break;
        }
        case Action::Kind::Skip: id = matcher_.skip(); break;
        case Action::Kind::Neg: id = matcher_.negate(compile_collective(g, *a.lhs, world, role_ctx)); break;
        case Action::Kind::Achieve: {
            auto xs = achievers(g, *a.goal, world);
            if (xs.empty()) {
                id = matcher_.empty();
                break;
            }
            id = compile_collective(g, *xs[0], world, role_ctx);
            for (std::size_t i = 1; i < xs.size(); ++i)
                id = matcher_.choice(id, compile_collective(g, *xs[i], world, role_ctx));
            break;
        }
        default: {
            auto op = [&](int l, int r) {
                switch (a.kind) {
                    case Action::Kind::Seq: return matcher_.compose(l, r);
                    case Action::Kind::Par: return matcher_.sync(l, r);
                    default: return matcher_.choice(l, r);
                }
            };
            if (is_monotone(a)) {
                id = op(compile_collective(g, *a.lhs, world, role_ctx), compile_collective(g, *a.rhs, world, role_ctx));
                break;
            }
            std::vector<int> parts;
            for (auto [g1, g2] : covers(g))
                parts.push_back(
                    op(compile_collective(g1, *a.lhs, world, role_ctx), compile_collective(g2, *a.rhs, world, role_ctx)));
            id = matcher_.unite(parts);
        }
    }
    compiled_coll_[key] = id;
    return id;
}

bool Checker::do_rec(int node, int world, std::vector<int>& prefix) {
    const auto& next = m_.order_succ(world);
    if (next.empty()) return false;
    for (int w2 : next) {
        bool ok = false;
        for (const auto& e : m_.out(world)) {
            if (e.to != w2) continue;
            prefix.push_back(e.label);
            if (matcher_.contains(node, prefix)) {
                ok = true;
            } else if (static_cast<int>(prefix.size()) < opts_.trace_bound &&
                       prefix.size() < matcher_.max_length(node) && matcher_.extendable(node, prefix)) {
                ok = do_rec(node, w2, prefix);
            }
            prefix.pop_back();
            if (ok) break;
        }
        if (!ok) return false;
    }
    return true;
}

bool Checker::eval_do(const Event& e, int world, const std::string& role_ctx) {
    QUERY_SCOPE();
    int node = compile(e, world, role_ctx);
    std::vector<int> prefix;
    return do_rec(node, world, prefix);
}

bool Checker::done_rec(const Event& e, const std::string& role_ctx, int world, std::vector<int>& suffix) {
    if (static_cast<int>(suffix.size()) >= opts_.trace_bound) return false;
    for (int p : m_.order_pred(world)) {
        for (const auto& edge : m_.out(p)) {
            if (edge.to != world) continue;
            suffix.insert(suffix.begin(), edge.label);
            int node = compile(e, p, role_ctx);
            bool ok = matcher_.contains(node, suffix) || done_rec(e, role_ctx, p, suffix);
            suffix.erase(suffix.begin());
            if (ok) return true;
        }
    }
    return false;
}

bool Checker::eval_done(const Event& e, int world, const std::string& role_ctx) {
    QUERY_SCOPE();
    std::vector<int> suffix;
    return done_rec(e, role_ctx, world, suffix);
}

// ---- abilities ----

bool Checker::capable(GroupMask g, const Action& a, int world) {
    std::vector<std::string> atoms;
    if (a.kind == Action::Kind::Achieve) {
        for (const auto& x : achievers(g, *a.goal, world))
            if (!capable(g, *x, world)) return false;
        return true;
    }
    collect_atoms(a, atoms);
    std::vector<const Action*> nested;
    std::function<void(const Action&)> find_achieve = [&](const Action& x) {
        if (x.kind == Action::Kind::Achieve) nested.push_back(&x);
        if (x.lhs) find_achieve(*x.lhs);
        if (x.rhs) find_achieve(*x.rhs);
    };
    find_achieve(a);
    for (const auto* x : nested)
        if (!capable(g, *x, world)) return false;
    auto members = m_.vocab.group_names(g);
    for (const auto& name : atoms) {
        bool some = false;
        for (const auto& ag : members)
            if (m_.capable(ag, name)) some = true;
        if (!some) return false;
    }
    return true;
}

bool Checker::able(GroupMask g, const Action& a, int world) {
    QUERY_SCOPE();
    if (!capable(g, a, world)) return false;
    return !matcher_.successors(compile_collective(g, a, world), world).empty();
}

const std::vector<ActionPtr>& Checker::repertoire() {
    if (repertoire_ready_) return repertoire_;
    std::vector<std::vector<ActionPtr>> levels(1);
    for (const auto& name : m_.vocab.actions()) levels[0].push_back(act_atom(name));
    std::size_t total = levels[0].size();
    auto check = [&] {
        if (total > opts_.max_candidates)
            throw BoundExceeded("action repertoire exceeds " + std::to_string(opts_.max_candidates) +
                                " candidates at bound " + std::to_string(opts_.bound));
    };
    check();
    for (int d = 1; d < opts_.bound; ++d) {
        std::vector<ActionPtr> lvl;
        std::vector<ActionPtr> below;
        for (const auto& l : levels)
            below.insert(below.end(), l.begin(), l.end());
        const auto& prev = levels.back();
        for (const auto& x : prev) {
            lvl.push_back(act_neg(x));
            ++total;
        }
        check();
        for (auto k : {Action::Kind::Seq, Action::Kind::Par, Action::Kind::Choice}) {
            for (const auto& x : below)
                for (const auto& y : below) {
                    bool fresh = std::find(prev.begin(), prev.end(), x) != prev.end() ||
                                 std::find(prev.begin(), prev.end(), y) != prev.end();
                    if (!fresh) continue;
                    lvl.push_back(act_bin(k, x, y));
                    if (++total > opts_.max_candidates) check();
                }
        }
        levels.push_back(std::move(lvl));
    }
    for (auto& l : levels) repertoire_.insert(repertoire_.end(), l.begin(), l.end());
    repertoire_ready_ = true;
    return repertoire_;
}

std::vector<ActionPtr> Checker::achievers(GroupMask g, const Assertion& goal, int world) {
    QUERY_SCOPE();
    std::vector<ActionPtr> out;
    for (const auto& a : repertoire()) {
        auto succ = matcher_.successors(compile_collective(g, *a, world), world);
        if (succ.empty()) continue;
        bool all = true;
        for (int w : succ)
            if (!ev(goal, w)) {
                all = false;
                break;
            }
        if (all) out.push_back(a);
    }
    return out;
}

// ---- contexts and roles ----

bool Checker::salient(const std::string& ctx, int world) const {
    const auto& c = m_.context_or_throw(ctx);
    if (!std::binary_search(c.worlds.begin(), c.worlds.end(), world)) return false;
    for (const auto& other : m_.contexts) {
        if (other.name == c.name) continue;
        if (!std::binary_search(other.worlds.begin(), other.worlds.end(), world)) continue;
        bool subset = std::includes(c.worlds.begin(), c.worlds.end(), other.worlds.begin(), other.worlds.end());
        if (subset && other.worlds.size() < c.worlds.size()) return false;
    }
    return true;
}

std::vector<std::string> Checker::salient_contexts(int world) const {
    std::vector<std::string> out;
    for (const auto& c : m_.contexts)
        if (salient(c.name, world)) out.push_back(c.name);
    return out;
}

std::vector<std::string> Checker::role_players(const std::string& role, int world, const std::string& ctx) const {
    if (!ctx.empty()) return m_.players(role, ctx, world);
    std::set<std::string> acc;
    for (const auto& c : salient_contexts(world))
        for (const auto& a : m_.players(role, c, world)) acc.insert(a);
    std::vector<std::string> out;
    for (const auto& a : m_.vocab.agents())
        if (acc.count(a)) out.push_back(a);
    return out;
}

std::set<int> Checker::common_belief_worlds(const std::vector<std::string>& agents, int world) const {
    std::set<int> seen;
    std::deque<int> queue{world};
    std::vector<int> idx;
    for (const auto& a : agents) idx.push_back(m_.vocab.agent_index(a));
    while (!queue.empty()) {
        int w = queue.front();
        queue.pop_front();
        for (int a : idx)
            for (int v : m_.belief[a][w])
                if (seen.insert(v).second) queue.push_back(v);
    }
    return seen;
}

EventPtr Checker::step_event(const Step& s, const Vocabulary& v) {
    auto sp = s.sparse();
    if (sp.empty()) return ev_skip();
    EventPtr acc;
    for (auto [g, acts] : sp)
        for (const auto& name : v.action_names(acts)) {
            auto e = ev_perform(v.group_names(g), act_atom(name));
            acc = acc ? ev_bin(Event::Kind::Par, acc, e) : e;
        }
    return acc;
}

EventPtr Checker::trace_event(const std::vector<int>& labels, const KripkeModel& m) {
    EventPtr acc;
    for (int l : labels) {
        auto e = step_event(m.universe()[l], m.vocab);
        acc = acc ? ev_bin(Event::Kind::Seq, acc, e) : e;
    }
    return acc ? acc : ev_skip();
}

}  // namespace socprac
