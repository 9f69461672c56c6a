#include "socprac/ast.hpp"

#include <algorithm>

namespace socprac {

ActionPtr act_atom(std::string name) {
    auto a = std::make_shared<Action>();
    a->kind = Action::Kind::Atom;
    a->name = std::move(name);
    return a;
}

ActionPtr act_skip() {
    auto a = std::make_shared<Action>();
    a->kind = Action::Kind::Skip;
    return a;
}

ActionPtr act_neg(ActionPtr x) {
    auto a = std::make_shared<Action>();
    a->kind = Action::Kind::Neg;
    a->lhs = std::move(x);
    return a;
}

ActionPtr act_bin(Action::Kind k, ActionPtr l, ActionPtr r) {
    auto a = std::make_shared<Action>();
    a->kind = k;
    a->lhs = std::move(l);
    a->rhs = std::move(r);
    return a;
}

ActionPtr act_achieve(AssertionPtr goal) {
    auto a = std::make_shared<Action>();
    a->kind = Action::Kind::Achieve;
    a->goal = std::move(goal);
    return a;
}

EventPtr ev_perform(std::vector<std::string> agents, ActionPtr a) {
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
    auto e = std::make_shared<Event>();
    e->kind = Event::Kind::Perform;
    e->agents = std::move(agents);
    e->action = std::move(a);
    return e;
}

EventPtr ev_role(std::string role, ActionPtr a) {
    auto e = std::make_shared<Event>();
    e->kind = Event::Kind::PerformRole;
    e->role = std::move(role);
    e->action = std::move(a);
    return e;
}

EventPtr ev_skip() {
    auto e = std::make_shared<Event>();
    e->kind = Event::Kind::Skip;
    return e;
}

EventPtr ev_neg(EventPtr x) {
    auto e = std::make_shared<Event>();
    e->kind = Event::Kind::Neg;
    e->lhs = std::move(x);
    return e;
}

EventPtr ev_bin(Event::Kind k, EventPtr l, EventPtr r) {
    auto e = std::make_shared<Event>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

AssertionPtr as_const(bool v) {
    auto a = std::make_shared<Assertion>();
    a->kind = v ? Assertion::Kind::True : Assertion::Kind::False;
    return a;
}

AssertionPtr as_atom(std::string name) {
    auto a = std::make_shared<Assertion>();
    a->kind = Assertion::Kind::Atom;
    a->id = std::move(name);
    return a;
}

AssertionPtr as_violation(std::string id) {
    auto a = std::make_shared<Assertion>();
    a->kind = Assertion::Kind::Violation;
    a->id = std::move(id);
    return a;
}

AssertionPtr as_not(AssertionPtr x) {
    auto a = std::make_shared<Assertion>();
    a->kind = Assertion::Kind::Not;
    a->sub = {std::move(x)};
    return a;
}

AssertionPtr as_bin(Assertion::Kind k, AssertionPtr l, AssertionPtr r) {
    auto a = std::make_shared<Assertion>();
    a->kind = k;
    a->sub = {std::move(l), std::move(r)};
    return a;
}

AssertionPtr as_event(Assertion::Kind k, EventPtr e) {
    auto a = std::make_shared<Assertion>();
    a->kind = k;
    a->event = std::move(e);
    return a;
}

AssertionPtr as_modal(Assertion::Kind k, EventPtr e, AssertionPtr body) {
    auto a = std::make_shared<Assertion>();
    a->kind = k;
    a->event = std::move(e);
    a->sub = {std::move(body)};
    return a;
}

AssertionPtr as_agents(Assertion::Kind k, std::vector<std::string> agents, AssertionPtr body) {
    std::sort(agents.begin(), agents.end());
    agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
    auto a = std::make_shared<Assertion>();
    a->kind = k;
    a->agents = std::move(agents);
    a->sub = {std::move(body)};
    return a;
}

AssertionPtr as_and_all(const std::vector<AssertionPtr>& parts) {
    if (parts.empty()) return as_const(true);
    AssertionPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = as_bin(Assertion::Kind::And, acc, parts[i]);
    return acc;
}

AssertionPtr as_or_all(const std::vector<AssertionPtr>& parts) {
    if (parts.empty()) return as_const(false);
    AssertionPtr acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = as_bin(Assertion::Kind::Or, acc, parts[i]);
    return acc;
}

PlanPtr plan_leaf(ActionPtr a, AssertionPtr goal) {
    auto p = std::make_shared<PlanPattern>();
    p->kind = PlanPattern::Kind::Leaf;
    p->action = std::move(a);
    p->goal = std::move(goal);
    return p;
}

PlanPtr plan_bin(PlanPattern::Kind k, PlanPtr l, PlanPtr r) {
    auto p = std::make_shared<PlanPattern>();
    p->kind = k;
    p->lhs = std::move(l);
    p->rhs = std::move(r);
    return p;
}

namespace {
PlanPtr renumber(const PlanPtr& p, int& next) {
    auto q = std::make_shared<PlanPattern>(*p);
    if (p->kind == PlanPattern::Kind::Leaf) {
        q->index = next++;
    } else {
        q->lhs = renumber(p->lhs, next);
        q->rhs = renumber(p->rhs, next);
    }
    return q;
}

void leaves_of(const PlanPattern& p, std::vector<const PlanPattern*>& out) {
    if (p.kind == PlanPattern::Kind::Leaf) {
        out.push_back(&p);
        return;
    }
    leaves_of(*p.lhs, out);
    leaves_of(*p.rhs, out);
}

template <class T>
bool eq_ptr(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
    if (!a || !b) return !a && !b;
    return equal(*a, *b);
}
}  // namespace

PlanPtr plan_number(const PlanPtr& p) {
    int next = 1;
    return renumber(p, next);
}

std::vector<const PlanPattern*> plan_leaves(const PlanPattern& p) {
    std::vector<const PlanPattern*> out;
    leaves_of(p, out);
    return out;
}

bool equal(const Action& a, const Action& b) {
    return a.kind == b.kind && a.name == b.name && eq_ptr(a.lhs, b.lhs) && eq_ptr(a.rhs, b.rhs) &&
           eq_ptr(a.goal, b.goal);
}

bool equal(const Event& a, const Event& b) {
    return a.kind == b.kind && a.agents == b.agents && a.role == b.role && eq_ptr(a.action, b.action) &&
           eq_ptr(a.lhs, b.lhs) && eq_ptr(a.rhs, b.rhs);
}

bool equal(const Assertion& a, const Assertion& b) {
    if (a.kind != b.kind || a.id != b.id || a.ctx != b.ctx || a.role != b.role || a.value != b.value ||
        a.agents != b.agents || a.weak != b.weak || a.sub.size() != b.sub.size())
        return false;
    if (!eq_ptr(a.event, b.event) || !eq_ptr(a.action, b.action) || !eq_ptr(a.action2, b.action2)) return false;
    for (std::size_t i = 0; i < a.sub.size(); ++i)
        if (!eq_ptr(a.sub[i], b.sub[i])) return false;
    return true;
}

bool equal(const PlanPattern& a, const PlanPattern& b) {
    return a.kind == b.kind && eq_ptr(a.action, b.action) && eq_ptr(a.goal, b.goal) && eq_ptr(a.lhs, b.lhs) &&
           eq_ptr(a.rhs, b.rhs);
}

void collect_atoms(const Action& a, std::vector<std::string>& out) {
    switch (a.kind) {
        case Action::Kind::Atom: out.push_back(a.name); break;
        case Action::Kind::Skip:
        case Action::Kind::Achieve: break;
        case Action::Kind::Neg: collect_atoms(*a.lhs, out); break;
        default:
            collect_atoms(*a.lhs, out);
            collect_atoms(*a.rhs, out);
    }
}

bool is_monotone(const Action& a) {
    switch (a.kind) {
        case Action::Kind::Atom:
        case Action::Kind::Skip: return true;
        case Action::Kind::Seq:
        case Action::Kind::Par: return is_monotone(*a.lhs) && is_monotone(*a.rhs);
        default: return false;
    }
}

}  // namespace socprac
