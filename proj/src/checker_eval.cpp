#include <algorithm>

#include "socprac/checker.hpp"
#include "socprac/lang.hpp"

namespace socprac {

namespace {
using K = Assertion::Kind;

AssertionPtr make(K k) {
    auto a = std::make_shared<Assertion>();
    a->kind = k;
    return a;
}

AssertionPtr salient_node(std::vector<std::string> agents, ActionPtr act, const std::string& ctx) {
    auto a = std::make_shared<Assertion>();
    a->kind = K::Salient;
    std::sort(agents.begin(), agents.end());
    a->agents = std::move(agents);
    a->action = std::move(act);
    a->ctx = ctx;
    return a;
}

AssertionPtr obligation(const std::string& id, EventPtr e) {
    auto a = std::make_shared<Assertion>();
    a->kind = K::Obligation;
    a->id = id;
    a->event = std::move(e);
    return a;
}

AssertionPtr AND(AssertionPtr l, AssertionPtr r) { return as_bin(K::And, std::move(l), std::move(r)); }
AssertionPtr IMP(AssertionPtr l, AssertionPtr r) { return as_bin(K::Implies, std::move(l), std::move(r)); }

// CB_{A_c}((Salient ∧ DO(doing)) → Goal_a(φ) ∧ B_a([effect]φ))
AssertionPtr purpose_body(const std::vector<std::string>& actors, AssertionPtr salient, EventPtr doing,
                          const std::string& agent, const AssertionPtr& goal, EventPtr effect) {
    auto ante = AND(std::move(salient), as_event(K::Do, std::move(doing)));
    auto cons = AND(as_agents(K::Goal, {agent}, goal), as_agents(K::Belief, {agent}, as_modal(K::Box, effect, goal)));
    return as_agents(K::CommonBelief, actors, IMP(ante, cons));
}

void flatten_choice(const ActionPtr& a, std::vector<ActionPtr>& out) {
    if (a->kind == Action::Kind::Choice) {
        flatten_choice(a->lhs, out);
        flatten_choice(a->rhs, out);
    } else {
        out.push_back(a);
    }
}
}  // namespace

void Checker::basic_actions(const Action& a, GroupMask g, int world, std::vector<ActionPtr>& out) {
    auto add = [&](ActionPtr x) {
        auto s = print(*x);
        for (const auto& y : out)
            if (print(*y) == s) return;
        out.push_back(std::move(x));
    };
    switch (a.kind) {
        case Action::Kind::Atom: add(act_atom(a.name)); break;
        case Action::Kind::Skip: break;
        case Action::Kind::Neg: add(std::make_shared<Action>(a)); break;
        case Action::Kind::Achieve:
            for (const auto& x : achievers(g, *a.goal, world)) basic_actions(*x, g, world, out);
            break;
        default:
            basic_actions(*a.lhs, g, world, out);
            basic_actions(*a.rhs, g, world, out);
    }
}

AssertionPtr Checker::expand(const Assertion& a, int world) {
    const auto& agents = m_.vocab.agents();
    switch (a.kind) {
        case K::Obligation: return as_modal(K::Box, ev_neg(a.event), as_violation(a.id));
        case K::Prohibition: return as_modal(K::Box, a.event, as_violation(a.id));
        case K::Permission: return as_not(as_modal(K::Box, a.event, as_violation(a.id)));
        case K::NormO:
        case K::NormF:
        case K::NormP: {
            std::vector<AssertionPtr> parts;
            for (const auto& ag : agents) {
                auto play = make(K::Play);
                std::const_pointer_cast<Assertion>(play)->id = ag;
                std::const_pointer_cast<Assertion>(play)->role = a.role;
                auto guard = AND(play, as_agents(K::Belief, {ag}, a.sub[0]));
                auto doing = ev_perform({ag}, a.action);
                AssertionPtr cons;
                if (a.kind == K::NormP) {
                    auto p = make(K::Permission);
                    std::const_pointer_cast<Assertion>(p)->id = a.id;
                    std::const_pointer_cast<Assertion>(p)->event = doing;
                    cons = p;
                } else {
                    auto sanction = obligation(a.id + "_s", ev_perform({ag}, a.action2));
                    if (a.kind == K::NormO) {
                        cons = AND(obligation(a.id, doing), as_modal(K::Box, ev_neg(doing), sanction));
                    } else {
                        auto f = make(K::Prohibition);
                        std::const_pointer_cast<Assertion>(f)->id = a.id;
                        std::const_pointer_cast<Assertion>(f)->event = doing;
                        cons = AND(f, as_modal(K::Box, doing, sanction));
                    }
                }
                parts.push_back(IMP(guard, cons));
            }
            return as_and_all(parts);
        }
        case K::PurposeBasic: {
            const auto& c = m_.context_or_throw(a.ctx);
            auto e = ev_perform({a.id}, a.action);
            return purpose_body(c.actors, salient_node({a.id}, a.action, a.ctx), e, a.id, a.sub[0], e);
        }
        case K::PurposeGeneral: {
            const auto& c = m_.context_or_throw(a.ctx);
            std::vector<ActionPtr> alts;
            if (a.action->kind == Action::Kind::Achieve)
                alts = achievers(m_.vocab.all_agents(), *a.action->goal, world);
            else
                flatten_choice(a.action, alts);
            std::vector<AssertionPtr> parts;
            if (alts.size() == 1 && alts[0] == a.action) {
                for (const auto& ag : c.actors) {
                    auto e = ev_perform({ag}, a.action);
                    parts.push_back(purpose_body(c.actors, salient_node({ag}, a.action, a.ctx), e, ag, a.sub[0], e));
                }
            } else {
                for (const auto& alt : alts) {
                    auto g = std::make_shared<Assertion>(a);
                    g->action = alt;
                    parts.push_back(g);
                }
            }
            return as_and_all(parts);
        }
        case K::PurposeComplex: {
            const auto& c = m_.context_or_throw(a.ctx);
            std::vector<ActionPtr> basics;
            basic_actions(*a.action, group({a.id}), world, basics);
            std::vector<AssertionPtr> parts;
            for (const auto& b : basics)
                parts.push_back(purpose_body(c.actors, salient_node({a.id}, a.action, a.ctx), ev_perform({a.id}, b),
                                             a.id, a.sub[0], ev_perform({a.id}, a.action)));
            return as_and_all(parts);
        }
        case K::PurposeGroup:
        case K::PurposeRole: {
            const auto& c = m_.context_or_throw(a.ctx);
            std::vector<std::string> who = a.kind == K::PurposeGroup ? a.agents : m_.players(a.role, a.ctx, world);
            if (who.empty()) return as_const(true);
            std::vector<ActionPtr> basics;
            basic_actions(*a.action, group(who), world, basics);
            std::vector<AssertionPtr> parts;
            for (const auto& b : basics) {
                std::vector<AssertionPtr> alts;
                for (const auto& ag : who)
                    alts.push_back(purpose_body(c.actors, salient_node(c.actors, a.action, a.ctx), ev_perform({ag}, b),
                                                ag, a.sub[0], ev_perform({}, a.action)));
                parts.push_back(as_or_all(alts));
            }
            return as_and_all(parts);
        }
        case K::PurposePractice: {
            if (!delta_) throw EvalError("purpose(" + a.ctx + ", ...) needs a loaded practice");
            const auto& c = m_.context_or_throw(a.ctx);
            std::vector<AssertionPtr> parts;
            for (const auto& delta : delta_(a.ctx)) {
                auto e = trace_event(delta, m_);
                for (const auto& ag : c.actors)
                    parts.push_back(purpose_body(c.actors, salient_node({ag}, act_skip(), a.ctx), e, ag, a.sub[0], e));
            }
            return as_and_all(parts);
        }
        case K::Strategy: {
            const auto& c = m_.context_or_throw(a.ctx);
            std::vector<std::string> b;
            const Event& e = *a.event;
            if (e.kind == Event::Kind::PerformRole)
                b = m_.players(e.role, a.ctx, world);
            else
                b = e.agents.empty() ? agents : e.agents;
            auto active = make(K::Active);
            std::const_pointer_cast<Assertion>(active)->ctx = a.ctx;
            auto ante = AND(as_agents(K::CommonBelief, c.actors, as_agents(K::CommonBelief, b, a.sub[0])),
                            as_agents(K::CommonBelief, c.actors, active));
            AssertionPtr cons;
            if (!a.weak) {
                cons = as_agents(K::CommonBelief, c.actors, as_event(K::Do, a.event));
            } else if (b.empty()) {
                cons = as_const(false);
            } else {
                cons = as_agents(K::CommonBelief, c.actors, as_agents(K::Attempt, b, as_event(K::Done, a.event)));
            }
            return IMP(ante, cons);
        }
        default: return nullptr;
    }
}

bool Checker::countsas(const Assertion& a) {
    const auto& c = m_.context_or_throw(a.ctx);
    for (int w : c.worlds) {
        auto s2 = matcher_.successors(compile_collective(m_.vocab.all_agents(), *a.action2, w), w);
        for (const auto& ag : m_.vocab.agents()) {
            if (!m_.rea(ag, a.role, w)) continue;
            GroupMask g = group({ag});
            auto s1 = matcher_.successors(compile_collective(g, *a.action, w), w);
            auto cb = common_belief_worlds(c.actors, w);
            for (int p = 0; p < static_cast<int>(m_.atoms.size()); ++p)
                for (bool pol : {true, false}) {
                    auto box = [&](const std::set<int>& s) {
                        return std::all_of(s.begin(), s.end(), [&](int x) { return m_.valuation[x][p] == pol; });
                    };
                    if (!box(s2)) continue;
                    if (!box(s1)) return false;
                    for (int u : cb)
                        if (!box(matcher_.successors(compile_collective(g, *a.action, u), u))) return false;
                }
        }
    }
    return true;
}

bool Checker::eval_core(const Assertion& a, int w) {
    switch (a.kind) {
        case K::True: return true;
        case K::False: return false;
        case K::Atom: return m_.holds(w, a.id);
        case K::Violation: return m_.holds(w, "V#" + a.id);
        case K::Not: return !ev(*a.sub[0], w);
        case K::And: return ev(*a.sub[0], w) && ev(*a.sub[1], w);
        case K::Or: return ev(*a.sub[0], w) || ev(*a.sub[1], w);
        case K::Implies: return !ev(*a.sub[0], w) || ev(*a.sub[1], w);
        case K::Done: return eval_done(*a.event, w);
        case K::Do: return eval_do(*a.event, w);
        case K::Cap: return capable(group({a.id}), *a.action, w);
        case K::Box:
        case K::Diamond: {
            auto succ = matcher_.successors(compile(*a.event, w), w);
            if (a.kind == K::Box)
                return std::all_of(succ.begin(), succ.end(), [&](int v) { return ev(*a.sub[0], v); });
            return std::any_of(succ.begin(), succ.end(), [&](int v) { return ev(*a.sub[0], v); });
        }
        case K::Belief:
        case K::Goal: {
            int ag = m_.vocab.agent_index(a.agents.at(0));
            const auto& rel = a.kind == K::Belief ? m_.belief[ag][w] : m_.goal[ag][w];
            return std::all_of(rel.begin(), rel.end(), [&](int v) { return ev(*a.sub[0], v); });
        }
        case K::EveryoneBelieves:
            for (const auto& name : a.agents) {
                int ag = m_.vocab.agent_index(name);
                for (int v : m_.belief[ag][w])
                    if (!ev(*a.sub[0], v)) return false;
            }
            return true;
        case K::CommonBelief:
            for (int v : common_belief_worlds(a.agents, w))
                if (!ev(*a.sub[0], v)) return false;
            return true;
        case K::AbleAction: return able(group(a.agents), *a.action, w);
        case K::AbleTo:
        case K::Attempt:
        case K::Stit: {
            GroupMask g = group(a.agents);
            for (const auto& alpha : repertoire()) {
                auto e = ev_perform(a.agents, alpha);
                event_arena_.push_back(e);
                auto succ = matcher_.successors(compile(*e, w), w);
                if (a.kind == K::AbleTo) {
                    if (!capable(g, *alpha, w)) continue;
                } else if (!eval_do(*e, w)) {
                    continue;
                }
                bool ok = a.kind == K::Stit
                              ? std::all_of(succ.begin(), succ.end(), [&](int v) { return ev(*a.sub[0], v); })
                              : std::any_of(succ.begin(), succ.end(), [&](int v) { return ev(*a.sub[0], v); });
                if (ok) return true;
            }
            return false;
        }
        case K::DoPart:
        case K::DonePart: {
            if (std::find(a.agents.begin(), a.agents.end(), a.id) == a.agents.end()) return false;
            std::vector<std::string> atoms;
            collect_atoms(*a.action, atoms);
            if (std::find(atoms.begin(), atoms.end(), a.action2->name) == atoms.end()) return false;
            auto part = ev_perform({a.id}, a.action2);
            auto whole = ev_perform(a.agents, a.action);
            event_arena_.push_back(part);
            event_arena_.push_back(whole);
            if (a.kind == K::DoPart) return eval_do(*part, w) && eval_do(*whole, w);
            return eval_done(*part, w) && eval_done(*whole, w);
        }
        case K::CountsAs: return countsas(a);
        case K::Promotes:
        case K::Demotes: {
            const auto& c = m_.context_or_throw(a.ctx);
            if (!std::binary_search(c.worlds.begin(), c.worlds.end(), w)) return false;
            for (const auto& ag : m_.vocab.agents()) {
                if (!m_.rea(ag, a.role, w)) continue;
                for (int v : matcher_.successors(compile_collective(group({ag}), *a.action, w), w)) {
                    bool ok = a.kind == K::Promotes ? m_.value_less(a.value, w, v) : m_.value_less(a.value, v, w);
                    if (!ok) return false;
                }
            }
            return true;
        }
        case K::Affords: {
            auto text = print(*a.action);
            for (const auto& f : m_.affords)
                if (f.context == a.ctx && f.objects == a.agents && f.action == text) return true;
            return false;
        }
        case K::Available:
            for (const auto& f : m_.available)
                if (f.context == a.ctx && f.objects == a.agents) return true;
            return false;
        case K::Play:
            if (!a.ctx.empty()) return m_.play(a.id, a.role, a.ctx, w);
            for (const auto& c : salient_contexts(w))
                if (m_.play(a.id, a.role, c, w)) return true;
            return false;
        case K::Active: {
            const auto& c = m_.context_or_throw(a.ctx);
            return std::binary_search(c.worlds.begin(), c.worlds.end(), w);
        }
        case K::StartCond:
        case K::EndCond: {
            auto marked = a.kind == K::StartCond ? context_start(m_, a.ctx) : context_end(m_, a.ctx);
            for (int u = 0; u < static_cast<int>(m_.worlds.size()); ++u) {
                bool in = std::find(marked.begin(), marked.end(), u) != marked.end();
                if (ev(*a.sub[0], u) != in) return false;
            }
            return true;
        }
        case K::Salient: {
            if (!salient(a.ctx, w)) return false;
            const auto& c = m_.context_or_throw(a.ctx);
            for (const auto& ag : a.agents)
                if (std::find(c.actors.begin(), c.actors.end(), ag) == c.actors.end()) return false;
            return true;
        }
        default: {
            auto x = expand(a, w);
            if (!x) throw EvalError("cannot evaluate " + print(a));
            arena_.push_back(x);
            return ev(*x, w);
        }
    }
}

namespace {
// Replace atoms whose base name has a variant qualified by one of the objects.
ActionPtr instantiate(const ActionPtr& a, const std::vector<std::string>& objects, const Vocabulary& v) {
    if (a->kind == Action::Kind::Atom) {
        for (const auto& o : objects) {
            std::string q = a->name + "@" + o;
            if (v.action_index(q) >= 0) return act_atom(q);
        }
        return a;
    }
    if (a->kind == Action::Kind::Skip || a->kind == Action::Kind::Achieve) return a;
    auto c = std::make_shared<Action>(*a);
    if (a->lhs) c->lhs = instantiate(a->lhs, objects, v);
    if (a->rhs) c->rhs = instantiate(a->rhs, objects, v);
    return c;
}
}  // namespace

std::vector<AffordanceViolation> Checker::affordance_axiom_violations() {
    std::vector<AffordanceViolation> out;
    for (const auto& f : m_.affords) {
        bool avail = false;
        for (const auto& av : m_.available)
            if (av.context == f.context && av.objects == f.objects) avail = true;
        if (!avail) continue;
        const auto& c = m_.context_or_throw(f.context);
        auto act = instantiate(parse_action(f.action, &m_), f.objects, m_.vocab);
        for (int w : c.worlds)
            for (const auto& r : c.roles)
                for (const auto& ag : m_.players(r, c.name, w))
                    if (!able(group({ag}), *act, w))
                        out.push_back({w, ag, r, c.name, print(*act), f.objects});
    }
    return out;
}

}  // namespace socprac
