#include "gen.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace socprac::testgen {

using K = Assertion::Kind;

std::vector<std::string> Rng::subset(const std::vector<std::string>& v, bool nonempty) {
    std::vector<std::string> out;
    do {
        out.clear();
        for (const auto& x : v)
            if (chance(0.5)) out.push_back(x);
    } while (nonempty && out.empty());
    return out;  // keeps v's order, which is sorted for the default names
}

namespace {

std::shared_ptr<Assertion> node(K k) {
    auto a = std::make_shared<Assertion>();
    a->kind = k;
    return a;
}

std::string tag(Rng& r) { return std::to_string(r.uniform(1, 9)); }

ActionPtr atom_action(Rng& r, const Names& n) { return act_atom(r.pick(n.actions)); }

}  // namespace

ActionPtr action(Rng& r, const Names& n, int depth, bool achieve) {
    int roll = depth <= 0 ? r.uniform(0, 9) : r.uniform(0, 15);
    if (roll <= 7) return atom_action(r, n);
    if (roll == 8) return act_skip();
    if (roll == 9) return achieve ? act_achieve(as_atom(r.pick(n.atoms))) : atom_action(r, n);
    if (roll <= 11) return act_neg(action(r, n, depth - 1, achieve));
    static const Action::Kind bins[] = {Action::Kind::Choice, Action::Kind::Seq, Action::Kind::Par};
    return act_bin(bins[r.uniform(0, 2)], action(r, n, depth - 1, achieve), action(r, n, depth - 1, achieve));
}

EventPtr event(Rng& r, const Names& n, int depth, bool roles) {
    int roll = depth <= 0 ? r.uniform(0, 9) : r.uniform(0, 15);
    if (roll <= 5) return ev_perform(r.subset(n.agents, true), action(r, n, depth - 1));
    if (roll <= 6) return ev_perform({}, atom_action(r, n));
    if (roll <= 7) return roles ? ev_role(r.pick(n.roles), action(r, n, depth - 1)) : ev_perform({r.pick(n.agents)}, atom_action(r, n));
    if (roll <= 9) return depth <= 0 ? ev_skip() : ev_neg(event(r, n, depth - 1, roles));
    if (roll <= 10) return ev_skip();
    static const Event::Kind bins[] = {Event::Kind::Choice, Event::Kind::Seq, Event::Kind::Par};
    return ev_bin(bins[r.uniform(0, 2)], event(r, n, depth - 1, roles), event(r, n, depth - 1, roles));
}

AssertionPtr core_assertion(Rng& r, const Names& n, int depth, int event_depth) {
    if (depth <= 0) {
        int roll = r.uniform(0, 9);
        if (roll == 0) return as_const(r.chance(0.5));
        return as_atom(r.pick(n.atoms));
    }
    auto sub = [&] { return core_assertion(r, n, depth - 1, event_depth); };
    switch (r.uniform(0, 13)) {
        case 0: return as_atom(r.pick(n.atoms));
        case 1: return as_not(sub());
        case 2: return as_bin(K::And, sub(), sub());
        case 3: return as_bin(K::Or, sub(), sub());
        case 4: return as_bin(K::Implies, sub(), sub());
        case 5: return as_modal(K::Box, event(r, n, event_depth), sub());
        case 6: return as_modal(K::Diamond, event(r, n, event_depth), sub());
        case 7: return as_agents(K::Belief, {r.pick(n.agents)}, sub());
        case 8: return as_agents(K::EveryoneBelieves, r.subset(n.agents, true), sub());
        case 9: return as_agents(K::CommonBelief, r.subset(n.agents, true), sub());
        case 10: return as_agents(K::Goal, {r.pick(n.agents)}, sub());
        case 11: return as_event(K::Done, event(r, n, event_depth));
        case 12: return as_event(K::Do, event(r, n, event_depth));
        default: {
            auto a = node(K::Cap);
            a->id = r.pick(n.agents);
            a->action = action(r, n, 1);
            return a;
        }
    }
}

AssertionPtr any_assertion(Rng& r, const Names& n, int depth) {
    if (depth <= 0) {
        switch (r.uniform(0, 3)) {
            case 0: return as_const(r.chance(0.5));
            case 1: return as_violation(tag(r));
            default: return as_atom(r.pick(n.atoms));
        }
    }
    auto sub = [&] { return any_assertion(r, n, depth - 1); };
    auto act = [&] { return action(r, n, 1, true); };
    int roll = r.uniform(0, 33);
    if (roll <= 12) {
        auto a = std::const_pointer_cast<Assertion>(core_assertion(r, n, 1));
        // Replace the generated children with deeper, richer ones.
        for (auto& s : a->sub) s = sub();
        if (a->event) a->event = event(r, n, 1, true);
        return a;
    }
    auto a = node(K::True);
    switch (roll) {
        case 13: a->kind = K::AbleAction; a->agents = r.subset(n.agents, true); a->action = act(); break;
        case 14: a->kind = K::AbleTo; a->agents = r.subset(n.agents, true); a->sub = {sub()}; break;
        case 15: a->kind = K::Attempt; a->agents = r.subset(n.agents, true); a->sub = {sub()}; break;
        case 16: a->kind = K::Stit; a->agents = r.subset(n.agents, true); a->sub = {sub()}; break;
        case 17:
            a->kind = r.chance(0.5) ? K::DoPart : K::DonePart;
            a->id = r.pick(n.agents);
            a->action2 = atom_action(r, n);
            a->agents = r.subset(n.agents, true);
            a->action = act();
            break;
        case 18:
            a->kind = r.pick(std::vector<K>{K::Obligation, K::Prohibition, K::Permission});
            a->id = tag(r);
            a->event = event(r, n, 1, true);
            break;
        case 19:
            a->kind = r.pick(std::vector<K>{K::NormO, K::NormF, K::NormP});
            a->id = tag(r);
            a->role = r.pick(n.roles);
            a->sub = {sub()};
            a->action = act();
            if (a->kind != K::NormP) a->action2 = act();
            break;
        case 20: a->kind = K::PurposeBasic; a->id = r.pick(n.agents); a->action = act(); a->ctx = r.pick(n.contexts); a->sub = {sub()}; break;
        case 21: a->kind = K::PurposeGeneral; a->action = act(); a->ctx = r.pick(n.contexts); a->sub = {sub()}; break;
        case 22: a->kind = K::PurposeComplex; a->id = r.pick(n.agents); a->action = act(); a->ctx = r.pick(n.contexts); a->sub = {sub()}; break;
        case 23: a->kind = K::PurposeGroup; a->agents = r.subset(n.agents, true); a->action = act(); a->ctx = r.pick(n.contexts); a->sub = {sub()}; break;
        case 24: a->kind = K::PurposeRole; a->role = r.pick(n.roles); a->action = act(); a->ctx = r.pick(n.contexts); a->sub = {sub()}; break;
        case 25: a->kind = K::PurposePractice; a->ctx = r.pick(n.contexts); a->sub = {sub()}; break;
        case 26:
            a->kind = K::Strategy;
            a->sub = {sub()};
            a->weak = r.chance(0.3);
            a->event = r.chance(0.5) ? ev_role(r.pick(n.roles), act()) : ev_perform(r.subset(n.agents, true), act());
            a->ctx = r.pick(n.contexts);
            break;
        case 27: a->kind = K::CountsAs; a->ctx = r.pick(n.contexts); a->role = r.pick(n.roles); a->action = act(); a->action2 = act(); break;
        case 28:
            a->kind = r.chance(0.5) ? K::Promotes : K::Demotes;
            a->ctx = r.pick(n.contexts);
            a->role = r.pick(n.roles);
            a->action = act();
            a->value = r.pick(n.values);
            break;
        case 29: a->kind = K::Affords; a->agents = r.subset(n.objects, true); a->action = act(); a->ctx = r.pick(n.contexts); break;
        case 30: a->kind = K::Available; a->agents = r.subset(n.objects, true); a->ctx = r.pick(n.contexts); break;
        case 31:
            a->kind = K::Play;
            a->id = r.pick(n.agents);
            a->role = r.pick(n.roles);
            if (r.chance(0.5)) a->ctx = r.pick(n.contexts);
            break;
        case 32:
            a->kind = r.pick(std::vector<K>{K::Active, K::StartCond, K::EndCond});
            a->ctx = r.pick(n.contexts);
            if (a->kind != K::Active) a->sub = {sub()};
            break;
        default: a->kind = K::Salient; a->agents = r.subset(n.agents, true); a->action = act(); a->ctx = r.pick(n.contexts); break;
    }
    return a;
}

PlanPtr plan(Rng& r, const Names& n, int depth) {
    if (depth <= 0 || r.chance(0.35)) return plan_leaf(action(r, n, 1, true), any_assertion(r, n, 1));
    static const PlanPattern::Kind bins[] = {PlanPattern::Kind::Choice, PlanPattern::Kind::Seq, PlanPattern::Kind::Par};
    return plan_number(plan_bin(bins[r.uniform(0, 2)], plan(r, n, depth - 1), plan(r, n, depth - 1)));
}

namespace {

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}

}  // namespace

std::string model_text(Rng& r, const ModelShape& s) {
    std::vector<std::string> agents, actions, atoms, worlds;
    for (int i = 0; i < s.agents; ++i) agents.push_back("a" + std::to_string(i));
    for (int i = 0; i < s.actions; ++i) actions.push_back("x" + std::to_string(i));
    for (int i = 0; i < s.atoms; ++i) atoms.push_back("p" + std::to_string(i));
    for (int i = 0; i < s.worlds; ++i) worlds.push_back("w" + std::to_string(i));

    std::ostringstream o;
    o << "agents: " << joined(agents) << "\nactions: " << joined(actions) << "\natoms: " << joined(atoms)
      << "\nworlds: " << joined(worlds) << "\n";
    for (const auto& w : worlds) {
        auto v = r.subset(atoms, false);
        if (!v.empty()) o << "world " << w << ": " << joined(v) << "\n";
    }
    for (const auto& a : agents) {
        auto caps = r.subset(actions, false);
        if (!caps.empty()) o << "capability " << a << ": " << joined(caps) << "\n";
    }

    // A small pool of steps keeps the universe, and so negation, small.
    std::vector<std::string> pool;
    std::set<std::string> seen;
    for (int tries = 0; tries < 40 && pool.size() < 6; ++tries) {
        std::vector<std::string> parts, active;
        std::vector<std::vector<std::string>> done;
        for (const auto& a : agents) {
            auto acts = r.subset(actions, false);
            if (acts.empty()) continue;
            active.push_back(a);
            done.push_back(acts);
            parts.push_back(a + ": " + (acts.size() == 1 ? acts[0] : "{" + joined(acts) + "}"));
        }
        if (parts.empty()) continue;
        // A joint action the pair already covers individually would give a
        // second text for the same completed step.
        if (active.size() >= 2 && r.chance(0.25)) {
            const auto& x = r.pick(actions);
            auto has = [&](const std::vector<std::string>& v) { return std::find(v.begin(), v.end(), x) != v.end(); };
            if (!has(done[0]) && !has(done[1])) parts.push_back("{" + active[0] + ", " + active[1] + "}: " + x);
        }
        auto text = "{" + joined(parts) + "}";
        if (seen.insert(text).second) pool.push_back(text);
    }

    std::vector<std::pair<int, int>> order;
    for (int w = 0; w < s.worlds; ++w) {
        std::set<std::string> used;
        int k = r.uniform(0, s.max_out);
        for (int i = 0; i < k && !pool.empty(); ++i) {
            const auto& step = r.pick(pool);
            if (!used.insert(step).second) continue;
            int to = r.uniform(0, s.worlds - 1);
            if (to == w) continue;
            o << "transition " << worlds[static_cast<std::size_t>(w)] << " -> " << worlds[static_cast<std::size_t>(to)]
              << ": " << step << "\n";
            if (to > w && r.chance(s.order_p)) order.emplace_back(w, to);
        }
    }
    auto relation = [&](const char* head, const std::string& a) {
        o << head << " " << a << ": ";
        for (int w = 0; w < s.worlds; ++w) {
            int k = r.uniform(1, 2);
            for (int i = 0; i < k; ++i)
                o << (w || i ? ", " : "") << worlds[static_cast<std::size_t>(w)] << " -> "
                  << worlds[static_cast<std::size_t>(r.uniform(0, s.worlds - 1))];
        }
        o << "\n";
    };
    for (const auto& a : agents) {
        relation("belief", a);
        relation("goal", a);
    }
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    if (!order.empty()) {
        o << "order: ";
        for (std::size_t i = 0; i < order.size(); ++i)
            o << (i ? ", " : "") << worlds[static_cast<std::size_t>(order[i].first)] << " < "
              << worlds[static_cast<std::size_t>(order[i].second)];
        o << "\n";
    }
    return o.str();
}

std::string fuzz_model_text() {
    return R"(agents: a0, a1, a2
actions: x0, x1
objects: o0, o1
values: v0
atoms: p0, p1, p2
worlds: w0, w1
order: w0 < w1
belief a0: identity
belief a1: identity
belief a2: identity
goal a0: identity
goal a1: identity
goal a2: identity
context c0: w0, w1
context c1: w0
practice: c0
roles c0: r0, r1
roles c1: r0, r1
actors c0: a0, a1, a2
objects c0: o0, o1
)";
}

namespace {

AssertionPtr assertion_of_kind(Rng& r, const Names& n, const std::vector<K>& kinds) {
    for (;;) {
        auto a = any_assertion(r, n, 2);
        if (std::find(kinds.begin(), kinds.end(), a->kind) != kinds.end()) return a;
    }
}

}  // namespace

SocialPractice practice(Rng& r) {
    Names n;
    SocialPractice sp;
    sp.name = "c0";
    sp.roles = n.roles;
    sp.actors = r.subset(n.agents, false);
    sp.resources = r.subset(n.objects, false);
    for (int i = r.uniform(0, 2); i > 0; --i) sp.affordances.push_back({r.subset(n.objects, true), act_atom(r.pick(n.actions))});
    if (r.chance(0.5)) sp.places = {"home", "school"};
    for (int i = r.uniform(0, 2); i > 0; --i) sp.purpose.push_back(any_assertion(r, n, 2));
    for (int i = r.uniform(0, 2); i > 0; --i) sp.promotes.push_back(assertion_of_kind(r, n, {K::Promotes, K::Demotes}));
    for (int i = r.uniform(0, 2); i > 0; --i) sp.counts_as.push_back(assertion_of_kind(r, n, {K::CountsAs}));
    for (int i = r.uniform(0, 2); i > 0; --i) sp.plan_patterns.push_back(plan(r, n, 3));
    for (int i = r.uniform(0, 2); i > 0; --i) sp.norms.push_back(assertion_of_kind(r, n, {K::NormO, K::NormF, K::NormP}));
    for (int i = r.uniform(0, 2); i > 0; --i) sp.strategies.push_back(assertion_of_kind(r, n, {K::Strategy}));
    sp.start = any_assertion(r, n, 2);
    sp.end = any_assertion(r, n, 2);
    sp.actions = r.subset(n.actions, false);
    for (const auto& role : r.subset(n.roles, false)) sp.requirements[role] = r.subset(n.actions, true);
    return sp;
}

}  // namespace socprac::testgen
