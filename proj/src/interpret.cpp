#include "socprac/interpret.hpp"

namespace socprac {

std::vector<std::pair<GroupMask, GroupMask>> covers(GroupMask a) {
    std::vector<std::pair<GroupMask, GroupMask>> out;
    for (GroupMask x = a;; x = (x - 1) & a) {
        if (x == 0) break;
        GroupMask rest = a & ~x;
        for (GroupMask y = x;; y = (y - 1) & x) {
            GroupMask second = rest | y;
            if (second) out.emplace_back(x, second);
            if (y == 0) break;
        }
    }
    return out;
}

namespace {
TraceSet combine(Action::Kind k, const TraceSet& l, const TraceSet& r) {
    switch (k) {
        case Action::Kind::Seq: return compose(l, r);
        case Action::Kind::Par: return sync(l, r);
        case Action::Kind::Choice: return choice(l, r);
        default: throw std::logic_error("not a binary action");
    }
}
}  // namespace

TraceSet interpret_collective(GroupMask group, const Action& a, const Vocabulary& v,
                              const std::vector<Step>& universe) {
    if (group == 0) throw std::invalid_argument("empty group");
    switch (a.kind) {
        case Action::Kind::Atom: {
            ActionSet mask = v.action_mask(a.name);
            if (!mask) throw std::invalid_argument("unknown action '" + a.name + "'");
            TraceSet out;
            for (const auto& s : universe)
                if (s.act(group) & mask) out.insert(Trace{s});
            return out;
        }
        case Action::Kind::Skip: {
            TraceSet out;
            out.insert(Trace{Step::skip(v.agent_count())});
            return out;
        }
        case Action::Kind::Neg: return negate(interpret_collective(group, *a.lhs, v, universe), universe);
        case Action::Kind::Achieve: throw UnsupportedInConcreteMode("achieving action needs a world to resolve");
        default: {
            TraceSet out;
            for (auto [g1, g2] : covers(group))
                out = set_union(out, combine(a.kind, interpret_collective(g1, *a.lhs, v, universe),
                                             interpret_collective(g2, *a.rhs, v, universe)));
            return out;
        }
    }
}

TraceSet interpret_event(const Event& e, const Vocabulary& v, const std::vector<Step>& universe) {
    switch (e.kind) {
        case Event::Kind::Perform: {
            GroupMask g = e.agents.empty() ? v.all_agents() : v.group_of(e.agents);
            return interpret_collective(g, *e.action, v, universe);
        }
        case Event::Kind::PerformRole: throw UnsupportedInConcreteMode("role action needs a world to resolve");
        case Event::Kind::Skip: {
            TraceSet out;
            out.insert(Trace{Step::skip(v.agent_count())});
            return out;
        }
        case Event::Kind::Neg: return negate(interpret_event(*e.lhs, v, universe), universe);
        case Event::Kind::Seq:
            return compose(interpret_event(*e.lhs, v, universe), interpret_event(*e.rhs, v, universe));
        case Event::Kind::Par: return sync(interpret_event(*e.lhs, v, universe), interpret_event(*e.rhs, v, universe));
        case Event::Kind::Choice:
            return choice(interpret_event(*e.lhs, v, universe), interpret_event(*e.rhs, v, universe));
    }
    return {};
}

}  // namespace socprac
