#include "socprac/events.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace socprac {

Vocabulary::Vocabulary(std::vector<std::string> agents, std::vector<std::string> actions)
    : agents_(std::move(agents)), actions_(std::move(actions)) {
    if (static_cast<int>(agents_.size()) > kMaxAgents)
        throw std::invalid_argument("too many agents (limit " + std::to_string(kMaxAgents) + ")");
    if (static_cast<int>(actions_.size()) > kMaxActions)
        throw std::invalid_argument("too many actions (limit " + std::to_string(kMaxActions) + ")");
    for (int i = 0; i < agent_count(); ++i) agent_idx_[agents_[i]] = i;
    for (int i = 0; i < action_count(); ++i) {
        action_idx_[actions_[i]] = i;
        name_masks_[actions_[i]] |= ActionSet{1} << i;
        auto base = base_name(i);
        if (base != actions_[i]) name_masks_[base] |= ActionSet{1} << i;
    }
}

int Vocabulary::agent_index(const std::string& name) const {
    auto it = agent_idx_.find(name);
    return it == agent_idx_.end() ? -1 : it->second;
}

int Vocabulary::action_index(const std::string& name) const {
    auto it = action_idx_.find(name);
    return it == action_idx_.end() ? -1 : it->second;
}

ActionSet Vocabulary::action_mask(const std::string& name) const {
    auto it = name_masks_.find(name);
    return it == name_masks_.end() ? 0 : it->second;
}

std::string Vocabulary::base_name(int action) const {
    const auto& s = actions_.at(action);
    auto at = s.find('@');
    return at == std::string::npos ? s : s.substr(0, at);
}

GroupMask Vocabulary::group_of(const std::vector<std::string>& names) const {
    GroupMask g = 0;
    for (const auto& n : names) {
        int i = agent_index(n);
        if (i < 0) throw std::invalid_argument("unknown agent '" + n + "'");
        g |= GroupMask{1} << i;
    }
    return g;
}

std::vector<std::string> Vocabulary::group_names(GroupMask g) const {
    std::vector<std::string> out;
    for (int i = 0; i < agent_count(); ++i)
        if (g & (GroupMask{1} << i)) out.push_back(agents_[i]);
    return out;
}

std::vector<std::string> Vocabulary::action_names(ActionSet s) const {
    std::vector<std::string> out;
    for (int i = 0; i < action_count(); ++i)
        if (s & (ActionSet{1} << i)) out.push_back(actions_[i]);
    return out;
}

Step::Step(int n_agents) : n_(n_agents), payload_(std::size_t{1} << n_agents, 0) {
    if (n_agents < 0 || n_agents > kMaxAgents) throw StepError("unsupported agent count");
}

Step Step::complete(int n_agents, const std::vector<std::pair<GroupMask, ActionSet>>& sparse) {
    Step s(n_agents);
    GroupMask full = (GroupMask{1} << n_agents) - 1;
    for (auto [h, a] : sparse) {
        if (h == 0 || !is_subset(h, full)) throw StepError("group outside the agent set");
    }
    for (GroupMask g = 1; g <= full; ++g) {
        ActionSet acc = 0;
        for (auto [h, a] : sparse)
            if (is_subset(h, g)) acc |= a;
        s.payload_[g] = acc;
    }
    if (!s.satisfies_constraints())
        throw StepError("step violates monotonicity or skip absorption (joint group with an idle member?)");
    return s;
}

bool Step::is_skip() const {
    return std::all_of(payload_.begin(), payload_.end(), [](ActionSet a) { return a == 0; });
}

GroupMask Step::active_agents() const {
    GroupMask g = 0;
    for (int i = 0; i < n_; ++i)
        if (payload_[GroupMask{1} << i] != 0) g |= GroupMask{1} << i;
    return g;
}

bool Step::satisfies_constraints() const {
    GroupMask full = n_ == 0 ? 0 : (GroupMask{1} << n_) - 1;
    for (GroupMask g = 1; g <= full; ++g) {
        for (int i = 0; i < n_; ++i) {
            GroupMask bit = GroupMask{1} << i;
            if (!(g & bit)) continue;
            GroupMask b = g & ~bit;
            if (b == 0) continue;
            if ((payload_[b] & ~payload_[g]) != 0) return false;
            if (payload_[bit] == 0 && payload_[g] != payload_[b]) return false;
        }
    }
    return true;
}

std::vector<std::pair<GroupMask, ActionSet>> Step::sparse() const {
    std::vector<std::pair<GroupMask, ActionSet>> out;
    GroupMask full = n_ == 0 ? 0 : (GroupMask{1} << n_) - 1;
    for (int i = 0; i < n_; ++i) {
        GroupMask bit = GroupMask{1} << i;
        if (payload_[bit]) out.emplace_back(bit, payload_[bit]);
    }
    for (GroupMask g = 1; g <= full; ++g) {
        if (std::popcount(g) < 2) continue;
        ActionSet below = 0;
        for (int i = 0; i < n_; ++i)
            if (g & (GroupMask{1} << i)) below |= payload_[g & ~(GroupMask{1} << i)];
        ActionSet extra = payload_[g] & ~below;
        if (extra) out.emplace_back(g, extra);
    }
    return out;
}

namespace {
std::string set_str(const std::vector<std::string>& names) {
    if (names.size() == 1) return names[0];
    std::string s = "{";
    for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
    return s + "}";
}
}  // namespace

std::string Step::str(const Vocabulary& v) const {
    auto sp = sparse();
    if (sp.empty()) return "skip";
    std::string out = "{";
    bool first = true;
    for (auto [g, a] : sp) {
        if (!first) out += ", ";
        first = false;
        auto names = v.group_names(g);
        out += names.size() == 1 ? names[0] : "{" + [&] {
            std::string s;
            for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
            return s;
        }() + "}";
        out += ": " + set_str(v.action_names(a));
    }
    return out + "}";
}

TraceSet TraceSet::single_steps(const std::vector<Step>& steps) {
    TraceSet t;
    for (const auto& s : steps) t.insert(Trace{s});
    return t;
}

std::size_t TraceSet::duration() const {
    std::size_t d = 1;
    for (const auto& t : traces_) d = std::max(d, t.size());
    return d;
}

bool TraceSet::has_proper_prefix_of(const Trace& t) const {
    for (std::size_t k = 1; k < t.size(); ++k)
        if (traces_.count(Trace(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k)))) return true;
    return false;
}

bool TraceSet::has_prefix_of(const Trace& t) const {
    return contains(t) || has_proper_prefix_of(t);
}

TraceSet compose(const TraceSet& a, const TraceSet& b) {
    TraceSet out;
    for (const auto& t1 : a)
        for (const auto& t2 : b) {
            Trace t = t1;
            t.insert(t.end(), t2.begin(), t2.end());
            out.insert(std::move(t));
        }
    return out;
}

TraceSet sync(const TraceSet& a, const TraceSet& b) {
    TraceSet out;
    for (const auto& t : a)
        if (b.has_prefix_of(t)) out.insert(t);
    for (const auto& t : b)
        if (a.has_prefix_of(t)) out.insert(t);
    return out;
}

TraceSet choice(const TraceSet& a, const TraceSet& b) {
    // The longer member of every cross pair in a proper-prefix relation goes.
    TraceSet out;
    for (const auto& t : a)
        if (!b.has_proper_prefix_of(t) && !(b.contains(t) && a.has_proper_prefix_of(t))) out.insert(t);
    for (const auto& t : b)
        if (!a.has_proper_prefix_of(t) && !(a.contains(t) && b.has_proper_prefix_of(t))) out.insert(t);
    return out;
}

TraceSet set_union(const TraceSet& a, const TraceSet& b) {
    TraceSet out = a;
    for (const auto& t : b) out.insert(t);
    return out;
}

namespace {
// t̃: every trace that follows t up to some position n and then differs at n.
std::set<Trace> trace_negation(const Trace& t, const std::vector<Step>& universe) {
    std::set<Trace> out;
    for (std::size_t n = 0; n < t.size(); ++n) {
        Trace prefix(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n));
        for (const auto& x : universe) {
            if (x == t[n]) continue;
            Trace u = prefix;
            u.push_back(x);
            out.insert(std::move(u));
        }
    }
    return out;
}
}  // namespace

TraceSet negate(const TraceSet& t, const std::vector<Step>& universe) {
    if (t.empty()) return TraceSet::single_steps(universe);
    std::set<Trace> acc;
    bool first = true;
    for (const auto& tr : t) {
        auto n = trace_negation(tr, universe);
        if (first) {
            acc = std::move(n);
            first = false;
            continue;
        }
        std::set<Trace> keep;
        std::set_intersection(acc.begin(), acc.end(), n.begin(), n.end(), std::inserter(keep, keep.end()));
        acc = std::move(keep);
        if (acc.empty()) break;
    }
    return TraceSet(std::move(acc));
}

namespace {
struct Enumerator {
    int n, m;
    std::vector<GroupMask> order;
    Step cur;
    std::vector<Step>* out;
    std::size_t limit;

    void run(std::size_t k) {
        if (out->size() > limit) throw StepUniverseTooLarge("step universe exceeds " + std::to_string(limit) + " steps");
        if (k == order.size()) {
            out->push_back(cur);
            return;
        }
        GroupMask g = order[k];
        ActionSet all = m == 0 ? 0 : ((ActionSet{1} << m) - 1);
        if (std::popcount(g) == 1) {
            for (ActionSet a = 0; a <= all; ++a) {
                cur.set(g, a);
                run(k + 1);
            }
            return;
        }
        GroupMask idle = 0;
        for (int i = 0; i < n; ++i)
            if ((g & (GroupMask{1} << i)) && cur.act(GroupMask{1} << i) == 0) idle |= GroupMask{1} << i;
        if (idle) {
            cur.set(g, cur.act(g & ~idle));
            run(k + 1);
            return;
        }
        ActionSet base = 0;
        for (int i = 0; i < n; ++i)
            if (g & (GroupMask{1} << i)) base |= cur.act(g & ~(GroupMask{1} << i));
        ActionSet free = all & ~base;
        // every superset of base: iterate subsets of the free bits
        for (ActionSet sub = free;; sub = (sub - 1) & free) {
            cur.set(g, base | sub);
            run(k + 1);
            if (sub == 0) break;
        }
    }
};
}  // namespace

std::vector<Step> full_step_universe(const Vocabulary& v, int max_agents, int max_actions) {
    int n = v.agent_count(), m = v.action_count();
    if (n > max_agents || m > max_actions)
        throw StepUniverseTooLarge("exhaustive steps need at most " + std::to_string(max_agents) + " agents and " +
                                   std::to_string(max_actions) + " actions (have " + std::to_string(n) + ", " +
                                   std::to_string(m) + ")");
    Enumerator e{n, m, {}, Step(n), nullptr, 2000000};
    for (GroupMask g = 1; g < (GroupMask{1} << n); ++g) e.order.push_back(g);
    std::stable_sort(e.order.begin(), e.order.end(),
                     [](GroupMask a, GroupMask b) { return std::popcount(a) < std::popcount(b); });
    std::vector<Step> out;
    e.out = &out;
    e.run(0);
    std::sort(out.begin(), out.end());  // skip (all zero) sorts first
    return out;
}

}  // namespace socprac
