#include <algorithm>
#include <set>

#include "socprac/lang.hpp"
#include "socprac/practice.hpp"

namespace socprac {

namespace {

AssertionPtr rename_ctx(const AssertionPtr& a, const std::string& from, const std::string& to) {
    auto c = std::make_shared<Assertion>(*a);
    if (c->ctx == from) c->ctx = to;
    for (auto& s : c->sub) s = rename_ctx(s, from, to);
    return c;
}

// Context names are renamed to a placeholder so instances compare equal.
std::string canon(const AssertionPtr& a, const std::string& name) { return print(*rename_ctx(a, name, "_sp")); }

std::set<std::string> canon_set(const std::vector<AssertionPtr>& v, const std::string& name) {
    std::set<std::string> out;
    for (const auto& a : v) out.insert(canon(a, name));
    return out;
}

std::set<std::string> plan_set(const SocialPractice& sp) {
    std::set<std::string> out;
    for (const auto& p : sp.plan_patterns) out.insert(print(*p));
    return out;
}

std::string show(const std::set<std::string>& s) {
    std::string out = "{";
    for (const auto& x : s) out += (out.size() > 1 ? "; " : "") + x;
    return out + "}";
}

bool enacted(const KripkeModel& m, const SocialPractice& sp, const std::string& role) {
    const Context* c = m.context(sp.name);
    if (!c) return false;
    for (const auto& a : sp.actors)
        for (int w : c->worlds)
            if (m.play(a, role, sp.name, w)) return true;
    return false;
}

// Union of the instances' entries (first occurrence kept), renamed to the
// new practice, or the failing witness when the intersection is empty.
std::optional<std::string> union_family(const std::vector<SocialPractice>& in,
                                        std::vector<AssertionPtr> SocialPractice::*field, const std::string& name,
                                        std::vector<AssertionPtr>& out) {
    std::set<std::string> seen;
    std::optional<std::set<std::string>> common;
    bool all_empty = true;
    for (const auto& sp : in) {
        auto s = canon_set(sp.*field, sp.name);
        all_empty = all_empty && s.empty();
        if (!common) {
            common = s;
        } else {
            std::set<std::string> x;
            std::set_intersection(common->begin(), common->end(), s.begin(), s.end(), std::inserter(x, x.begin()));
            common = x;
        }
        for (const auto& a : sp.*field)
            if (seen.insert(canon(a, sp.name)).second) out.push_back(rename_ctx(a, sp.name, name));
    }
    if (!all_empty && common && common->empty()) {
        std::string w;
        for (const auto& sp : in) w += (w.empty() ? "" : " vs ") + sp.name + " " + show(canon_set(sp.*field, sp.name));
        return "empty intersection: " + w;
    }
    return std::nullopt;
}

template <typename T>
void add_unique(std::vector<T>& out, const std::vector<T>& in) {
    for (const auto& x : in)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
}

}  // namespace

GeneralizeResult generalize(const std::vector<SocialPractice>& in, const KripkeModel& m, const std::string& name_in) {
    if (in.empty()) return ConditionFailure{0, "no instances"};
    std::string name = name_in.empty() ? in.front().name : name_in;
    SocialPractice sp;
    sp.name = name;
    const auto& first = in.front();

    // 1: equal roles, and a role enacted in one instance is enacted in all.
    auto roles0 = std::set<std::string>(first.roles.begin(), first.roles.end());
    for (const auto& x : in) {
        std::set<std::string> r(x.roles.begin(), x.roles.end());
        if (r != roles0)
            return ConditionFailure{1, "roles of " + x.name + " " + show(r) + " differ from " + first.name + " " +
                                           show(roles0)};
    }
    for (const auto& r : first.roles)
        for (const auto& x : in)
            if (enacted(m, x, r))
                for (const auto& y : in)
                    if (!enacted(m, y, r))
                        return ConditionFailure{1, "role " + r + " is enacted in " + x.name + " but not in " + y.name};
    sp.roles = first.roles;

    // 2: every afforded action is afforded in every instance.
    for (const auto& x : in)
        for (const auto& af : x.affordances) {
            auto text = print(*af.action);
            for (const auto& y : in) {
                bool found = std::any_of(y.affordances.begin(), y.affordances.end(),
                                         [&](const PracticeAffordance& b) { return print(*b.action) == text; });
                if (!found) return ConditionFailure{2, text + " is afforded in " + x.name + " but not in " + y.name};
            }
        }
    std::set<std::pair<std::vector<std::string>, std::string>> afs;
    for (const auto& x : in)
        for (const auto& af : x.affordances)
            if (afs.insert({af.objects, print(*af.action)}).second) sp.affordances.push_back(af);

    // 3-5: unions with a common core.
    if (auto f = union_family(in, &SocialPractice::purpose, name, sp.purpose)) return ConditionFailure{3, *f};
    if (auto f = union_family(in, &SocialPractice::promotes, name, sp.promotes)) return ConditionFailure{4, *f};
    if (auto f = union_family(in, &SocialPractice::counts_as, name, sp.counts_as)) return ConditionFailure{5, *f};

    // 6-8: identical plan patterns, norms and strategies.
    for (const auto& x : in)
        if (plan_set(x) != plan_set(first))
            return ConditionFailure{6, "plan patterns of " + x.name + " " + show(plan_set(x)) + " differ from " +
                                           first.name + " " + show(plan_set(first))};
    sp.plan_patterns = first.plan_patterns;
    for (const auto& x : in)
        if (canon_set(x.norms, x.name) != canon_set(first.norms, first.name))
            return ConditionFailure{7, "norms of " + x.name + " differ from " + first.name};
    for (const auto& n : first.norms) sp.norms.push_back(rename_ctx(n, first.name, name));
    for (const auto& x : in)
        if (canon_set(x.strategies, x.name) != canon_set(first.strategies, first.name))
            return ConditionFailure{8, "strategies of " + x.name + " differ from " + first.name};
    for (const auto& s : first.strategies) sp.strategies.push_back(rename_ctx(s, first.name, name));

    // 9-10: disjunctions of the start and end conditions.
    auto disjunction = [&](AssertionPtr SocialPractice::*field) {
        std::vector<AssertionPtr> parts;
        std::set<std::string> seen;
        for (const auto& x : in)
            if (seen.insert(canon(x.*field, x.name)).second) parts.push_back(rename_ctx(x.*field, x.name, name));
        return as_or_all(parts);
    };
    sp.start = disjunction(&SocialPractice::start);
    sp.end = disjunction(&SocialPractice::end);

    // 11: union of the possible actions.
    for (const auto& x : in) add_unique(sp.actions, x.actions);

    // 12: identical competence requirements.
    for (const auto& x : in)
        if (x.requirements != first.requirements)
            return ConditionFailure{12, "requirements of " + x.name + " differ from " + first.name};
    sp.requirements = first.requirements;

    for (const auto& x : in) {
        add_unique(sp.actors, x.actors);
        add_unique(sp.resources, x.resources);
        add_unique(sp.places, x.places);
    }
    return sp;
}

}  // namespace socprac
