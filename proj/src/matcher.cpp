#include "socprac/matcher.hpp"

#include <algorithm>
#include <functional>

namespace socprac {

EventMatcher::EventMatcher(const KripkeModel& m) : m_(m) {}

int EventMatcher::intern(Node n) {
    auto k = std::make_tuple(static_cast<int>(n.kind), n.group, n.mask, n.kids);
    auto it = interned_.find(k);
    if (it != interned_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    interned_.emplace(std::move(k), id);
    return id;
}

int EventMatcher::pred(GroupMask group, ActionSet mask) { return intern({Kind::Pred, group, mask, {}, 1}); }
int EventMatcher::skip() { return intern({Kind::Skip, 0, 0, {}, 1}); }
int EventMatcher::empty() { return intern({Kind::Empty, 0, 0, {}, 1}); }

int EventMatcher::compose(int a, int b) {
    return intern({Kind::Compose, 0, 0, {a, b}, nodes_[a].maxlen + nodes_[b].maxlen});
}

int EventMatcher::sync(int a, int b) {
    return intern({Kind::Sync, 0, 0, {a, b}, std::max(nodes_[a].maxlen, nodes_[b].maxlen)});
}

int EventMatcher::choice(int a, int b) {
    return intern({Kind::Choice, 0, 0, {a, b}, std::max(nodes_[a].maxlen, nodes_[b].maxlen)});
}

int EventMatcher::unite(std::vector<int> kids) {
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    if (kids.empty()) return empty();
    if (kids.size() == 1) return kids[0];
    std::size_t ml = 1;
    for (int k : kids) ml = std::max(ml, nodes_[k].maxlen);
    return intern({Kind::Union, 0, 0, std::move(kids), ml});
}

int EventMatcher::negate(int a) { return intern({Kind::Negate, 0, 0, {a}, nodes_[a].maxlen}); }

std::string EventMatcher::key(int node, const LTrace& t, std::size_t b, std::size_t e) {
    std::string k;
    k.reserve(4 + 2 * (e - b));
    for (int s = 0; s < 4; ++s) k.push_back(static_cast<char>((node >> (8 * s)) & 0xff));
    for (std::size_t i = b; i < e; ++i) {
        k.push_back(static_cast<char>(t[i] & 0xff));
        k.push_back(static_cast<char>((t[i] >> 8) & 0xff));
    }
    return k;
}

bool EventMatcher::pred_holds(const Node& n, int step) const {
    return (m_.universe()[step].act(n.group) & n.mask) != 0;
}

namespace {
EventMatcher::LTrace slice(const EventMatcher::LTrace& t, std::size_t b, std::size_t e) {
    return EventMatcher::LTrace(t.begin() + static_cast<std::ptrdiff_t>(b), t.begin() + static_cast<std::ptrdiff_t>(e));
}
}  // namespace

bool EventMatcher::contains(int node, const LTrace& t) {
    const Node& n = nodes_[node];
    if (t.empty() || t.size() > n.maxlen) return false;
    auto k = key(node, t, 0, t.size());
    if (auto it = contains_memo_.find(k); it != contains_memo_.end()) return it->second;
    bool r = false;
    switch (n.kind) {
        case Kind::Pred: r = t.size() == 1 && pred_holds(n, t[0]); break;
        case Kind::Skip: r = t.size() == 1 && t[0] == 0; break;
        case Kind::Empty: r = false; break;
        case Kind::Compose: {
            int a = n.kids[0], b = n.kids[1];
            for (std::size_t s = 1; s < t.size() && !r; ++s)
                r = contains(a, slice(t, 0, s)) && contains(b, slice(t, s, t.size()));
            break;
        }
        case Kind::Sync: {
            int a = n.kids[0], b = n.kids[1];
            auto prefix_in = [&](int x) {
                for (std::size_t s = 1; s <= t.size(); ++s)
                    if (contains(x, slice(t, 0, s))) return true;
                return false;
            };
            r = (contains(a, t) && prefix_in(b)) || (contains(b, t) && prefix_in(a));
            break;
        }
        case Kind::Choice: {
            int a = n.kids[0], b = n.kids[1];
            bool ca = contains(a, t), cb = contains(b, t);
            if (!ca && !cb) break;
            auto proper_prefix_in = [&](int x) {
                for (std::size_t s = 1; s < t.size(); ++s)
                    if (contains(x, slice(t, 0, s))) return true;
                return false;
            };
            bool removed = (ca && proper_prefix_in(b)) || (cb && proper_prefix_in(a));
            r = !removed;
            break;
        }
        case Kind::Union:
            for (int kid : n.kids)
                if (contains(kid, t)) {
                    r = true;
                    break;
                }
            break;
        case Kind::Negate: {
            int a = n.kids[0];
            if (!nonempty(a)) {
                r = t.size() == 1;
            } else {
                LTrace p = slice(t, 0, t.size() - 1);
                r = all_strict(a, p) && !extendable(a, t);
            }
            break;
        }
    }
    contains_memo_.emplace(std::move(k), r);
    return r;
}

bool EventMatcher::all_strict(int node, const LTrace& p) {
    if (p.empty()) return true;
    auto k = key(node, p, 0, p.size());
    if (auto it = strict_memo_.find(k); it != strict_memo_.end()) return it->second;
    LTrace q = slice(p, 0, p.size() - 1);
    bool r = all_strict(node, q) && !contains(node, p);
    if (r) {
        int y = p.back();
        LTrace probe = q;
        probe.push_back(0);
        for (int x = 0; x < static_cast<int>(m_.universe().size()) && r; ++x) {
            if (x == y) continue;
            probe.back() = x;
            if (extendable(node, probe)) r = false;
        }
    }
    strict_memo_.emplace(std::move(k), r);
    return r;
}

bool EventMatcher::search_extension(int node, const LTrace& t) {
    if (contains(node, t)) return true;
    if (t.size() >= nodes_[node].maxlen) return false;
    LTrace u = t;
    u.push_back(0);
    for (int x = 0; x < static_cast<int>(m_.universe().size()); ++x) {
        u.back() = x;
        if (extendable(node, u)) return true;
    }
    return false;
}

bool EventMatcher::extendable(int node, const LTrace& t) {
    const Node& n = nodes_[node];
    if (t.size() > n.maxlen) return false;
    auto k = key(node, t, 0, t.size());
    if (auto it = ext_memo_.find(k); it != ext_memo_.end()) return it->second;
    bool r = false;
    switch (n.kind) {
        case Kind::Pred:
            if (t.empty()) {
                for (int x = 0; x < static_cast<int>(m_.universe().size()) && !r; ++x) r = pred_holds(n, x);
            } else {
                r = pred_holds(n, t[0]);
            }
            break;
        case Kind::Skip: r = t.empty() || t[0] == 0; break;
        case Kind::Empty: r = false; break;
        case Kind::Compose: {
            int a = n.kids[0], b = n.kids[1];
            if (t.empty()) {
                r = nonempty(a) && nonempty(b);
                break;
            }
            r = extendable(a, t) && nonempty(b);
            for (std::size_t s = 1; s < t.size() && !r; ++s)
                r = contains(a, slice(t, 0, s)) && extendable(b, slice(t, s, t.size()));
            break;
        }
        case Kind::Union:
            for (int kid : n.kids)
                if (extendable(kid, t)) {
                    r = true;
                    break;
                }
            break;
        case Kind::Sync:
        case Kind::Choice:
            r = (extendable(n.kids[0], t) || extendable(n.kids[1], t)) && search_extension(node, t);
            break;
        case Kind::Negate: {
            int a = n.kids[0];
            if (!nonempty(a)) {
                r = t.size() <= 1;
            } else {
                r = contains(node, t) || (all_strict(a, t) && search_extension(node, t));
            }
            break;
        }
    }
    ext_memo_.emplace(std::move(k), r);
    return r;
}

std::set<int> EventMatcher::successors(int node, int world) {
    std::set<int> out;
    LTrace t;
    std::function<void(int)> dfs = [&](int w) {
        for (const auto& e : m_.out(w)) {
            t.push_back(e.label);
            if (contains(node, t)) out.insert(e.to);
            if (t.size() < nodes_[node].maxlen && extendable(node, t)) dfs(e.to);
            t.pop_back();
        }
    };
    dfs(world);
    return out;
}

std::vector<EventMatcher::LTrace> EventMatcher::members(int node) {
    std::vector<LTrace> out;
    LTrace t;
    std::function<void()> dfs = [&] {
        for (int x = 0; x < static_cast<int>(m_.universe().size()); ++x) {
            t.push_back(x);
            if (extendable(node, t)) {
                if (contains(node, t)) out.push_back(t);
                if (t.size() < nodes_[node].maxlen) dfs();
            }
            t.pop_back();
        }
    };
    dfs();
    return out;
}

}  // namespace socprac
