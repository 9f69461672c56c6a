#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "socprac/model.hpp"

namespace socprac {

// Symbolic trace sets over a model's step universe. Traces are sequences of
// universe indices. Nodes are hash-consed so memo tables are shared.
class EventMatcher {
public:
    using LTrace = std::vector<int>;

    enum class Kind { Pred, Skip, Empty, Compose, Sync, Choice, Union, Negate };

    explicit EventMatcher(const KripkeModel& m);

    int pred(GroupMask group, ActionSet mask);
    int skip();
    int empty();
    int compose(int a, int b);
    int sync(int a, int b);
    int choice(int a, int b);
    int unite(std::vector<int> kids);
    int negate(int a);

    bool contains(int node, const LTrace& t);
    // Some trace of the node has t as a prefix (t itself counts).
    bool extendable(int node, const LTrace& t);
    bool nonempty(int node) { return extendable(node, {}); }
    std::size_t max_length(int node) const { return nodes_[node].maxlen; }

    // ⟦node⟧_R(world)
    std::set<int> successors(int node, int world);

    // Every member trace (bounded by max_length); for tests and small sets.
    std::vector<LTrace> members(int node);

    const KripkeModel& model() const { return m_; }

private:
    struct Node {
        Kind kind;
        GroupMask group = 0;
        ActionSet mask = 0;
        std::vector<int> kids;
        std::size_t maxlen = 1;
    };
    int intern(Node n);
    bool pred_holds(const Node& n, int step) const;
    bool all_strict(int node, const LTrace& p);  // every trace of node strictly extends p
    bool search_extension(int node, const LTrace& t);
    static std::string key(int node, const LTrace& t, std::size_t b, std::size_t e);

    const KripkeModel& m_;
    std::vector<Node> nodes_;
    std::map<std::tuple<int, GroupMask, ActionSet, std::vector<int>>, int> interned_;
    std::unordered_map<std::string, bool> contains_memo_, ext_memo_, strict_memo_;
};

}  // namespace socprac
