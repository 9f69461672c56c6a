#pragma once

#include "socprac/ast.hpp"
#include "socprac/events.hpp"

namespace socprac {

struct UnsupportedInConcreteMode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Explicit trace sets over a materialized step universe. Role actions and
// achieving actions must be resolved before calling these.
TraceSet interpret_event(const Event& e, const Vocabulary& v, const std::vector<Step>& universe);
TraceSet interpret_collective(GroupMask group, const Action& a, const Vocabulary& v,
                              const std::vector<Step>& universe);

// Pairs (A', A'') of non-empty groups with A' ∪ A'' = A.
std::vector<std::pair<GroupMask, GroupMask>> covers(GroupMask a);

}  // namespace socprac
