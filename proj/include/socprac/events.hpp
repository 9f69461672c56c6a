#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace socprac {

using ActionSet = std::uint64_t;   // bit i = action symbol i; 0 = skip
using GroupMask = std::uint32_t;   // bit i = agent i

constexpr int kMaxAgents = 12;
constexpr int kMaxActions = 64;

inline bool is_subset(GroupMask a, GroupMask b) { return (a & ~b) == 0; }

struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepUniverseTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Agent and action names. Action symbols may be qualified by an object
// ("drive@car_a"); the base name "drive" denotes every qualified variant.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> agents, std::vector<std::string> actions);

    int agent_count() const { return static_cast<int>(agents_.size()); }
    int action_count() const { return static_cast<int>(actions_.size()); }
    GroupMask all_agents() const { return agent_count() == 0 ? 0 : ((GroupMask{1} << agent_count()) - 1); }

    const std::vector<std::string>& agents() const { return agents_; }
    const std::vector<std::string>& actions() const { return actions_; }

    int agent_index(const std::string& name) const;   // -1 if unknown
    int action_index(const std::string& name) const;  // exact symbol, -1 if unknown
    bool has_agent(const std::string& name) const { return agent_index(name) >= 0; }
    bool has_action_name(const std::string& name) const { return action_mask(name) != 0; }

    // Mask of every symbol whose exact name or base name equals `name`.
    ActionSet action_mask(const std::string& name) const;
    std::string base_name(int action) const;

    GroupMask group_of(const std::vector<std::string>& names) const;
    std::vector<std::string> group_names(GroupMask g) const;
    std::vector<std::string> action_names(ActionSet s) const;

    bool operator==(const Vocabulary& o) const { return agents_ == o.agents_ && actions_ == o.actions_; }

private:
    std::vector<std::string> agents_;
    std::vector<std::string> actions_;
    std::map<std::string, int> agent_idx_;
    std::map<std::string, int> action_idx_;
    std::map<std::string, ActionSet> name_masks_;
};

// Payload for every non-empty group of n agents, indexed by group mask.
class Step {
public:
    Step() = default;
    explicit Step(int n_agents);

    static Step skip(int n_agents) { return Step(n_agents); }

    // Canonical completion: S_G is the union of the payloads given for groups
    // H within G. Throws StepError if the result breaks monotonicity or skip
    // absorption (e.g. a joint group listing an agent that does nothing).
    static Step complete(int n_agents, const std::vector<std::pair<GroupMask, ActionSet>>& sparse);

    int agent_count() const { return n_; }
    ActionSet act(GroupMask g) const { return g == 0 ? 0 : payload_[g]; }
    void set(GroupMask g, ActionSet a) { payload_[g] = a; }
    bool is_skip() const;
    GroupMask active_agents() const;

    // Fast check of both constraints using single-agent neighbours.
    bool satisfies_constraints() const;

    // Sparse form: singleton payloads plus joint groups that add actions
    // beyond their proper subgroups. complete(sparse()) == *this.
    std::vector<std::pair<GroupMask, ActionSet>> sparse() const;

    std::string str(const Vocabulary& v) const;

    auto operator<=>(const Step& o) const = default;

private:
    int n_ = 0;
    std::vector<ActionSet> payload_;
};

using Trace = std::vector<Step>;

class TraceSet {
public:
    TraceSet() = default;
    explicit TraceSet(std::set<Trace> t) : traces_(std::move(t)) {}

    static TraceSet single_steps(const std::vector<Step>& steps);

    bool empty() const { return traces_.empty(); }
    std::size_t size() const { return traces_.size(); }
    bool contains(const Trace& t) const { return traces_.count(t) > 0; }
    void insert(Trace t) { traces_.insert(std::move(t)); }
    const std::set<Trace>& traces() const { return traces_; }
    auto begin() const { return traces_.begin(); }
    auto end() const { return traces_.end(); }

    // Longest trace length; 1 for the empty set.
    std::size_t duration() const;
    bool has_proper_prefix_of(const Trace& t) const;
    bool has_prefix_of(const Trace& t) const;  // includes t itself

    bool operator==(const TraceSet& o) const { return traces_ == o.traces_; }

private:
    std::set<Trace> traces_;
};

TraceSet compose(const TraceSet& a, const TraceSet& b);
TraceSet sync(const TraceSet& a, const TraceSet& b);
TraceSet choice(const TraceSet& a, const TraceSet& b);
TraceSet set_union(const TraceSet& a, const TraceSet& b);
TraceSet negate(const TraceSet& t, const std::vector<Step>& universe);

// Every valid step over the vocabulary, skip first. Limited to
// max_agents agents and max_actions actions.
std::vector<Step> full_step_universe(const Vocabulary& v, int max_agents = 3, int max_actions = 3);

}  // namespace socprac
