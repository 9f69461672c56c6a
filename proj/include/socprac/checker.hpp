#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "socprac/ast.hpp"
#include "socprac/matcher.hpp"
#include "socprac/model.hpp"

namespace socprac {

struct BoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalOptions {
    int bound = 1;                     // max operator depth of enumerated actions (1 = atoms)
    int trace_bound = 8;               // max trace length for DONE/DO search
    std::size_t max_candidates = 20000;
};

struct AffordanceViolation {
    int world = 0;
    std::string agent, role, context, action;
    std::vector<std::string> objects;
};

class Checker {
public:
    // Label traces (universe indices) of Δ for a practice, used by purpose(sp, φ).
    using DeltaProvider = std::function<std::vector<std::vector<int>>(const std::string& sp)>;

    explicit Checker(const KripkeModel& m, EvalOptions opts = {});

    const KripkeModel& model() const { return m_; }
    const EvalOptions& options() const { return opts_; }
    EventMatcher& matcher() { return matcher_; }
    void set_delta_provider(DeltaProvider p) { delta_ = std::move(p); }

    bool eval(const Assertion& a, int world);

    // ⟦ξ⟧_R(w); role actions resolve against role_ctx, or the salient contexts.
    std::set<int> successors(const Event& e, int world, const std::string& role_ctx = "");
    int compile(const Event& e, int world, const std::string& role_ctx = "");
    int compile_collective(GroupMask g, const Action& a, int world, const std::string& role_ctx = "");

    bool eval_do(const Event& e, int world, const std::string& role_ctx = "");
    bool eval_done(const Event& e, int world, const std::string& role_ctx = "");

    bool capable(GroupMask g, const Action& a, int world);
    bool able(GroupMask g, const Action& a, int world);  // Cap ∧ ⟨g:α⟩⊤

    const std::vector<ActionPtr>& repertoire();
    std::vector<ActionPtr> achievers(GroupMask g, const Assertion& goal, int world);

    std::vector<std::string> salient_contexts(int world) const;
    bool salient(const std::string& ctx, int world) const;
    std::vector<std::string> role_players(const std::string& role, int world, const std::string& ctx = "") const;
    std::set<int> common_belief_worlds(const std::vector<std::string>& agents, int world) const;

    // Base-language formula a derived head stands for at this world.
    AssertionPtr expand(const Assertion& a, int world);

    std::vector<AffordanceViolation> affordance_axiom_violations();

    // Atomic actions of a step, as the event S_A:x for every listed group.
    static EventPtr step_event(const Step& s, const Vocabulary& v);
    static EventPtr trace_event(const std::vector<int>& labels, const KripkeModel& m);

    GroupMask group(const std::vector<std::string>& agents) const;

private:
    bool ev(const Assertion& a, int world);
    bool eval_core(const Assertion& a, int world);
    bool do_rec(int node, int world, std::vector<int>& prefix);
    bool done_rec(const Event& e, const std::string& role_ctx, int world, std::vector<int>& suffix);
    void basic_actions(const Action& a, GroupMask g, int world, std::vector<ActionPtr>& out);
    bool countsas(const Assertion& a);

    const KripkeModel& m_;
    EvalOptions opts_;
    EventMatcher matcher_;
    DeltaProvider delta_;
    std::vector<ActionPtr> repertoire_;
    bool repertoire_ready_ = false;

    int depth_ = 0;
    std::map<std::pair<const Assertion*, int>, bool> memo_;
    std::map<std::tuple<const Event*, int, std::string>, int> compiled_;
    std::map<std::tuple<const Action*, GroupMask, int, std::string>, int> compiled_coll_;
    std::vector<AssertionPtr> arena_;
    std::vector<EventPtr> event_arena_;
};

}  // namespace socprac
