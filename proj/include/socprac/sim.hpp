#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "socprac/model.hpp"
#include "socprac/practice.hpp"

namespace socprac {

enum class Compliance { Compliant, ViolatingAllowed };

struct AgentPolicy {
    std::string agent;
    std::vector<std::string> roles;     // role bindings, each a role of the practice
    std::vector<std::string> prefer;    // branch preference, e.g. "pp1:1,5" or "1,5"
    Compliance compliance = Compliance::Compliant;
    std::set<std::string> omit;         // actions (base names) the agent leaves out
};

// Every choice of a plan pattern resolved one way; leaf numbers are kept.
std::vector<PlanPtr> plan_branches(const PlanPtr& p);

struct SocialEffect {
    std::string agent, action, counts_as;
    std::vector<std::string> atoms;  // social atoms the counted action brings about
};

struct TraceRecord {
    int tick = 0;
    int from = 0;
    std::string step;
    int to = 0;
    std::string reason;                    // plan | strategy | replan
    std::vector<std::string> failed;       // attempts without a transition, in order
    std::vector<std::string> shadowed;     // strategies that applied but did not fire
    std::vector<std::string> active_norms;
    std::vector<std::string> violations;   // violation atoms raised by the step
    std::vector<SocialEffect> social_effects;
};

struct ExecutionTrace {
    std::string practice;
    int start = 0;
    std::uint64_t seed = 0;
    std::string branch;   // the branch last planned
    std::vector<TraceRecord> records;
    std::string status;   // ec | budget | stuck
    int end = 0;

    std::size_t violation_count() const;
    std::vector<int> worlds() const;  // start followed by each record's target
};

struct Stuck : std::runtime_error {
    Stuck(int world, std::string reason, ExecutionTrace partial);
    int world;
    std::string reason;
    ExecutionTrace partial;
};

struct SimOptions {
    std::uint64_t seed = 0;
    int ticks = 50;
    int depth = 12;
    EvalOptions eval;
};

// One policy per actor playing its roles at the start world, compliant, no preference.
std::vector<AgentPolicy> default_policies(const SocialPractice& sp, const KripkeModel& m, int start);

// Throws std::invalid_argument when the start world is outside SC, the
// practice is infeasible, or a policy binds a role outside the practice.
ExecutionTrace simulate(const SocialPractice& sp, const KripkeModel& m, int start, std::vector<AgentPolicy> policies,
                        const SimOptions& opts = {});

// World sequence obtained by feeding the recorded steps back through the
// model; throws std::runtime_error at the first record that does not replay.
std::vector<int> replay(const ExecutionTrace& t, const KripkeModel& m);

std::string trace_jsonl(const ExecutionTrace& t, const KripkeModel& m);
std::string trace_text(const ExecutionTrace& t, const KripkeModel& m);
// Reads a trace written by trace_jsonl; world names resolve against m.
ExecutionTrace parse_trace_jsonl(const std::string& text, const KripkeModel& m);

}  // namespace socprac
