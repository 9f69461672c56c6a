#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "socprac/ast.hpp"
#include "socprac/checker.hpp"
#include "socprac/model.hpp"

namespace socprac {

struct PracticeAffordance {
    std::vector<std::string> objects;  // sorted
    ActionPtr action;
};

// One instance of a social practice. Norms, strategies, promotes and
// counts-as entries are kept as the assertion heads that define them.
struct SocialPractice {
    std::string name;  // the practice context
    std::vector<std::string> roles, actors, resources;
    std::vector<PracticeAffordance> affordances;
    std::vector<std::string> places;
    std::vector<AssertionPtr> purpose;
    std::vector<AssertionPtr> promotes;   // promotes / demotes
    std::vector<AssertionPtr> counts_as;  // countsas
    std::vector<PlanPtr> plan_patterns;
    std::vector<AssertionPtr> norms;       // O/F/P role norms
    std::vector<AssertionPtr> strategies;  // strategy(...)
    AssertionPtr start, end;
    std::vector<std::string> actions;
    std::map<std::string, std::vector<std::string>> requirements;  // role -> capabilities

    // Conjunction of the purpose formulas (true when none).
    AssertionPtr goal() const;
};

extern const std::vector<std::string> kPracticeSections;

SocialPractice parse_practice(const std::string& text, const KripkeModel& m, const std::string& file = "<practice>");
std::string print_practice(const SocialPractice& sp);
bool equal(const SocialPractice& a, const SocialPractice& b);

// Plan pattern helpers.
ActionPtr plan_action(const PlanPattern& p);         // γ of a composite pattern
const PlanPattern& plan_start(const PlanPattern& p);  // st(γφ)
std::vector<std::pair<const PlanPattern*, const PlanPattern*>> plan_seq_pairs(const PlanPattern& p);

struct PathStep {
    int from = 0;
    int label = 0;  // universe index
    int to = 0;
};

// A plan-pattern leaf matched against labels[begin, end) of a run.
struct LeafSpan {
    int leaf = 0;
    std::size_t begin = 0, end = 0;
};

struct Realization {
    int pattern = 0;      // index into the practice's plan patterns
    std::size_t run = 0;  // index into DeltaEntry::runs
    std::vector<LeafSpan> leaves;
    std::string str() const;  // "pp1:1,2,3,4"
};

struct DeltaEntry {
    std::vector<int> labels;             // δ as universe indices; {0} is skip
    std::vector<std::vector<int>> runs;  // world sequence from each SC-world that executes δ
    std::vector<Realization> realizations;
};

struct DeltaResult {
    std::vector<int> start_worlds;
    std::vector<DeltaEntry> entries;
    bool depth_exceeded = false;  // nothing qualified but longer executions exist
};

struct PracticeOptions {
    int depth = 12;
    EvalOptions eval;
};

// Δ_sp up to the depth bound: label sequences δ with SC → [δ]EC, executable
// from at least one SC-world, without skip steps except the bare {skip}.
// Each entry lists the plan-pattern branches its runs realize.
DeltaResult delta_set(const SocialPractice& sp, Checker& c, int depth);

// Leaf-by-leaf segmentation of a run (worlds has one more element than
// labels). A leaf matches a non-empty segment in ⟦Agt:γ⟧ that ends in a
// φ-world. Nothing when the run does not conform.
std::optional<std::vector<LeafSpan>> conforms(const PlanPattern& p, Checker& c, const std::vector<int>& worlds,
                                              const std::vector<int>& labels);

struct Witness {
    std::vector<PathStep> path;
    std::vector<int> worlds;
    Realization realization;
    std::string branch() const { return realization.str(); }
};

struct Verdict {
    bool holds = false;
    std::optional<Witness> witness;
    std::vector<std::string> report;
};

struct PracticeReport {
    Verdict feasible, normative, complete;
    std::size_t delta_size = 0;
    bool depth_exceeded = false;
};

// A norm the remaining path breaks, attributed to the agent it binds.
struct NormBreach {
    std::string norm;  // "O#1", "F#2"
    std::string agent, action;
    int world = 0;
};

struct PlanPatternReport {
    bool holds = false;
    std::vector<std::string> failures;
};

class PracticeChecker {
public:
    PracticeChecker(const KripkeModel& m, const SocialPractice& sp, PracticeOptions opts = {});

    Checker& checker() { return checker_; }
    const DeltaResult& delta();

    Verdict feasible();
    Verdict normative();
    Verdict complete();
    PracticeReport check_all();

    PlanPatternReport check_planpattern(const PlanPattern& pp);
    bool check_strategy(const Assertion& strategy, int world);

    // Norm monitor for one step: ids of norms the step breaks at `from`.
    std::vector<std::string> norm_failures(const std::vector<PathStep>& path, std::size_t i);
    std::vector<NormBreach> norm_breaches(const std::vector<PathStep>& path, std::size_t i);
    // Norms whose monitor activates at a world, as "O#1 fred".
    std::vector<std::string> active_norms(int world);
    bool path_violation_free(const std::vector<PathStep>& path);
    // Atomic actions of the step at `from` without an able actor, empty if all are covered.
    std::vector<std::string> unable_actions(int from, int label);

    // Social atoms of the witness's leaf goals that neither the leaf's action
    // nor a counts-as rule accounts for along it.
    std::vector<std::string> unaccounted_social(const Witness& w);

private:
    bool accounted(const Witness& w, const LeafSpan& span, const PlanPattern& leaf, const std::string& atom);
    std::vector<Witness> candidates();  // conforming entries of Δ, as witnesses
    std::vector<Witness> feasible_witnesses();

    const KripkeModel& m_;
    const SocialPractice& sp_;
    PracticeOptions opts_;
    Checker checker_;
    std::optional<DeltaResult> delta_;
    std::optional<std::vector<Witness>> feasible_;
};

struct ConditionFailure {
    int condition = 0;
    std::string witness;
};

using GeneralizeResult = std::variant<SocialPractice, ConditionFailure>;

// The practice based on the instances, or the first violated condition.
GeneralizeResult generalize(const std::vector<SocialPractice>& instances, const KripkeModel& m,
                            const std::string& name = "");

}  // namespace socprac
