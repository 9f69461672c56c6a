#pragma once

#include <memory>
#include <string>
#include <vector>

namespace socprac {

struct Action;
struct Event;
struct Assertion;
using ActionPtr = std::shared_ptr<const Action>;
using EventPtr = std::shared_ptr<const Event>;
using AssertionPtr = std::shared_ptr<const Assertion>;

struct Action {
    enum class Kind { Atom, Skip, Neg, Choice, Seq, Par, Achieve };
    Kind kind = Kind::Atom;
    std::string name;     // Atom
    ActionPtr lhs, rhs;   // Neg uses lhs
    AssertionPtr goal;    // Achieve: any->goal
};

struct Event {
    // Perform: agents:action; an empty agent list means the whole agent set.
    // PerformRole: role:action, resolved against the players at evaluation time.
    enum class Kind { Perform, PerformRole, Skip, Neg, Choice, Seq, Par };
    Kind kind = Kind::Perform;
    std::vector<std::string> agents;  // sorted, unique
    std::string role;
    ActionPtr action;
    EventPtr lhs, rhs;
};

struct Assertion {
    enum class Kind {
        True, False, Atom, Violation,
        Not, And, Or, Implies,
        Done, Do, Cap, Box, Diamond,
        Belief, EveryoneBelieves, CommonBelief, Goal,
        AbleAction,   // G{A}(α)
        AbleTo,       // G{A}(φ)
        Attempt,      // H{A}(φ)
        Stit,         // E{A}(φ)
        DoPart, DonePart,
        Obligation, Prohibition, Permission,
        NormO, NormF, NormP,
        PurposeBasic, PurposeGeneral, PurposeComplex, PurposeGroup, PurposeRole, PurposePractice,
        Strategy,
        CountsAs, Promotes, Demotes,
        Affords, Available, Play, Active, StartCond, EndCond, Salient,
    };
    Kind kind = Kind::True;
    std::string id;                   // atom, violation id, agent, context, practice
    std::string ctx;                  // context / practice argument
    std::string role;                 // role name (also strategy role group)
    std::string value;                // value name
    std::vector<std::string> agents;  // agent groups, object sets
    EventPtr event;
    ActionPtr action, action2;
    std::vector<AssertionPtr> sub;
    bool weak = false;                // strategy with H instead of DO
};

struct PlanPattern;
using PlanPtr = std::shared_ptr<const PlanPattern>;

struct PlanPattern {
    enum class Kind { Leaf, Seq, Choice, Par };
    Kind kind = Kind::Leaf;
    ActionPtr action;   // leaf γ
    AssertionPtr goal;  // leaf φ
    PlanPtr lhs, rhs;
    int index = 0;      // leaf number, 1-based, left to right
};

// Constructors.
ActionPtr act_atom(std::string name);
ActionPtr act_skip();
ActionPtr act_neg(ActionPtr a);
ActionPtr act_bin(Action::Kind k, ActionPtr l, ActionPtr r);
ActionPtr act_achieve(AssertionPtr goal);

EventPtr ev_perform(std::vector<std::string> agents, ActionPtr a);
EventPtr ev_role(std::string role, ActionPtr a);
EventPtr ev_skip();
EventPtr ev_neg(EventPtr e);
EventPtr ev_bin(Event::Kind k, EventPtr l, EventPtr r);

AssertionPtr as_const(bool v);
AssertionPtr as_atom(std::string name);
AssertionPtr as_violation(std::string id);
AssertionPtr as_not(AssertionPtr a);
AssertionPtr as_bin(Assertion::Kind k, AssertionPtr l, AssertionPtr r);
AssertionPtr as_event(Assertion::Kind k, EventPtr e);                       // Done, Do
AssertionPtr as_modal(Assertion::Kind k, EventPtr e, AssertionPtr body);    // Box, Diamond
AssertionPtr as_agents(Assertion::Kind k, std::vector<std::string> agents, AssertionPtr body);
AssertionPtr as_and_all(const std::vector<AssertionPtr>& parts);  // True when empty
AssertionPtr as_or_all(const std::vector<AssertionPtr>& parts);   // False when empty

PlanPtr plan_leaf(ActionPtr a, AssertionPtr goal);
PlanPtr plan_bin(PlanPattern::Kind k, PlanPtr l, PlanPtr r);
PlanPtr plan_number(const PlanPtr& p);  // copy with leaves renumbered
std::vector<const PlanPattern*> plan_leaves(const PlanPattern& p);

bool equal(const Action& a, const Action& b);
bool equal(const Event& a, const Event& b);
bool equal(const Assertion& a, const Assertion& b);
bool equal(const PlanPattern& a, const PlanPattern& b);

// Leaves of the action tree that are atoms (names), including under negation.
void collect_atoms(const Action& a, std::vector<std::string>& out);
bool is_monotone(const Action& a);  // built only from atoms, skip, ; and &

}  // namespace socprac
