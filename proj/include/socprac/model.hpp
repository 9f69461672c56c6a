#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "socprac/events.hpp"

namespace socprac {

struct Transition {
    int from = 0;
    Step label;
    int to = 0;
};

struct Context {
    std::string name;
    std::vector<int> worlds;  // sorted
    std::vector<std::string> roles;
    std::vector<std::string> actors;
    std::vector<std::string> objects;
    std::vector<std::string> places;
    bool practice = false;
};

struct RoleEnactment {
    std::string agent;
    std::string role;
    int world = 0;
    auto operator<=>(const RoleEnactment&) const = default;
};

struct AffordanceFact {
    std::string context;
    std::vector<std::string> objects;  // sorted
    std::string action;                // printed action expression
};

struct AvailabilityFact {
    std::string context;
    std::vector<std::string> objects;  // sorted
};

enum class UniverseMode { Labels, Full };

struct UnknownContext : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class KripkeModel {
public:
    Vocabulary vocab;
    std::vector<std::string> worlds;
    std::vector<std::string> atoms;    // physical, social and violation atoms
    std::set<std::string> social;      // atoms describing the social world
    std::vector<std::vector<bool>> valuation;  // [world][atom]
    std::vector<Transition> transitions;
    std::map<std::string, std::set<std::string>> capability;  // agent -> base action names
    std::vector<std::vector<std::vector<int>>> belief;  // [agent][world] -> worlds
    std::vector<std::vector<std::vector<int>>> goal;    // [agent][world] -> worlds
    std::vector<std::pair<int, int>> order;             // declared ≺ edges
    std::vector<std::string> objects;
    std::vector<std::string> values;
    std::map<std::string, std::vector<std::pair<int, int>>> value_order;  // value -> (w, w') with w < w'
    std::vector<Context> contexts;
    std::vector<RoleEnactment> plays;
    std::vector<AffordanceFact> affords;
    std::vector<AvailabilityFact> available;
    UniverseMode universe_mode = UniverseMode::Labels;

    // Recompute the step universe and adjacency after editing the data above.
    void finalize();

    int world_index(const std::string& name) const;  // -1 if unknown
    int atom_index(const std::string& name) const;    // -1 if unknown
    const Context* context(const std::string& name) const;
    const Context& context_or_throw(const std::string& name) const;
    bool holds(int world, const std::string& atom) const;
    bool is_social(const std::string& atom) const { return social.count(atom) > 0; }
    bool is_agent(const std::string& n) const { return vocab.has_agent(n); }
    bool is_role(const std::string& n) const;
    bool is_value(const std::string& n) const;
    bool is_object(const std::string& n) const;

    // Steps that negation and the symbolic matcher range over; index 0 is skip.
    const std::vector<Step>& universe() const { return universe_; }
    int step_index(const Step& s) const;  // -1 if outside the universe

    struct Edge {
        int label;  // universe index
        int to;
    };
    // Outgoing transitions including the implicit skip loop, ordered by label text.
    const std::vector<Edge>& out(int world) const { return out_[world]; }
    std::optional<int> step_target(int world, const Step& s) const;

    const std::vector<int>& order_succ(int world) const { return order_succ_[world]; }
    const std::vector<int>& order_pred(int world) const { return order_pred_[world]; }
    bool precedes(int a, int b) const;

    bool capable(const std::string& agent, const std::string& action_symbol) const;
    bool rea(const std::string& agent, const std::string& role, int world) const;
    // play(a,r,c): r is a role of c, world is in c and rea(a,r,world).
    bool play(const std::string& agent, const std::string& role, const std::string& ctx, int world) const;
    std::vector<std::string> players(const std::string& role, const std::string& ctx, int world) const;
    bool value_less(const std::string& value, int a, int b) const;
    const std::string& label_text(int universe_index) const { return label_text_[universe_index]; }

private:
    std::vector<Step> universe_;
    std::vector<std::string> label_text_;
    std::map<Step, int> step_index_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<int>> order_succ_, order_pred_;
    std::map<std::string, int> world_idx_, atom_idx_;
};

std::set<int> successors(const KripkeModel& m, int world, const TraceSet& t);

std::vector<int> context_start(const KripkeModel& m, const std::string& ctx);
std::vector<int> context_end(const KripkeModel& m, const std::string& ctx);

struct Diagnostic {
    std::string condition;  // e.g. "belief-serial"
    std::string message;
};

struct ValidationReport {
    std::vector<Diagnostic> violations;
    std::vector<Diagnostic> notes;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_model(const KripkeModel& m);

}  // namespace socprac
