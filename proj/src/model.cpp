#include "socprac/model.hpp"

#include <algorithm>
#include <functional>

namespace socprac {

void KripkeModel::finalize() {
    world_idx_.clear();
    atom_idx_.clear();
    for (int i = 0; i < static_cast<int>(worlds.size()); ++i) world_idx_[worlds[i]] = i;
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) atom_idx_[atoms[i]] = i;

    std::set<Step> steps;
    steps.insert(Step::skip(vocab.agent_count()));
    for (const auto& t : transitions) steps.insert(t.label);
    if (universe_mode == UniverseMode::Full)
        for (auto& s : full_step_universe(vocab)) steps.insert(std::move(s));
    universe_.assign(steps.begin(), steps.end());
    step_index_.clear();
    label_text_.clear();
    for (int i = 0; i < static_cast<int>(universe_.size()); ++i) {
        step_index_[universe_[i]] = i;
        label_text_.push_back(universe_[i].str(vocab));
    }

    int n = static_cast<int>(worlds.size());
    out_.assign(n, {});
    std::vector<bool> explicit_skip(n, false);
    for (const auto& t : transitions) {
        int li = step_index_.at(t.label);
        if (li == 0) explicit_skip[t.from] = true;
        out_[t.from].push_back({li, t.to});
    }
    for (int w = 0; w < n; ++w) {
        if (!explicit_skip[w]) out_[w].push_back({0, w});
        std::sort(out_[w].begin(), out_[w].end(), [&](const Edge& a, const Edge& b) {
            if (label_text_[a.label] != label_text_[b.label]) return label_text_[a.label] < label_text_[b.label];
            return worlds[a.to] < worlds[b.to];
        });
    }

    order_succ_.assign(n, {});
    order_pred_.assign(n, {});
    for (auto [a, b] : order) {
        order_succ_[a].push_back(b);
        order_pred_[b].push_back(a);
    }
    for (auto& v : order_succ_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& v : order_pred_) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

int KripkeModel::world_index(const std::string& name) const {
    auto it = world_idx_.find(name);
    return it == world_idx_.end() ? -1 : it->second;
}

int KripkeModel::atom_index(const std::string& name) const {
    auto it = atom_idx_.find(name);
    return it == atom_idx_.end() ? -1 : it->second;
}

const Context* KripkeModel::context(const std::string& name) const {
    for (const auto& c : contexts)
        if (c.name == name) return &c;
    return nullptr;
}

const Context& KripkeModel::context_or_throw(const std::string& name) const {
    if (auto* c = context(name)) return *c;
    throw UnknownContext("unknown context '" + name + "'");
}

bool KripkeModel::holds(int world, const std::string& atom) const {
    int i = atom_index(atom);
    return i >= 0 && valuation[world][i];
}

bool KripkeModel::is_role(const std::string& n) const {
    for (const auto& c : contexts)
        if (std::find(c.roles.begin(), c.roles.end(), n) != c.roles.end()) return true;
    return false;
}

bool KripkeModel::is_value(const std::string& n) const {
    return std::find(values.begin(), values.end(), n) != values.end();
}

bool KripkeModel::is_object(const std::string& n) const {
    return std::find(objects.begin(), objects.end(), n) != objects.end();
}

int KripkeModel::step_index(const Step& s) const {
    auto it = step_index_.find(s);
    return it == step_index_.end() ? -1 : it->second;
}

std::optional<int> KripkeModel::step_target(int world, const Step& s) const {
    int li = step_index(s);
    if (li < 0) return std::nullopt;
    for (const auto& e : out_[world])
        if (e.label == li) return e.to;
    return std::nullopt;
}

bool KripkeModel::precedes(int a, int b) const {
    const auto& v = order_succ_[a];
    return std::binary_search(v.begin(), v.end(), b);
}

bool KripkeModel::capable(const std::string& agent, const std::string& action_symbol) const {
    auto it = capability.find(agent);
    if (it == capability.end()) return false;
    if (it->second.count(action_symbol)) return true;
    auto at = action_symbol.find('@');
    return at != std::string::npos && it->second.count(action_symbol.substr(0, at));
}

bool KripkeModel::rea(const std::string& agent, const std::string& role, int world) const {
    for (const auto& p : plays)
        if (p.world == world && p.agent == agent && p.role == role) return true;
    return false;
}

bool KripkeModel::play(const std::string& agent, const std::string& role, const std::string& ctx, int world) const {
    const auto& c = context_or_throw(ctx);
    if (std::find(c.roles.begin(), c.roles.end(), role) == c.roles.end()) return false;
    if (!std::binary_search(c.worlds.begin(), c.worlds.end(), world)) return false;
    return rea(agent, role, world);
}

std::vector<std::string> KripkeModel::players(const std::string& role, const std::string& ctx, int world) const {
    std::vector<std::string> out;
    for (const auto& a : vocab.agents())
        if (play(a, role, ctx, world)) out.push_back(a);
    return out;
}

bool KripkeModel::value_less(const std::string& value, int a, int b) const {
    auto it = value_order.find(value);
    if (it == value_order.end()) return false;
    return std::find(it->second.begin(), it->second.end(), std::make_pair(a, b)) != it->second.end();
}

std::set<int> successors(const KripkeModel& m, int world, const TraceSet& t) {
    std::set<int> out;
    for (const auto& tr : t) {
        int cur = world;
        bool ok = true;
        for (const auto& s : tr) {
            auto nx = m.step_target(cur, s);
            if (!nx) {
                ok = false;
                break;
            }
            cur = *nx;
        }
        if (ok) out.insert(cur);
    }
    return out;
}

std::vector<int> context_start(const KripkeModel& m, const std::string& ctx) {
    const auto& c = m.context_or_throw(ctx);
    std::vector<int> out;
    for (int w : c.worlds) {
        bool minimal = true;
        for (int p : m.order_pred(w))
            if (std::binary_search(c.worlds.begin(), c.worlds.end(), p)) minimal = false;
        if (minimal) out.push_back(w);
    }
    return out;
}

std::vector<int> context_end(const KripkeModel& m, const std::string& ctx) {
    const auto& c = m.context_or_throw(ctx);
    std::vector<int> out;
    for (int w : c.worlds) {
        bool maximal = true;
        for (int s : m.order_succ(w))
            if (std::binary_search(c.worlds.begin(), c.worlds.end(), s)) maximal = false;
        if (maximal) out.push_back(w);
    }
    return out;
}

namespace {
bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void check_relation(const KripkeModel& m, const std::string& rel, int agent,
                    const std::vector<std::vector<int>>& r, bool symmetric, ValidationReport& rep) {
    const auto& name = m.vocab.agents()[agent];
    int n = static_cast<int>(m.worlds.size());
    for (int w = 0; w < n; ++w)
        if (r[w].empty())
            rep.violations.push_back({rel + "-serial", rel + "_" + name + " has no successor at " + m.worlds[w]});
    for (int w = 0; w < n; ++w)
        for (int v : r[w]) {
            if (symmetric && !has(r[v], w))
                rep.violations.push_back({rel + "-symmetric", rel + "_" + name + " has " + m.worlds[w] + "->" +
                                                                  m.worlds[v] + " but not the reverse"});
            for (int u : r[v])
                if (!has(r[w], u))
                    rep.violations.push_back({rel + "-transitive", rel + "_" + name + " has " + m.worlds[w] + "->" +
                                                                       m.worlds[v] + "->" + m.worlds[u] + " but not " +
                                                                       m.worlds[w] + "->" + m.worlds[u]});
        }
}
}  // namespace

ValidationReport validate_model(const KripkeModel& m) {
    ValidationReport rep;
    int n = static_cast<int>(m.worlds.size());
    for (int a = 0; a < m.vocab.agent_count(); ++a) {
        check_relation(m, "belief", a, m.belief[a], true, rep);
        check_relation(m, "goal", a, m.goal[a], false, rep);
    }

    // ≺ acyclic
    std::vector<int> colour(n, 0);
    std::function<bool(int, std::vector<int>&)> dfs = [&](int w, std::vector<int>& path) {
        colour[w] = 1;
        path.push_back(w);
        for (int s : m.order_succ(w)) {
            if (colour[s] == 1) {
                std::string cyc;
                auto it = std::find(path.begin(), path.end(), s);
                for (; it != path.end(); ++it) cyc += m.worlds[*it] + " < ";
                rep.violations.push_back({"order-acyclic", "cycle " + cyc + m.worlds[s]});
                return true;
            }
            if (colour[s] == 0 && dfs(s, path)) return true;
        }
        colour[w] = 2;
        path.pop_back();
        return false;
    };
    for (int w = 0; w < n; ++w) {
        std::vector<int> path;
        if (colour[w] == 0 && dfs(w, path)) break;
    }

    // ≺ / R_a coupling
    for (auto [w1, w2] : m.order)
        for (int a = 0; a < m.vocab.agent_count(); ++a)
            for (int w3 = 0; w3 < n; ++w3) {
                bool r1 = has(m.belief[a][w3], w1), r2 = has(m.belief[a][w3], w2);
                if (r1 != r2) {
                    rep.violations.push_back({"order-belief-coupling",
                                              m.worlds[w1] + " < " + m.worlds[w2] + " but belief_" +
                                                  m.vocab.agents()[a] + " links " + m.worlds[w3] + " to " +
                                                  m.worlds[r1 ? w1 : w2] + " only"});
                    break;
                }
            }

    for (const auto& t : m.transitions) {
        if (t.label.is_skip() && t.to != t.from)
            rep.violations.push_back({"skip-loop", "skip from " + m.worlds[t.from] + " leads to " + m.worlds[t.to]});
        if (!t.label.satisfies_constraints())
            rep.violations.push_back({"step-constraints", "label " + t.label.str(m.vocab) + " at " + m.worlds[t.from]});
    }
    for (std::size_t i = 0; i < m.transitions.size(); ++i)
        for (std::size_t j = i + 1; j < m.transitions.size(); ++j) {
            const auto &a = m.transitions[i], &b = m.transitions[j];
            if (a.from == b.from && a.label == b.label && a.to != b.to)
                rep.violations.push_back({"transition-function", "step " + a.label.str(m.vocab) + " at " +
                                                                     m.worlds[a.from] + " leads to both " +
                                                                     m.worlds[a.to] + " and " + m.worlds[b.to]});
        }

    for (const auto& c : m.contexts) {
        if (c.worlds.empty()) continue;
        std::vector<int> comp(n, -1);
        std::vector<int> stack{c.worlds[0]};
        comp[c.worlds[0]] = 0;
        auto inside = [&](int w) { return std::binary_search(c.worlds.begin(), c.worlds.end(), w); };
        while (!stack.empty()) {
            int w = stack.back();
            stack.pop_back();
            for (const auto* nb : {&m.order_succ(w), &m.order_pred(w)})
                for (int v : *nb)
                    if (inside(v) && comp[v] < 0) {
                        comp[v] = 0;
                        stack.push_back(v);
                    }
        }
        for (int w : c.worlds)
            if (comp[w] < 0)
                rep.violations.push_back({"context-connected", "context " + c.name + ": " + m.worlds[w] +
                                                                   " is not order-connected to " +
                                                                   m.worlds[c.worlds[0]]});
    }

    for (const auto& p : m.plays) {
        bool ok = false;
        for (const auto& c : m.contexts)
            if (std::find(c.roles.begin(), c.roles.end(), p.role) != c.roles.end() &&
                std::binary_search(c.worlds.begin(), c.worlds.end(), p.world))
                ok = true;
        if (!ok)
            rep.violations.push_back({"role-enactment", p.agent + " plays " + p.role + " at " + m.worlds[p.world] +
                                                            " outside every context with that role"});
    }

    for (const auto& [v, pairs] : m.value_order) {
        for (auto [a, b] : pairs) {
            if (a == b) rep.violations.push_back({"value-irreflexive", v + ": " + m.worlds[a] + " < itself"});
            for (auto [c, d] : pairs)
                if (b == c && std::find(pairs.begin(), pairs.end(), std::make_pair(a, d)) == pairs.end())
                    rep.violations.push_back({"value-transitive", v + ": " + m.worlds[a] + " < " + m.worlds[b] +
                                                                      " < " + m.worlds[d] + " but not " +
                                                                      m.worlds[a] + " < " + m.worlds[d]});
        }
    }

    std::string maximal;
    for (int w = 0; w < n; ++w)
        if (m.order_succ(w).empty()) maximal += (maximal.empty() ? "" : ", ") + m.worlds[w];
    if (!maximal.empty())
        rep.notes.push_back({"order-serial", "order is not serial; maximal worlds: " + maximal});
    return rep;
}

}  // namespace socprac
