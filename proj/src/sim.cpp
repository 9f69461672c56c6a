#include "socprac/sim.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "socprac/lang.hpp"

namespace socprac {

std::vector<PlanPtr> plan_branches(const PlanPtr& p) {
    if (p->kind == PlanPattern::Kind::Leaf) return {p};
    auto l = plan_branches(p->lhs);
    auto r = plan_branches(p->rhs);
    if (p->kind == PlanPattern::Kind::Choice) {
        l.insert(l.end(), r.begin(), r.end());
        return l;
    }
    std::vector<PlanPtr> out;
    for (const auto& a : l)
        for (const auto& b : r) {
            auto n = std::make_shared<PlanPattern>(*p);
            n->lhs = a;
            n->rhs = b;
            out.push_back(n);
        }
    return out;
}

std::size_t ExecutionTrace::violation_count() const {
    std::size_t n = 0;
    for (const auto& r : records) n += r.violations.size();
    return n;
}

std::vector<int> ExecutionTrace::worlds() const {
    std::vector<int> out{start};
    for (const auto& r : records) out.push_back(r.to);
    return out;
}

Stuck::Stuck(int w, std::string r, ExecutionTrace p)
    : std::runtime_error("stuck: " + r), world(w), reason(std::move(r)), partial(std::move(p)) {}

std::vector<AgentPolicy> default_policies(const SocialPractice& sp, const KripkeModel& m, int start) {
    std::vector<AgentPolicy> out;
    for (const auto& a : sp.actors) {
        AgentPolicy p;
        p.agent = a;
        for (const auto& r : sp.roles)
            if (m.play(a, r, sp.name, start)) p.roles.push_back(r);
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

std::vector<std::string> raised(const KripkeModel& m, int from, int to) {
    std::vector<std::string> out;
    for (std::size_t p = 0; p < m.atoms.size(); ++p)
        if (m.atoms[p].rfind("V#", 0) == 0 && m.valuation[to][p] && !m.valuation[from][p]) out.push_back(m.atoms[p]);
    return out;
}

std::string branch_name(int pattern, const PlanPattern& b) {
    std::string s = "pp" + std::to_string(pattern + 1) + ":";
    auto leaves = plan_leaves(b);
    for (std::size_t i = 0; i < leaves.size(); ++i) s += (i ? "," : "") + std::to_string(leaves[i]->index);
    return s;
}

struct Candidate {
    Step step;
    std::string text;
    int label = 0;   // universe index; a variant borrows the label of the edge it was made from
    int expect = 0;  // world the agents expect to reach
    bool real = true;
};

struct Branch {
    int pattern = 0;
    PlanPtr plan;
    std::string name;
};

class Simulator {
public:
    Simulator(const SocialPractice& sp, const KripkeModel& m, std::vector<AgentPolicy> policies, const SimOptions& o)
        : sp_(sp), m_(m), policies_(std::move(policies)), opts_(o), pc_(m, sp, PracticeOptions{o.depth, o.eval}) {
        for (const auto& p : policies_) {
            for (const auto& r : p.roles)
                if (std::find(sp.roles.begin(), sp.roles.end(), r) == sp.roles.end())
                    throw std::invalid_argument("policy for " + p.agent + " binds role '" + r + "' outside the practice");
            by_agent_[p.agent] = &p;
        }
    }

    ExecutionTrace run(int start) {
        Checker& c = pc_.checker();
        const auto& ws = m_.context_or_throw(sp_.name).worlds;
        if (!std::binary_search(ws.begin(), ws.end(), start) || !c.eval(*sp_.start, start))
            throw std::invalid_argument("world " + m_.worlds[start] + " does not satisfy the start condition");
        if (!pc_.feasible().holds) throw std::invalid_argument("practice " + sp_.name + " is not feasible");

        trace_.practice = sp_.name;
        trace_.start = start;
        trace_.seed = opts_.seed;
        worlds_ = {start};
        order_branches();

        std::vector<std::string> failed;
        while (true) {
            int w = worlds_.back();
            if (c.eval(*sp_.end, w)) return finish("ec");
            if (static_cast<int>(trace_.records.size()) >= opts_.ticks) return finish("budget");

            TraceRecord rec;
            rec.tick = static_cast<int>(trace_.records.size()) + 1;
            rec.from = w;
            std::optional<Candidate> next;
            std::string reason = "plan";
            for (const auto& s : sp_.strategies) {
                if (!c.eval(*as_agents(Assertion::Kind::CommonBelief, sp_.actors, s->sub[0]), w)) continue;
                int node = c.compile(*s->event, w, s->ctx);
                auto first = plan([&](const Candidate& k) { return c.matcher().extendable(node, {k.label}); });
                if (!first) continue;
                if (next) {
                    rec.shadowed.push_back(print(*s));
                    continue;
                }
                next = first;
                reason = "strategy";
            }
            if (!next) next = plan(nullptr);
            if (!next) throw Stuck(w, "no strategy, plan step or replan applies at " + m_.worlds[w], finish("stuck"));

            auto to = m_.step_target(w, next->step);
            if (!to) {
                failed.push_back(next->text);
                failed_.insert({w, next->text});
                continue;
            }
            rec.step = next->text;
            rec.to = *to;
            rec.reason = failed.empty() ? reason : "replan";
            rec.failed = std::move(failed);
            failed.clear();
            rec.active_norms = pc_.active_norms(w);
            rec.violations = raised(m_, w, *to);
            int label = m_.step_index(next->step);
            rec.social_effects = effects(w, label);
            path_.push_back({w, label, *to});
            worlds_.push_back(*to);
            trace_.records.push_back(std::move(rec));
        }
    }

private:
    ExecutionTrace finish(const std::string& status) {
        trace_.status = status;
        trace_.end = worlds_.back();
        return trace_;
    }

    void order_branches() {
        std::vector<Branch> all;
        for (std::size_t i = 0; i < sp_.plan_patterns.size(); ++i)
            for (const auto& b : plan_branches(sp_.plan_patterns[i]))
                all.push_back({static_cast<int>(i), b, branch_name(static_cast<int>(i), *b)});
        std::mt19937_64 rng(opts_.seed);
        std::shuffle(all.begin(), all.end(), rng);
        for (const auto& p : policies_)
            for (auto pref : p.prefer) {
                if (pref.rfind("pp", 0) != 0) pref = "pp1:" + pref;
                auto it = std::find_if(all.begin(), all.end(), [&](const Branch& b) { return b.name == pref; });
                if (it == all.end()) continue;
                branches_.push_back(*it);
                all.erase(it);
            }
        branches_.insert(branches_.end(), all.begin(), all.end());
    }

    const AgentPolicy* policy(const std::string& a) const {
        auto it = by_agent_.find(a);
        return it == by_agent_.end() ? nullptr : it->second;
    }

    bool violating(GroupMask g) const {
        for (const auto& a : m_.vocab.group_names(g))
            if (auto* p = policy(a); p && p->compliance == Compliance::ViolatingAllowed) return true;
        return false;
    }

    // Objects of the practice that afford the action and are available.
    std::vector<std::string> afforders(const std::string& action) const {
        std::vector<std::string> out;
        for (const auto& af : sp_.affordances) {
            if (af.objects.size() != 1 || print(*af.action) != action) continue;
            const auto& o = af.objects[0];
            if (std::find(sp_.resources.begin(), sp_.resources.end(), o) == sp_.resources.end()) continue;
            bool avail = std::any_of(m_.available.begin(), m_.available.end(), [&](const AvailabilityFact& f) {
                return f.context == sp_.name && std::find(f.objects.begin(), f.objects.end(), o) != f.objects.end();
            });
            if (avail) out.push_back(o);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Accepted by the policies: every action done by a capable agent of the
    // practice, none the agent omits.
    bool acceptable(const Step& s) const {
        const auto& v = m_.vocab;
        for (const auto& [g, acts] : s.sparse()) {
            auto agents = v.group_names(g);
            for (const auto& x : v.action_names(acts)) {
                auto base = x.substr(0, x.find('@'));
                bool capable = false;
                for (const auto& a : agents) {
                    auto* p = policy(a);
                    if (!p) return false;
                    if (p->omit.count(x) || p->omit.count(base)) return false;
                    capable = capable || m_.capable(a, x);
                }
                if (!capable) return false;
            }
        }
        return true;
    }

    std::vector<Candidate> candidates(int w) {
        std::vector<Candidate> out;
        std::set<std::string> seen;
        const auto& v = m_.vocab;
        for (const auto& e : m_.out(w)) {
            if (e.label == 0) continue;
            const Step& s = m_.universe()[e.label];
            if (seen.insert(s.str(v)).second) out.push_back({s, s.str(v), e.label, e.to, true});
        }
        std::size_t n_real = out.size();
        for (std::size_t k = 0; k < n_real; ++k) {
            auto base_edge = out[k];
            for (int i = 0; i < v.action_count(); ++i) {
                ActionSet bit = ActionSet{1} << i;
                if (!(base_edge.step.act(v.all_agents()) & bit)) continue;
                const auto& x = v.actions()[static_cast<std::size_t>(i)];
                auto at = x.find('@');
                if (at == std::string::npos) continue;
                auto objs = afforders(x.substr(0, at));
                if (std::find(objs.begin(), objs.end(), x.substr(at + 1)) == objs.end()) continue;
                for (const auto& o : objs) {
                    int j = v.action_index(x.substr(0, at + 1) + o);
                    if (j < 0 || j == i) continue;
                    auto sparse = base_edge.step.sparse();
                    for (auto& [g, acts] : sparse)
                        if (acts & bit) acts = (acts & ~bit) | (ActionSet{1} << j);
                    Step alt = Step::complete(v.agent_count(), sparse);
                    if (seen.insert(alt.str(v)).second)
                        out.push_back({alt, alt.str(v), base_edge.label, base_edge.expect, false});
                }
            }
        }
        std::erase_if(out, [&](const Candidate& c) { return failed_.count({w, c.text}) || !acceptable(c.step); });
        std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.text < b.text; });
        return out;
    }

    // First step of a plan that completes some branch, in branch order.
    template <typename First>
    std::optional<Candidate> plan(First first) {
        for (const auto& b : branches_) {
            auto worlds = worlds_;
            auto path = path_;
            std::optional<Candidate> step;
            if (search(b, worlds, path, first, step)) {
                trace_.branch = b.name;
                return step;
            }
        }
        return std::nullopt;
    }

    template <typename First>
    bool search(const Branch& b, std::vector<int>& worlds, std::vector<PathStep>& path, const First& first,
                std::optional<Candidate>& step) {
        Checker& c = pc_.checker();
        int w = worlds.back();
        if (path.size() > path_.size() && c.eval(*sp_.end, w) && admissible(b, worlds, path)) return true;
        if (static_cast<int>(path.size()) >= opts_.depth) return false;
        for (const auto& k : candidates(w)) {
            bool at_first = path.size() == path_.size();
            if (at_first) {
                if constexpr (!std::is_same_v<First, std::nullptr_t>)
                    if (!first(k)) continue;
            }
            if (!raised(m_, w, k.expect).empty() && !violating(k.step.active_agents())) continue;
            path.push_back({w, k.label, k.expect});
            worlds.push_back(k.expect);
            if (at_first) step = k;
            bool ok = search(b, worlds, path, first, step);
            path.pop_back();
            worlds.pop_back();
            if (ok) return true;
        }
        return false;
    }

    bool admissible(const Branch& b, const std::vector<int>& worlds, const std::vector<PathStep>& path) {
        std::vector<int> labels;
        for (const auto& s : path) labels.push_back(s.label);
        if (!conforms(*b.plan, pc_.checker(), worlds, labels)) return false;
        for (std::size_t i = 0; i < path.size(); ++i)
            for (const auto& br : pc_.norm_breaches(path, i))
                if (auto* p = policy(br.agent); !p || p->compliance == Compliance::Compliant) return false;
        return true;
    }

    std::vector<SocialEffect> effects(int from, int label) {
        std::vector<SocialEffect> out;
        Checker& c = pc_.checker();
        for (const auto& rule : sp_.counts_as) {
            if (!c.eval(*rule, from)) continue;
            auto social = ev_perform({}, rule->action2);
            std::vector<std::string> atoms;
            if (c.eval(*as_modal(Assertion::Kind::Diamond, social, as_const(true)), from))
                for (const auto& p : m_.social)
                    if (c.eval(*as_modal(Assertion::Kind::Box, social, as_atom(p)), from)) atoms.push_back(p);
            for (const auto& p : policies_) {
                if (std::find(p.roles.begin(), p.roles.end(), rule->role) == p.roles.end()) continue;
                int node = c.compile(*ev_perform({p.agent}, rule->action), from);
                if (c.matcher().contains(node, {label}))
                    out.push_back({p.agent, print(*rule->action), print(*rule->action2), atoms});
            }
        }
        return out;
    }

    const SocialPractice& sp_;
    const KripkeModel& m_;
    std::vector<AgentPolicy> policies_;
    std::map<std::string, const AgentPolicy*> by_agent_;
    SimOptions opts_;
    PracticeChecker pc_;
    std::vector<Branch> branches_;
    std::set<std::pair<int, std::string>> failed_;
    std::vector<int> worlds_;
    std::vector<PathStep> path_;
    ExecutionTrace trace_;
};

using nlohmann::json;

const std::string& world_name(const KripkeModel& m, int w) { return m.worlds.at(static_cast<std::size_t>(w)); }

int world_of(const KripkeModel& m, const std::string& n) {
    int w = m.world_index(n);
    if (w < 0) throw std::runtime_error("unknown world '" + n + "' in trace");
    return w;
}

}  // namespace

ExecutionTrace simulate(const SocialPractice& sp, const KripkeModel& m, int start, std::vector<AgentPolicy> policies,
                        const SimOptions& opts) {
    return Simulator(sp, m, std::move(policies), opts).run(start);
}

std::vector<int> replay(const ExecutionTrace& t, const KripkeModel& m) {
    std::vector<int> out{t.start};
    for (const auto& r : t.records) {
        int w = out.back();
        if (r.from != w)
            throw std::runtime_error("tick " + std::to_string(r.tick) + " starts at " + world_name(m, r.from) +
                                     ", expected " + world_name(m, w));
        auto e = std::find_if(m.out(w).begin(), m.out(w).end(),
                              [&](const KripkeModel::Edge& e) { return m.label_text(e.label) == r.step; });
        if (e == m.out(w).end())
            throw std::runtime_error("tick " + std::to_string(r.tick) + ": no transition " + r.step + " at " +
                                     world_name(m, w));
        out.push_back(e->to);
    }
    return out;
}

std::string trace_jsonl(const ExecutionTrace& t, const KripkeModel& m) {
    std::ostringstream o;
    o << json{{"type", "header"},   {"practice", t.practice}, {"start", world_name(m, t.start)},
              {"seed", t.seed},     {"branch", t.branch}}
             .dump()
      << "\n";
    for (const auto& r : t.records) {
        json effects = json::array();
        for (const auto& e : r.social_effects)
            effects.push_back({{"agent", e.agent}, {"action", e.action}, {"counts_as", e.counts_as}, {"atoms", e.atoms}});
        o << json{{"type", "step"},
                  {"tick", r.tick},
                  {"from", world_name(m, r.from)},
                  {"step", r.step},
                  {"to", world_name(m, r.to)},
                  {"reason", r.reason},
                  {"failed", r.failed},
                  {"shadowed", r.shadowed},
                  {"active_norms", r.active_norms},
                  {"violations", r.violations},
                  {"social_effects", effects}}
                 .dump()
          << "\n";
    }
    o << json{{"type", "end"},
              {"status", t.status},
              {"world", world_name(m, t.end)},
              {"ticks", t.records.size()},
              {"violations", t.violation_count()}}
             .dump()
      << "\n";
    return o.str();
}

ExecutionTrace parse_trace_jsonl(const std::string& text, const KripkeModel& m) {
    ExecutionTrace t;
    std::istringstream in(text);
    std::string line;
    bool header = false, end = false;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            auto type = j.at("type").get<std::string>();
            if (type == "header") {
                t.practice = j.at("practice").get<std::string>();
                t.start = world_of(m, j.at("start").get<std::string>());
                t.seed = j.at("seed").get<std::uint64_t>();
                t.branch = j.at("branch").get<std::string>();
                header = true;
            } else if (type == "step") {
                TraceRecord r;
                r.tick = j.at("tick").get<int>();
                r.from = world_of(m, j.at("from").get<std::string>());
                r.step = j.at("step").get<std::string>();
                r.to = world_of(m, j.at("to").get<std::string>());
                r.reason = j.at("reason").get<std::string>();
                r.failed = j.at("failed").get<std::vector<std::string>>();
                r.shadowed = j.at("shadowed").get<std::vector<std::string>>();
                r.active_norms = j.at("active_norms").get<std::vector<std::string>>();
                r.violations = j.at("violations").get<std::vector<std::string>>();
                for (const auto& e : j.at("social_effects"))
                    r.social_effects.push_back({e.at("agent").get<std::string>(), e.at("action").get<std::string>(),
                                                e.at("counts_as").get<std::string>(),
                                                e.at("atoms").get<std::vector<std::string>>()});
                t.records.push_back(std::move(r));
            } else if (type == "end") {
                t.status = j.at("status").get<std::string>();
                t.end = world_of(m, j.at("world").get<std::string>());
                end = true;
            } else {
                throw std::runtime_error("unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            throw std::runtime_error("line " + std::to_string(n) + ": " + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("line " + std::to_string(n) + ": " + e.what());
        }
    }
    if (!header || !end) throw std::runtime_error("trace needs a header and an end record");
    return t;
}

std::string trace_text(const ExecutionTrace& t, const KripkeModel& m) {
    auto list = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
        return s;
    };
    std::ostringstream o;
    o << "practice " << t.practice << " from " << world_name(m, t.start) << " (seed " << t.seed << ", branch "
      << t.branch << ")\n";
    for (const auto& r : t.records) {
        for (const auto& f : r.failed) o << "       failed " << f << " at " << world_name(m, r.from) << "\n";
        o << std::to_string(r.tick) << ". " << world_name(m, r.from) << " -> " << world_name(m, r.to) << "  " << r.step
          << "  [" << r.reason << "]\n";
        if (!r.active_norms.empty()) o << "       norms: " << list(r.active_norms) << "\n";
        if (!r.violations.empty()) o << "       violations: " << list(r.violations) << "\n";
        for (const auto& s : r.shadowed) o << "       shadowed: " << s << "\n";
        for (const auto& e : r.social_effects)
            o << "       " << e.agent << ":" << e.action << " counts as " << e.counts_as
              << (e.atoms.empty() ? "" : " (" + list(e.atoms) + ")") << "\n";
    }
    o << t.status << " at " << world_name(m, t.end) << " after " << t.records.size() << " ticks, "
      << t.violation_count() << " violations\n";
    return o.str();
}

}  // namespace socprac
