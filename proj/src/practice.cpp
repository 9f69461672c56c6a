#include <algorithm>
#include <functional>
#include <map>

#include "socprac/lang.hpp"
#include "socprac/practice.hpp"

namespace socprac {

ActionPtr plan_action(const PlanPattern& p) {
    switch (p.kind) {
        case PlanPattern::Kind::Leaf: return p.action;
        case PlanPattern::Kind::Seq: return act_bin(Action::Kind::Seq, plan_action(*p.lhs), plan_action(*p.rhs));
        case PlanPattern::Kind::Choice:
            return act_bin(Action::Kind::Choice, plan_action(*p.lhs), plan_action(*p.rhs));
        case PlanPattern::Kind::Par: return act_bin(Action::Kind::Par, plan_action(*p.lhs), plan_action(*p.rhs));
    }
    return nullptr;
}

const PlanPattern& plan_start(const PlanPattern& p) {
    return p.kind == PlanPattern::Kind::Seq ? plan_start(*p.lhs) : p;
}

namespace {
void seq_chain(const PlanPattern& p, std::vector<const PlanPattern*>& out) {
    if (p.kind == PlanPattern::Kind::Seq) {
        seq_chain(*p.lhs, out);
        seq_chain(*p.rhs, out);
    } else {
        out.push_back(&p);
    }
}

void seq_pairs(const PlanPattern& p, std::vector<std::pair<const PlanPattern*, const PlanPattern*>>& out) {
    if (p.kind == PlanPattern::Kind::Leaf) return;
    if (p.kind != PlanPattern::Kind::Seq) {
        seq_pairs(*p.lhs, out);
        seq_pairs(*p.rhs, out);
        return;
    }
    std::vector<const PlanPattern*> chain;
    seq_chain(p, chain);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) out.emplace_back(chain[i], chain[i + 1]);
    for (const auto* q : chain) seq_pairs(*q, out);
}

void assertion_atoms(const Assertion& a, std::vector<std::string>& out) {
    if (a.kind == Assertion::Kind::Atom) out.push_back(a.id);
    for (const auto& s : a.sub) assertion_atoms(*s, out);
}

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}
}  // namespace

std::vector<std::pair<const PlanPattern*, const PlanPattern*>> plan_seq_pairs(const PlanPattern& p) {
    std::vector<std::pair<const PlanPattern*, const PlanPattern*>> out;
    seq_pairs(p, out);
    return out;
}

std::string Realization::str() const {
    std::string s = "pp" + std::to_string(pattern + 1) + ":";
    for (std::size_t i = 0; i < leaves.size(); ++i) s += (i ? "," : "") + std::to_string(leaves[i].leaf);
    return s;
}

std::optional<std::vector<LeafSpan>> conforms(const PlanPattern& p, Checker& c, const std::vector<int>& worlds,
                                              const std::vector<int>& labels) {
    auto& mt = c.matcher();
    GroupMask all = c.model().vocab.all_agents();
    std::function<std::optional<std::vector<LeafSpan>>(const PlanPattern&, std::size_t, std::size_t)> match =
        [&](const PlanPattern& q, std::size_t b, std::size_t e) -> std::optional<std::vector<LeafSpan>> {
        switch (q.kind) {
            case PlanPattern::Kind::Leaf: {
                if (e <= b) return std::nullopt;
                int node = c.compile_collective(all, *q.action, worlds[b]);
                std::vector<int> seg(labels.begin() + static_cast<std::ptrdiff_t>(b),
                                     labels.begin() + static_cast<std::ptrdiff_t>(e));
                if (!mt.contains(node, seg) || !c.eval(*q.goal, worlds[e])) return std::nullopt;
                return std::vector<LeafSpan>{{q.index, b, e}};
            }
            case PlanPattern::Kind::Seq:
                for (std::size_t k = b + 1; k < e; ++k) {
                    auto l = match(*q.lhs, b, k);
                    if (!l) continue;
                    auto r = match(*q.rhs, k, e);
                    if (!r) continue;
                    l->insert(l->end(), r->begin(), r->end());
                    return l;
                }
                return std::nullopt;
            case PlanPattern::Kind::Choice: {
                auto l = match(*q.lhs, b, e);
                return l ? l : match(*q.rhs, b, e);
            }
            case PlanPattern::Kind::Par: {
                auto l = match(*q.lhs, b, e);
                if (!l) return std::nullopt;
                auto r = match(*q.rhs, b, e);
                if (!r) return std::nullopt;
                l->insert(l->end(), r->begin(), r->end());
                return l;
            }
        }
        return std::nullopt;
    };
    if (worlds.size() != labels.size() + 1) return std::nullopt;
    return match(p, 0, labels.size());
}

DeltaResult delta_set(const SocialPractice& sp, Checker& c, int depth) {
    const KripkeModel& m = c.model();
    int n = static_cast<int>(m.worlds.size());
    std::vector<bool> ec(n);
    DeltaResult res;
    for (int u = 0; u < n; ++u) {
        if (c.eval(*sp.start, u)) res.start_worlds.push_back(u);
        ec[u] = c.eval(*sp.end, u);
    }

    // label sequence -> runs, one per SC-world that executes it
    std::map<std::vector<int>, std::vector<std::vector<int>>> runs;
    bool hit_bound = false;
    std::vector<int> labels, worlds;
    std::function<void(int)> dfs = [&](int w) {
        if (static_cast<int>(labels.size()) == depth) {
            for (const auto& e : m.out(w))
                if (e.label != 0) hit_bound = true;
            return;
        }
        for (const auto& e : m.out(w)) {
            if (e.label == 0) continue;
            labels.push_back(e.label);
            worlds.push_back(e.to);
            runs[labels].push_back(worlds);
            dfs(e.to);
            labels.pop_back();
            worlds.pop_back();
        }
    };
    for (int u : res.start_worlds) {
        worlds = {u};
        dfs(u);
    }

    if (!res.start_worlds.empty() &&
        std::all_of(res.start_worlds.begin(), res.start_worlds.end(), [&](int u) { return ec[u]; })) {
        DeltaEntry skip;
        skip.labels = {0};
        for (int u : res.start_worlds) skip.runs.push_back({u, u});
        res.entries.push_back(std::move(skip));
    }
    for (auto& [ls, rs] : runs) {
        if (!std::all_of(rs.begin(), rs.end(), [&](const std::vector<int>& r) { return ec[r.back()]; })) continue;
        res.entries.push_back({ls, rs, {}});
    }
    std::stable_sort(res.entries.begin(), res.entries.end(),
                     [](const DeltaEntry& a, const DeltaEntry& b) { return a.labels.size() < b.labels.size(); });

    for (auto& e : res.entries)
        for (std::size_t pi = 0; pi < sp.plan_patterns.size(); ++pi)
            for (std::size_t ri = 0; ri < e.runs.size(); ++ri) {
                std::vector<int> labels_used = e.labels == std::vector<int>{0} ? std::vector<int>{} : e.labels;
                std::vector<int> run = labels_used.empty() ? std::vector<int>{e.runs[ri][0]} : e.runs[ri];
                if (auto spans = conforms(*sp.plan_patterns[pi], c, run, labels_used)) {
                    e.realizations.push_back({static_cast<int>(pi), ri, *spans});
                    break;
                }
            }
    res.depth_exceeded = res.entries.empty() && hit_bound;
    return res;
}

PracticeChecker::PracticeChecker(const KripkeModel& m, const SocialPractice& sp, PracticeOptions opts)
    : m_(m), sp_(sp), opts_(opts), checker_(m, opts.eval) {
    checker_.set_delta_provider([this](const std::string& ctx) {
        if (ctx != sp_.name) throw EvalError("no practice loaded for context " + ctx);
        std::vector<std::vector<int>> out;
        for (const auto& e : delta().entries) out.push_back(e.labels);
        return out;
    });
}

const DeltaResult& PracticeChecker::delta() {
    if (!delta_) delta_ = delta_set(sp_, checker_, opts_.depth);
    return *delta_;
}

std::vector<Witness> PracticeChecker::candidates() {
    std::vector<Witness> out;
    for (const auto& e : delta().entries)
        for (const auto& r : e.realizations) {
            Witness w;
            w.worlds = e.runs[r.run];
            if (e.labels != std::vector<int>{0})
                for (std::size_t i = 0; i < e.labels.size(); ++i)
                    w.path.push_back({w.worlds[i], e.labels[i], w.worlds[i + 1]});
            else
                w.worlds.resize(1);
            w.realization = r;
            out.push_back(std::move(w));
        }
    return out;
}

std::vector<std::string> PracticeChecker::unable_actions(int from, int label) {
    std::vector<std::string> out;
    const Step& s = m_.universe()[label];
    for (const auto& x : m_.vocab.action_names(s.act(m_.vocab.all_agents()))) {
        auto act = act_atom(x);
        bool some = false;
        for (const auto& a : sp_.actors)
            if (checker_.able(checker_.group({a}), *act, from)) {
                some = true;
                break;
            }
        if (!some) out.push_back(x);
    }
    return out;
}

std::vector<Witness> PracticeChecker::feasible_witnesses() {
    if (!feasible_) {
        feasible_.emplace();
        for (auto& w : candidates()) {
            bool ok = true;
            for (const auto& st : w.path)
                if (!unable_actions(st.from, st.label).empty()) ok = false;
            if (ok) feasible_->push_back(std::move(w));
        }
    }
    return *feasible_;
}

Verdict PracticeChecker::feasible() {
    Verdict v;
    auto ws = feasible_witnesses();
    if (!ws.empty()) {
        v.holds = true;
        v.witness = ws.front();
        return v;
    }
    const auto& d = delta();
    if (d.start_worlds.empty()) v.report.push_back("no world satisfies the start condition");
    if (d.entries.empty()) v.report.push_back(d.depth_exceeded ? "no execution reaches the end condition within the depth bound"
                                                                : "no execution leads from start to end");
    auto cs = candidates();
    if (!d.entries.empty() && cs.empty()) v.report.push_back("no execution conforms to a plan pattern");
    for (const auto& w : cs)
        for (const auto& st : w.path)
            for (const auto& x : unable_actions(st.from, st.label))
                v.report.push_back(w.branch() + ": no actor able to " + x + " at " + m_.worlds[st.from]);
    return v;
}

std::vector<NormBreach> PracticeChecker::norm_breaches(const std::vector<PathStep>& path, std::size_t i) {
    std::vector<NormBreach> out;
    int from = path[i].from;
    std::vector<int> rest;
    for (std::size_t k = i; k < path.size(); ++k) rest.push_back(path[k].label);
    for (const auto& n : sp_.norms) {
        if (n->kind == Assertion::Kind::NormP) continue;
        for (const auto& a : sp_.actors) {
            if (!m_.play(a, n->role, sp_.name, from)) continue;
            if (!checker_.eval(*as_agents(Assertion::Kind::Belief, {a}, n->sub[0]), from)) continue;
            auto e = ev_perform({a}, n->action);
            int node = checker_.compile(*e, from);
            bool performed = false;
            for (std::size_t k = 1; k <= rest.size() && !performed; ++k)
                performed = checker_.matcher().contains(node, std::vector<int>(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(k)));
            bool broken = n->kind == Assertion::Kind::NormO ? !performed : performed;
            if (broken)
                out.push_back({std::string(n->kind == Assertion::Kind::NormO ? "O#" : "F#") + n->id, a, print(*n->action), from});
        }
    }
    return out;
}

std::vector<std::string> PracticeChecker::norm_failures(const std::vector<PathStep>& path, std::size_t i) {
    std::vector<std::string> out;
    for (const auto& b : norm_breaches(path, i))
        out.push_back(b.norm + " " + b.agent + ":" + b.action + " at " + m_.worlds[b.world]);
    return out;
}

std::vector<std::string> PracticeChecker::active_norms(int world) {
    std::vector<std::string> out;
    for (const auto& n : sp_.norms) {
        std::string k = n->kind == Assertion::Kind::NormO ? "O#" : n->kind == Assertion::Kind::NormF ? "F#" : "P#";
        for (const auto& a : sp_.actors)
            if (m_.play(a, n->role, sp_.name, world) &&
                checker_.eval(*as_agents(Assertion::Kind::Belief, {a}, n->sub[0]), world))
                out.push_back(k + n->id + " " + a);
    }
    return out;
}

namespace {
// Raised violation atoms owned by one of the practice's norms.
std::vector<std::string> violation_atoms(const KripkeModel& m, const SocialPractice& sp, int w) {
    std::vector<std::string> out;
    for (const auto& n : sp.norms) {
        int p = m.atom_index("V#" + n->id);
        if (p >= 0 && m.valuation[w][p]) out.push_back(m.atoms[p] + " at " + m.worlds[w]);
    }
    return out;
}
}  // namespace

bool PracticeChecker::path_violation_free(const std::vector<PathStep>& path) {
    if (!path.empty() && !violation_atoms(m_, sp_, path.front().from).empty()) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!violation_atoms(m_, sp_, path[i].to).empty()) return false;
        if (!norm_failures(path, i).empty()) return false;
    }
    return true;
}

Verdict PracticeChecker::normative() {
    Verdict v;
    auto ws = feasible_witnesses();
    for (const auto& w : ws)
        if (path_violation_free(w.path)) {
            v.holds = true;
            v.witness = w;
            return v;
        }
    if (ws.empty()) v.report.push_back("not feasible");
    auto note = [&](const std::string& s) {
        if (std::find(v.report.begin(), v.report.end(), s) == v.report.end()) v.report.push_back(s);
    };
    for (const auto& w : ws) {
        for (std::size_t i = 0; i < w.path.size(); ++i) {
            for (const auto& f : norm_failures(w.path, i)) note(w.branch() + ": " + f);
            for (const auto& f : violation_atoms(m_, sp_, w.path[i].to)) note(w.branch() + ": " + f);
        }
    }
    return v;
}

bool PracticeChecker::accounted(const Witness& w, const LeafSpan& span, const PlanPattern& leaf, const std::string& p) {
    int start = w.worlds[span.begin];
    auto direct = as_modal(Assertion::Kind::Box, ev_perform({}, leaf.action), as_atom(p));
    if (checker_.eval(*direct, start)) return true;
    for (const auto& rule : sp_.counts_as) {
        if (!checker_.eval(*rule, start)) continue;
        auto social = ev_perform({}, rule->action2);
        auto effect = as_modal(Assertion::Kind::Box, social, as_atom(p));
        auto doable = as_modal(Assertion::Kind::Diamond, social, as_const(true));
        for (std::size_t k = span.begin; k < span.end; ++k) {
            int u = w.worlds[k];
            if (!checker_.eval(*effect, u) || !checker_.eval(*doable, u)) continue;
            for (const auto& a : sp_.actors) {
                if (!m_.rea(a, rule->role, u)) continue;
                int node = checker_.compile(*ev_perform({a}, rule->action), u);
                if (checker_.matcher().contains(node, {w.path[k].label})) return true;
            }
        }
    }
    return false;
}

std::vector<std::string> PracticeChecker::unaccounted_social(const Witness& w) {
    std::vector<std::string> out;
    const PlanPattern& pp = *sp_.plan_patterns.at(static_cast<std::size_t>(w.realization.pattern));
    auto leaves = plan_leaves(pp);
    for (const auto& span : w.realization.leaves)
        for (const auto* leaf : leaves) {
            if (leaf->index != span.leaf) continue;
            std::vector<std::string> atoms;
            assertion_atoms(*leaf->goal, atoms);
            for (const auto& p : atoms)
                if (m_.social.count(p) && !accounted(w, span, *leaf, p))
                    out.push_back(p + " (leaf " + std::to_string(span.leaf) + ")");
        }
    return out;
}

Verdict PracticeChecker::complete() {
    Verdict v;
    auto ws = feasible_witnesses();
    if (ws.empty()) {
        v.report.push_back("not feasible");
        return v;
    }
    std::stable_partition(ws.begin(), ws.end(), [&](const Witness& w) { return path_violation_free(w.path); });
    // Every social atom of every leaf goal must be accounted for along some
    // feasible execution that realizes the leaf.
    bool ok = true;
    for (std::size_t pi = 0; pi < sp_.plan_patterns.size(); ++pi)
        for (const auto* leaf : plan_leaves(*sp_.plan_patterns[pi])) {
            std::vector<std::string> atoms;
            assertion_atoms(*leaf->goal, atoms);
            for (const auto& p : atoms) {
                if (!m_.social.count(p)) continue;
                bool found = false;
                for (const auto& w : ws) {
                    if (w.realization.pattern != static_cast<int>(pi)) continue;
                    for (const auto& span : w.realization.leaves)
                        if (span.leaf == leaf->index && accounted(w, span, *leaf, p)) {
                            found = true;
                            if (!v.witness) v.witness = w;
                        }
                    if (found) break;
                }
                if (!found) {
                    ok = false;
                    v.report.push_back("pp" + std::to_string(pi + 1) + ": social goal " + p + " of leaf " +
                                       std::to_string(leaf->index) + " is neither a direct nor a counts-as effect");
                }
            }
        }
    v.holds = ok;
    if (!ok) v.witness.reset();
    else if (!v.witness) v.witness = ws.front();
    return v;
}

PracticeReport PracticeChecker::check_all() {
    PracticeReport r;
    r.feasible = feasible();
    r.normative = normative();
    r.complete = complete();
    r.delta_size = delta().entries.size();
    r.depth_exceeded = delta().depth_exceeded;
    return r;
}

bool PracticeChecker::check_strategy(const Assertion& strategy, int world) { return checker_.eval(strategy, world); }

PlanPatternReport PracticeChecker::check_planpattern(const PlanPattern& pp) {
    PlanPatternReport rep;
    bool in_delta = false;
    for (const auto& e : delta().entries) {
        if (e.labels == std::vector<int>{0}) continue;
        for (const auto& run : e.runs)
            if (conforms(pp, checker_, run, e.labels)) in_delta = true;
        if (in_delta) break;
    }
    if (!in_delta) rep.failures.push_back("no execution in Delta conforms to the pattern");

    const Context& ctx = m_.context_or_throw(sp_.name);
    auto actors = sorted(sp_.actors);
    auto check_everywhere = [&](const AssertionPtr& a, const std::string& what) {
        for (int w : ctx.worlds)
            if (!checker_.eval(*a, w)) {
                rep.failures.push_back(what + " fails at " + m_.worlds[w]);
                return;
            }
    };

    auto purpose = std::make_shared<Assertion>();
    purpose->kind = Assertion::Kind::PurposePractice;
    purpose->ctx = sp_.name;
    purpose->sub = {sp_.goal()};
    check_everywhere(purpose, "purpose(" + sp_.name + ", " + print(*sp_.goal()) + ")");

    for (const auto* leaf : plan_leaves(pp)) {
        auto lp = std::make_shared<Assertion>();
        lp->kind = Assertion::Kind::PurposeGeneral;
        lp->action = leaf->action;
        lp->ctx = sp_.name;
        lp->sub = {leaf->goal};
        check_everywhere(lp, "leaf " + std::to_string(leaf->index) + " purpose");
    }

    auto strategy = [&](AssertionPtr cond, const PlanPattern& next) {
        auto s = std::make_shared<Assertion>();
        s->kind = Assertion::Kind::Strategy;
        s->sub = {std::move(cond)};
        s->event = ev_perform(actors, plan_action(next));
        s->ctx = sp_.name;
        return s;
    };
    auto sc = std::make_shared<Assertion>();
    sc->kind = Assertion::Kind::StartCond;
    sc->ctx = sp_.name;
    sc->sub = {sp_.start};
    check_everywhere(as_bin(Assertion::Kind::Implies, sc, strategy(sp_.start, plan_start(pp))), "start strategy");

    for (const auto& [a, b] : plan_seq_pairs(pp)) {
        auto done = as_event(Assertion::Kind::Done, ev_perform(actors, plan_action(*a)));
        check_everywhere(strategy(done, *b), "linking strategy " + print(*a) + " ; " + print(*b));
    }
    rep.holds = rep.failures.empty();
    return rep;
}

}  // namespace socprac
