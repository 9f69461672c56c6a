// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include "socprac/checker.hpp"
#include "socprac/interpret.hpp"
#include "socprac/lang.hpp"
#include "socprac/practice.hpp"
#include "socprac/sim.hpp"
#include "support/bfs.hpp"
#include "support/common.hpp"
#include "support/gen.hpp"
#include "support/naive.hpp"

using namespace socprac;
using K = Assertion::Kind;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string first_failure;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (pass) first_failure = what;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Vocabulary vocab(int agents, int actions) {
    std::vector<std::string> ag, ac;
    for (int i = 0; i < agents; ++i) ag.push_back("a" + std::to_string(i));
    for (int i = 0; i < actions; ++i) ac.push_back("x" + std::to_string(i));
    return Vocabulary(ag, ac);
}

testgen::Names names_for(int agents, int actions) {
    testgen::Names n;
    n.agents.resize(static_cast<std::size_t>(agents));
    n.actions.resize(static_cast<std::size_t>(actions));
    return n;
}

std::vector<EventPtr> atomic_events(const Vocabulary& v) {
    std::vector<EventPtr> out;
    for (GroupMask g = 1; g <= v.all_agents(); ++g)
        for (const auto& x : v.actions()) out.push_back(ev_perform(v.group_names(g), act_atom(x)));
    return out;
}

// Denotations are prefix-free, so random operands are too.
TraceSet random_traces(testgen::Rng& r, const std::vector<Step>& u) {
    std::set<Trace> raw;
    for (int i = r.uniform(1, 6); i > 0; --i) {
        Trace t;
        for (int k = r.uniform(1, 3); k > 0; --k) t.push_back(r.pick(u));
        raw.insert(t);
    }
    TraceSet all(raw), out;
    for (const auto& t : all)
        if (!all.has_proper_prefix_of(t)) out.insert(t);
    return out;
}

TraceSet random_operand(testgen::Rng& r, const Vocabulary& v, const std::vector<Step>& u) {
    if (r.chance(0.5)) return random_traces(r, u);
    auto n = names_for(v.agent_count(), v.action_count());
    for (;;) {
        TraceSet t;
        try {
            t = interpret_event(*testgen::event(r, n, 1), v, u);
        } catch (const UnsupportedInConcreteMode&) {
            continue;
        }
        if (t.size() <= 20) return t;
        // Keep operands small enough to compose three times.
        std::vector<Trace> all(t.begin(), t.end());
        std::shuffle(all.begin(), all.end(), r.engine());
        return TraceSet(std::set<Trace>(all.begin(), all.begin() + 20));
    }
}

// 1. a ≡ a + a;b, associativity of ∘, idempotence and commutativity of ⊔.
Outcome laws() {
    Outcome o;
    auto t0 = Clock::now();
    int exhaustive = 0, randomized = 0;
    testgen::Rng r(1);
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 2; ++m) {
            auto v = vocab(n, m);
            auto u = full_step_universe(v);
            auto atoms = atomic_events(v);
            std::vector<TraceSet> den;
            for (const auto& e : atoms) den.push_back(interpret_event(*e, v, u));
            for (std::size_t i = 0; i < den.size(); ++i)
                for (std::size_t j = 0; j < den.size(); ++j) {
                    o.require(choice(den[i], compose(den[i], den[j])) == den[i],
                              print(*atoms[i]) + " + " + print(*atoms[i]) + ";" + print(*atoms[j]));
                    ++exhaustive;
                }
            for (int k = 0; k < 100; ++k) {
                auto a = random_operand(r, v, u), b = random_operand(r, v, u), c = random_operand(r, v, u);
                o.require(compose(compose(a, b), c) == compose(a, compose(b, c)), "associativity");
                o.require(choice(a, a) == a, "idempotence");
                o.require(choice(a, b) == choice(b, a), "commutativity");
                ++randomized;
            }
        }
    double s = seconds_since(t0);
    o.require(randomized >= 500, "fewer than 500 randomized cases");
    o.require(s < 10, "over 10 s");
    o.detail << exhaustive << " atomic pairs, " << randomized << " randomized triples, " << s << " s";
    return o;
}

// Monotonicity and skip absorption, checked over every pair of groups.
bool constrained(const Step& s) {
    GroupMask all = (GroupMask{1} << s.agent_count()) - 1;
    for (GroupMask a = 1; a <= all; ++a)
        for (GroupMask b = 1; b <= all; ++b) {
            if ((b & ~a) == 0 && (s.act(b) & ~s.act(a)) != 0) return false;
            if (s.act(b) == 0 && s.act(a | b) != s.act(a)) return false;
        }
    return true;
}

// 2. Every interpreted step satisfies the constraints.
Outcome step_constraints() {
    Outcome o;
    testgen::Rng r(2);
    std::size_t exhaustive = 0, sampled = 0;
    for (int m = 1; m <= 2; ++m) {
        auto v = vocab(2, m);
        auto u = full_step_universe(v);
        std::set<Step> seen(u.begin(), u.end());
        for (const auto& e : atomic_events(v))
            for (const auto& t : interpret_event(*e, v, u)) seen.insert(t.begin(), t.end());
        for (const auto& s : seen) {
            o.require(constrained(s), "2 agents: " + s.str(v));
            ++exhaustive;
        }
    }
    auto v = vocab(3, 2);
    auto u = full_step_universe(v);
    auto n = names_for(3, 2);
    while (sampled < 10000) {
        TraceSet t;
        try {
            t = interpret_event(*testgen::event(r, n, 1), v, u);
        } catch (const UnsupportedInConcreteMode&) {
            continue;
        }
        for (const auto& tr : t)
            for (const auto& s : tr) {
                o.require(constrained(s), "3 agents: " + s.str(v));
                ++sampled;
            }
    }
    o.detail << exhaustive << " steps exhaustive (2 agents), " << sampled << " sampled (3 agents)";
    return o;
}

// 3. Symbolic evaluator against the naive reference.
Outcome oracle_equivalence() {
    Outcome o;
    auto t0 = Clock::now();
    testgen::Rng r(3);
    int triples = 0;
    for (int k = 0; k < 100; ++k) {
        testgen::ModelShape s;
        s.agents = r.uniform(1, 3);
        s.actions = r.uniform(1, 2);
        s.worlds = r.uniform(2, 50);
        auto m = parse_model(testgen::model_text(r, s));
        auto n = names_for(s.agents, s.actions);
        EvalOptions opts;
        opts.trace_bound = 4;
        Checker c(m, opts);
        oracle::NaiveEvaluator naive(m, 4);
        for (int q = 0; q < 10; ++q) {
            auto f = testgen::core_assertion(r, n, r.uniform(1, 5));
            int w = r.uniform(0, s.worlds - 1);
            o.require(c.eval(*f, w) == naive.eval(*f, w), print(*f) + " at w" + std::to_string(w));
            ++triples;
        }
    }
    double s = seconds_since(t0);
    o.require(s < 60, "over 60 s");
    o.detail << triples << " triples, " << s << " s";
    return o;
}

// 4. CB against the iterated EB fixpoint.
Outcome cb_fixpoint() {
    Outcome o;
    testgen::Rng r(4);
    int models = 0;
    for (; models < 200; ++models) {
        testgen::ModelShape s;
        s.agents = r.uniform(1, 3);
        s.worlds = r.uniform(2, 30);
        auto m = parse_model(testgen::model_text(r, s));
        auto n = names_for(s.agents, s.actions);
        Checker c(m);
        auto group = r.subset(n.agents, true);
        auto phi = testgen::core_assertion(r, n, 1);
        std::set<int> truth;
        for (int w = 0; w < s.worlds; ++w)
            if (c.eval(*phi, w)) truth.insert(w);
        auto fix = oracle::cb_fixpoint(m, group, truth);
        auto cb = as_agents(K::CommonBelief, group, phi);
        for (int w = 0; w < s.worlds; ++w)
            o.require(c.eval(*cb, w) == (fix.count(w) > 0), print(*cb) + " at w" + std::to_string(w));
    }
    o.detail << models << " models";
    return o;
}

// 5. Fred:drive & {Marco,Claire}:sit against {Fred,Marco,Claire}:(drive & sit).
Outcome collective() {
    Outcome o;
    Vocabulary v({"fred", "marco", "claire"}, {"drive", "sit"});
    auto u = full_step_universe(v);
    auto split = ev_bin(Event::Kind::Par, ev_perform({"fred"}, act_atom("drive")),
                        ev_perform({"claire", "marco"}, act_atom("sit")));
    auto joint = act_bin(Action::Kind::Par, act_atom("drive"), act_atom("sit"));
    auto lhs = interpret_event(*split, v, u);
    auto rhs = interpret_collective(v.all_agents(), *joint, v, u);
    o.require(!(lhs == rhs), "denotations coincide");
    o.detail << lhs.size() << " vs " << rhs.size() << " traces over " << u.size() << " steps";
    return o;
}

std::set<int> worlds_where(Checker& c, const Assertion& f) {
    std::set<int> out;
    for (int w = 0; w < static_cast<int>(c.model().worlds.size()); ++w)
        if (c.eval(f, w)) out.insert(w);
    return out;
}

// Every agent acting alone in the step is capable of what it does.
bool step_able(const KripkeModel& m, const Step& s) {
    for (int i = 0; i < m.vocab.agent_count(); ++i) {
        const auto& agent = m.vocab.agents()[static_cast<std::size_t>(i)];
        for (const auto& x : m.vocab.action_names(s.act(GroupMask{1} << i)))
            if (!m.capable(agent, x)) return false;
    }
    return true;
}

// 6. The kids practice, checked against breadth-first search and direct
// inspection of the witnesses.
Outcome kids() {
    Outcome o;
    auto m = testdata::model("kids/kids.spm");
    auto sp = testdata::practice("kids/kids.spp", m);
    auto t0 = Clock::now();
    PracticeChecker pc(m, sp);
    auto r = pc.check_all();
    double s = seconds_since(t0);
    o.require(r.feasible.holds, "feasible");
    o.require(r.normative.holds, "normative");
    o.require(r.complete.holds, "complete");
    o.require(s < 5, "over 5 s");

    auto start = worlds_where(pc.checker(), *sp.start), end = worlds_where(pc.checker(), *sp.end);
    auto bfs = oracle::delta_bfs(m, start, end, 12);
    std::set<std::vector<std::string>> delta;
    for (const auto& e : pc.delta().entries) {
        std::vector<std::string> seq;
        for (int l : e.labels) seq.push_back(m.label_text(l));
        delta.insert(seq);
    }
    o.require(delta == bfs, "delta differs from breadth-first search");

    auto replays = [&](const Witness& w) {
        std::vector<std::string> seq;
        bool ok = start.count(w.worlds.front()) && end.count(w.worlds.back());
        for (const auto& st : w.path) {
            const auto& step = m.universe()[static_cast<std::size_t>(st.label)];
            auto to = m.step_target(st.from, step);
            ok = ok && to && *to == st.to && step_able(m, step);
            seq.push_back(m.label_text(st.label));
        }
        return ok && bfs.count(seq) > 0;
    };
    if (r.feasible.witness) o.require(replays(*r.feasible.witness), "feasible witness");
    if (r.normative.witness) {
        o.require(replays(*r.normative.witness), "normative witness");
        for (int w : r.normative.witness->worlds)
            for (const auto& a : m.atoms)
                o.require(!(a.rfind("V#", 0) == 0 && m.holds(w, a)), "normative witness passes " + a);
    }
    // Along the car branch, arriving before nine counts as respect: every
    // such execution ends with respect_to_teacher.
    int counted = 0;
    for (const auto& e : pc.delta().entries) {
        bool car = false, arrive = false;
        for (const auto& rz : e.realizations) car = car || rz.str() == "pp1:1,2,3,4";
        for (int l : e.labels) arrive = arrive || m.label_text(l).find("arrive_before_9") != std::string::npos;
        if (!car || !arrive) continue;
        for (const auto& run : e.runs) {
            o.require(m.holds(run.back(), "respect_to_teacher"), "car branch ends without respect_to_teacher");
            ++counted;
        }
    }
    o.require(counted > 0, "no car-branch execution arrives before nine");
    o.detail << "feasible=" << r.feasible.holds << " normative=" << r.normative.holds << " complete=" << r.complete.holds
             << ", delta " << delta.size() << " = bfs " << bfs.size() << ", " << s << " s";
    return o;
}

struct Scenario {
    KripkeModel m;
    SocialPractice sp;
    int start;
    std::vector<AgentPolicy> policies;

    explicit Scenario(const char* model)
        : m(testdata::model(model)), sp(testdata::practice("kids/kids.spp", m)), start(m.world_index("w0")),
          policies(default_policies(sp, m, start)) {}

    AgentPolicy& fred() {
        return *std::find_if(policies.begin(), policies.end(), [](const AgentPolicy& p) { return p.agent == "fred"; });
    }

    ExecutionTrace run(std::uint64_t seed = 0) {
        SimOptions opts;
        opts.seed = seed;
        return simulate(sp, m, start, policies, opts);
    }
};

// 7. Nominal run, car failure, violating policy, determinism and replay.
Outcome simulation() {
    Outcome o;
    Scenario nominal("kids/kids.spm");
    nominal.fred().prefer = {"1,2,3,4"};
    auto t = nominal.run();
    o.require(t.status == "ec" && nominal.sp.end && Checker(nominal.m).eval(*nominal.sp.end, t.end), "nominal end");
    o.require(t.violation_count() == 0, "nominal violations");

    Scenario fail("kids/car_fail.spm");
    fail.fred().prefer = {"1,2,3,4"};
    auto f = fail.run();
    bool second_car = false;
    for (const auto& rec : f.records)
        second_car = second_car || (rec.reason == "replan" && rec.step.find("drive@car_b") != std::string::npos);
    o.require(f.status == "ec" && second_car, "car failure does not replan to car_b");
    o.require(f.violation_count() == 0, "car failure violations");

    Scenario bad("kids/kids.spm");
    bad.fred().prefer = {"1,2,3,4"};
    bad.fred().compliance = Compliance::ViolatingAllowed;
    bad.fred().omit = {"buckle"};
    auto v = bad.run();
    std::vector<std::string> raised;
    for (const auto& rec : v.records) raised.insert(raised.end(), rec.violations.begin(), rec.violations.end());
    o.require(raised == std::vector<std::string>{"V#1"}, "violating policy does not raise exactly V#1");

    Scenario free("kids/kids.spm");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto a = free.run(seed), b = free.run(seed);
        o.require(trace_jsonl(a, free.m) == trace_jsonl(b, free.m), "seed " + std::to_string(seed) + " not deterministic");
        auto back = parse_trace_jsonl(trace_jsonl(a, free.m), free.m);
        o.require(replay(back, free.m) == a.worlds(), "seed " + std::to_string(seed) + " does not replay");
    }
    o.detail << "nominal " << t.records.size() << " ticks, car failure " << f.records.size() << " ticks, violating raised "
             << raised.size() << ", 10 seeds replayed";
    return o;
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    auto at = text.find(from);
    if (at == std::string::npos) throw std::runtime_error("mutation anchor missing: " + from);
    return text.replace(at, from.size(), to);
}

// 8. Generalization and the three mutations.
Outcome generalization() {
    Outcome o;
    auto m = testdata::model("kids/week.spm");
    auto monday = testdata::practice("kids/monday.spp", m);
    auto tuesday = read_file(testdata::path("kids/tuesday.spp"));
    auto failure = [&](const std::string& text) {
        auto r = generalize({monday, parse_practice(text, m)}, m, "school_week");
        return std::holds_alternative<ConditionFailure>(r) ? std::get<ConditionFailure>(r).condition : -1;
    };
    o.require(failure(tuesday) == -1, "unmodified instances fail");

    auto roles = replaced(replaced(tuesday, "roles: driver, kid, neighbour", "roles: driver, kid"),
                          "  neighbour: neighbour_drives\n", "");
    auto at = tuesday.find("purpose:\n"), end = tuesday.find("promotes:");
    auto purpose = tuesday.substr(0, at) + "purpose:\n  car_safe\n" + tuesday.substr(end);
    auto plan = replaced(tuesday, "{park => car_safe}", "{park => kids_at_school}");
    int c1 = failure(roles), c3 = failure(purpose), c6 = failure(plan);
    o.require(c1 == 1, "roles mutation gives " + std::to_string(c1));
    o.require(c3 == 3, "purpose mutation gives " + std::to_string(c3));
    o.require(c6 == 6, "plan mutation gives " + std::to_string(c6));
    o.detail << "success, mutations give conditions " << c1 << ", " << c3 << ", " << c6;
    return o;
}

// Inserts '$' before a random token of a random line; the error must point
// at that position.
bool stray_char_caught(testgen::Rng& r, const std::string& text, const std::function<void(const std::string&)>& parse) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    for (;;) {
        auto i = static_cast<std::size_t>(r.uniform(0, static_cast<int>(lines.size()) - 1));
        std::vector<Token> toks;
        try {
            toks = lex(lines[i], "<line>", static_cast<int>(i) + 1);
        } catch (const ParseError&) {
            continue;  // model lines with arrows are split before lexing
        }
        if (toks.size() < 2) continue;
        const auto& t = toks[static_cast<std::size_t>(r.uniform(0, static_cast<int>(toks.size()) - 2))];
        auto bad = lines;
        bad[i].insert(static_cast<std::size_t>(t.span.column - 1), "$");
        std::string joined;
        for (const auto& l : bad) joined += l + "\n";
        try {
            parse(joined);
            return false;
        } catch (const ParseError& e) {
            return e.span.line == t.span.line && e.span.column == t.span.column;
        }
    }
}

// 9. parse∘print on fuzzed trees of every grammar, and error spans.
Outcome round_trip() {
    Outcome o;
    auto fm = parse_model(testgen::fuzz_model_text(), "fuzz.spm");
    testgen::Names n;
    testgen::Rng r(9);
    int trees = 0, spans = 0;
    for (int k = 0; k < 500; ++k) {
        auto a = testgen::action(r, n, 4, true);
        auto e = testgen::event(r, n, 3, true);
        auto f = testgen::any_assertion(r, n, 3);
        auto p = testgen::plan(r, n, 3);
        o.require(equal(*parse_action(print(*a), &fm), *a), "action " + print(*a));
        o.require(equal(*parse_event(print(*e), &fm), *e), "event " + print(*e));
        o.require(equal(*parse_assertion(print(*f), &fm), *f), "assertion " + print(*f));
        o.require(equal(*parse_plan(print(*p), &fm), *p), "plan " + print(*p));

        testgen::ModelShape s;
        s.worlds = r.uniform(1, 8);
        auto mtext = print_model(parse_model(testgen::model_text(r, s)));
        o.require(print_model(parse_model(mtext)) == mtext, "model round trip");

        auto sp = testgen::practice(r);
        auto ptext = print_practice(sp);
        o.require(equal(parse_practice(ptext, fm), sp), "practice " + ptext);
        trees += 6;

        // Syntax errors in each grammar.
        auto ftext = print(*f);
        o.require(stray_char_caught(r, ftext, [&](const std::string& t) { parse_assertion(t, &fm); }), "assertion span");
        o.require(stray_char_caught(r, print(*e), [&](const std::string& t) { parse_event(t, &fm); }), "event span");
        o.require(stray_char_caught(r, print(*a), [&](const std::string& t) { parse_action(t, &fm); }), "action span");
        o.require(stray_char_caught(r, print(*p), [&](const std::string& t) { parse_plan(t, &fm); }), "plan span");
        o.require(stray_char_caught(r, mtext, [](const std::string& t) { parse_model(t); }), "model span");
        o.require(stray_char_caught(r, ptext, [&](const std::string& t) { parse_practice(t, fm); }), "practice span");
        spans += 6;

        // An undeclared identifier.
        auto toks = lex(ftext);
        for (const auto& t : toks) {
            if (t.kind != Token::Kind::Ident || !fm.vocab.has_agent(t.text)) continue;
            auto bad = ftext.substr(0, static_cast<std::size_t>(t.span.column - 1)) + "zq" +
                       ftext.substr(static_cast<std::size_t>(t.span.column - 1 + t.span.length));
            try {
                parse_assertion(bad, &fm);
                o.require(false, "accepted " + bad);
            } catch (const ParseError& err) {
                o.require(err.span.column >= t.span.column && err.span.column < t.span.column + 2, "identifier span " + bad);
            }
            ++spans;
            break;
        }
    }
    o.detail << trees << " trees over 6 grammars, " << spans << " injected errors";
    return o;
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*run)();
    };
    const Entry criteria[] = {
        {"algebraic laws", laws},
        {"step constraints", step_constraints},
        {"oracle equivalence", oracle_equivalence},
        {"CB fixpoint", cb_fixpoint},
        {"collective-action inequality", collective},
        {"kids-to-school practice", kids},
        {"simulation", simulation},
        {"generalization", generalization},
        {"parser round trip", round_trip},
    };
    int failed = 0, i = 0;
    for (const auto& c : criteria) {
        ++i;
        std::string line;
        bool pass = false;
        try {
            auto o = c.run();
            pass = o.pass;
            line = o.detail.str();
            if (!pass) line += "; first failure: " + o.first_failure;
        } catch (const std::exception& e) {
            line = std::string("exception: ") + e.what();
        }
        failed += pass ? 0 : 1;
        std::printf("%s %d %s: %s\n", pass ? "PASS" : "FAIL", i, c.name, line.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
