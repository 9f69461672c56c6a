#include <doctest.h>

#include "socprac/checker.hpp"
#include "socprac/lang.hpp"
#include "support/common.hpp"
#include "support/gen.hpp"
#include "support/naive.hpp"

using namespace socprac;
using K = Assertion::Kind;

namespace {

bool at(Checker& c, const std::string& formula, const std::string& world) {
    const auto& m = c.model();
    int w = m.world_index(world);
    REQUIRE(w >= 0);
    return c.eval(*parse_assertion(formula, &m), w);
}

const char* kContexts = R"(agents: fred
actions: drive, stay
objects: car
values: v
atoms: p
worlds: w0, w1, w2
capability fred: drive, stay
transition w0 -> w1: {fred: drive}
transition w0 -> w0: {fred: stay}
belief fred: identity
goal fred: identity
order: w0 < w1, w0 < w2
value v: w0 < w1
context outer: w0, w1
context inner: w0
context left: w1, w2
context right: w0, w2
roles outer: driver
roles left: driver
actors outer: fred
objects outer: car
play fred driver: w0, w1
affords outer: {car} drive
available outer: {car}
)";

}  // namespace

TEST_CASE("kids queries all hold") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    for (const auto& q : parse_queries(read_file(testdata::path("kids/kids.spq")), m)) {
        CAPTURE(q.text);
        CHECK(c.eval(*q.formula, q.world));
    }
}

TEST_CASE("base operators on the scenario") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w)
        CHECK(c.eval(*parse_assertion("[skip] in_car", &m), w) == m.holds(w, "in_car"));
    CHECK(at(c, "Cap(fred, drive ; park)", "w0"));
    CHECK_FALSE(at(c, "Cap(marco, drive ; park)", "w0"));
    CHECK(at(c, "Able{fred}(drive)", "w2"));
    CHECK_FALSE(at(c, "Able{nina}(drive)", "w2"));
    CHECK(at(c, "DONE(fred:drive)", "w3"));
    CHECK_FALSE(at(c, "DONE(fred:drive)", "w2"));
    // ≺-minimal worlds have no history.
    CHECK_FALSE(at(c, "DONE(fred:get_kids + fred:drive + skip)", "w0"));
    CHECK(at(c, "DO(fred:park)", "w3"));
    CHECK_FALSE(at(c, "DO(fred:park)", "w6"));
}

TEST_CASE("DONE after a single step along the order") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    for (const auto& t : m.transitions) {
        if (!m.precedes(t.from, t.to)) continue;
        auto e = Checker::step_event(t.label, m.vocab);
        CAPTURE(print(*e));
        CHECK(c.eval_done(*e, t.to));
    }
}

TEST_CASE("property: evaluator agrees with the naive reference") {
    testgen::Rng r(555);
    testgen::Names n;
    int compared = 0;
    for (int k = 0; k < 20; ++k) {
        testgen::ModelShape s;
        s.worlds = r.uniform(2, 25);
        auto m = parse_model(testgen::model_text(r, s));
        EvalOptions opts;
        opts.trace_bound = 4;
        Checker c(m, opts);
        oracle::NaiveEvaluator naive(m, 4);
        for (int q = 0; q < 15; ++q) {
            auto f = testgen::core_assertion(r, n, r.uniform(1, 3));
            int w = r.uniform(0, s.worlds - 1);
            CAPTURE(print(*f));
            CAPTURE(w);
            CHECK(c.eval(*f, w) == naive.eval(*f, w));
            ++compared;
        }
    }
    CHECK(compared == 300);
}

TEST_CASE("property: CB is the greatest fixpoint of EB") {
    testgen::Rng r(31);
    testgen::Names n;
    for (int k = 0; k < 30; ++k) {
        testgen::ModelShape s;
        s.worlds = 30;
        auto m = parse_model(testgen::model_text(r, s));
        Checker c(m);
        auto group = r.subset(n.agents, true);
        auto phi = testgen::core_assertion(r, n, 1);
        std::set<int> truth;
        for (int w = 0; w < s.worlds; ++w)
            if (c.eval(*phi, w)) truth.insert(w);
        auto fix = oracle::cb_fixpoint(m, group, truth);
        auto cb = as_agents(K::CommonBelief, group, phi);
        for (int w = 0; w < s.worlds; ++w) CHECK(c.eval(*cb, w) == (fix.count(w) > 0));
    }
}

TEST_CASE("CB: singleton equals B on transitive beliefs, valid formulas") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w) {
        CHECK(c.eval(*parse_assertion("CB{fred}(in_car)", &m), w) == c.eval(*parse_assertion("B{fred}(in_car)", &m), w));
        CHECK(c.eval(*parse_assertion("CB{fred,marco}(in_car || !in_car)", &m), w));
    }
}

TEST_CASE("property: box distributes over conjunction, diamond is dual, eval is deterministic") {
    testgen::Rng r(8);
    testgen::Names n;
    for (int k = 0; k < 10; ++k) {
        auto m = parse_model(testgen::model_text(r, {}));
        Checker c(m);
        for (int q = 0; q < 20; ++q) {
            auto e = testgen::event(r, n, 1);
            auto f = testgen::core_assertion(r, n, 1), g = testgen::core_assertion(r, n, 1);
            int w = r.uniform(0, 19);
            bool lhs = c.eval(*as_modal(K::Box, e, as_bin(K::And, f, g)), w);
            bool rhs = c.eval(*as_modal(K::Box, e, f), w) && c.eval(*as_modal(K::Box, e, g), w);
            CHECK(lhs == rhs);
            auto dia = as_modal(K::Diamond, e, f);
            if (c.eval(*dia, w)) CHECK_FALSE(c.eval(*as_modal(K::Box, e, as_not(f)), w));
            Checker fresh(m);
            CHECK(fresh.eval(*dia, w) == c.eval(*dia, w));
        }
    }
}

TEST_CASE("property: DO of a sequence carries its tail to every successor") {
    testgen::Rng r(12);
    testgen::Names n;
    int hits = 0;
    for (int k = 0; k < 40; ++k) {
        auto m = parse_model(testgen::model_text(r, {}));
        Checker c(m);
        for (int q = 0; q < 20; ++q) {
            auto e1 = testgen::event(r, n, 0), e2 = testgen::event(r, n, 0);
            auto seq = ev_bin(Event::Kind::Seq, e1, e2);
            for (int w = 0; w < static_cast<int>(m.worlds.size()); ++w) {
                if (!c.eval_do(*seq, w)) continue;
                ++hits;
                for (int v : m.order_succ(w)) CHECK(c.eval_do(*e2, v));
            }
        }
    }
    CHECK(hits > 0);
}

TEST_CASE("ability, attempt and stit") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    CHECK(at(c, "Able{fred}(drive)", "w2"));
    CHECK_FALSE(at(c, "Able{nina}(buckle)", "w2u"));
    CHECK(at(c, "G{fred}(kids_at_school)", "w2"));
    CHECK(at(c, "E{fred}(kids_at_school) -> H{fred}(kids_at_school)", "w2"));

    auto none = parse_model("agents: ann, bob\nactions: wave\nworlds: w\ncapability bob: wave\n"
                            "transition w -> w: {ann: wave}\nbelief ann: identity\nbelief bob: identity\n"
                            "goal ann: identity\ngoal bob: identity\n");
    Checker cn(none);
    CHECK_FALSE(cn.eval(*parse_assertion("Able{ann}(wave)", &none), 0));
    CHECK(cn.eval(*parse_assertion("Able{bob}(wave) || !Able{bob}(wave)", &none), 0));
    CHECK_FALSE(cn.eval(*parse_assertion("Cap(ann, wave)", &none), 0));
}

TEST_CASE("property: E implies H on random models") {
    testgen::Rng r(21);
    testgen::Names n;
    for (int k = 0; k < 10; ++k) {
        testgen::ModelShape s;
        s.worlds = 10;
        auto m = parse_model(testgen::model_text(r, s));
        Checker c(m);
        for (int q = 0; q < 10; ++q) {
            auto who = std::vector<std::string>{r.pick(n.agents)};
            auto phi = testgen::core_assertion(r, n, 0);
            auto e = as_agents(K::Stit, who, phi), h = as_agents(K::Attempt, who, phi);
            for (int w = 0; w < s.worlds; ++w)
                if (c.eval(*e, w)) CHECK(c.eval(*h, w));
        }
    }
}

TEST_CASE("deontic operators") {
    auto m = parse_model("agents: ann\nactions: wave\natoms: V#1\nworlds: w0, w1\nworld w0: V#1\nworld w1: V#1\n"
                         "transition w0 -> w1: {ann: wave}\nbelief ann: identity\ngoal ann: identity\n");
    Checker c(m);
    // Violation everywhere: obligation and prohibition both hold.
    CHECK(at(c, "O#1(ann:wave)", "w0"));
    CHECK(at(c, "F#1(ann:wave)", "w0"));

    auto kids = testdata::model("kids/kids.spm");
    Checker k(kids);
    for (int w = 0; w < static_cast<int>(kids.worlds.size()); ++w)
        CHECK(k.eval(*parse_assertion("P#1(fred:drive)", &kids), w) ==
              !k.eval(*parse_assertion("F#1(fred:drive)", &kids), w));
    // Skipping the buckle: the unbuckled branch raises V#1, the other does not.
    CHECK(at(k, "F#1(fred:drive)", "w2u"));
    CHECK_FALSE(at(k, "F#1(fred:drive)", "w2"));
    // The unbuckled world activates the norm; the monitor finds the drive branch.
    CHECK_FALSE(at(k, "O#1(driver, in_car && !buckled, buckle, apologize)", "w2u"));
    CHECK(at(k, "O#1(driver, in_car && !buckled, buckle, apologize)", "w2"));
}

TEST_CASE("purpose forms") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    auto f = parse_assertion("purpose(fred:drive, school_run, kids_at_school)", &m);
    CHECK(c.eval(*f, m.world_index("w0")));
    // The macro expansion is what gets evaluated.
    for (int w : {0, 2, 4}) CHECK(c.eval(*c.expand(*f, w), w) == c.eval(*f, w));
    // A role nobody enacts quantifies over nobody.
    auto ctx = parse_model(kContexts);
    Checker cc(ctx);
    CHECK(cc.eval(*parse_assertion("purpose(driver, drive, left, p)", &ctx), 0));
}

TEST_CASE("salience, promotes and the affordance axiom") {
    auto m = parse_model(kContexts);
    Checker c(m);
    CHECK(c.salient("inner", 0));
    CHECK_FALSE(c.salient("outer", 0));
    // Incomparable overlaps: outer and left at w1, left and right at w2.
    CHECK(c.salient("outer", 1));
    CHECK(c.salient("left", 1));
    CHECK(c.salient("left", 2));
    CHECK(c.salient("right", 2));
    CHECK_FALSE(c.salient("inner", 1));

    // Brute-force subset scan.
    for (int w = 0; w < 3; ++w)
        for (const auto& ci : m.contexts) {
            bool in = std::binary_search(ci.worlds.begin(), ci.worlds.end(), w);
            bool smaller = false;
            for (const auto& cj : m.contexts) {
                if (cj.name == ci.name || !std::binary_search(cj.worlds.begin(), cj.worlds.end(), w)) continue;
                if (cj.worlds.size() < ci.worlds.size() &&
                    std::includes(ci.worlds.begin(), ci.worlds.end(), cj.worlds.begin(), cj.worlds.end()))
                    smaller = true;
            }
            CHECK(c.salient(ci.name, w) == (in && !smaller));
        }

    // Staying put never makes a world strictly better.
    CHECK_FALSE(c.eval(*parse_assertion("promotes(outer, driver:stay, v)", &m), 0));
    CHECK(c.eval(*parse_assertion("promotes(outer, driver:drive, v)", &m), 0));

    auto bad = c.affordance_axiom_violations();
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].world == 1);
    CHECK(bad[0].agent == "fred");
}

TEST_CASE("counts-as on the scenario") {
    auto m = testdata::model("kids/kids.spm");
    Checker c(m);
    CHECK(at(c, "countsas(school_run, driver:arrive_before_9, show_respect)", "w5"));
    CHECK_FALSE(at(c, "countsas(school_run, driver:park, show_respect)", "w5"));
}
