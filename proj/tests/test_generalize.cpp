#include <doctest.h>

#include "socprac/lang.hpp"
#include "socprac/practice.hpp"
#include "support/common.hpp"

using namespace socprac;

namespace {

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

struct Week {
    KripkeModel m = testdata::model("kids/week.spm");
    std::string monday_text = read_file(testdata::path("kids/monday.spp"));
    std::string tuesday_text = read_file(testdata::path("kids/tuesday.spp"));
    SocialPractice monday() const { return parse_practice(monday_text, m); }
    SocialPractice tuesday(const std::string& text) const { return parse_practice(text, m); }

    int failure(const std::string& tuesday_mutant) const {
        auto r = generalize({monday(), tuesday(tuesday_mutant)}, m, "school_week");
        if (!std::holds_alternative<ConditionFailure>(r)) return -1;
        return std::get<ConditionFailure>(r).condition;
    }
};

}  // namespace

TEST_CASE("two weekdays generalize") {
    Week w;
    auto r = generalize({w.monday(), w.tuesday(w.tuesday_text)}, w.m, "school_week");
    REQUIRE(std::holds_alternative<SocialPractice>(r));
    const auto& sp = std::get<SocialPractice>(r);
    CHECK(sp.name == "school_week");
    CHECK(sp.roles == std::vector<std::string>{"driver", "kid", "neighbour"});
    // Drive is afforded by each car.
    std::set<std::vector<std::string>> drive_objects;
    for (const auto& af : sp.affordances)
        if (print(*af.action) == "drive") drive_objects.insert(af.objects);
    CHECK(drive_objects == std::set<std::vector<std::string>>{{"car_a"}, {"car_b"}});
    CHECK(sp.resources == std::vector<std::string>{"car_a", "car_b"});
    // Purpose is the union; Tuesday adds car_safe.
    CHECK(sp.purpose.size() == 2);
    // Start and end are disjunctions over the days, renamed to the new practice.
    CHECK(sp.start->kind == Assertion::Kind::Or);
    CHECK(sp.end->kind == Assertion::Kind::Or);
    CHECK(print(*sp.strategies[0]).find("school_week") != std::string::npos);
    CHECK(sp.plan_patterns.size() == 1);
    CHECK(sp.norms.size() == 1);
}

TEST_CASE("a single instance generalizes to itself") {
    Week w;
    auto monday = w.monday();
    auto r = generalize({monday}, w.m);
    REQUIRE(std::holds_alternative<SocialPractice>(r));
    const auto& sp = std::get<SocialPractice>(r);
    CHECK(equal(sp, monday));
    CHECK(print_practice(sp) == print_practice(monday));

    // Repeating the instance changes nothing either.
    auto twice = generalize({monday, monday}, w.m);
    REQUIRE(std::holds_alternative<SocialPractice>(twice));
    CHECK(equal(std::get<SocialPractice>(twice), monday));

    PracticeChecker a(w.m, monday), b(w.m, sp);
    auto ra = a.check_all(), rb = b.check_all();
    CHECK(ra.feasible.holds == rb.feasible.holds);
    CHECK(ra.normative.holds == rb.normative.holds);
    CHECK(ra.complete.holds == rb.complete.holds);
}

TEST_CASE("condition 1: roles differ") {
    Week w;
    auto mutant = replaced(replaced(w.tuesday_text, "roles: driver, kid, neighbour", "roles: driver, kid"),
                           "  neighbour: neighbour_drives\n", "");
    CHECK(w.failure(mutant) == 1);
}

TEST_CASE("condition 3: disjoint purposes") {
    Week w;
    auto at = w.tuesday_text.find("purpose:\n"), end = w.tuesday_text.find("promotes:");
    auto mutant = w.tuesday_text.substr(0, at) + "purpose:\n  car_safe\n" + w.tuesday_text.substr(end);
    CHECK(w.failure(mutant) == 3);
    auto r = generalize({w.monday(), w.tuesday(mutant)}, w.m);
    CHECK(std::get<ConditionFailure>(r).witness.find("empty intersection") != std::string::npos);
}

TEST_CASE("condition 6: plan patterns differ") {
    Week w;
    auto mutant = replaced(w.tuesday_text, "{park => car_safe}", "{park => kids_at_school}");
    CHECK(w.failure(mutant) == 6);
}

TEST_CASE("unmodified weekdays fail no condition") {
    Week w;
    CHECK(w.failure(w.tuesday_text) == -1);
}
