#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "socprac/ast.hpp"
#include "socprac/practice.hpp"

namespace socprac::testgen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(g_); }
    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))]; }
    std::vector<std::string> subset(const std::vector<std::string>& v, bool nonempty);
    std::mt19937_64& engine() { return g_; }

private:
    std::mt19937_64 g_;
};

struct Names {
    std::vector<std::string> agents{"a0", "a1", "a2"};
    std::vector<std::string> actions{"x0", "x1"};
    std::vector<std::string> atoms{"p0", "p1", "p2"};
    std::vector<std::string> roles{"r0", "r1"};
    std::vector<std::string> contexts{"c0", "c1"};
    std::vector<std::string> values{"v0"};
    std::vector<std::string> objects{"o0", "o1"};
};

// Random trees in canonical form: parse(print(t)) is structurally t.
ActionPtr action(Rng& r, const Names& n, int depth, bool achieve = false);
EventPtr event(Rng& r, const Names& n, int depth, bool roles = false);
// The evaluable core: constants, atoms, connectives, boxes, beliefs, goals, DO/DONE and Cap.
AssertionPtr core_assertion(Rng& r, const Names& n, int depth, int event_depth = 1);
// Every assertion head the language has.
AssertionPtr any_assertion(Rng& r, const Names& n, int depth);
PlanPtr plan(Rng& r, const Names& n, int depth);

struct ModelShape {
    int agents = 3;
    int actions = 2;
    int worlds = 20;
    int atoms = 3;
    int max_out = 3;   // transitions per world
    double order_p = 0.6;
};

// Text of a random model over agents a0.., actions x0.., atoms p0.., worlds w0..
std::string model_text(Rng& r, const ModelShape& s);

// A model declaring every name in Names, with contexts c0 (the practice) and c1.
std::string fuzz_model_text();

// A random practice over Names, resolvable against fuzz_model_text().
SocialPractice practice(Rng& r);

}  // namespace socprac::testgen
