// socprac: command-line front end for models, queries, practices and simulation.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "socprac/lang.hpp"
#include "socprac/practice.hpp"
#include "socprac/sim.hpp"

using namespace socprac;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kInputError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string model;
    std::string format = "text";
    bool jsonl() const { return format == "jsonl"; }
};

// Text of a --formula argument, which has no file to read the line back from.
std::string inline_formula;

// Parse error with the offending source line and a caret under the token.
void report_parse_error(const ParseError& e) {
    std::cerr << e.what() << "\n";
    std::string line;
    if (e.span.file == "<formula>") {
        line = inline_formula;
    } else {
        std::ifstream in(e.span.file);
        for (int i = 0; in && i < e.span.line; ++i)
            if (!std::getline(in, line)) return;
        if (!in) return;
    }
    std::cerr << "  " << line << "\n  " << std::string(static_cast<std::size_t>(std::max(e.span.column - 1, 0)), ' ')
              << std::string(static_cast<std::size_t>(std::max(e.span.length, 1)), '^') << "\n";
}

KripkeModel load_model(const std::string& path) { return parse_model(read_file(path), path); }

SocialPractice load_practice(const std::string& path, const KripkeModel& m) {
    return parse_practice(read_file(path), m, path);
}

int world_arg(const KripkeModel& m, const std::string& name) {
    int w = m.world_index(name);
    if (w < 0) throw InputError("unknown world '" + name + "'");
    return w;
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::vector<std::string> world_names(const KripkeModel& m, const std::vector<int>& ws) {
    std::vector<std::string> out;
    for (int w : ws) out.push_back(m.worlds[static_cast<std::size_t>(w)]);
    return out;
}

int cmd_validate(const Common& c) {
    auto m = load_model(c.model);
    auto rep = validate_model(m);
    for (const auto& d : rep.violations) {
        if (c.jsonl())
            std::cout << json{{"type", "violation"}, {"condition", d.condition}, {"message", d.message}}.dump() << "\n";
        else
            std::cout << "violation " << d.condition << ": " << d.message << "\n";
    }
    for (const auto& d : rep.notes) {
        if (c.jsonl())
            std::cout << json{{"type", "note"}, {"condition", d.condition}, {"message", d.message}}.dump() << "\n";
        else
            std::cout << "note " << d.condition << ": " << d.message << "\n";
    }
    if (c.jsonl())
        std::cout << json{{"type", "summary"}, {"ok", rep.ok()}, {"violations", rep.violations.size()}}.dump() << "\n";
    else
        std::cout << (rep.ok() ? "ok" : std::to_string(rep.violations.size()) + " violation(s)") << "\n";
    return rep.ok() ? kOk : kFailed;
}

struct EvalArgs {
    std::string queries, formula, world;
    int bound = 1, trace_bound = 8;
};

int cmd_eval(const Common& c, const EvalArgs& a) {
    auto m = load_model(c.model);
    std::vector<Query> qs;
    if (!a.queries.empty()) qs = parse_queries(read_file(a.queries), m, a.queries);
    if (!a.formula.empty()) {
        if (a.world.empty()) throw InputError("--formula needs --world");
        inline_formula = a.formula;
        qs.push_back({world_arg(m, a.world), parse_assertion(a.formula, &m, "<formula>"), a.formula, 0});
    } else if (!a.world.empty()) {
        int w = world_arg(m, a.world);
        for (auto& q : qs) q.world = w;
    }
    if (qs.empty()) throw InputError("nothing to evaluate: give --queries or --formula");
    EvalOptions opts;
    opts.bound = a.bound;
    opts.trace_bound = a.trace_bound;
    Checker checker(m, opts);
    bool all = true;
    for (const auto& q : qs) {
        bool v = checker.eval(*q.formula, q.world);
        all = all && v;
        const auto& w = m.worlds[static_cast<std::size_t>(q.world)];
        if (c.jsonl())
            std::cout << json{{"world", w}, {"query", print(*q.formula)}, {"value", v}}.dump() << "\n";
        else
            std::cout << (v ? "true " : "false") << "  at " << w << ": " << print(*q.formula) << "\n";
    }
    return all ? kOk : kFailed;
}

json witness_json(const Witness& w, const KripkeModel& m) {
    json steps = json::array();
    for (const auto& s : w.path)
        steps.push_back({{"from", m.worlds[static_cast<std::size_t>(s.from)]},
                         {"step", m.label_text(s.label)},
                         {"to", m.worlds[static_cast<std::size_t>(s.to)]}});
    return {{"branch", w.branch()}, {"worlds", world_names(m, w.worlds)}, {"steps", steps}};
}

struct PracticeArgs {
    std::string practice;
    int depth = 12;
    bool plan_patterns = false;
};

int cmd_check(const Common& c, const PracticeArgs& a) {
    auto m = load_model(c.model);
    auto sp = load_practice(a.practice, m);
    PracticeChecker pc(m, sp, PracticeOptions{a.depth, {}});
    auto r = pc.check_all();
    bool ok = r.feasible.holds && r.normative.holds && r.complete.holds;
    auto show = [&](const char* name, const Verdict& v) {
        if (c.jsonl()) {
            json j{{"type", "verdict"}, {"property", name}, {"holds", v.holds}, {"report", v.report}};
            if (v.witness) j["witness"] = witness_json(*v.witness, m);
            std::cout << j.dump() << "\n";
            return;
        }
        std::cout << name << ": " << (v.holds ? "true" : "false");
        if (v.witness) {
            std::cout << "  " << v.witness->branch() << "  ";
            for (std::size_t i = 0; i < v.witness->worlds.size(); ++i)
                std::cout << (i ? " " : "") << m.worlds[static_cast<std::size_t>(v.witness->worlds[i])];
        }
        std::cout << "\n";
        for (const auto& line : v.report) std::cout << "  " << line << "\n";
    };
    show("feasible", r.feasible);
    show("normative", r.normative);
    show("complete", r.complete);
    if (c.jsonl())
        std::cout << json{{"type", "delta"}, {"size", r.delta_size}, {"depth_exceeded", r.depth_exceeded}}.dump() << "\n";
    else
        std::cout << "delta: " << r.delta_size << " sequence(s)" << (r.depth_exceeded ? ", depth bound hit" : "")
                  << "\n";
    if (a.plan_patterns) {
        for (std::size_t i = 0; i < sp.plan_patterns.size(); ++i) {
            auto pr = pc.check_planpattern(*sp.plan_patterns[i]);
            ok = ok && pr.holds;
            if (c.jsonl()) {
                std::cout << json{{"type", "planpattern"}, {"index", i + 1}, {"holds", pr.holds}, {"failures", pr.failures}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << "planpattern pp" << i + 1 << ": " << (pr.holds ? "true" : "false") << "\n";
                for (const auto& f : pr.failures) std::cout << "  " << f << "\n";
            }
        }
    }
    return ok ? kOk : kFailed;
}

struct GeneralizeArgs {
    std::vector<std::string> practices;
    std::string name, out;
};

int cmd_generalize(const Common& c, const GeneralizeArgs& a) {
    auto m = load_model(c.model);
    std::vector<SocialPractice> in;
    for (const auto& p : a.practices) in.push_back(load_practice(p, m));
    auto r = generalize(in, m, a.name);
    if (auto* f = std::get_if<ConditionFailure>(&r)) {
        if (c.jsonl())
            std::cout << json{{"type", "condition_failure"}, {"condition", f->condition}, {"witness", f->witness}}.dump()
                      << "\n";
        else
            std::cout << "condition " << f->condition << " fails: " << f->witness << "\n";
        return kFailed;
    }
    auto text = print_practice(std::get<SocialPractice>(r));
    if (c.jsonl())
        write_out(a.out, json{{"type", "practice"}, {"text", text}}.dump() + "\n");
    else
        write_out(a.out, text);
    return kOk;
}

struct SimArgs {
    std::string practice, world, out;
    std::uint64_t seed = 0;
    int ticks = 50, depth = 12;
    std::vector<std::string> prefer, violate;
};

int cmd_simulate(const Common& c, const SimArgs& a) {
    auto m = load_model(c.model);
    auto sp = load_practice(a.practice, m);
    int start = a.world.empty() ? -1 : world_arg(m, a.world);
    if (start < 0) {
        auto starts = context_start(m, sp.name);
        for (int w : starts)
            if (Checker(m).eval(*sp.start, w)) {
                start = w;
                break;
            }
        if (start < 0) throw InputError("no start world of " + sp.name + " satisfies the start condition; give --world");
    }
    auto policies = default_policies(sp, m, start);
    for (auto& p : policies) p.prefer = a.prefer;
    for (const auto& v : a.violate) {
        auto colon = v.find(':');
        if (colon == std::string::npos) throw InputError("--violate expects agent:action, got '" + v + "'");
        auto agent = v.substr(0, colon);
        auto it = std::find_if(policies.begin(), policies.end(), [&](const AgentPolicy& p) { return p.agent == agent; });
        if (it == policies.end()) throw InputError("--violate: " + agent + " is not an actor of " + sp.name);
        it->compliance = Compliance::ViolatingAllowed;
        it->omit.insert(v.substr(colon + 1));
    }
    SimOptions opts;
    opts.seed = a.seed;
    opts.ticks = a.ticks;
    opts.depth = a.depth;
    ExecutionTrace t;
    int code = kOk;
    try {
        t = simulate(sp, m, start, policies, opts);
    } catch (const Stuck& e) {
        std::cerr << "stuck at " << m.worlds[static_cast<std::size_t>(e.world)] << ": " << e.reason << "\n";
        t = e.partial;
        code = kFailed;
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    if (t.status != "ec") code = kFailed;
    write_out(a.out, c.jsonl() ? trace_jsonl(t, m) : trace_text(t, m));
    return code;
}

struct TraceArgs {
    std::string file;
    bool check = false;
};

int cmd_trace(const Common& c, const TraceArgs& a) {
    auto m = load_model(c.model);
    ExecutionTrace t;
    try {
        t = parse_trace_jsonl(read_file(a.file), m);
    } catch (const std::runtime_error& e) {
        throw InputError(a.file + ": " + e.what());
    }
    std::cout << (c.jsonl() ? trace_jsonl(t, m) : trace_text(t, m));
    if (a.check) {
        try {
            if (replay(t, m) != t.worlds()) throw std::runtime_error("replayed worlds differ from the trace");
            std::cerr << "replay ok\n";
        } catch (const std::runtime_error& e) {
            std::cerr << "replay failed: " << e.what() << "\n";
            return kFailed;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model checker and simulator for social practices"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", common.model, "model file (.spm)")->required();
        sub->add_option("--format", common.format, "output format")->check(CLI::IsMember({"text", "jsonl"}));
    };

    auto* validate = app.add_subcommand("validate", "check a model's structural constraints");
    add_common(validate);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate queries or a formula");
    add_common(eval);
    eval->add_option("--queries", ea.queries, "query file (.spq)");
    eval->add_option("--formula", ea.formula, "a single assertion");
    eval->add_option("--world", ea.world, "world to evaluate at (overrides the query file)");
    eval->add_option("--bound", ea.bound, "operator depth of enumerated actions");
    eval->add_option("--trace-bound", ea.trace_bound, "trace length bound for DO/DONE");

    PracticeArgs pa;
    auto* check = app.add_subcommand("check-practice", "decide feasible, normative and complete");
    add_common(check);
    check->add_option("--practice", pa.practice, "practice file (.spp)")->required();
    check->add_option("--depth", pa.depth, "bound on execution length");
    check->add_flag("--plan-patterns", pa.plan_patterns, "also run the plan-pattern check");

    GeneralizeArgs ga;
    auto* gen = app.add_subcommand("generalize", "build a practice from instances");
    add_common(gen);
    gen->add_option("--practice", ga.practices, "instance practice files")->required();
    gen->add_option("--name", ga.name, "context name of the result");
    gen->add_option("--out", ga.out, "output file");

    SimArgs sa;
    auto* sim = app.add_subcommand("simulate", "enact a practice");
    add_common(sim);
    sim->add_option("--practice", sa.practice, "practice file (.spp)")->required();
    sim->add_option("--world", sa.world, "start world");
    sim->add_option("--seed", sa.seed, "seed for branch order");
    sim->add_option("--ticks", sa.ticks, "tick budget");
    sim->add_option("--depth", sa.depth, "planning horizon");
    sim->add_option("--prefer", sa.prefer, "preferred plan branch, e.g. 1,2,3,4");
    sim->add_option("--violate", sa.violate, "agent:action the agent leaves out, allowing violations");
    sim->add_option("--out", sa.out, "trace file");

    TraceArgs ta;
    auto* trace = app.add_subcommand("trace", "print a stored trace");
    add_common(trace);
    trace->add_option("file", ta.file, "trace file (jsonl)")->required();
    trace->add_flag("--replay", ta.check, "replay the trace through the model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*validate) return cmd_validate(common);
        if (*eval) return cmd_eval(common, ea);
        if (*check) return cmd_check(common, pa);
        if (*gen) return cmd_generalize(common, ga);
        if (*sim) return cmd_simulate(common, sa);
        if (*trace) return cmd_trace(common, ta);
    } catch (const ParseError& e) {
        report_parse_error(e);
        return kInputError;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
