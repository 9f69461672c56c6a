#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "socprac/ast.hpp"
#include "socprac/model.hpp"

namespace socprac {

struct SourceSpan {
    std::string file;
    int line = 1;
    int column = 1;  // 1-based
    int length = 1;
    std::string str() const;
};

// kind: SyntaxError, UnknownIdentifier, DuplicateDeclaration, MissingSection
struct ParseError : std::runtime_error {
    ParseError(std::string kind, SourceSpan span, const std::string& msg);
    std::string kind;
    SourceSpan span;
};

struct Token {
    enum class Kind { Ident, Hashed, Number, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;  // identifier, punctuation, string contents, hash head
    std::string tag;   // Hashed: part after '#'
    SourceSpan span;
    bool is(const char* p) const { return kind == Kind::Punct && text == p; }
    bool ident(const char* name) const { return kind == Kind::Ident && text == name; }
};

std::vector<Token> lex(const std::string& text, const std::string& file = "<input>", int line = 1, int column = 1);

// Recursive-descent parser for actions, events, assertions and plan
// patterns. Identifiers are resolved against the model when one is given.
class ExprParser {
public:
    ExprParser(std::vector<Token> tokens, const KripkeModel* model);

    ActionPtr action();
    EventPtr event();
    AssertionPtr assertion();
    PlanPtr plan();

    const Token& peek(std::size_t ahead = 0) const;
    bool at_end() const { return peek().kind == Token::Kind::End; }
    void expect_end();
    Token expect(const char* punct);
    Token expect_ident();
    bool accept(const char* punct);
    std::vector<std::string> ident_set();  // '{' a, b '}' or a single identifier
    [[noreturn]] void fail(const Token& t, const std::string& msg, const std::string& kind = "SyntaxError") const;

    void check_agent(const Token& t) const;
    void check_context(const Token& t) const;

private:
    ActionPtr act_choice();
    ActionPtr act_seq();
    ActionPtr act_par();
    ActionPtr act_unary();
    ActionPtr act_primary();
    EventPtr ev_choice();
    EventPtr ev_seq();
    EventPtr ev_par();
    EventPtr ev_unary();
    EventPtr ev_primary();
    AssertionPtr as_implies();
    AssertionPtr as_or();
    AssertionPtr as_and();
    AssertionPtr as_unary();
    AssertionPtr as_primary();
    AssertionPtr keyword_form(const Token& kw);
    AssertionPtr purpose_form(const Token& kw);
    std::size_t top_level_args() const;  // argument count of the '(' at the cursor
    PlanPtr plan_choice();
    PlanPtr plan_seq();
    PlanPtr plan_par();
    PlanPtr plan_primary();
    Token next();

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const KripkeModel* m_;
};

ActionPtr parse_action(const std::string& text, const KripkeModel* m, const std::string& file = "<input>");
EventPtr parse_event(const std::string& text, const KripkeModel* m, const std::string& file = "<input>");
AssertionPtr parse_assertion(const std::string& text, const KripkeModel* m, const std::string& file = "<input>");
PlanPtr parse_plan(const std::string& text, const KripkeModel* m, const std::string& file = "<input>");

std::string print(const Action& a);
std::string print(const Event& e);
std::string print(const Assertion& a);
std::string print(const PlanPattern& p);
std::string print_group(const std::vector<std::string>& agents);  // fred or {a,b}

KripkeModel parse_model(const std::string& text, const std::string& file = "<model>");
std::string print_model(const KripkeModel& m);

struct Query {
    int world = 0;
    AssertionPtr formula;
    std::string text;
    int line = 0;
};
// Lines "at <world>: <assertion>"; '#' starts a comment.
std::vector<Query> parse_queries(const std::string& text, const KripkeModel& m, const std::string& file = "<queries>");

std::string read_file(const std::string& path);

}  // namespace socprac
