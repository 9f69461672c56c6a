#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "socprac/lang.hpp"

namespace socprac {

std::string SourceSpan::str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

ParseError::ParseError(std::string k, SourceSpan s, const std::string& msg)
    : std::runtime_error(s.str() + ": " + k + ": " + msg), kind(std::move(k)), span(std::move(s)) {}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {
bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::set<std::string> kKeywords = {
    "true", "false", "skip", "any", "DONE", "DO", "Cap", "B", "EB", "CB", "Goal", "Able", "G", "H", "E",
    "DOPART", "DONEPART", "purpose", "strategy", "countsas", "promotes", "demotes", "affords", "available",
    "play", "active", "SC", "EC", "Salient"};
}  // namespace

std::vector<Token> lex(const std::string& text, const std::string& file, int line, int column) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto span_at = [&](int l, int c, int len) { return SourceSpan{file, l, c, len}; };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
        }
    };
    static const char* kPuncts[] = {"->", "=>", "&&", "||", "{", "}", "(", ")", "[", "]", ",", ":",
                                    ";",  "+",  "&",  "~",  "!", "<", ">", "=", "*"};
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        int l = line, col = column;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            if (j + 1 < text.size() && text[j] == '@' && ident_char(text[j + 1])) {
                ++j;
                while (j < text.size() && ident_char(text[j])) ++j;
            }
            Token t;
            t.kind = Token::Kind::Ident;
            t.text = text.substr(i, j - i);
            if (j + 1 < text.size() && text[j] == '#' && ident_char(text[j + 1])) {
                std::size_t k = j + 1;
                while (k < text.size() && ident_char(text[k])) ++k;
                t.kind = Token::Kind::Hashed;
                t.tag = text.substr(j + 1, k - j - 1);
                j = k;
            }
            t.span = span_at(l, col, static_cast<int>(j - i));
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            Token t{Token::Kind::Number, text.substr(i, j - i), "", span_at(l, col, static_cast<int>(j - i))};
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
            if (j >= text.size() || text[j] != '"')
                throw ParseError("SyntaxError", span_at(l, col, static_cast<int>(j - i)), "unterminated string");
            Token t{Token::Kind::String, text.substr(i + 1, j - i - 1), "", span_at(l, col, static_cast<int>(j - i + 1))};
            advance(j - i + 1);
            out.push_back(std::move(t));
            continue;
        }
        bool matched = false;
        for (const char* p : kPuncts) {
            std::size_t n = std::char_traits<char>::length(p);
            if (text.compare(i, n, p) == 0) {
                out.push_back({Token::Kind::Punct, p, "", span_at(l, col, static_cast<int>(n))});
                advance(n);
                matched = true;
                break;
            }
        }
        if (!matched)
            throw ParseError("SyntaxError", span_at(l, col, 1), std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::Kind::End, "", "", span_at(line, column, 1)});
    return out;
}

ExprParser::ExprParser(std::vector<Token> tokens, const KripkeModel* model) : toks_(std::move(tokens)), m_(model) {}

const Token& ExprParser::peek(std::size_t ahead) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
}

Token ExprParser::next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
}

void ExprParser::fail(const Token& t, const std::string& msg, const std::string& kind) const {
    std::string near = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(kind, t.span, msg + " near " + near);
}

void ExprParser::expect_end() {
    if (!at_end()) fail(peek(), "unexpected token");
}

Token ExprParser::expect(const char* punct) {
    if (!peek().is(punct)) fail(peek(), std::string("expected '") + punct + "'");
    return next();
}

Token ExprParser::expect_ident() {
    if (peek().kind != Token::Kind::Ident) fail(peek(), "expected identifier");
    return next();
}

bool ExprParser::accept(const char* punct) {
    if (!peek().is(punct)) return false;
    next();
    return true;
}

void ExprParser::check_agent(const Token& t) const {
    if (m_ && !m_->is_agent(t.text)) fail(t, "unknown agent", "UnknownIdentifier");
}

void ExprParser::check_context(const Token& t) const {
    if (m_ && !m_->context(t.text)) fail(t, "unknown context", "UnknownIdentifier");
}

std::vector<std::string> ExprParser::ident_set() {
    std::vector<std::string> out;
    if (accept("{")) {
        out.push_back(expect_ident().text);
        while (accept(",")) out.push_back(expect_ident().text);
        expect("}");
    } else {
        out.push_back(expect_ident().text);
    }
    return out;
}

namespace {
std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}
}  // namespace

// ---- actions ----

ActionPtr ExprParser::action() { return act_choice(); }

ActionPtr ExprParser::act_choice() {
    auto l = act_seq();
    while (accept("+")) l = act_bin(Action::Kind::Choice, l, act_seq());
    return l;
}

ActionPtr ExprParser::act_seq() {
    auto l = act_par();
    while (accept(";")) l = act_bin(Action::Kind::Seq, l, act_par());
    return l;
}

ActionPtr ExprParser::act_par() {
    auto l = act_unary();
    while (accept("&")) l = act_bin(Action::Kind::Par, l, act_unary());
    return l;
}

ActionPtr ExprParser::act_unary() {
    if (accept("~")) return act_neg(act_unary());
    return act_primary();
}

ActionPtr ExprParser::act_primary() {
    const Token& t = peek();
    if (accept("(")) {
        auto a = act_choice();
        expect(")");
        return a;
    }
    if (t.ident("skip")) {
        next();
        return act_skip();
    }
    if (t.ident("any")) {
        next();
        expect("->");
        return act_achieve(as_unary());
    }
    if (t.kind == Token::Kind::Ident && !kKeywords.count(t.text)) {
        Token n = next();
        if (m_ && !m_->vocab.has_action_name(n.text)) fail(n, "unknown action", "UnknownIdentifier");
        return act_atom(n.text);
    }
    fail(t, "expected action");
}

// ---- events ----

EventPtr ExprParser::event() { return ev_choice(); }

EventPtr ExprParser::ev_choice() {
    auto l = ev_seq();
    while (accept("+")) l = ev_bin(Event::Kind::Choice, l, ev_seq());
    return l;
}

EventPtr ExprParser::ev_seq() {
    auto l = ev_par();
    while (accept(";")) l = ev_bin(Event::Kind::Seq, l, ev_par());
    return l;
}

EventPtr ExprParser::ev_par() {
    auto l = ev_unary();
    while (accept("&")) l = ev_bin(Event::Kind::Par, l, ev_unary());
    return l;
}

EventPtr ExprParser::ev_unary() {
    if (accept("~")) return ev_neg(ev_unary());
    return ev_primary();
}

EventPtr ExprParser::ev_primary() {
    const Token& t = peek();
    if (accept("(")) {
        auto e = ev_choice();
        expect(")");
        return e;
    }
    if (t.ident("skip")) {
        next();
        return ev_skip();
    }
    if (t.ident("any")) return ev_perform({}, act_primary());
    if (t.is("{")) {
        next();
        std::vector<std::string> agents;
        do {
            Token a = expect_ident();
            check_agent(a);
            agents.push_back(a.text);
        } while (accept(","));
        expect("}");
        expect(":");
        return ev_perform(agents, act_unary());
    }
    if (t.kind == Token::Kind::Ident && !kKeywords.count(t.text)) {
        if (peek(1).is(":")) {
            Token who = next();
            next();
            if (!m_ || m_->is_agent(who.text)) return ev_perform({who.text}, act_unary());
            if (m_->is_role(who.text)) return ev_role(who.text, act_unary());
            fail(who, "unknown agent or role", "UnknownIdentifier");
        }
        return ev_perform({}, act_primary());
    }
    fail(t, "expected event");
}

// ---- assertions ----

AssertionPtr ExprParser::assertion() { return as_implies(); }

AssertionPtr ExprParser::as_implies() {
    auto l = as_or();
    if (accept("->")) return as_bin(Assertion::Kind::Implies, l, as_implies());
    return l;
}

AssertionPtr ExprParser::as_or() {
    auto l = as_and();
    while (accept("||")) l = as_bin(Assertion::Kind::Or, l, as_and());
    return l;
}

AssertionPtr ExprParser::as_and() {
    auto l = as_unary();
    while (accept("&&")) l = as_bin(Assertion::Kind::And, l, as_unary());
    return l;
}

AssertionPtr ExprParser::as_unary() {
    if (accept("!")) return as_not(as_unary());
    if (accept("[")) {
        auto e = ev_choice();
        expect("]");
        return as_modal(Assertion::Kind::Box, e, as_unary());
    }
    if (accept("<")) {
        auto e = ev_choice();
        expect(">");
        return as_modal(Assertion::Kind::Diamond, e, as_unary());
    }
    return as_primary();
}

AssertionPtr ExprParser::as_primary() {
    const Token& t = peek();
    if (accept("(")) {
        auto a = as_implies();
        expect(")");
        return a;
    }
    if (t.kind == Token::Kind::Hashed) {
        Token h = next();
        if (h.text == "V") return as_violation(h.tag);
        if (h.text != "O" && h.text != "F" && h.text != "P") fail(h, "unknown operator");
        auto a = std::make_shared<Assertion>();
        a->id = h.tag;
        expect("(");
        if (peek().kind == Token::Kind::Ident && peek(1).is(",")) {
            Token r = next();
            if (m_ && !m_->is_role(r.text)) fail(r, "unknown role", "UnknownIdentifier");
            a->kind = h.text == "O" ? Assertion::Kind::NormO
                      : h.text == "F" ? Assertion::Kind::NormF
                                      : Assertion::Kind::NormP;
            a->role = r.text;
            expect(",");
            a->sub = {as_implies()};
            expect(",");
            a->action = act_choice();
            if (h.text != "P") {
                expect(",");
                a->action2 = act_choice();
            }
        } else {
            a->kind = h.text == "O" ? Assertion::Kind::Obligation
                      : h.text == "F" ? Assertion::Kind::Prohibition
                                      : Assertion::Kind::Permission;
            a->event = ev_choice();
        }
        expect(")");
        return a;
    }
    if (t.kind == Token::Kind::Ident) {
        if (t.text == "true" || t.text == "false") {
            next();
            return as_const(t.text == "true");
        }
        if (kKeywords.count(t.text) && (peek(1).is("(") || peek(1).is("{"))) {
            Token kw = next();
            return keyword_form(kw);
        }
        if (kKeywords.count(t.text)) fail(t, "reserved word used as atom");
        Token a = next();
        if (m_ && m_->atom_index(a.text) < 0) fail(a, "unknown atom", "UnknownIdentifier");
        return as_atom(a.text);
    }
    fail(t, "expected assertion");
}

std::size_t ExprParser::top_level_args() const {
    std::size_t depth = 0, args = 1;
    for (std::size_t k = pos_; k < toks_.size(); ++k) {
        const auto& t = toks_[k];
        if (t.kind == Token::Kind::End) break;
        if (t.is("(") || t.is("{") || t.is("[")) ++depth;
        if (t.is(")") || t.is("}") || t.is("]")) {
            if (--depth == 0) break;
        }
        if (depth == 1 && t.is(",")) ++args;
    }
    return args;
}

AssertionPtr ExprParser::purpose_form(const Token& kw) {
    std::size_t n = top_level_args();
    auto a = std::make_shared<Assertion>();
    expect("(");
    if (n == 2) {
        Token sp = expect_ident();
        check_context(sp);
        a->kind = Assertion::Kind::PurposePractice;
        a->ctx = sp.text;
    } else if (n == 3) {
        if (peek().kind == Token::Kind::Ident && peek(1).is(":")) {
            Token who = next();
            check_agent(who);
            next();
            a->kind = Assertion::Kind::PurposeBasic;
            a->id = who.text;
        } else {
            a->kind = Assertion::Kind::PurposeGeneral;
        }
        a->action = act_choice();
        expect(",");
        Token c = expect_ident();
        check_context(c);
        a->ctx = c.text;
    } else if (n == 4) {
        if (peek().is("{")) {
            a->kind = Assertion::Kind::PurposeGroup;
            next();
            do {
                Token ag = expect_ident();
                check_agent(ag);
                a->agents.push_back(ag.text);
            } while (accept(","));
            expect("}");
            a->agents = sorted_unique(a->agents);
        } else {
            Token who = expect_ident();
            if (!m_ || m_->is_agent(who.text)) {
                a->kind = Assertion::Kind::PurposeComplex;
                a->id = who.text;
            } else if (m_->is_role(who.text)) {
                a->kind = Assertion::Kind::PurposeRole;
                a->role = who.text;
            } else {
                fail(who, "unknown agent or role", "UnknownIdentifier");
            }
        }
        expect(",");
        a->action = act_choice();
        expect(",");
        Token c = expect_ident();
        check_context(c);
        a->ctx = c.text;
    } else {
        fail(kw, "purpose takes 2, 3 or 4 arguments");
    }
    expect(",");
    a->sub = {as_implies()};
    expect(")");
    return a;
}

AssertionPtr ExprParser::keyword_form(const Token& kw) {
    using K = Assertion::Kind;
    const std::string& k = kw.text;
    auto a = std::make_shared<Assertion>();
    auto group_braced = [&] {
        expect("{");
        std::vector<std::string> g;
        do {
            Token ag = expect_ident();
            check_agent(ag);
            g.push_back(ag.text);
        } while (accept(","));
        expect("}");
        return sorted_unique(g);
    };
    auto group_or_agent = [&] {
        if (peek().is("{")) return group_braced();
        Token ag = expect_ident();
        check_agent(ag);
        return std::vector<std::string>{ag.text};
    };
    auto context_arg = [&] {
        Token c = expect_ident();
        check_context(c);
        return c.text;
    };
    auto role_arg = [&] {
        Token r = expect_ident();
        if (m_ && !m_->is_role(r.text)) fail(r, "unknown role", "UnknownIdentifier");
        return r.text;
    };
    auto object_set = [&] {
        expect("{");
        std::vector<std::string> g;
        if (!peek().is("}")) {
            do {
                Token o = expect_ident();
                if (m_ && !m_->is_object(o.text)) fail(o, "unknown object", "UnknownIdentifier");
                g.push_back(o.text);
            } while (accept(","));
        }
        expect("}");
        return sorted_unique(g);
    };

    if (k == "DONE" || k == "DO") {
        a->kind = k == "DONE" ? K::Done : K::Do;
        expect("(");
        a->event = ev_choice();
        expect(")");
    } else if (k == "Cap") {
        a->kind = K::Cap;
        expect("(");
        Token ag = expect_ident();
        check_agent(ag);
        a->id = ag.text;
        expect(",");
        a->action = act_choice();
        expect(")");
    } else if (k == "B" || k == "Goal" || k == "EB" || k == "CB" || k == "G" || k == "H" || k == "E") {
        a->kind = k == "B"      ? K::Belief
                  : k == "Goal" ? K::Goal
                  : k == "EB"   ? K::EveryoneBelieves
                  : k == "CB"   ? K::CommonBelief
                  : k == "G"    ? K::AbleTo
                  : k == "H"    ? K::Attempt
                                : K::Stit;
        Token at = peek();
        a->agents = group_braced();
        if ((k == "B" || k == "Goal") && a->agents.size() != 1) fail(at, k + " takes exactly one agent");
        expect("(");
        a->sub = {as_implies()};
        expect(")");
    } else if (k == "Able") {
        a->kind = K::AbleAction;
        a->agents = group_braced();
        expect("(");
        a->action = act_choice();
        expect(")");
    } else if (k == "DOPART" || k == "DONEPART") {
        a->kind = k == "DOPART" ? K::DoPart : K::DonePart;
        expect("(");
        Token ag = expect_ident();
        check_agent(ag);
        a->id = ag.text;
        expect(",");
        Token b = expect_ident();
        if (m_ && !m_->vocab.has_action_name(b.text)) fail(b, "unknown action", "UnknownIdentifier");
        a->action2 = act_atom(b.text);
        expect(",");
        a->agents = group_or_agent();
        expect(":");
        a->action = act_choice();
        expect(")");
    } else if (k == "purpose") {
        return purpose_form(kw);
    } else if (k == "strategy") {
        a->kind = K::Strategy;
        expect("(");
        a->sub = {as_implies()};
        expect(",");
        Token mode = expect_ident();
        if (mode.text != "DO" && mode.text != "H") fail(mode, "expected DO or H");
        a->weak = mode.text == "H";
        expect("(");
        if (peek().is("{")) {
            auto g = group_braced();
            expect(":");
            a->event = ev_perform(g, act_choice());
        } else {
            Token who = expect_ident();
            expect(":");
            if (!m_ || m_->is_agent(who.text))
                a->event = ev_perform({who.text}, act_choice());
            else if (m_->is_role(who.text))
                a->event = ev_role(who.text, act_choice());
            else
                fail(who, "unknown agent or role", "UnknownIdentifier");
        }
        expect(")");
        expect(",");
        a->ctx = context_arg();
        expect(")");
    } else if (k == "countsas") {
        a->kind = K::CountsAs;
        expect("(");
        a->ctx = context_arg();
        expect(",");
        a->role = role_arg();
        expect(":");
        a->action = act_choice();
        expect(",");
        a->action2 = act_choice();
        expect(")");
    } else if (k == "promotes" || k == "demotes") {
        a->kind = k == "promotes" ? K::Promotes : K::Demotes;
        expect("(");
        a->ctx = context_arg();
        expect(",");
        a->role = role_arg();
        expect(":");
        a->action = act_choice();
        expect(",");
        Token v = expect_ident();
        if (m_ && !m_->is_value(v.text)) fail(v, "unknown value", "UnknownIdentifier");
        a->value = v.text;
        expect(")");
    } else if (k == "affords") {
        a->kind = K::Affords;
        expect("(");
        a->agents = object_set();
        expect(",");
        a->action = act_choice();
        expect(",");
        a->ctx = context_arg();
        expect(")");
    } else if (k == "available") {
        a->kind = K::Available;
        expect("(");
        a->agents = object_set();
        expect(",");
        a->ctx = context_arg();
        expect(")");
    } else if (k == "play") {
        a->kind = K::Play;
        expect("(");
        Token ag = expect_ident();
        check_agent(ag);
        a->id = ag.text;
        expect(",");
        a->role = role_arg();
        if (accept(",")) a->ctx = context_arg();
        expect(")");
    } else if (k == "active") {
        a->kind = K::Active;
        expect("(");
        a->ctx = context_arg();
        expect(")");
    } else if (k == "SC" || k == "EC") {
        a->kind = k == "SC" ? K::StartCond : K::EndCond;
        expect("(");
        a->ctx = context_arg();
        expect(",");
        a->sub = {as_implies()};
        expect(")");
    } else if (k == "Salient") {
        a->kind = K::Salient;
        expect("(");
        a->agents = group_or_agent();
        expect(":");
        a->action = act_choice();
        expect(",");
        a->ctx = context_arg();
        expect(")");
    } else {
        fail(kw, "unexpected keyword");
    }
    return a;
}

// ---- plan patterns ----

PlanPtr ExprParser::plan() { return plan_number(plan_choice()); }

PlanPtr ExprParser::plan_choice() {
    auto l = plan_seq();
    while (accept("+")) l = plan_bin(PlanPattern::Kind::Choice, l, plan_seq());
    return l;
}

PlanPtr ExprParser::plan_seq() {
    auto l = plan_par();
    while (accept(";")) l = plan_bin(PlanPattern::Kind::Seq, l, plan_par());
    return l;
}

PlanPtr ExprParser::plan_par() {
    auto l = plan_primary();
    while (accept("&")) l = plan_bin(PlanPattern::Kind::Par, l, plan_primary());
    return l;
}

PlanPtr ExprParser::plan_primary() {
    if (accept("(")) {
        auto p = plan_choice();
        expect(")");
        return p;
    }
    expect("{");
    auto a = act_choice();
    expect("=>");
    auto g = as_implies();
    expect("}");
    return plan_leaf(a, g);
}

ActionPtr parse_action(const std::string& text, const KripkeModel* m, const std::string& file) {
    ExprParser p(lex(text, file), m);
    auto a = p.action();
    p.expect_end();
    return a;
}

EventPtr parse_event(const std::string& text, const KripkeModel* m, const std::string& file) {
    ExprParser p(lex(text, file), m);
    auto e = p.event();
    p.expect_end();
    return e;
}

AssertionPtr parse_assertion(const std::string& text, const KripkeModel* m, const std::string& file) {
    ExprParser p(lex(text, file), m);
    auto a = p.assertion();
    p.expect_end();
    return a;
}

PlanPtr parse_plan(const std::string& text, const KripkeModel* m, const std::string& file) {
    ExprParser p(lex(text, file), m);
    auto a = p.plan();
    p.expect_end();
    return a;
}

// ---- printing ----

namespace {
int act_prec(const Action& a) {
    switch (a.kind) {
        case Action::Kind::Choice: return 1;
        case Action::Kind::Seq: return 2;
        case Action::Kind::Par: return 3;
        default: return 4;
    }
}

std::string act_str(const Action& a, int min_prec);

std::string as_str(const Assertion& a, int min_prec);

std::string act_str(const Action& a, int min_prec) {
    std::string s;
    switch (a.kind) {
        case Action::Kind::Atom: s = a.name; break;
        case Action::Kind::Skip: s = "skip"; break;
        case Action::Kind::Neg: s = "~" + act_str(*a.lhs, 4); break;
        case Action::Kind::Achieve: s = "any->" + as_str(*a.goal, 4); break;
        default: {
            int p = act_prec(a);
            const char* op = a.kind == Action::Kind::Choice ? " + " : a.kind == Action::Kind::Seq ? " ; " : " & ";
            s = act_str(*a.lhs, p) + op + act_str(*a.rhs, p + 1);
        }
    }
    return act_prec(a) < min_prec ? "(" + s + ")" : s;
}

int ev_prec(const Event& e) {
    switch (e.kind) {
        case Event::Kind::Choice: return 1;
        case Event::Kind::Seq: return 2;
        case Event::Kind::Par: return 3;
        default: return 4;
    }
}

std::string ev_str(const Event& e, int min_prec) {
    std::string s;
    switch (e.kind) {
        case Event::Kind::Perform:
            s = e.agents.empty() ? act_str(*e.action, 4) : print_group(e.agents) + ":" + act_str(*e.action, 4);
            break;
        case Event::Kind::PerformRole: s = e.role + ":" + act_str(*e.action, 4); break;
        case Event::Kind::Skip: s = "skip"; break;
        case Event::Kind::Neg: s = "~" + ev_str(*e.lhs, 4); break;
        default: {
            int p = ev_prec(e);
            const char* op = e.kind == Event::Kind::Choice ? " + " : e.kind == Event::Kind::Seq ? " ; " : " & ";
            s = ev_str(*e.lhs, p) + op + ev_str(*e.rhs, p + 1);
        }
    }
    return ev_prec(e) < min_prec ? "(" + s + ")" : s;
}

int as_prec(const Assertion& a) {
    switch (a.kind) {
        case Assertion::Kind::Implies: return 1;
        case Assertion::Kind::Or: return 2;
        case Assertion::Kind::And: return 3;
        default: return 4;
    }
}

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

std::string as_str(const Assertion& a, int min_prec) {
    using K = Assertion::Kind;
    auto body = [&](std::size_t i = 0) { return as_str(*a.sub[i], 1); };
    auto actf = [](const ActionPtr& x) { return act_str(*x, 1); };
    std::string s;
    switch (a.kind) {
        case K::True: s = "true"; break;
        case K::False: s = "false"; break;
        case K::Atom: s = a.id; break;
        case K::Violation: s = "V#" + a.id; break;
        case K::Not: s = "!" + as_str(*a.sub[0], 4); break;
        case K::And: s = as_str(*a.sub[0], 3) + " && " + as_str(*a.sub[1], 4); break;
        case K::Or: s = as_str(*a.sub[0], 2) + " || " + as_str(*a.sub[1], 3); break;
        case K::Implies: s = as_str(*a.sub[0], 2) + " -> " + as_str(*a.sub[1], 1); break;
        case K::Done: s = "DONE(" + ev_str(*a.event, 1) + ")"; break;
        case K::Do: s = "DO(" + ev_str(*a.event, 1) + ")"; break;
        case K::Cap: s = "Cap(" + a.id + ", " + actf(a.action) + ")"; break;
        case K::Box: s = "[" + ev_str(*a.event, 1) + "]" + as_str(*a.sub[0], 4); break;
        case K::Diamond: s = "<" + ev_str(*a.event, 1) + ">" + as_str(*a.sub[0], 4); break;
        case K::Belief: s = "B{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::EveryoneBelieves: s = "EB{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::CommonBelief: s = "CB{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::Goal: s = "Goal{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::AbleAction: s = "Able{" + joined(a.agents) + "}(" + actf(a.action) + ")"; break;
        case K::AbleTo: s = "G{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::Attempt: s = "H{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::Stit: s = "E{" + joined(a.agents) + "}(" + body() + ")"; break;
        case K::DoPart:
        case K::DonePart:
            s = std::string(a.kind == K::DoPart ? "DOPART(" : "DONEPART(") + a.id + ", " + a.action2->name + ", " +
                print_group(a.agents) + ":" + actf(a.action) + ")";
            break;
        case K::Obligation: s = "O#" + a.id + "(" + ev_str(*a.event, 1) + ")"; break;
        case K::Prohibition: s = "F#" + a.id + "(" + ev_str(*a.event, 1) + ")"; break;
        case K::Permission: s = "P#" + a.id + "(" + ev_str(*a.event, 1) + ")"; break;
        case K::NormO:
        case K::NormF:
        case K::NormP:
            s = std::string(a.kind == K::NormO ? "O#" : a.kind == K::NormF ? "F#" : "P#") + a.id + "(" + a.role + ", " +
                body() + ", " + actf(a.action) + (a.action2 ? ", " + actf(a.action2) : "") + ")";
            break;
        case K::PurposeBasic: s = "purpose(" + a.id + ":" + actf(a.action) + ", " + a.ctx + ", " + body() + ")"; break;
        case K::PurposeGeneral: s = "purpose(" + actf(a.action) + ", " + a.ctx + ", " + body() + ")"; break;
        case K::PurposeComplex:
            s = "purpose(" + a.id + ", " + actf(a.action) + ", " + a.ctx + ", " + body() + ")";
            break;
        case K::PurposeGroup:
            s = "purpose({" + joined(a.agents) + "}, " + actf(a.action) + ", " + a.ctx + ", " + body() + ")";
            break;
        case K::PurposeRole:
            s = "purpose(" + a.role + ", " + actf(a.action) + ", " + a.ctx + ", " + body() + ")";
            break;
        case K::PurposePractice: s = "purpose(" + a.ctx + ", " + body() + ")"; break;
        case K::Strategy: {
            const Event& e = *a.event;
            std::string who = e.kind == Event::Kind::PerformRole ? e.role : print_group(e.agents);
            s = "strategy(" + body() + ", " + (a.weak ? "H(" : "DO(") + who + ":" + actf(e.action) + "), " + a.ctx +
                ")";
            break;
        }
        case K::CountsAs:
            s = "countsas(" + a.ctx + ", " + a.role + ":" + actf(a.action) + ", " + actf(a.action2) + ")";
            break;
        case K::Promotes:
        case K::Demotes:
            s = std::string(a.kind == K::Promotes ? "promotes(" : "demotes(") + a.ctx + ", " + a.role + ":" +
                actf(a.action) + ", " + a.value + ")";
            break;
        case K::Affords: s = "affords({" + joined(a.agents) + "}, " + actf(a.action) + ", " + a.ctx + ")"; break;
        case K::Available: s = "available({" + joined(a.agents) + "}, " + a.ctx + ")"; break;
        case K::Play: s = "play(" + a.id + ", " + a.role + (a.ctx.empty() ? "" : ", " + a.ctx) + ")"; break;
        case K::Active: s = "active(" + a.ctx + ")"; break;
        case K::StartCond: s = "SC(" + a.ctx + ", " + body() + ")"; break;
        case K::EndCond: s = "EC(" + a.ctx + ", " + body() + ")"; break;
        case K::Salient: s = "Salient(" + print_group(a.agents) + ":" + actf(a.action) + ", " + a.ctx + ")"; break;
    }
    return as_prec(a) < min_prec ? "(" + s + ")" : s;
}

int plan_prec(const PlanPattern& p) {
    switch (p.kind) {
        case PlanPattern::Kind::Choice: return 1;
        case PlanPattern::Kind::Seq: return 2;
        case PlanPattern::Kind::Par: return 3;
        default: return 4;
    }
}

std::string plan_str(const PlanPattern& p, int min_prec) {
    std::string s;
    if (p.kind == PlanPattern::Kind::Leaf) {
        s = "{" + act_str(*p.action, 1) + " => " + as_str(*p.goal, 1) + "}";
    } else {
        int pr = plan_prec(p);
        const char* op = p.kind == PlanPattern::Kind::Choice ? " + " : p.kind == PlanPattern::Kind::Seq ? " ; " : " & ";
        s = plan_str(*p.lhs, pr) + op + plan_str(*p.rhs, pr + 1);
    }
    return plan_prec(p) < min_prec ? "(" + s + ")" : s;
}
}  // namespace

std::string print_group(const std::vector<std::string>& agents) {
    if (agents.size() == 1) return agents[0];
    return "{" + joined(agents) + "}";
}

std::string print(const Action& a) { return act_str(a, 1); }
std::string print(const Event& e) { return ev_str(e, 1); }
std::string print(const Assertion& a) { return as_str(a, 1); }
std::string print(const PlanPattern& p) { return plan_str(p, 1); }

}  // namespace socprac
