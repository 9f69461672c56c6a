#include <algorithm>
#include <set>
#include <sstream>

#include "socprac/lang.hpp"
#include "socprac/practice.hpp"

namespace socprac {

const std::vector<std::string> kPracticeSections = {
    "roles",   "actors",     "resources", "affordances", "places", "purpose", "promotes",    "counts-as",
    "plan-patterns", "norms", "strategies", "start",    "end",    "actions", "requirements"};

AssertionPtr SocialPractice::goal() const { return as_and_all(purpose); }

namespace {

struct Item {
    std::vector<Token> toks;  // ends with one End token
};

struct Section {
    Token head;
    std::vector<Item> items;
};

bool blank_or_comment(const std::string& line) {
    auto p = line.find_first_not_of(" \t\r");
    return p == std::string::npos || line[p] == '#';
}

class PracticeReader {
public:
    PracticeReader(const KripkeModel& m, std::string file) : m_(m), file_(std::move(file)) {}

    SocialPractice read(const std::string& text) {
        split(text);
        SocialPractice sp;
        sp.name = name_.text;
        for (const auto& s : kPracticeSections)
            if (!sections_.count(s))
                throw ParseError("MissingSection", eof_span(), "missing section '" + s + "'");

        sp.roles = idents("roles");
        for (const auto& t : idents_tok("roles"))
            if (!m_.is_role(t.text)) fail(t, "unknown role", "UnknownIdentifier");
        for (const auto& t : idents_tok("actors"))
            if (m_.vocab.agent_index(t.text) < 0) fail(t, "unknown agent", "UnknownIdentifier");
        sp.actors = idents("actors");
        for (const auto& t : idents_tok("resources"))
            if (!m_.is_object(t.text)) fail(t, "unknown object", "UnknownIdentifier");
        sp.resources = idents("resources");

        for (const auto& it : sections_["affordances"].items) {
            ExprParser p(it.toks, &m_);
            PracticeAffordance af;
            p.expect("{");
            if (!p.peek().is("}")) {
                do {
                    Token o = p.expect_ident();
                    if (!m_.is_object(o.text)) p.fail(o, "unknown object", "UnknownIdentifier");
                    af.objects.push_back(o.text);
                } while (p.accept(","));
            }
            p.expect("}");
            std::sort(af.objects.begin(), af.objects.end());
            af.action = p.action();
            p.expect_end();
            sp.affordances.push_back(std::move(af));
        }

        for (const auto& it : sections_["places"].items) {
            const auto& t = it.toks;
            for (std::size_t i = 0; i + 1 < t.size(); i += 2) {
                if (t[i].kind != Token::Kind::String) fail(t[i], "expected string");
                if (!t[i + 1].is(",") && t[i + 1].kind != Token::Kind::End) fail(t[i + 1], "expected ','");
                if (t[i + 1].is(",") && i + 2 == t.size() - 1) fail(t[i + 2], "expected string");
                sp.places.push_back(t[i].text);
            }
        }

        sp.purpose = assertions("purpose", {});
        sp.promotes = assertions("promotes", {Assertion::Kind::Promotes, Assertion::Kind::Demotes});
        sp.counts_as = assertions("counts-as", {Assertion::Kind::CountsAs});
        for (const auto& it : sections_["plan-patterns"].items) {
            ExprParser p(it.toks, &m_);
            sp.plan_patterns.push_back(p.plan());
            p.expect_end();
        }
        sp.norms = assertions("norms", {Assertion::Kind::NormO, Assertion::Kind::NormF, Assertion::Kind::NormP});
        sp.strategies = assertions("strategies", {Assertion::Kind::Strategy});
        sp.start = single("start");
        sp.end = single("end");

        for (const auto& t : idents_tok("actions"))
            if (!m_.vocab.has_action_name(t.text)) fail(t, "unknown action", "UnknownIdentifier");
        sp.actions = idents("actions");

        for (const auto& it : sections_["requirements"].items) {
            ExprParser p(it.toks, &m_);
            Token r = p.expect_ident();
            if (std::find(sp.roles.begin(), sp.roles.end(), r.text) == sp.roles.end())
                p.fail(r, "role not in the practice", "UnknownIdentifier");
            if (sp.requirements.count(r.text)) p.fail(r, "already declared", "DuplicateDeclaration");
            p.expect(":");
            auto& caps = sp.requirements[r.text];
            if (!p.at_end()) {
                do {
                    Token a = p.expect_ident();
                    if (!m_.vocab.has_action_name(a.text)) p.fail(a, "unknown action", "UnknownIdentifier");
                    caps.push_back(a.text);
                } while (p.accept(","));
            }
            p.expect_end();
            std::sort(caps.begin(), caps.end());
        }

        check_roles(sp);
        return sp;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg, const std::string& kind = "SyntaxError") {
        ExprParser({t, Token{}}, &m_).fail(t, msg, kind);
    }

    SourceSpan eof_span() const { return SourceSpan{file_, last_line_, 1, 1}; }

    void split(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int n = 0;
        Section* cur = nullptr;
        int item_indent = -1;
        while (std::getline(in, line)) {
            ++n;
            last_line_ = n;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (blank_or_comment(line)) continue;
            auto indent = static_cast<int>(line.find_first_not_of(" \t"));
            if (indent == 0) {
                if (!seen_name_) {
                    auto toks = lex(line, file_, n, 1);
                    if (!toks[0].ident("practice") || toks.size() != 3 || toks[1].kind != Token::Kind::Ident)
                        fail(toks[0], "expected 'practice <context>'");
                    name_ = toks[1];
                    if (!m_.context(name_.text)) fail(name_, "unknown context", "UnknownIdentifier");
                    seen_name_ = true;
                    continue;
                }
                auto colon = line.find(':');
                std::string head = colon == std::string::npos ? line : line.substr(0, colon);
                Token ht;
                ht.kind = Token::Kind::Ident;
                ht.text = head;
                ht.span = SourceSpan{file_, n, 1, static_cast<int>(std::max<std::size_t>(head.size(), 1))};
                auto stray = head.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_- \t");
                if (stray != std::string::npos) {
                    Token st;
                    st.text = head.substr(stray, 1);
                    st.span = SourceSpan{file_, n, static_cast<int>(stray) + 1, 1};
                    fail(st, "unexpected character '" + st.text + "' in section header");
                }
                if (colon == std::string::npos ||
                    std::find(kPracticeSections.begin(), kPracticeSections.end(), head) == kPracticeSections.end())
                    fail(ht, "expected a section header");
                if (sections_.count(head)) fail(ht, "section repeated", "DuplicateDeclaration");
                cur = &sections_[head];
                cur->head = ht;
                item_indent = -1;
                std::string rest = line.substr(colon + 1);
                if (!blank_or_comment(rest)) {
                    auto rt = lex(rest, file_, n, static_cast<int>(colon) + 2);
                    if (rt.size() > 1) cur->items.push_back({rt});
                }
                continue;
            }
            if (!cur) fail(lex(line, file_, n, 1)[0], "expected a section header");
            auto toks = lex(line.substr(indent), file_, n, indent + 1);
            if (toks.size() == 1) continue;
            if (item_indent < 0 || indent <= item_indent || cur->items.empty()) {
                item_indent = indent;
                cur->items.push_back({toks});
            } else {
                auto& prev = cur->items.back().toks;
                prev.pop_back();
                prev.insert(prev.end(), toks.begin(), toks.end());
            }
        }
        if (!seen_name_) throw ParseError("SyntaxError", eof_span(), "expected 'practice <context>'");
    }

    std::vector<Token> idents_tok(const std::string& s) {
        std::vector<Token> out;
        for (const auto& it : sections_[s].items) {
            ExprParser p(it.toks, &m_);
            if (p.at_end()) continue;
            do {
                out.push_back(p.expect_ident());
            } while (p.accept(","));
            p.expect_end();
        }
        return out;
    }

    std::vector<std::string> idents(const std::string& s) {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& t : idents_tok(s)) {
            if (!seen.insert(t.text).second) fail(t, "listed twice", "DuplicateDeclaration");
            out.push_back(t.text);
        }
        return out;
    }

    std::vector<AssertionPtr> assertions(const std::string& s, const std::vector<Assertion::Kind>& kinds) {
        std::vector<AssertionPtr> out;
        for (const auto& it : sections_[s].items) {
            ExprParser p(it.toks, &m_);
            Token first = p.peek();
            auto a = p.assertion();
            p.expect_end();
            if (!kinds.empty() && std::find(kinds.begin(), kinds.end(), a->kind) == kinds.end())
                p.fail(first, "unexpected entry for section '" + s + "'");
            out.push_back(a);
        }
        return out;
    }

    AssertionPtr single(const std::string& s) {
        auto& sec = sections_[s];
        if (sec.items.size() != 1) fail(sec.head, "section '" + s + "' takes exactly one assertion");
        return assertions(s, {}).front();
    }

    void check_roles(const SocialPractice& sp) {
        auto known = [&](const std::string& r) { return std::find(sp.roles.begin(), sp.roles.end(), r) != sp.roles.end(); };
        auto check = [&](const std::string& sec, const std::vector<AssertionPtr>& v, auto role_of) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                std::string r = role_of(*v[i]);
                if (!r.empty() && !known(r)) {
                    const auto& t = sections_[sec].items[i].toks.front();
                    fail(t, "role '" + r + "' is not a role of the practice", "UnknownIdentifier");
                }
            }
        };
        check("norms", sp.norms, [](const Assertion& a) { return a.role; });
        check("counts-as", sp.counts_as, [](const Assertion& a) { return a.role; });
        check("promotes", sp.promotes, [](const Assertion& a) { return a.role; });
        check("strategies", sp.strategies, [](const Assertion& a) {
            return a.event && a.event->kind == Event::Kind::PerformRole ? a.event->role : std::string();
        });
    }

    const KripkeModel& m_;
    std::string file_;
    Token name_;
    bool seen_name_ = false;
    int last_line_ = 1;
    std::map<std::string, Section> sections_;
};

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}

}  // namespace

SocialPractice parse_practice(const std::string& text, const KripkeModel& m, const std::string& file) {
    return PracticeReader(m, file).read(text);
}

std::string print_practice(const SocialPractice& sp) {
    std::ostringstream o;
    auto inline_list = [&](const char* h, const std::vector<std::string>& v) {
        o << h << ":" << (v.empty() ? "" : " " + joined(v)) << "\n";
    };
    auto block = [&](const char* h, const std::vector<AssertionPtr>& v) {
        o << h << ":\n";
        for (const auto& a : v) o << "  " << print(*a) << "\n";
    };
    o << "practice " << sp.name << "\n";
    inline_list("roles", sp.roles);
    inline_list("actors", sp.actors);
    inline_list("resources", sp.resources);
    o << "affordances:\n";
    for (const auto& af : sp.affordances) o << "  {" << joined(af.objects) << "} " << print(*af.action) << "\n";
    std::vector<std::string> quoted;
    for (const auto& p : sp.places) quoted.push_back("\"" + p + "\"");
    inline_list("places", quoted);
    block("purpose", sp.purpose);
    block("promotes", sp.promotes);
    block("counts-as", sp.counts_as);
    o << "plan-patterns:\n";
    for (const auto& p : sp.plan_patterns) o << "  " << print(*p) << "\n";
    block("norms", sp.norms);
    block("strategies", sp.strategies);
    o << "start: " << print(*sp.start) << "\n";
    o << "end: " << print(*sp.end) << "\n";
    inline_list("actions", sp.actions);
    o << "requirements:\n";
    for (const auto& [r, caps] : sp.requirements) o << "  " << r << ":" << (caps.empty() ? "" : " " + joined(caps)) << "\n";
    return o.str();
}

bool equal(const SocialPractice& a, const SocialPractice& b) { return print_practice(a) == print_practice(b); }

}  // namespace socprac
