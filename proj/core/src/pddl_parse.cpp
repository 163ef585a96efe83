#include <algorithm>
#include <cctype>
#include <memory>

#include "planshield/pddl.hpp"

namespace planshield {

namespace {

// ---- s-expression layer ----

struct Sexpr {
    bool is_list = false;
    std::string atom;  // lowercased
    std::vector<Sexpr> items;
    int line = 1;
    int col = 1;

    bool is_atom() const { return !is_list; }
    bool head_is(std::string_view word) const {
        return is_list && !items.empty() && items.front().is_atom() && items.front().atom == word;
    }
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    struct Token {
        enum Kind { LParen, RParen, Symbol, End } kind;
        std::string value;
        int line;
        int col;
    };

    Token next() {
        skip_space_and_comments();
        const int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Token::End, "", line, col};
        const char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::LParen, "(", line, col};
        }
        if (c == ')') {
            advance();
            return {Token::RParen, ")", line, col};
        }
        std::string sym;
        while (pos_ < text_.size() && !is_delim(text_[pos_])) {
            sym += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
            advance();
        }
        return {Token::Symbol, sym, line, col};
    }

private:
    static bool is_delim(char c) {
        return c == '(' || c == ')' || c == ';' ||
               std::isspace(static_cast<unsigned char>(c)) != 0;
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

Sexpr parse_sexpr(Lexer& lexer, const Lexer::Token& tok) {
    if (tok.kind == Lexer::Token::Symbol) {
        Sexpr s;
        s.is_list = false;
        s.atom = tok.value;
        s.line = tok.line;
        s.col = tok.col;
        return s;
    }
    if (tok.kind != Lexer::Token::LParen)
        throw ParseError("expected '(' or symbol", tok.line, tok.col);
    Sexpr list;
    list.is_list = true;
    list.line = tok.line;
    list.col = tok.col;
    while (true) {
        const Lexer::Token t = lexer.next();
        if (t.kind == Lexer::Token::RParen) return list;
        if (t.kind == Lexer::Token::End)
            throw ParseError("unbalanced '(': input ended inside a list", list.line, list.col);
        list.items.push_back(parse_sexpr(lexer, t));
    }
}

Sexpr parse_top(std::string_view text) {
    Lexer lexer(text);
    const Lexer::Token first = lexer.next();
    if (first.kind == Lexer::Token::End) throw ParseError("empty input", 1, 1);
    Sexpr top = parse_sexpr(lexer, first);
    const Lexer::Token rest = lexer.next();
    if (rest.kind != Lexer::Token::End)
        throw ParseError("trailing content after top-level form", rest.line, rest.col);
    return top;
}

// ---- shared helpers ----

[[noreturn]] void fail(const Sexpr& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.col);
}

const std::string& expect_atom(const Sexpr& s, const char* what) {
    if (!s.is_atom()) fail(s, std::string("expected ") + what);
    return s.atom;
}

// Parses "n1 n2 - t n3 n4 - t2 n5" typed-list syntax.
std::vector<TypedName> parse_typed_list(const std::vector<Sexpr>& items, std::size_t begin,
                                        const Sexpr& context) {
    std::vector<TypedName> out;
    std::size_t pending_from = out.size();
    for (std::size_t i = begin; i < items.size(); ++i) {
        const std::string& word = expect_atom(items[i], "a name in a typed list");
        if (word == "-") {
            if (i + 1 >= items.size()) fail(items[i], "dangling '-' in typed list");
            const std::string& type = expect_atom(items[i + 1], "a type name");
            for (std::size_t k = pending_from; k < out.size(); ++k) out[k].type = type;
            pending_from = out.size();
            ++i;
        } else {
            out.push_back(TypedName{word, "object"});
        }
    }
    (void)context;
    return out;
}

Atom parse_atom(const Sexpr& s) {
    if (!s.is_list || s.items.empty()) fail(s, "expected an atom '(predicate args...)'");
    Atom a;
    a.predicate = expect_atom(s.items.front(), "a predicate name");
    a.line = s.line;
    a.col = s.col;
    for (std::size_t i = 1; i < s.items.size(); ++i)
        a.args.push_back(expect_atom(s.items[i], "an atom argument"));
    return a;
}

bool is_variable(const std::string& word) { return !word.empty() && word.front() == '?'; }

// Condition grammar: atom | (and cond*) | (= x y) | (not (= x y)).
// Anything else is named and rejected.
void parse_condition(const Sexpr& s, std::vector<Atom>& atoms,
                     std::vector<EqualityCondition>* equalities) {
    if (!s.is_list) fail(s, "expected a condition");
    if (s.items.empty()) return;  // "()" is an empty conjunction
    const Sexpr& head = s.items.front();
    if (head.is_atom() && head.atom == "and") {
        for (std::size_t i = 1; i < s.items.size(); ++i)
            parse_condition(s.items[i], atoms, equalities);
        return;
    }
    if (head.is_atom() && head.atom == "=") {
        if (!equalities) throw UnsupportedFeatureError("=");
        if (s.items.size() != 3) fail(s, "'=' takes exactly two arguments");
        equalities->push_back(EqualityCondition{expect_atom(s.items[1], "a term"),
                                                expect_atom(s.items[2], "a term"), false});
        return;
    }
    if (head.is_atom() && head.atom == "not") {
        if (equalities && s.items.size() == 2 && s.items[1].head_is("=")) {
            const Sexpr& eq = s.items[1];
            if (eq.items.size() != 3) fail(eq, "'=' takes exactly two arguments");
            equalities->push_back(EqualityCondition{expect_atom(eq.items[1], "a term"),
                                                    expect_atom(eq.items[2], "a term"), true});
            return;
        }
        throw UnsupportedFeatureError("not");
    }
    if (head.is_atom() && (head.atom == "or" || head.atom == "imply" || head.atom == "forall" ||
                           head.atom == "exists" || head.atom == "when" || head.atom == "increase" ||
                           head.atom == "decrease" || head.atom == "assign"))
        throw UnsupportedFeatureError(head.atom);
    atoms.push_back(parse_atom(s));
}

// Effect grammar: atom | (not atom) | (and effect*).
void parse_effect(const Sexpr& s, std::vector<Atom>& add, std::vector<Atom>& del) {
    if (!s.is_list) fail(s, "expected an effect");
    if (s.items.empty()) return;
    const Sexpr& head = s.items.front();
    if (head.is_atom() && head.atom == "and") {
        for (std::size_t i = 1; i < s.items.size(); ++i) parse_effect(s.items[i], add, del);
        return;
    }
    if (head.is_atom() && head.atom == "not") {
        if (s.items.size() != 2 || !s.items[1].is_list) fail(s, "'not' takes one atom");
        const Sexpr& inner = s.items[1];
        if (inner.head_is("=")) throw UnsupportedFeatureError("=");
        del.push_back(parse_atom(inner));
        return;
    }
    if (head.is_atom() && (head.atom == "when" || head.atom == "forall" || head.atom == "increase" ||
                           head.atom == "decrease" || head.atom == "assign" || head.atom == "="))
        throw UnsupportedFeatureError(head.atom);
    add.push_back(parse_atom(s));
}

ActionSchema parse_action(const Sexpr& s) {
    ActionSchema schema;
    if (s.items.size() < 2 || !s.items[1].is_atom()) fail(s, "':action' needs a name");
    schema.name = s.items[1].atom;
    for (std::size_t i = 2; i < s.items.size(); i += 2) {
        const std::string& key = expect_atom(s.items[i], "an ':action' section keyword");
        if (i + 1 >= s.items.size()) fail(s.items[i], "'" + key + "' is missing its body");
        const Sexpr& body = s.items[i + 1];
        if (key == ":parameters") {
            if (!body.is_list) fail(body, "':parameters' needs a list");
            schema.parameters = parse_typed_list(body.items, 0, body);
            for (const auto& p : schema.parameters)
                if (!is_variable(p.name)) fail(body, "parameter '" + p.name + "' must start with '?'");
        } else if (key == ":precondition") {
            parse_condition(body, schema.pre, &schema.equalities);
        } else if (key == ":effect") {
            parse_effect(body, schema.add, schema.del);
        } else {
            throw UnsupportedFeatureError(key);
        }
    }
    // every variable mentioned must be a declared parameter
    auto check_vars = [&](const std::vector<Atom>& atoms) {
        for (const Atom& a : atoms)
            for (const std::string& arg : a.args)
                if (is_variable(arg) &&
                    std::none_of(schema.parameters.begin(), schema.parameters.end(),
                                 [&](const TypedName& p) { return p.name == arg; }))
                    throw ParseError("variable '" + arg + "' of action '" + schema.name +
                                         "' is not a parameter",
                                     a.line, a.col);
    };
    check_vars(schema.pre);
    check_vars(schema.add);
    check_vars(schema.del);
    return schema;
}

}  // namespace

DomainAst parse_domain(std::string_view text) {
    const Sexpr top = parse_top(text);
    if (!top.head_is("define")) fail(top, "expected '(define (domain ...) ...)'");
    if (top.items.size() < 2 || !top.items[1].head_is("domain") || top.items[1].items.size() != 2)
        fail(top, "expected '(domain <name>)' after 'define'");

    DomainAst domain;
    domain.name = expect_atom(top.items[1].items[1], "a domain name");

    for (std::size_t i = 2; i < top.items.size(); ++i) {
        const Sexpr& section = top.items[i];
        if (!section.is_list || section.items.empty() || !section.items.front().is_atom())
            fail(section, "expected a domain section '(:<keyword> ...)'");
        const std::string& key = section.items.front().atom;
        if (key == ":requirements") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const std::string& req = expect_atom(section.items[k], "a requirement");
                if (req != ":strips" && req != ":typing") throw UnsupportedFeatureError(req);
                domain.requirements.push_back(req);
            }
        } else if (key == ":types") {
            auto typed = parse_typed_list(section.items, 1, section);
            for (auto& t : typed) domain.types.push_back(std::move(t));
        } else if (key == ":predicates") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const Sexpr& p = section.items[k];
                if (!p.is_list || p.items.empty()) fail(p, "expected '(predicate ?params...)'");
                PredicateDef def;
                def.name = expect_atom(p.items.front(), "a predicate name");
                def.parameters = parse_typed_list(p.items, 1, p);
                domain.predicates.push_back(std::move(def));
            }
        } else if (key == ":action") {
            domain.schemas.push_back(parse_action(section));
        } else {
            throw UnsupportedFeatureError(key);
        }
    }
    return domain;
}

ProblemAst parse_problem(std::string_view text) {
    const Sexpr top = parse_top(text);
    if (!top.head_is("define")) fail(top, "expected '(define (problem ...) ...)'");
    if (top.items.size() < 2 || !top.items[1].head_is("problem") || top.items[1].items.size() != 2)
        fail(top, "expected '(problem <name>)' after 'define'");

    ProblemAst problem;
    problem.name = expect_atom(top.items[1].items[1], "a problem name");

    for (std::size_t i = 2; i < top.items.size(); ++i) {
        const Sexpr& section = top.items[i];
        if (!section.is_list || section.items.empty() || !section.items.front().is_atom())
            fail(section, "expected a problem section '(:<keyword> ...)'");
        const std::string& key = section.items.front().atom;
        if (key == ":domain") {
            if (section.items.size() != 2) fail(section, "':domain' takes one name");
            problem.domain_name = expect_atom(section.items[1], "a domain name");
        } else if (key == ":requirements") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const std::string& req = expect_atom(section.items[k], "a requirement");
                if (req != ":strips" && req != ":typing") throw UnsupportedFeatureError(req);
            }
        } else if (key == ":objects") {
            problem.objects = parse_typed_list(section.items, 1, section);
        } else if (key == ":init") {
            for (std::size_t k = 1; k < section.items.size(); ++k) {
                const Sexpr& s = section.items[k];
                if (s.is_list && !s.items.empty() && s.items.front().is_atom()) {
                    const std::string& head = s.items.front().atom;
                    if (head == "not" || head == "=") throw UnsupportedFeatureError(head);
                }
                problem.init.push_back(parse_atom(s));
            }
        } else if (key == ":goal") {
            if (section.items.size() != 2) fail(section, "':goal' takes one condition");
            parse_condition(section.items[1], problem.goal, nullptr);
        } else {
            throw UnsupportedFeatureError(key);
        }
    }
    // goal atoms must be ground
    for (const Atom& a : problem.goal)
        for (const std::string& arg : a.args)
            if (is_variable(arg))
                throw ParseError("goal atom '" + a.predicate + "' contains variable '" + arg + "'",
                                 a.line, a.col);
    for (const Atom& a : problem.init)
        for (const std::string& arg : a.args)
            if (is_variable(arg))
                throw ParseError("init atom '" + a.predicate + "' contains variable '" + arg + "'",
                                 a.line, a.col);
    return problem;
}

}  // namespace planshield
