#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causelab/errors.hpp"
#include "causelab/expr.hpp"
#include "causelab/formula.hpp"
#include "causelab/model.hpp"
#include "causelab/ranking.hpp"

namespace causelab {

namespace detail {

enum class Tok {
    Ident, Int, String,
    LParen, RParen, LBrace, RBrace, LBrack, RBrack,
    Comma, Semi, Amp, Pipe, Bang,
    Assign,   // =
    EqEq,     // ==
    Neq,      // !=
    Arrow,    // ->
    LArrow,   // <-
    Plus, Minus, At,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    Lexer(std::string_view text, int start_line = 1) : text_(text), line_(start_line) {
        advance();
    }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space();
        cur_.line = line_;
        cur_.column = col_;
        if (pos_ >= text_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                take();
            set(Tok::Ident, std::string(text_.substr(start, pos_ - start)));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                take();
            set(Tok::Int, std::string(text_.substr(start, pos_ - start)));
            return;
        }
        if (c == '"') {
            take();
            std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') take();
            if (pos_ >= text_.size() || text_[pos_] != '"')
                throw parse_error("unterminated string literal", cur_.line, cur_.column);
            std::string s(text_.substr(start, pos_ - start));
            take();
            set(Tok::String, std::move(s));
            return;
        }
        take();
        switch (c) {
            case '(': set(Tok::LParen, "("); return;
            case ')': set(Tok::RParen, ")"); return;
            case '{': set(Tok::LBrace, "{"); return;
            case '}': set(Tok::RBrace, "}"); return;
            case '[': set(Tok::LBrack, "["); return;
            case ']': set(Tok::RBrack, "]"); return;
            case ',': set(Tok::Comma, ","); return;
            case ';': set(Tok::Semi, ";"); return;
            case '&': set(Tok::Amp, "&"); return;
            case '|': set(Tok::Pipe, "|"); return;
            case '@': set(Tok::At, "@"); return;
            case '+': set(Tok::Plus, "+"); return;
            case '=':
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    take();
                    set(Tok::EqEq, "==");
                } else {
                    set(Tok::Assign, "=");
                }
                return;
            case '!':
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    take();
                    set(Tok::Neq, "!=");
                } else {
                    set(Tok::Bang, "!");
                }
                return;
            case '-':
                if (pos_ < text_.size() && text_[pos_] == '>') {
                    take();
                    set(Tok::Arrow, "->");
                } else {
                    set(Tok::Minus, "-");
                }
                return;
            case '<':
                if (pos_ < text_.size() && text_[pos_] == '-') {
                    take();
                    set(Tok::LArrow, "<-");
                } else {
                    throw parse_error("stray '<' (did you mean '<-'?)", cur_.line, cur_.column);
                }
                return;
            default:
                throw parse_error(std::string("unexpected character '") + c + "'",
                                  cur_.line, cur_.column);
        }
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') take();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else {
                break;
            }
        }
    }

    void take() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void set(Tok k, std::string text) {
        cur_.kind = k;
        cur_.text = std::move(text);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

class Parser {
public:
    Parser(std::string_view text, int start_line = 1) : lex_(text, start_line) {}

    const Token& peek() const { return lex_.peek(); }
    Token next() { return lex_.next(); }

    bool accept(Tok k) {
        if (peek().kind != k) return false;
        lex_.next();
        return true;
    }
    bool accept_ident(std::string_view word) {
        if (peek().kind != Tok::Ident || peek().text != word) return false;
        lex_.next();
        return true;
    }
    Token expect(Tok k, const char* what) {
        if (peek().kind != k)
            throw parse_error(std::string("expected ") + what + ", found '" +
                                  describe(peek()) + "'",
                              peek().line, peek().column);
        return lex_.next();
    }
    void expect_end() {
        if (peek().kind != Tok::End)
            throw parse_error("unexpected trailing input '" + describe(peek()) + "'",
                              peek().line, peek().column);
    }

    /// A value token: an identifier or a small integer rendered as text.
    Value expect_value() {
        if (peek().kind == Tok::Ident || peek().kind == Tok::Int) return next().text;
        throw parse_error("expected a value, found '" + describe(peek()) + "'",
                          peek().line, peek().column);
    }

    static std::string describe(const Token& t) {
        return t.kind == Tok::End ? "end of input" : t.text;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, peek().line, peek().column);
    }

private:
    Lexer lex_;
};

// --- expression bodies ------------------------------------------------------

inline ExprPtr parse_expr_or(Parser& p);

inline ExprPtr parse_expr_primary(Parser& p) {
    const Token& t = p.peek();
    if (t.kind == Tok::Int) return Expr::lit(p.next().text);
    if (t.kind == Tok::LParen) {
        p.next();
        ExprPtr e = parse_expr_or(p);
        p.expect(Tok::RParen, "')'");
        return e;
    }
    if (t.kind == Tok::Ident) {
        Token id = p.next();
        if (p.peek().kind == Tok::LParen &&
            (id.text == "ite" || id.text == "min" || id.text == "max")) {
            p.next();
            std::vector<ExprPtr> args;
            args.push_back(parse_expr_or(p));
            while (p.accept(Tok::Comma)) args.push_back(parse_expr_or(p));
            p.expect(Tok::RParen, "')'");
            const std::size_t want = id.text == "ite" ? 3 : 2;
            if (args.size() != want)
                throw parse_error("'" + id.text + "' takes " + std::to_string(want) +
                                      " arguments, got " + std::to_string(args.size()),
                                  id.line, id.column);
            return Expr::node(id.text == "ite" ? Expr::Op::Ite
                              : id.text == "min" ? Expr::Op::Min
                                                 : Expr::Op::Max,
                              std::move(args));
        }
        return Expr::var(id.text);
    }
    p.fail("expected an expression");
}

inline ExprPtr parse_expr_add(Parser& p) {
    ExprPtr e = parse_expr_primary(p);
    while (p.peek().kind == Tok::Plus || p.peek().kind == Tok::Minus) {
        const Expr::Op op = p.next().kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Sub;
        e = Expr::node(op, {e, parse_expr_primary(p)});
    }
    return e;
}

inline ExprPtr parse_expr_cmp(Parser& p) {
    ExprPtr e = parse_expr_add(p);
    if (p.peek().kind == Tok::EqEq || p.peek().kind == Tok::Neq) {
        const Expr::Op op = p.next().kind == Tok::EqEq ? Expr::Op::Eq : Expr::Op::Ne;
        e = Expr::node(op, {e, parse_expr_add(p)});
    }
    return e;
}

inline ExprPtr parse_expr_not(Parser& p) {
    if (p.accept_ident("not")) return Expr::node(Expr::Op::Not, {parse_expr_not(p)});
    return parse_expr_cmp(p);
}

inline ExprPtr parse_expr_and(Parser& p) {
    ExprPtr e = parse_expr_not(p);
    while (p.peek().kind == Tok::Ident && p.peek().text == "and") {
        p.next();
        e = Expr::node(Expr::Op::And, {e, parse_expr_not(p)});
    }
    return e;
}

inline ExprPtr parse_expr_or(Parser& p) {
    ExprPtr e = parse_expr_and(p);
    while (p.peek().kind == Tok::Ident && p.peek().text == "or") {
        p.next();
        e = Expr::node(Expr::Op::Or, {e, parse_expr_and(p)});
    }
    return e;
}

// --- event formulas ---------------------------------------------------------

inline EventFormulaPtr parse_phi_or(Parser& p);

inline EventFormulaPtr parse_phi_primary(Parser& p) {
    if (p.accept(Tok::LParen)) {
        EventFormulaPtr f = parse_phi_or(p);
        p.expect(Tok::RParen, "')'");
        return f;
    }
    Token var = p.expect(Tok::Ident, "a variable name");
    p.expect(Tok::Assign, "'='");
    PrimitiveEvent ev;
    ev.variable = var.text;
    ev.value = p.expect_value();
    ev.pos = {var.line, var.column};
    return EventFormula::make_event(std::move(ev));
}

inline EventFormulaPtr parse_phi_not(Parser& p) {
    if (p.accept(Tok::Bang)) return EventFormula::make_not(parse_phi_not(p));
    return parse_phi_primary(p);
}

inline EventFormulaPtr parse_phi_and(Parser& p) {
    EventFormulaPtr f = parse_phi_not(p);
    while (p.accept(Tok::Amp)) f = EventFormula::make_and(f, parse_phi_not(p));
    return f;
}

inline EventFormulaPtr parse_phi_or(Parser& p) {
    EventFormulaPtr f = parse_phi_and(p);
    while (p.accept(Tok::Pipe)) f = EventFormula::make_or(f, parse_phi_and(p));
    return f;
}

// --- causal formulas --------------------------------------------------------

inline CausalFormulaPtr parse_psi_or(Parser& p);

inline CausalFormulaPtr parse_psi_primary(Parser& p) {
    if (p.accept(Tok::LParen)) {
        CausalFormulaPtr f = parse_psi_or(p);
        p.expect(Tok::RParen, "')'");
        return f;
    }
    Token open = p.expect(Tok::LBrack, "'['");
    BasicCausalFormula basic;
    basic.pos = {open.line, open.column};
    if (!p.accept(Tok::RBrack)) {
        while (true) {
            Token var = p.expect(Tok::Ident, "a variable name");
            p.expect(Tok::LArrow, "'<-'");
            Value val = p.expect_value();
            if (!basic.intervention.assignment.emplace(var.text, std::move(val)).second)
                throw parse_error("variable '" + var.text + "' set twice in one intervention",
                                  var.line, var.column);
            if (!p.accept(Tok::Comma)) break;
        }
        p.expect(Tok::RBrack, "']'");
    }
    p.expect(Tok::LParen, "'(' after the intervention bracket");
    basic.body = parse_phi_or(p);
    p.expect(Tok::RParen, "')'");
    return CausalFormula::make_basic(std::move(basic));
}

inline CausalFormulaPtr parse_psi_not(Parser& p) {
    if (p.accept(Tok::Bang)) return CausalFormula::make_not(parse_psi_not(p));
    return parse_psi_primary(p);
}

inline CausalFormulaPtr parse_psi_and(Parser& p) {
    CausalFormulaPtr f = parse_psi_not(p);
    while (p.accept(Tok::Amp)) f = CausalFormula::make_and(f, parse_psi_not(p));
    return f;
}

inline CausalFormulaPtr parse_psi_or(Parser& p) {
    CausalFormulaPtr f = parse_psi_and(p);
    while (p.accept(Tok::Pipe)) f = CausalFormula::make_or(f, parse_psi_and(p));
    return f;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public entry points

/// Parses an event formula: `event := VAR '=' VALUE`, connectives `! & |`
/// with precedence ! > & > |, parentheses allowed.
inline EventFormulaPtr parse_event_formula(std::string_view text) {
    detail::Parser p(text);
    EventFormulaPtr f = detail::parse_phi_or(p);
    p.expect_end();
    return f;
}

/// Parses a causal formula: leaves are `[VAR<-VAL,...](phi)`; the empty
/// bracket list `[](phi)` asserts phi about the unmodified model.
inline CausalFormulaPtr parse_causal_formula(std::string_view text) {
    detail::Parser p(text);
    CausalFormulaPtr f = detail::parse_psi_or(p);
    p.expect_end();
    return f;
}

/// Parses `VAR=VAL` pairs separated by `sep` (',' for contexts and worlds,
/// '&' for cause candidates). Empty input yields an empty map.
inline std::map<std::string, Value> parse_assignments(std::string_view text, char sep) {
    detail::Parser p(text);
    std::map<std::string, Value> out;
    if (p.peek().kind == detail::Tok::End) return out;
    while (true) {
        detail::Token var = p.expect(detail::Tok::Ident, "a variable name");
        p.expect(detail::Tok::Assign, "'='");
        Value val = p.expect_value();
        if (!out.emplace(var.text, std::move(val)).second)
            throw parse_error("variable '" + var.text + "' assigned twice", var.line, var.column);
        if (p.peek().kind == detail::Tok::End) break;
        if (sep == ',')
            p.expect(detail::Tok::Comma, "','");
        else
            p.expect(detail::Tok::Amp, "'&'");
    }
    return out;
}

inline Context parse_context(std::string_view text) {
    return Context{parse_assignments(text, ',')};
}

inline World parse_world(std::string_view text) {
    return World{parse_assignments(text, ',')};
}

/// Parses the model text format: one statement per line, `#` comments.
///
///   model "<name>"
///   exo <Var> in {v1, v2, ...}
///   var <Var> in {v1, v2, ...}
///   eq <Var>(<parent>, ...) = table { (p1,...)->v; ... }
///   eq <Var>(<parent>, ...) = <expr>
inline CausalModel parse_model(std::string_view text) {
    CausalModel model;
    bool saw_name = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        detail::Parser p(line, line_no);
        if (p.peek().kind == detail::Tok::End) continue;

        if (p.accept_ident("model")) {
            if (saw_name)
                p.fail("duplicate 'model' statement");
            model.name = p.expect(detail::Tok::String, "a quoted model name").text;
            saw_name = true;
            p.expect_end();
        } else if (p.peek().kind == detail::Tok::Ident &&
                   (p.peek().text == "exo" || p.peek().text == "var")) {
            const bool exo = p.next().text == "exo";
            detail::Token name = p.expect(detail::Tok::Ident, "a variable name");
            if (!p.accept_ident("in")) p.fail("expected 'in'");
            p.expect(detail::Tok::LBrace, "'{'");
            std::vector<Value> dom;
            if (p.peek().kind != detail::Tok::RBrace) {
                dom.push_back(p.expect_value());
                while (p.accept(detail::Tok::Comma)) dom.push_back(p.expect_value());
            }
            p.expect(detail::Tok::RBrace, "'}'");
            p.expect_end();
            if (model.signature.domains.count(name.text))
                throw parse_error("variable '" + name.text + "' declared twice",
                                  name.line, name.column);
            (exo ? model.signature.exogenous : model.signature.endogenous).push_back(name.text);
            model.signature.domains.emplace(name.text, std::move(dom));
        } else if (p.accept_ident("eq")) {
            StructuralEquation eq;
            eq.target = p.expect(detail::Tok::Ident, "a variable name").text;
            p.expect(detail::Tok::LParen, "'('");
            if (p.peek().kind != detail::Tok::RParen) {
                eq.parents.push_back(p.expect(detail::Tok::Ident, "a parent name").text);
                while (p.accept(detail::Tok::Comma))
                    eq.parents.push_back(p.expect(detail::Tok::Ident, "a parent name").text);
            }
            p.expect(detail::Tok::RParen, "')'");
            p.expect(detail::Tok::Assign, "'='");
            if (p.peek().kind == detail::Tok::Ident && p.peek().text == "table") {
                p.next();
                p.expect(detail::Tok::LBrace, "'{'");
                TableBody body;
                while (p.peek().kind != detail::Tok::RBrace) {
                    TableRow row;
                    p.expect(detail::Tok::LParen, "'('");
                    if (p.peek().kind != detail::Tok::RParen) {
                        row.inputs.push_back(p.expect_value());
                        while (p.accept(detail::Tok::Comma)) row.inputs.push_back(p.expect_value());
                    }
                    p.expect(detail::Tok::RParen, "')'");
                    p.expect(detail::Tok::Arrow, "'->'");
                    row.output = p.expect_value();
                    body.rows.push_back(std::move(row));
                    if (!p.accept(detail::Tok::Semi)) break;
                }
                p.expect(detail::Tok::RBrace, "'}'");
                p.expect_end();
                eq.body = std::move(body);
            } else {
                eq.body = ExprBody{detail::parse_expr_or(p)};
                p.expect_end();
            }
            model.equations.push_back(std::move(eq));
        } else {
            p.fail("expected 'model', 'exo', 'var', or 'eq'");
        }
    }
    return model;
}

/// Parses a ranking file: one `world TAB rank` row per line, where the
/// world is a comma-separated complete endogenous assignment and the rank
/// is a natural number or `inf`. `#` comments and blank lines are skipped.
inline RankingFunction parse_ranking(std::string_view text) {
    RankingFunction rf;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        const std::size_t tab = line.rfind('\t');
        if (tab == std::string_view::npos)
            throw parse_error("expected 'world<TAB>rank'", line_no, 1);
        World w = parse_world(line.substr(0, tab));

        std::string_view rank_text = line.substr(tab + 1);
        while (!rank_text.empty() && std::isspace(static_cast<unsigned char>(rank_text.front())))
            rank_text.remove_prefix(1);
        while (!rank_text.empty() && std::isspace(static_cast<unsigned char>(rank_text.back())))
            rank_text.remove_suffix(1);
        Rank r;
        if (rank_text == "inf") {
            r = Rank::infinity();
        } else {
            auto n = detail::parse_int(std::string(rank_text));
            if (!n || *n < 0)
                throw parse_error("rank must be a natural number or 'inf'", line_no,
                                  static_cast<int>(tab) + 2);
            r = Rank::finite(static_cast<std::uint64_t>(*n));
        }
        if (!rf.ranks.emplace(std::move(w), r).second)
            throw parse_error("world ranked twice", line_no, 1);
    }
    return rf;
}

/// Parses a rank written as a natural number or `inf`.
inline Rank parse_rank(std::string_view text) {
    if (text == "inf") return Rank::infinity();
    auto n = detail::parse_int(std::string(text));
    if (!n || *n < 0) throw parse_error("rank must be a natural number or 'inf'", 1, 1);
    return Rank::finite(static_cast<std::uint64_t>(*n));
}

}  // namespace causelab
