#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace causelab {

/// A symbolic value: an identifier or a small integer rendered as text.
using Value = std::string;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree for structural-equation bodies.
///
/// `Ref` nodes carry an identifier that is resolved when the model is
/// compiled: a declared parent name refers to that variable, anything else
/// is an atom literal. Integer literals are always `Literal` nodes.
struct Expr {
    enum class Op {
        Literal,  // value token
        Ref,      // identifier: parent variable or atom literal
        Not,
        And,
        Or,
        Eq,
        Ne,
        Add,
        Sub,
        Min,
        Max,
        Ite,  // ite(cond, then, else)
    };

    Op op = Op::Literal;
    Value literal;
    std::string ref;
    std::vector<ExprPtr> args;

    static ExprPtr lit(Value v) {
        auto e = std::make_shared<Expr>();
        e->op = Op::Literal;
        e->literal = std::move(v);
        return e;
    }
    static ExprPtr var(std::string name) {
        auto e = std::make_shared<Expr>();
        e->op = Op::Ref;
        e->ref = std::move(name);
        return e;
    }
    static ExprPtr node(Op op, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->args = std::move(args);
        return e;
    }
};

inline bool expr_equal(const Expr& a, const Expr& b) {
    if (a.op != b.op || a.literal != b.literal || a.ref != b.ref ||
        a.args.size() != b.args.size())
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!expr_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

namespace detail {

// Precedence levels for printing: or < and < not < ==/!= < +/- < primary.
inline int expr_precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Or: return 1;
        case Expr::Op::And: return 2;
        case Expr::Op::Not: return 3;
        case Expr::Op::Eq:
        case Expr::Op::Ne: return 4;
        case Expr::Op::Add:
        case Expr::Op::Sub: return 5;
        default: return 6;
    }
}

inline void print_expr(std::string& out, const Expr& e, int parent_prec) {
    const int prec = expr_precedence(e.op);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (e.op) {
        case Expr::Op::Literal: out += e.literal; break;
        case Expr::Op::Ref: out += e.ref; break;
        case Expr::Op::Not:
            out += "not ";
            print_expr(out, *e.args[0], prec + 1);
            break;
        case Expr::Op::And:
        case Expr::Op::Or:
        case Expr::Op::Eq:
        case Expr::Op::Ne:
        case Expr::Op::Add:
        case Expr::Op::Sub: {
            const char* sym = e.op == Expr::Op::And ? " and "
                              : e.op == Expr::Op::Or ? " or "
                              : e.op == Expr::Op::Eq ? " == "
                              : e.op == Expr::Op::Ne ? " != "
                              : e.op == Expr::Op::Add ? " + "
                                                      : " - ";
            print_expr(out, *e.args[0], prec);
            out += sym;
            print_expr(out, *e.args[1], prec + 1);
            break;
        }
        case Expr::Op::Min:
        case Expr::Op::Max:
        case Expr::Op::Ite: {
            out += e.op == Expr::Op::Min ? "min" : e.op == Expr::Op::Max ? "max" : "ite";
            out += '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                print_expr(out, *e.args[i], 0);
            }
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_expr(out, e, 0);
    return out;
}

}  // namespace causelab
