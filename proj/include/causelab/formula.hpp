#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causelab/compile.hpp"
#include "causelab/errors.hpp"
#include "causelab/model.hpp"

namespace causelab {

struct SourcePos {
    int line = 0;
    int column = 0;
};

/// The assertion that an endogenous variable takes a value: X = x.
struct PrimitiveEvent {
    std::string variable;
    Value value;
    SourcePos pos{};

    bool operator==(const PrimitiveEvent& o) const {
        return variable == o.variable && value == o.value;
    }
};

struct EventFormula;
using EventFormulaPtr = std::shared_ptr<const EventFormula>;

/// Boolean combination of primitive events. Connective nodes are binary;
/// chains associate to the left.
struct EventFormula {
    enum class Kind { Event, Not, And, Or };

    Kind kind = Kind::Event;
    PrimitiveEvent event;     // Kind::Event
    EventFormulaPtr lhs, rhs; // Not uses lhs only

    static EventFormulaPtr make_event(PrimitiveEvent ev) {
        auto f = std::make_shared<EventFormula>();
        f->kind = Kind::Event;
        f->event = std::move(ev);
        return f;
    }
    static EventFormulaPtr make_not(EventFormulaPtr a) {
        auto f = std::make_shared<EventFormula>();
        f->kind = Kind::Not;
        f->lhs = std::move(a);
        return f;
    }
    static EventFormulaPtr make_and(EventFormulaPtr a, EventFormulaPtr b) {
        auto f = std::make_shared<EventFormula>();
        f->kind = Kind::And;
        f->lhs = std::move(a);
        f->rhs = std::move(b);
        return f;
    }
    static EventFormulaPtr make_or(EventFormulaPtr a, EventFormulaPtr b) {
        auto f = std::make_shared<EventFormula>();
        f->kind = Kind::Or;
        f->lhs = std::move(a);
        f->rhs = std::move(b);
        return f;
    }
};

inline bool equal(const EventFormula& a, const EventFormula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case EventFormula::Kind::Event: return a.event == b.event;
        case EventFormula::Kind::Not: return equal(*a.lhs, *b.lhs);
        default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

/// An intervention prefix applied to an event formula: [Y1<-y1,...](phi).
/// The empty prefix [](phi) asserts phi about the unmodified model.
struct BasicCausalFormula {
    Intervention intervention;
    EventFormulaPtr body;
    SourcePos pos{};

    bool operator==(const BasicCausalFormula& o) const {
        return intervention == o.intervention && body && o.body && equal(*body, *o.body);
    }
};

struct CausalFormula;
using CausalFormulaPtr = std::shared_ptr<const CausalFormula>;

/// Boolean combination of basic causal formulas.
struct CausalFormula {
    enum class Kind { Basic, Not, And, Or };

    Kind kind = Kind::Basic;
    BasicCausalFormula basic;   // Kind::Basic
    CausalFormulaPtr lhs, rhs;  // Not uses lhs only

    static CausalFormulaPtr make_basic(BasicCausalFormula b) {
        auto f = std::make_shared<CausalFormula>();
        f->kind = Kind::Basic;
        f->basic = std::move(b);
        return f;
    }
    static CausalFormulaPtr make_not(CausalFormulaPtr a) {
        auto f = std::make_shared<CausalFormula>();
        f->kind = Kind::Not;
        f->lhs = std::move(a);
        return f;
    }
    static CausalFormulaPtr make_and(CausalFormulaPtr a, CausalFormulaPtr b) {
        auto f = std::make_shared<CausalFormula>();
        f->kind = Kind::And;
        f->lhs = std::move(a);
        f->rhs = std::move(b);
        return f;
    }
    static CausalFormulaPtr make_or(CausalFormulaPtr a, CausalFormulaPtr b) {
        auto f = std::make_shared<CausalFormula>();
        f->kind = Kind::Or;
        f->lhs = std::move(a);
        f->rhs = std::move(b);
        return f;
    }
};

inline bool equal(const CausalFormula& a, const CausalFormula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case CausalFormula::Kind::Basic: return a.basic == b.basic;
        case CausalFormula::Kind::Not: return equal(*a.lhs, *b.lhs);
        default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

// ---------------------------------------------------------------------------
// printing (canonical form; reparsing yields a structurally equal AST)

namespace detail {

inline int formula_precedence(EventFormula::Kind k) {
    switch (k) {
        case EventFormula::Kind::Or: return 1;
        case EventFormula::Kind::And: return 2;
        case EventFormula::Kind::Not: return 3;
        default: return 4;
    }
}

inline void print_event_formula(std::string& out, const EventFormula& f, int parent_prec) {
    const int prec = formula_precedence(f.kind);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (f.kind) {
        case EventFormula::Kind::Event:
            out += f.event.variable + "=" + f.event.value;
            break;
        case EventFormula::Kind::Not:
            out += '!';
            print_event_formula(out, *f.lhs, prec + 1);
            break;
        case EventFormula::Kind::And:
        case EventFormula::Kind::Or:
            print_event_formula(out, *f.lhs, prec);
            out += f.kind == EventFormula::Kind::And ? " & " : " | ";
            print_event_formula(out, *f.rhs, prec + 1);
            break;
    }
    if (parens) out += ')';
}

inline int formula_precedence(CausalFormula::Kind k) {
    switch (k) {
        case CausalFormula::Kind::Or: return 1;
        case CausalFormula::Kind::And: return 2;
        case CausalFormula::Kind::Not: return 3;
        default: return 4;
    }
}

inline void print_causal_formula(std::string& out, const CausalFormula& f, int parent_prec) {
    const int prec = formula_precedence(f.kind);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (f.kind) {
        case CausalFormula::Kind::Basic: {
            out += '[';
            bool first = true;
            for (const auto& [var, val] : f.basic.intervention.assignment) {
                if (!first) out += ',';
                first = false;
                out += var + "<-" + val;
            }
            out += "](";
            print_event_formula(out, *f.basic.body, 0);
            out += ')';
            break;
        }
        case CausalFormula::Kind::Not:
            out += '!';
            print_causal_formula(out, *f.lhs, prec + 1);
            break;
        case CausalFormula::Kind::And:
        case CausalFormula::Kind::Or:
            print_causal_formula(out, *f.lhs, prec);
            out += f.kind == CausalFormula::Kind::And ? " & " : " | ";
            print_causal_formula(out, *f.rhs, prec + 1);
            break;
    }
    if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const EventFormula& f) {
    std::string out;
    detail::print_event_formula(out, f, 0);
    return out;
}

inline std::string to_string(const CausalFormula& f) {
    std::string out;
    detail::print_causal_formula(out, f, 0);
    return out;
}

// ---------------------------------------------------------------------------
// evaluation

/// Truth of an event formula in a world. Every mentioned variable must be
/// assigned; unmentioned ones are irrelevant.
inline bool eval_event(const World& world, const EventFormula& phi) {
    switch (phi.kind) {
        case EventFormula::Kind::Event: {
            auto v = world.value_of(phi.event.variable);
            if (!v)
                throw input_error("world does not assign variable '" + phi.event.variable + "'");
            return *v == phi.event.value;
        }
        case EventFormula::Kind::Not: return !eval_event(world, *phi.lhs);
        case EventFormula::Kind::And:
            return eval_event(world, *phi.lhs) && eval_event(world, *phi.rhs);
        case EventFormula::Kind::Or:
            return eval_event(world, *phi.lhs) || eval_event(world, *phi.rhs);
    }
    throw input_error("malformed event formula");
}

/// Event formula lowered onto a compiled model: leaves hold (global index,
/// value index). Building it doubles as the signature check — unknown or
/// exogenous variables and out-of-domain values are rejected by name.
struct CompiledFormula {
    enum class Kind { Event, Not, And, Or };

    Kind kind = Kind::Event;
    int var = -1;
    std::uint16_t val = 0;
    std::unique_ptr<CompiledFormula> lhs, rhs;

    bool eval(const std::vector<std::uint16_t>& frame) const {
        switch (kind) {
            case Kind::Event: return frame[var] == val;
            case Kind::Not: return !lhs->eval(frame);
            case Kind::And: return lhs->eval(frame) && rhs->eval(frame);
            case Kind::Or: return lhs->eval(frame) || rhs->eval(frame);
        }
        return false;
    }

    void collect_vars(std::set<int>& out) const {
        if (kind == Kind::Event) {
            out.insert(var);
            return;
        }
        if (lhs) lhs->collect_vars(out);
        if (rhs) rhs->collect_vars(out);
    }

    static CompiledFormula build(const CompiledModel& cm, const EventFormula& phi) {
        CompiledFormula out;
        switch (phi.kind) {
            case EventFormula::Kind::Event: {
                out.kind = Kind::Event;
                out.var = cm.require_endogenous(phi.event.variable);
                out.val = static_cast<std::uint16_t>(cm.require_value(out.var, phi.event.value));
                break;
            }
            case EventFormula::Kind::Not:
                out.kind = Kind::Not;
                out.lhs = std::make_unique<CompiledFormula>(build(cm, *phi.lhs));
                break;
            case EventFormula::Kind::And:
            case EventFormula::Kind::Or:
                out.kind = phi.kind == EventFormula::Kind::And ? Kind::And : Kind::Or;
                out.lhs = std::make_unique<CompiledFormula>(build(cm, *phi.lhs));
                out.rhs = std::make_unique<CompiledFormula>(build(cm, *phi.rhs));
                break;
        }
        return out;
    }
};

namespace detail {

inline bool satisfies_impl(const CompiledModel& cm,
                           const std::vector<std::uint16_t>& exo,
                           const CausalFormula& psi) {
    switch (psi.kind) {
        case CausalFormula::Kind::Basic: {
            std::vector<int> overrides(cm.num_endo, -1);
            for (const auto& [var, val] : psi.basic.intervention.assignment) {
                const int g = cm.require_endogenous(var);
                overrides[cm.ordinal(g)] = cm.require_value(g, val);
            }
            CompiledFormula phi = CompiledFormula::build(cm, *psi.basic.body);
            std::vector<std::uint16_t> frame;
            cm.solve_into(exo, overrides, frame);
            return phi.eval(frame);
        }
        case CausalFormula::Kind::Not: return !satisfies_impl(cm, exo, *psi.lhs);
        case CausalFormula::Kind::And:
            return satisfies_impl(cm, exo, *psi.lhs) && satisfies_impl(cm, exo, *psi.rhs);
        case CausalFormula::Kind::Or:
            return satisfies_impl(cm, exo, *psi.lhs) || satisfies_impl(cm, exo, *psi.rhs);
    }
    throw input_error("malformed causal formula");
}

}  // namespace detail

/// Truth of a causal formula in (model, context): every basic leaf
/// [iv](phi) holds iff phi holds in the unique solution of the submodel
/// obtained by forcing iv.
inline bool satisfies(const CausalModel& m, const Context& ctx, const CausalFormula& psi) {
    CompiledModel cm = CompiledModel::build(m);
    return detail::satisfies_impl(cm, cm.encode_context(ctx), psi);
}

inline bool satisfies(const CausalModel& m, const Context& ctx, const CausalFormulaPtr& psi) {
    if (!psi) throw input_error("null formula");
    return satisfies(m, ctx, *psi);
}

}  // namespace causelab
