#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "causelab/errors.hpp"
#include "causelab/model.hpp"

namespace causelab {

enum class FindingKind {
    Cycle,
    PartialTable,
    DuplicateTableRow,
    OutOfDomainValue,
    MissingEquation,
    DuplicateEquation,
    UnknownVariable,
    BadParent,
    DuplicateDomainValue,
    EmptyDomain,
    MissingDomain,
    VariableOverlap,
    TypeError,
    TooLarge,
    // warning-only kinds
    VacuousParent,
    UnknownAtom,
};

inline const char* to_string(FindingKind k) {
    switch (k) {
        case FindingKind::Cycle: return "cycle";
        case FindingKind::PartialTable: return "partial-table";
        case FindingKind::DuplicateTableRow: return "duplicate-table-row";
        case FindingKind::OutOfDomainValue: return "out-of-domain-value";
        case FindingKind::MissingEquation: return "missing-equation";
        case FindingKind::DuplicateEquation: return "duplicate-equation";
        case FindingKind::UnknownVariable: return "unknown-variable";
        case FindingKind::BadParent: return "bad-parent";
        case FindingKind::DuplicateDomainValue: return "duplicate-domain-value";
        case FindingKind::EmptyDomain: return "empty-domain";
        case FindingKind::MissingDomain: return "missing-domain";
        case FindingKind::VariableOverlap: return "variable-overlap";
        case FindingKind::TypeError: return "type-error";
        case FindingKind::TooLarge: return "too-large";
        case FindingKind::VacuousParent: return "vacuous-parent";
        case FindingKind::UnknownAtom: return "unknown-atom";
    }
    return "?";
}

struct Finding {
    FindingKind kind;
    std::string variable;
    std::string message;
};

/// Result of `validate_model`. `findings` are invariant violations; a model
/// is usable iff it has none. `warnings` hold lint results (a declared
/// parent that never affects its equation's output, unrecognized atoms in
/// an expression) and do not block use.
struct ValidationReport {
    std::vector<Finding> findings;
    std::vector<Finding> warnings;

    bool ok() const { return findings.empty(); }

    std::string summary() const {
        std::string s;
        for (const auto& f : findings) {
            if (!s.empty()) s += "; ";
            s += std::string(to_string(f.kind)) + " [" + f.variable + "]: " + f.message;
        }
        return s;
    }
};

namespace detail {

inline std::optional<long long> parse_int(const std::string& tok) {
    if (tok.empty()) return std::nullopt;
    long long out = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return out;
}

// Runtime result of evaluating an expression node: a truth value or a token.
using EvalVal = std::variant<bool, Value>;

struct expr_eval_error {
    std::string message;
};

inline bool coerce_bool(const EvalVal& v) {
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    const Value& tok = std::get<Value>(v);
    if (tok == "1") return true;
    if (tok == "0") return false;
    throw expr_eval_error{"expected a boolean (0/1), got '" + tok + "'"};
}

inline const Value& coerce_value(const EvalVal& v) {
    if (std::holds_alternative<bool>(v))
        throw expr_eval_error{"boolean used where a value is required"};
    return std::get<Value>(v);
}

inline long long coerce_int(const EvalVal& v, const char* op) {
    const Value& tok = coerce_value(v);
    auto n = parse_int(tok);
    if (!n) throw expr_eval_error{std::string("operator '") + op +
                                  "' needs integer operands, got '" + tok + "'"};
    return *n;
}

// env maps declared parent names to their current tokens; any other
// identifier evaluates to itself as an atom literal.
inline EvalVal eval_expr(const Expr& e, const std::map<std::string, Value>& env) {
    switch (e.op) {
        case Expr::Op::Literal: return e.literal;
        case Expr::Op::Ref: {
            auto it = env.find(e.ref);
            if (it != env.end()) return it->second;
            return Value(e.ref);
        }
        case Expr::Op::Not: return !coerce_bool(eval_expr(*e.args[0], env));
        case Expr::Op::And:
            return coerce_bool(eval_expr(*e.args[0], env)) &&
                   coerce_bool(eval_expr(*e.args[1], env));
        case Expr::Op::Or:
            return coerce_bool(eval_expr(*e.args[0], env)) ||
                   coerce_bool(eval_expr(*e.args[1], env));
        case Expr::Op::Eq:
            return coerce_value(eval_expr(*e.args[0], env)) ==
                   coerce_value(eval_expr(*e.args[1], env));
        case Expr::Op::Ne:
            return coerce_value(eval_expr(*e.args[0], env)) !=
                   coerce_value(eval_expr(*e.args[1], env));
        case Expr::Op::Add:
            return Value(std::to_string(coerce_int(eval_expr(*e.args[0], env), "+") +
                                        coerce_int(eval_expr(*e.args[1], env), "+")));
        case Expr::Op::Sub:
            return Value(std::to_string(coerce_int(eval_expr(*e.args[0], env), "-") -
                                        coerce_int(eval_expr(*e.args[1], env), "-")));
        case Expr::Op::Min:
            return Value(std::to_string(std::min(coerce_int(eval_expr(*e.args[0], env), "min"),
                                                 coerce_int(eval_expr(*e.args[1], env), "min"))));
        case Expr::Op::Max:
            return Value(std::to_string(std::max(coerce_int(eval_expr(*e.args[0], env), "max"),
                                                 coerce_int(eval_expr(*e.args[1], env), "max"))));
        case Expr::Op::Ite:
            return coerce_bool(eval_expr(*e.args[0], env))
                       ? eval_expr(*e.args[1], env)
                       : eval_expr(*e.args[2], env);
    }
    throw expr_eval_error{"malformed expression node"};
}

inline void collect_refs(const Expr& e, std::set<std::string>& out) {
    if (e.op == Expr::Op::Ref) out.insert(e.ref);
    for (const auto& a : e.args) collect_refs(*a, out);
}

}  // namespace detail

/// A validated model lowered to an indexed form: every variable gets a
/// global index (exogenous first, then endogenous, declaration order),
/// every value its position in the owning domain, and every equation a
/// flat lookup table in mixed-radix parent order. Expression bodies are
/// tabulated here, so solving is table lookups only.
class CompiledModel {
public:
    static constexpr std::size_t kMaxTableRows = std::size_t(1) << 20;
    static constexpr std::size_t kMaxDomainSize = 65535;

    int num_exo = 0;
    int num_endo = 0;
    std::vector<std::string> names;              // by global index
    std::vector<std::vector<Value>> domains;     // by global index
    std::map<std::string, int> index;            // name -> global index
    std::vector<std::map<Value, int>> value_index;

    struct Equation {
        std::vector<int> parents;          // global indices
        std::vector<std::size_t> strides;  // mixed radix, first parent most significant
        std::vector<std::uint16_t> table;  // value index in the target's domain
    };
    std::vector<Equation> equations;  // by endogenous ordinal
    std::vector<int> topo;            // endogenous global indices in solve order

    bool is_exo(int g) const { return g < num_exo; }
    int ordinal(int g) const { return g - num_exo; }

    int var(const std::string& name) const {
        auto it = index.find(name);
        return it == index.end() ? -1 : it->second;
    }
    int require_var(const std::string& name) const {
        int g = var(name);
        if (g < 0) throw input_error("unknown variable '" + name + "'");
        return g;
    }
    int require_endogenous(const std::string& name) const {
        int g = require_var(name);
        if (is_exo(g))
            throw input_error("variable '" + name + "' is exogenous; an endogenous variable is required");
        return g;
    }
    int require_value(int g, const Value& v) const {
        auto it = value_index[g].find(v);
        if (it == value_index[g].end())
            throw input_error("value '" + v + "' is not in the domain of '" + names[g] + "'");
        return it->second;
    }

    std::vector<std::uint16_t> encode_context(const Context& ctx) const {
        std::vector<std::uint16_t> exo(num_exo);
        std::size_t matched = 0;
        for (const auto& [name, val] : ctx.assignment) {
            int g = var(name);
            if (g < 0 || !is_exo(g))
                throw input_error("context assigns '" + name + "', which is not an exogenous variable");
            exo[g] = static_cast<std::uint16_t>(require_value(g, val));
            ++matched;
        }
        if (static_cast<int>(matched) != num_exo)
            for (int g = 0; g < num_exo; ++g)
                if (!ctx.assignment.count(names[g]))
                    throw input_error("context does not assign exogenous variable '" + names[g] + "'");
        return exo;
    }

    /// Evaluates all equations along `order` (defaults to the stored
    /// topological order). `overrides` is indexed by endogenous ordinal;
    /// a non-negative entry forces that value index.
    void solve_into(const std::vector<std::uint16_t>& exo,
                    const std::vector<int>& overrides,
                    std::vector<std::uint16_t>& frame,
                    const std::vector<int>* order = nullptr) const {
        frame.resize(names.size());
        std::copy(exo.begin(), exo.end(), frame.begin());
        for (int g : order ? *order : topo) {
            const int o = ordinal(g);
            if (overrides[o] >= 0) {
                frame[g] = static_cast<std::uint16_t>(overrides[o]);
                continue;
            }
            const Equation& eq = equations[o];
            std::size_t idx = 0;
            for (std::size_t i = 0; i < eq.parents.size(); ++i)
                idx += eq.strides[i] * frame[eq.parents[i]];
            frame[g] = eq.table[idx];
        }
    }

    World decode_world(const std::vector<std::uint16_t>& frame) const {
        World w;
        for (int g = num_exo; g < num_exo + num_endo; ++g)
            w.assignment.emplace(names[g], domains[g][frame[g]]);
        return w;
    }

    /// Alternative valid topological order; with `reverse_tiebreak` the
    /// ready set is drained highest-index-first instead of lowest-first.
    /// Used by tests to confirm order independence of solutions.
    std::vector<int> topological_order(bool reverse_tiebreak) const {
        std::vector<int> indeg(num_endo, 0);
        std::vector<std::vector<int>> out(num_endo);
        for (int o = 0; o < num_endo; ++o)
            for (int p : equations[o].parents)
                if (!is_exo(p)) {
                    ++indeg[o];
                    out[ordinal(p)].push_back(o);
                }
        std::set<int> ready;
        for (int o = 0; o < num_endo; ++o)
            if (indeg[o] == 0) ready.insert(o);
        std::vector<int> order;
        while (!ready.empty()) {
            int o = reverse_tiebreak ? *ready.rbegin() : *ready.begin();
            ready.erase(o);
            order.push_back(num_exo + o);
            for (int succ : out[o])
                if (--indeg[succ] == 0) ready.insert(succ);
        }
        return order;
    }

    static std::optional<CompiledModel> try_build(const CausalModel& m, ValidationReport& rep);

    static CompiledModel build(const CausalModel& m) {
        ValidationReport rep;
        auto cm = try_build(m, rep);
        if (!cm)
            throw model_error("invalid model '" + m.name + "': " + rep.summary());
        return std::move(*cm);
    }
};

namespace detail {

struct EquationCompilation {
    std::vector<std::uint16_t> table;
    bool ok = false;
};

/// Tabulates one equation (table bodies are checked for exact coverage,
/// expression bodies are evaluated over every parent tuple). Appends
/// findings/warnings; returns a complete table only when clean.
inline EquationCompilation compile_equation(const CausalModel& m,
                                            const StructuralEquation& eq,
                                            ValidationReport& rep) {
    EquationCompilation out;
    const auto* target_dom = m.signature.domain_of(eq.target);
    if (!target_dom || target_dom->empty()) return out;

    std::map<Value, int> target_idx;
    for (std::size_t i = 0; i < target_dom->size(); ++i)
        target_idx.emplace((*target_dom)[i], static_cast<int>(i));

    std::vector<const std::vector<Value>*> pdoms;
    std::size_t rows = 1;
    for (const auto& p : eq.parents) {
        const auto* d = m.signature.domain_of(p);
        if (!d || d->empty()) return out;
        pdoms.push_back(d);
        if (rows > CompiledModel::kMaxTableRows / d->size()) {
            rep.findings.push_back({FindingKind::TooLarge, eq.target,
                                    "equation table exceeds " +
                                        std::to_string(CompiledModel::kMaxTableRows) + " rows"});
            return out;
        }
        rows *= d->size();
    }

    std::vector<std::size_t> strides(eq.parents.size());
    {
        std::size_t s = 1;
        for (std::size_t i = eq.parents.size(); i-- > 0;) {
            strides[i] = s;
            s *= pdoms[i]->size();
        }
    }

    std::vector<std::int32_t> table(rows, -1);
    bool clean = true;

    if (const auto* tb = std::get_if<TableBody>(&eq.body)) {
        for (const auto& row : tb->rows) {
            if (row.inputs.size() != eq.parents.size()) {
                rep.findings.push_back({FindingKind::TypeError, eq.target,
                                        "table row has " + std::to_string(row.inputs.size()) +
                                            " inputs, expected " + std::to_string(eq.parents.size())});
                clean = false;
                continue;
            }
            std::size_t idx = 0;
            bool row_ok = true;
            for (std::size_t i = 0; i < row.inputs.size(); ++i) {
                auto it = std::find(pdoms[i]->begin(), pdoms[i]->end(), row.inputs[i]);
                if (it == pdoms[i]->end()) {
                    rep.findings.push_back({FindingKind::OutOfDomainValue, eq.target,
                                            "table input '" + row.inputs[i] +
                                                "' is not in the domain of parent '" +
                                                eq.parents[i] + "'"});
                    row_ok = false;
                    break;
                }
                idx += strides[i] * static_cast<std::size_t>(it - pdoms[i]->begin());
            }
            if (!row_ok) {
                clean = false;
                continue;
            }
            auto oit = target_idx.find(row.output);
            if (oit == target_idx.end()) {
                rep.findings.push_back({FindingKind::OutOfDomainValue, eq.target,
                                        "table output '" + row.output +
                                            "' is not in the domain of '" + eq.target + "'"});
                clean = false;
                continue;
            }
            if (table[idx] >= 0) {
                rep.findings.push_back({FindingKind::DuplicateTableRow, eq.target,
                                        "parent tuple listed more than once"});
                clean = false;
                continue;
            }
            table[idx] = oit->second;
        }
        std::size_t missing = 0;
        std::string first_missing;
        for (std::size_t idx = 0; idx < rows; ++idx) {
            if (table[idx] >= 0) continue;
            if (missing == 0) {
                first_missing = "(";
                for (std::size_t i = 0; i < eq.parents.size(); ++i) {
                    if (i) first_missing += ", ";
                    first_missing += (*pdoms[i])[(idx / strides[i]) % pdoms[i]->size()];
                }
                first_missing += ")";
            }
            ++missing;
        }
        if (missing > 0) {
            rep.findings.push_back({FindingKind::PartialTable, eq.target,
                                    "table misses " + std::to_string(missing) +
                                        " parent tuple(s), first " + first_missing});
            clean = false;
        }
    } else {
        const auto& expr = *std::get_if<ExprBody>(&eq.body)->expr;
        std::set<std::string> refs;
        detail::collect_refs(expr, refs);
        const bool bool_target = target_idx.size() == 2 && target_idx.count("0") && target_idx.count("1");
        for (const auto& r : refs) {
            if (std::find(eq.parents.begin(), eq.parents.end(), r) != eq.parents.end()) continue;
            if (detail::parse_int(r)) continue;
            bool known = target_idx.count(r) > 0;
            for (const auto* d : pdoms)
                known = known || std::find(d->begin(), d->end(), r) != d->end();
            if (!known)
                rep.warnings.push_back({FindingKind::UnknownAtom, eq.target,
                                        "atom '" + r + "' is not a parent of '" + eq.target +
                                            "' and appears in no adjacent domain"});
        }
        std::map<std::string, Value> env;
        for (std::size_t idx = 0; idx < rows && clean; ++idx) {
            for (std::size_t i = 0; i < eq.parents.size(); ++i)
                env[eq.parents[i]] = (*pdoms[i])[(idx / strides[i]) % pdoms[i]->size()];
            try {
                detail::EvalVal v = detail::eval_expr(expr, env);
                Value token;
                if (std::holds_alternative<bool>(v)) {
                    if (!bool_target) {
                        rep.findings.push_back({FindingKind::TypeError, eq.target,
                                                "expression yields a boolean but the domain of '" +
                                                    eq.target + "' is not {0,1}"});
                        clean = false;
                        break;
                    }
                    token = std::get<bool>(v) ? "1" : "0";
                } else {
                    token = std::get<Value>(v);
                }
                auto oit = target_idx.find(token);
                if (oit == target_idx.end()) {
                    rep.findings.push_back({FindingKind::OutOfDomainValue, eq.target,
                                            "expression yields '" + token +
                                                "', not in the domain of '" + eq.target + "'"});
                    clean = false;
                    break;
                }
                table[idx] = oit->second;
            } catch (const detail::expr_eval_error& e) {
                rep.findings.push_back({FindingKind::TypeError, eq.target, e.message});
                clean = false;
            }
        }
    }

    if (!clean) return out;
    out.table.reserve(rows);
    for (std::size_t idx = 0; idx < rows; ++idx)
        out.table.push_back(static_cast<std::uint16_t>(table[idx]));
    out.ok = true;
    return out;
}

}  // namespace detail

inline std::optional<CompiledModel> CompiledModel::try_build(const CausalModel& m,
                                                             ValidationReport& rep) {
    const Signature& sig = m.signature;

    // signature-level checks
    {
        std::map<std::string, int> seen;
        for (const auto& n : sig.exogenous) ++seen[n];
        for (const auto& n : sig.endogenous) ++seen[n];
        for (const auto& [n, c] : seen)
            if (c > 1)
                rep.findings.push_back({FindingKind::VariableOverlap, n,
                                        "variable declared " + std::to_string(c) + " times"});
    }
    auto check_domain = [&](const std::string& n) {
        const auto* d = sig.domain_of(n);
        if (!d) {
            rep.findings.push_back({FindingKind::MissingDomain, n, "no domain declared"});
            return;
        }
        if (d->empty())
            rep.findings.push_back({FindingKind::EmptyDomain, n, "domain is empty"});
        if (d->size() > kMaxDomainSize)
            rep.findings.push_back({FindingKind::TooLarge, n, "domain has too many values"});
        std::set<Value> uniq(d->begin(), d->end());
        if (uniq.size() != d->size())
            rep.findings.push_back({FindingKind::DuplicateDomainValue, n,
                                    "domain lists a value more than once"});
    };
    for (const auto& n : sig.exogenous) check_domain(n);
    for (const auto& n : sig.endogenous) check_domain(n);

    // equation bookkeeping
    std::map<std::string, const StructuralEquation*> eq_of;
    for (const auto& eq : m.equations) {
        if (!sig.is_endogenous(eq.target)) {
            rep.findings.push_back({FindingKind::UnknownVariable, eq.target,
                                    "equation target is not an endogenous variable"});
            continue;
        }
        if (!eq_of.emplace(eq.target, &eq).second)
            rep.findings.push_back({FindingKind::DuplicateEquation, eq.target,
                                    "more than one equation for this variable"});
    }
    for (const auto& n : sig.endogenous)
        if (!eq_of.count(n))
            rep.findings.push_back({FindingKind::MissingEquation, n, "no equation declared"});

    // parent sanity per equation
    for (const auto& [target, eq] : eq_of) {
        std::set<std::string> dup;
        for (const auto& p : eq->parents) {
            if (p == target)
                rep.findings.push_back({FindingKind::BadParent, target,
                                        "equation lists its own target as a parent"});
            else if (!sig.is_exogenous(p) && !sig.is_endogenous(p))
                rep.findings.push_back({FindingKind::BadParent, target,
                                        "parent '" + p + "' is not a declared variable"});
            if (!dup.insert(p).second)
                rep.findings.push_back({FindingKind::BadParent, target,
                                        "parent '" + p + "' listed more than once"});
        }
    }

    // acyclicity over the endogenous dependency graph
    std::vector<int> topo_ordinals;
    {
        const int n = static_cast<int>(sig.endogenous.size());
        std::map<std::string, int> endo_idx;
        for (int i = 0; i < n; ++i) endo_idx.emplace(sig.endogenous[i], i);
        std::vector<std::vector<int>> out(n);
        std::vector<int> indeg(n, 0);
        for (const auto& [target, eq] : eq_of) {
            const int t = endo_idx[target];
            for (const auto& p : eq->parents) {
                auto it = endo_idx.find(p);
                if (it != endo_idx.end()) {
                    out[it->second].push_back(t);
                    ++indeg[t];
                }
            }
        }
        std::set<int> ready;
        for (int i = 0; i < n; ++i)
            if (indeg[i] == 0) ready.insert(i);
        while (!ready.empty()) {
            int i = *ready.begin();
            ready.erase(ready.begin());
            topo_ordinals.push_back(i);
            for (int s : out[i])
                if (--indeg[s] == 0) ready.insert(s);
        }
        if (static_cast<int>(topo_ordinals.size()) != n) {
            // walk parents among the unresolved variables until one repeats
            std::set<int> stuck;
            for (int i = 0; i < n; ++i) stuck.insert(i);
            for (int i : topo_ordinals) stuck.erase(i);
            std::vector<int> path;
            std::set<int> on_path;
            int cur = *stuck.begin();
            while (on_path.insert(cur).second) {
                path.push_back(cur);
                const auto* eq = eq_of.count(sig.endogenous[cur])
                                     ? eq_of[sig.endogenous[cur]]
                                     : nullptr;
                int next = -1;
                if (eq)
                    for (const auto& p : eq->parents) {
                        auto it = endo_idx.find(p);
                        if (it != endo_idx.end() && stuck.count(it->second)) {
                            next = it->second;
                            break;
                        }
                    }
                if (next < 0) break;
                cur = next;
            }
            std::string msg;
            bool in_cycle = false;
            for (int i : path) {
                if (i == cur) in_cycle = true;
                if (!in_cycle) continue;
                if (!msg.empty()) msg += " -> ";
                msg += sig.endogenous[i];
            }
            msg += " -> " + sig.endogenous[cur];
            rep.findings.push_back({FindingKind::Cycle,
                                    sig.endogenous[cur],
                                    "dependency cycle: " + msg});
        }
    }

    // tabulate each equation (also surfaces type and coverage findings)
    std::map<std::string, detail::EquationCompilation> compiled;
    for (const auto& [target, eq] : eq_of)
        compiled[target] = detail::compile_equation(m, *eq, rep);

    if (!rep.findings.empty()) return std::nullopt;

    // assemble
    CompiledModel cm;
    cm.num_exo = static_cast<int>(sig.exogenous.size());
    cm.num_endo = static_cast<int>(sig.endogenous.size());
    for (const auto& n : sig.exogenous) cm.names.push_back(n);
    for (const auto& n : sig.endogenous) cm.names.push_back(n);
    for (std::size_t g = 0; g < cm.names.size(); ++g) {
        cm.index.emplace(cm.names[g], static_cast<int>(g));
        cm.domains.push_back(*sig.domain_of(cm.names[g]));
        std::map<Value, int> vi;
        for (std::size_t i = 0; i < cm.domains.back().size(); ++i)
            vi.emplace(cm.domains.back()[i], static_cast<int>(i));
        cm.value_index.push_back(std::move(vi));
    }
    cm.equations.resize(cm.num_endo);
    for (int o = 0; o < cm.num_endo; ++o) {
        const auto& eq = *eq_of[sig.endogenous[o]];
        CompiledModel::Equation ce;
        std::size_t s = 1;
        ce.strides.resize(eq.parents.size());
        for (std::size_t i = eq.parents.size(); i-- > 0;) {
            ce.strides[i] = s;
            s *= sig.domain_of(eq.parents[i])->size();
        }
        for (const auto& p : eq.parents) ce.parents.push_back(cm.index[p]);
        ce.table = std::move(compiled[sig.endogenous[o]].table);
        cm.equations[o] = std::move(ce);
    }
    for (int o : topo_ordinals) cm.topo.push_back(cm.num_exo + o);

    // lint: declared parents that never change the output
    for (int o = 0; o < cm.num_endo; ++o) {
        const auto& ce = cm.equations[o];
        for (std::size_t i = 0; i < ce.parents.size(); ++i) {
            const std::size_t dsize = cm.domains[ce.parents[i]].size();
            bool varies = false;
            for (std::size_t idx = 0; idx < ce.table.size() && !varies; ++idx) {
                if ((idx / ce.strides[i]) % dsize != 0) continue;
                const std::uint16_t base = ce.table[idx];
                for (std::size_t v = 1; v < dsize; ++v)
                    if (ce.table[idx + v * ce.strides[i]] != base) {
                        varies = true;
                        break;
                    }
            }
            if (!varies)
                rep.warnings.push_back({FindingKind::VacuousParent, sig.endogenous[o],
                                        "declared parent '" + cm.names[ce.parents[i]] +
                                            "' never affects '" + sig.endogenous[o] + "'"});
        }
    }

    return cm;
}

/// Checks every model invariant. Zero findings means the model is valid;
/// warnings are advisory lint results.
inline ValidationReport validate_model(const CausalModel& m) {
    ValidationReport rep;
    CompiledModel::try_build(m, rep);
    return rep;
}

/// Declared parents of an endogenous variable, order preserved.
inline std::vector<std::string> parents(const CausalModel& m, const std::string& var) {
    if (!m.signature.is_endogenous(var))
        throw input_error("no equation for '" + var + "': not an endogenous variable");
    const auto* eq = m.equation_of(var);
    if (!eq) throw input_error("no equation for '" + var + "'");
    return eq->parents;
}

/// The submodel in which every variable assigned by `iv` is forced to that
/// value: its equation becomes a constant with no parents. All other
/// equations are untouched, so acyclicity is preserved.
inline CausalModel intervene(const CausalModel& m, const Intervention& iv) {
    for (const auto& [var, val] : iv.assignment) {
        if (!m.signature.is_endogenous(var))
            throw input_error("cannot intervene on '" + var + "': not an endogenous variable");
        const auto* dom = m.signature.domain_of(var);
        if (!dom || std::find(dom->begin(), dom->end(), val) == dom->end())
            throw input_error("value '" + val + "' is not in the domain of '" + var + "'");
    }
    CausalModel out = m;
    std::set<std::string> replaced;
    for (auto& eq : out.equations) {
        auto it = iv.assignment.find(eq.target);
        if (it == iv.assignment.end() || !replaced.insert(eq.target).second) continue;
        eq.parents.clear();
        eq.body = TableBody{{TableRow{{}, it->second}}};
    }
    for (const auto& [var, val] : iv.assignment)
        if (!replaced.count(var))
            out.equations.push_back(StructuralEquation{var, {}, TableBody{{TableRow{{}, val}}}});
    return out;
}

/// The unique solution of the equations in the given context.
inline World solve(const CausalModel& m, const Context& ctx) {
    CompiledModel cm = CompiledModel::build(m);
    auto exo = cm.encode_context(ctx);
    std::vector<int> overrides(cm.num_endo, -1);
    std::vector<std::uint16_t> frame;
    cm.solve_into(exo, overrides, frame);
    return cm.decode_world(frame);
}

/// Dependency graph of a model: nodes are all variables, one edge per
/// declared parent relation.
struct Graph {
    std::vector<std::string> nodes;                          // exogenous then endogenous
    std::vector<std::pair<std::string, std::string>> edges;  // parent -> target

    bool operator==(const Graph&) const = default;
};

inline Graph causal_network(const CausalModel& m) {
    ValidationReport rep = validate_model(m);
    if (!rep.ok()) throw model_error("invalid model '" + m.name + "': " + rep.summary());
    Graph g;
    for (const auto& n : m.signature.exogenous) g.nodes.push_back(n);
    for (const auto& n : m.signature.endogenous) g.nodes.push_back(n);
    for (const auto& n : m.signature.endogenous)
        for (const auto& p : m.equation_of(n)->parents)
            g.edges.emplace_back(p, n);
    return g;
}

}  // namespace causelab
