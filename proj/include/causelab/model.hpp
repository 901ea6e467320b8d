#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "causelab/expr.hpp"

namespace causelab {

/// Variable layout of a model: exogenous variables (set from outside),
/// endogenous variables (governed by equations), and a finite ordered
/// domain for each. Declaration order fixes all deterministic enumeration.
struct Signature {
    std::vector<std::string> exogenous;
    std::vector<std::string> endogenous;
    std::map<std::string, std::vector<Value>> domains;

    bool is_exogenous(const std::string& name) const {
        return std::find(exogenous.begin(), exogenous.end(), name) != exogenous.end();
    }
    bool is_endogenous(const std::string& name) const {
        return std::find(endogenous.begin(), endogenous.end(), name) != endogenous.end();
    }
    const std::vector<Value>* domain_of(const std::string& name) const {
        auto it = domains.find(name);
        return it == domains.end() ? nullptr : &it->second;
    }

    bool operator==(const Signature&) const = default;
};

struct TableRow {
    std::vector<Value> inputs;  // one value per declared parent, in order
    Value output;

    bool operator==(const TableRow&) const = default;
};

/// Explicit mechanism: a total mapping from parent-value tuples to a value.
struct TableBody {
    std::vector<TableRow> rows;

    bool operator==(const TableBody&) const = default;
};

/// Mechanism given as an expression over the declared parents.
struct ExprBody {
    ExprPtr expr;

    bool operator==(const ExprBody& other) const {
        if (!expr || !other.expr) return expr == other.expr;
        return expr_equal(*expr, *other.expr);
    }
};

struct StructuralEquation {
    std::string target;
    std::vector<std::string> parents;
    std::variant<TableBody, ExprBody> body;

    bool operator==(const StructuralEquation&) const = default;
};

/// A finite structural causal model: a signature plus one equation per
/// endogenous variable. Instances are plain values; nothing here enforces
/// the invariants — `validate_model` reports violations as findings.
struct CausalModel {
    std::string name;
    Signature signature;
    std::vector<StructuralEquation> equations;

    const StructuralEquation* equation_of(const std::string& target) const {
        for (const auto& eq : equations)
            if (eq.target == target) return &eq;
        return nullptr;
    }

    bool operator==(const CausalModel&) const = default;
};

/// Total assignment of the exogenous variables.
struct Context {
    std::map<std::string, Value> assignment;

    bool operator==(const Context&) const = default;
    bool operator<(const Context& o) const { return assignment < o.assignment; }
};

/// Partial assignment of endogenous variables to force by external action.
struct Intervention {
    std::map<std::string, Value> assignment;

    bool empty() const { return assignment.empty(); }
    bool operator==(const Intervention&) const = default;
};

/// Assignment of endogenous variables. A solve result is total over V;
/// event evaluation only requires the mentioned variables to be present.
struct World {
    std::map<std::string, Value> assignment;

    std::optional<Value> value_of(const std::string& var) const {
        auto it = assignment.find(var);
        if (it == assignment.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const World&) const = default;
    bool operator<(const World& o) const { return assignment < o.assignment; }
};

}  // namespace causelab
