#pragma once

#include <string>

#include <json.hpp>

#include "causelab/engine.hpp"

namespace causelab {

namespace detail {

inline nlohmann::ordered_json assignment_json(const std::map<std::string, Value>& a) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : a) j[k] = v;
    return j;
}

inline std::string braces(const std::map<std::string, Value>& a) {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, v] : a) {
        if (!first) s += ", ";
        first = false;
        s += k + "=" + v;
    }
    return s + "}";
}

inline std::string braces(const std::vector<std::string>& names) {
    std::string s = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) s += ", ";
        s += names[i];
    }
    return s + "}";
}

}  // namespace detail

inline nlohmann::ordered_json witness_to_json(const Witness& w) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["W"] = w.w_set;
    j["w_prime"] = detail::assignment_json(w.w_prime);
    j["x_prime"] = detail::assignment_json(w.x_prime);
    j["z_star"] = detail::assignment_json(w.z_star);
    return j;
}

/// Serialization consumed by the CLI: is_cause, failed_clause, witness
/// {W, w_prime, x_prime, z_star}, witness_class, search_stats
/// {triples_examined, subsets_checked}. `all_witnesses` appears only when
/// witness collection was requested.
inline nlohmann::ordered_json verdict_to_json(const Verdict& v) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["is_cause"] = v.is_cause;
    if (v.failed_clause == Clause::None)
        j["failed_clause"] = nullptr;
    else
        j["failed_clause"] = to_string(v.failed_clause);
    if (v.witness)
        j["witness"] = witness_to_json(*v.witness);
    else
        j["witness"] = nullptr;
    if (v.witness_class == WitnessClass::None)
        j["witness_class"] = nullptr;
    else
        j["witness_class"] = to_string(v.witness_class);
    j["search_stats"] = {{"triples_examined", v.stats.triples_examined},
                         {"subsets_checked", v.stats.subsets_checked}};
    if (v.all_witnesses) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& w : *v.all_witnesses) arr.push_back(witness_to_json(w));
        j["all_witnesses"] = std::move(arr);
    }
    return j;
}

/// Clause-by-clause text rendering of a verdict.
inline std::string render_verdict_text(const Verdict& v) {
    std::string s;
    s += std::string("AC1: ") + (v.ac1_holds ? "holds" : "fails") + "\n";
    if (!v.ac1_holds || v.failed_clause == Clause::AC1) {
        if (v.ac1_holds)
            s += "AC1 refinement: the candidate cannot be false together with the outcome "
                 "(trivial self-causation rejected)\n";
        s += "verdict: not a cause (AC1)\n";
        return s;
    }
    if (v.failed_clause == Clause::AC2) {
        s += "AC2: fails (no admissible contingency)\n";
        if (v.near_miss) {
            s += "  closest attempt: W = " + detail::braces(v.near_miss->w_set) +
                 ", w' = " + detail::braces(v.near_miss->w_prime) +
                 ", x' = " + detail::braces(v.near_miss->x_prime) + "\n";
            s += "  AC2(a): holds\n";
            std::string zp = "{";
            if (v.near_miss_failing_subset) {
                for (std::size_t i = 0; i < v.near_miss_failing_subset->size(); ++i) {
                    if (i) zp += ", ";
                    zp += (*v.near_miss_failing_subset)[i];
                }
            }
            zp += "}";
            s += "  AC2(b) violated with Z' = " + zp + "\n";
        }
        s += "verdict: not a cause (AC2)\n";
        return s;
    }
    if (v.witness) {
        s += "AC2: holds with witness W = " + detail::braces(v.witness->w_set) +
             ", w' = " + detail::braces(v.witness->w_prime) +
             ", x' = " + detail::braces(v.witness->x_prime) +
             ", z* = " + detail::braces(v.witness->z_star) + "\n";
    }
    if (v.failed_clause == Clause::AC3) {
        std::string sub = "{";
        if (v.ac3_subset) {
            bool first = true;
            for (const auto& [k, val] : v.ac3_subset->conjuncts) {
                if (!first) sub += ", ";
                first = false;
                sub += k + "=" + val;
            }
        }
        sub += "}";
        s += "AC3: fails — subset " + sub + " already a cause\n";
        s += "verdict: not a cause (AC3)\n";
        return s;
    }
    s += "AC3: holds (no strict subset suffices)\n";
    s += "verdict: actual cause\n";
    if (v.witness_class == WitnessClass::Freezing)
        s += "witness class: freezing (some witness keeps W at its actual values)\n";
    else if (v.witness_class == WitnessClass::Contingent)
        s += "witness class: contingent (every witness alters W; contributory cause)\n";
    if (v.all_witnesses) {
        s += "witnesses (" + std::to_string(v.all_witnesses->size()) + "):\n";
        for (const auto& w : *v.all_witnesses)
            s += "  W = " + detail::braces(w.w_set) + ", w' = " + detail::braces(w.w_prime) +
                 ", x' = " + detail::braces(w.x_prime) + "\n";
    }
    return s;
}

/// The spec'd rendering entry point: text or JSON.
inline std::string render_verdict(const Verdict& v, bool json, int json_indent = 2) {
    if (json) return verdict_to_json(v).dump(json_indent) + "\n";
    return render_verdict_text(v);
}

}  // namespace causelab
