#pragma once

// Definitional oracle: the actual-cause conditions transcribed literally
// and evaluated by exhaustion. Deliberately independent of engine.hpp --
// it enumerates by bitmask instead of the engine's size-ordered sweeps,
// checks AC2(b) over all subsets of Z including those meeting X, and
// shares only the model/formula evaluation substrate.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causelab/compile.hpp"
#include "causelab/errors.hpp"
#include "causelab/formula.hpp"
#include "causelab/model.hpp"
#include "causelab/ranking.hpp"

namespace causelab::oracle {

struct OracleOptions {
    bool forbid_trivial = false;
    std::uint64_t ceiling = std::uint64_t(1) << 22;  // max counterfactual solves per query
};

/// Which intervention defines the ranked contingency world, mirroring the
/// engine option of the same shape.
enum class OracleRankScope { ContingencyOnly, WithCandidate };

namespace detail {

struct Instance {
    const CompiledModel* cm = nullptr;
    std::vector<std::uint16_t> exo;
    std::vector<std::uint16_t> actual;
    CompiledFormula phi;
    std::vector<int> endo;  // global indices of all endogenous variables

    // rank filtering (only set by the rank-aware entry point)
    bool use_rank = false;
    std::map<std::vector<std::uint16_t>, Rank> rank_by_endo;
    Rank max_rank = Rank::infinity();
    OracleRankScope scope = OracleRankScope::ContingencyOnly;

    bool solve_phi(const std::vector<std::pair<int, std::uint16_t>>& forced) const {
        std::vector<int> ov(cm->num_endo, -1);
        for (auto [g, v] : forced) ov[cm->ordinal(g)] = v;
        std::vector<std::uint16_t> frame;
        cm->solve_into(exo, ov, frame);
        return phi.eval(frame);
    }

    Rank world_rank(const std::vector<std::pair<int, std::uint16_t>>& forced) const {
        std::vector<int> ov(cm->num_endo, -1);
        for (auto [g, v] : forced) ov[cm->ordinal(g)] = v;
        std::vector<std::uint16_t> frame;
        cm->solve_into(exo, ov, frame);
        std::vector<std::uint16_t> key(frame.begin() + cm->num_exo, frame.end());
        auto it = rank_by_endo.find(key);
        return it == rank_by_endo.end() ? Rank::infinity() : it->second;
    }
};

using Assignment = std::vector<std::pair<int, std::uint16_t>>;

/// Enumerates every full setting of `vars` in plain domain order, invoking
/// fn; stops early when fn returns true.
template <typename Fn>
inline bool each_setting(const CompiledModel& cm, const std::vector<int>& vars, Fn&& fn) {
    std::vector<std::uint16_t> vals(vars.size(), 0);
    while (true) {
        if (fn(vals)) return true;
        std::size_t i = vals.size();
        bool advanced = false;
        while (i-- > 0) {
            if (++vals[i] < cm.domains[vars[i]].size()) {
                advanced = true;
                break;
            }
            vals[i] = 0;
        }
        if (!advanced) return false;
    }
}

/// AC2 transcribed: there exist a partition (Z, W) of V with X inside Z and
/// settings (x', w') such that (a) forcing (x', w') falsifies phi and
/// (b) forcing (x, w') and any subset of Z back to its actual values still
/// satisfies phi. `apply_rank` filters contingencies by their world rank.
inline bool ac2_exists(const Instance& ins, const std::vector<int>& xs,
                       const std::vector<std::uint16_t>& x_vals, bool apply_rank) {
    const CompiledModel& cm = *ins.cm;
    const bool ranked = apply_rank && ins.use_rank;
    std::vector<int> rest;
    for (int g : ins.endo)
        if (std::find(xs.begin(), xs.end(), g) == xs.end()) rest.push_back(g);

    const std::uint32_t limit = std::uint32_t(1) << rest.size();
    for (std::uint32_t w_mask = 0; w_mask < limit; ++w_mask) {
        std::vector<int> w_vars, z_vars(xs);
        for (std::size_t i = 0; i < rest.size(); ++i)
            (w_mask >> i & 1u ? w_vars : z_vars).push_back(rest[i]);

        const bool found = each_setting(cm, w_vars, [&](const std::vector<std::uint16_t>& w_vals) {
            if (ranked && ins.scope == OracleRankScope::ContingencyOnly) {
                Assignment forced;
                for (std::size_t i = 0; i < w_vars.size(); ++i)
                    forced.emplace_back(w_vars[i], w_vals[i]);
                if (ins.world_rank(forced) > ins.max_rank) return false;
            }
            return each_setting(cm, xs, [&](const std::vector<std::uint16_t>& xp_vals) {
                Assignment forced;
                for (std::size_t i = 0; i < xs.size(); ++i) forced.emplace_back(xs[i], xp_vals[i]);
                for (std::size_t i = 0; i < w_vars.size(); ++i)
                    forced.emplace_back(w_vars[i], w_vals[i]);
                if (ranked && ins.scope == OracleRankScope::WithCandidate &&
                    ins.world_rank(forced) > ins.max_rank)
                    return false;
                if (ins.solve_phi(forced)) return false;  // (a) wants !phi

                // (b): every subset Z' of Z, including those meeting X
                const std::uint32_t zlimit = std::uint32_t(1) << z_vars.size();
                for (std::uint32_t z_mask = 0; z_mask < zlimit; ++z_mask) {
                    Assignment back;
                    for (std::size_t i = 0; i < xs.size(); ++i)
                        back.emplace_back(xs[i], x_vals[i]);
                    for (std::size_t i = 0; i < w_vars.size(); ++i)
                        back.emplace_back(w_vars[i], w_vals[i]);
                    for (std::size_t i = 0; i < z_vars.size(); ++i)
                        if (z_mask >> i & 1u)
                            back.emplace_back(z_vars[i], ins.actual[z_vars[i]]);
                    if (!ins.solve_phi(back)) return false;
                }
                return true;
            });
        });
        if (found) return true;
    }
    return false;
}

inline Instance make_instance(const CompiledModel& cm, const Context& ctx,
                              const EventFormula& phi) {
    Instance ins;
    ins.cm = &cm;
    ins.exo = cm.encode_context(ctx);
    ins.phi = CompiledFormula::build(cm, phi);
    std::vector<int> ov(cm.num_endo, -1);
    cm.solve_into(ins.exo, ov, ins.actual);
    for (int g = cm.num_exo; g < cm.num_exo + cm.num_endo; ++g) ins.endo.push_back(g);
    return ins;
}

/// Estimated number of counterfactual solves for one AC2 exhaustion,
/// clamped at `cap`.
inline std::uint64_t ac2_cost(const CompiledModel& cm, const std::vector<int>& xs,
                              const std::vector<int>& endo, std::uint64_t cap) {
    std::vector<int> rest;
    for (int g : endo)
        if (std::find(xs.begin(), xs.end(), g) == xs.end()) rest.push_back(g);
    std::uint64_t x_prod = 1;
    for (int g : xs) x_prod = std::min<std::uint64_t>(cap, x_prod * cm.domains[g].size());
    std::uint64_t total = 0;
    const std::uint32_t limit = std::uint32_t(1) << rest.size();
    for (std::uint32_t w_mask = 0; w_mask < limit && total < cap; ++w_mask) {
        std::uint64_t w_prod = 1;
        std::size_t z_size = xs.size();
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (w_mask >> i & 1u)
                w_prod = std::min<std::uint64_t>(cap, w_prod * cm.domains[rest[i]].size());
            else
                ++z_size;
        }
        const std::uint64_t per_triple = 1 + (std::uint64_t(1) << std::min<std::size_t>(z_size, 62));
        total = std::min(cap, total + std::min(cap, w_prod * x_prod * per_triple));
    }
    return total;
}

inline void refuse_if_oversized(const CompiledModel& cm, const Instance& ins,
                                const std::vector<int>& xs, std::uint64_t ceiling) {
    std::uint64_t total = ac2_cost(cm, xs, ins.endo, ceiling);
    const std::uint32_t sublimit = std::uint32_t(1) << xs.size();
    for (std::uint32_t mask = 1; mask + 1 < sublimit && total < ceiling; ++mask) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1u) sub.push_back(xs[i]);
        total = std::min(ceiling, total + ac2_cost(cm, sub, ins.endo, ceiling));
    }
    if (total >= ceiling)
        throw guard_error("oracle search space exceeds its ceiling of " +
                          std::to_string(ceiling) + " solves");
}

inline bool consistent_with_not_phi(const CompiledModel& cm, const Instance& ins,
                                    const std::vector<int>& xs,
                                    const std::vector<std::uint16_t>& x_vals) {
    std::set<int> mentioned;
    ins.phi.collect_vars(mentioned);
    std::vector<int> free;
    for (int g : mentioned)
        if (std::find(xs.begin(), xs.end(), g) == xs.end()) free.push_back(g);
    bool satisfiable = false;
    std::vector<std::uint16_t> probe = ins.actual;
    for (std::size_t i = 0; i < xs.size(); ++i) probe[xs[i]] = x_vals[i];
    each_setting(cm, free, [&](const std::vector<std::uint16_t>& vals) {
        for (std::size_t i = 0; i < free.size(); ++i) probe[free[i]] = vals[i];
        if (!ins.phi.eval(probe)) {
            satisfiable = true;
            return true;
        }
        return false;
    });
    return satisfiable;
}

}  // namespace detail

/// Literal decision of the actual-cause conditions by exhaustion.
/// Requires |V| <= 6 and a search space under the ceiling; anything larger
/// is refused outright rather than partially explored.
inline bool brute_force_is_cause(const CausalModel& m, const Context& ctx,
                                 const std::map<std::string, Value>& cand,
                                 const EventFormula& phi, const OracleOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    if (cm.num_endo > 6)
        throw input_error("oracle refuses models with more than 6 endogenous variables");
    if (cand.empty()) throw input_error("cause candidate is empty");

    detail::Instance ins = detail::make_instance(cm, ctx, phi);

    std::vector<int> xs;
    std::vector<std::uint16_t> x_vals;
    for (const auto& [name, val] : cand) {
        const int g = cm.require_endogenous(name);
        xs.push_back(g);
        x_vals.push_back(static_cast<std::uint16_t>(cm.require_value(g, val)));
    }

    detail::refuse_if_oversized(cm, ins, xs, opt.ceiling);

    // AC1
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (ins.actual[xs[i]] != x_vals[i]) return false;
    if (!ins.phi.eval(ins.actual)) return false;

    if (opt.forbid_trivial && !detail::consistent_with_not_phi(cm, ins, xs, x_vals)) return false;

    // AC2
    if (!detail::ac2_exists(ins, xs, x_vals, false)) return false;

    // AC3: no strict nonempty subset passes AC1 and AC2
    const std::uint32_t sublimit = std::uint32_t(1) << xs.size();
    for (std::uint32_t mask = 1; mask + 1 < sublimit; ++mask) {
        std::vector<int> sub;
        std::vector<std::uint16_t> sub_vals;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1u) {
                sub.push_back(xs[i]);
                sub_vals.push_back(x_vals[i]);
            }
        bool sub_ac1 = true;
        for (std::size_t i = 0; i < sub.size(); ++i)
            if (ins.actual[sub[i]] != sub_vals[i]) sub_ac1 = false;
        if (!sub_ac1) continue;
        if (opt.forbid_trivial && !detail::consistent_with_not_phi(cm, ins, sub, sub_vals))
            continue;
        if (detail::ac2_exists(ins, sub, sub_vals, false)) return false;
    }
    return true;
}

inline bool brute_force_is_cause(const CausalModel& m, const Context& ctx,
                                 const std::map<std::string, Value>& cand,
                                 const EventFormulaPtr& phi, const OracleOptions& opt = {}) {
    return brute_force_is_cause(m, ctx, cand, *phi, opt);
}

/// Rank-aware variant used to validate rank-limited corpus rows: the AC2
/// exhaustion admits only contingencies whose world ranks at most `k`; the
/// minimality check stays unrestricted.
inline bool brute_force_is_cause_at_rank(const CausalModel& m, const Context& ctx,
                                         const RankingFunction& ranking, Rank k,
                                         const std::map<std::string, Value>& cand,
                                         const EventFormula& phi, const OracleOptions& opt = {},
                                         OracleRankScope scope = OracleRankScope::ContingencyOnly) {
    CompiledModel cm = CompiledModel::build(m);
    if (cm.num_endo > 6)
        throw input_error("oracle refuses models with more than 6 endogenous variables");
    if (cand.empty()) throw input_error("cause candidate is empty");

    detail::Instance ins = detail::make_instance(cm, ctx, phi);
    ins.use_rank = true;
    ins.max_rank = k;
    ins.scope = scope;
    for (const auto& [world, rank] : ranking.ranks) {
        std::vector<std::uint16_t> key(cm.num_endo);
        std::size_t assigned = 0;
        for (const auto& [name, val] : world.assignment) {
            const int g = cm.require_var(name);
            if (cm.is_exo(g))
                throw input_error("malformed ranking: world assigns exogenous '" + name + "'");
            key[cm.ordinal(g)] = static_cast<std::uint16_t>(cm.require_value(g, val));
            ++assigned;
        }
        if (static_cast<int>(assigned) != cm.num_endo)
            throw input_error("malformed ranking: incomplete world");
        ins.rank_by_endo[std::move(key)] = rank;
    }
    std::vector<std::uint16_t> actual_key(ins.actual.begin() + cm.num_exo, ins.actual.end());
    ins.rank_by_endo[std::move(actual_key)] = Rank::finite(0);

    std::vector<int> xs;
    std::vector<std::uint16_t> x_vals;
    for (const auto& [name, val] : cand) {
        const int g = cm.require_endogenous(name);
        xs.push_back(g);
        x_vals.push_back(static_cast<std::uint16_t>(cm.require_value(g, val)));
    }

    detail::refuse_if_oversized(cm, ins, xs, opt.ceiling);

    for (std::size_t i = 0; i < xs.size(); ++i)
        if (ins.actual[xs[i]] != x_vals[i]) return false;
    if (!ins.phi.eval(ins.actual)) return false;
    if (opt.forbid_trivial && !detail::consistent_with_not_phi(cm, ins, xs, x_vals)) return false;
    if (!detail::ac2_exists(ins, xs, x_vals, true)) return false;

    // minimality against the unrestricted conditions
    const std::uint32_t sublimit = std::uint32_t(1) << xs.size();
    for (std::uint32_t mask = 1; mask + 1 < sublimit; ++mask) {
        std::vector<int> sub;
        std::vector<std::uint16_t> sub_vals;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1u) {
                sub.push_back(xs[i]);
                sub_vals.push_back(x_vals[i]);
            }
        bool sub_ac1 = true;
        for (std::size_t i = 0; i < sub.size(); ++i)
            if (ins.actual[sub[i]] != sub_vals[i]) sub_ac1 = false;
        if (!sub_ac1) continue;
        if (detail::ac2_exists(ins, sub, sub_vals, false)) return false;
    }
    return true;
}

inline bool brute_force_is_cause_at_rank(const CausalModel& m, const Context& ctx,
                                         const RankingFunction& ranking, Rank k,
                                         const std::map<std::string, Value>& cand,
                                         const EventFormulaPtr& phi, const OracleOptions& opt = {},
                                         OracleRankScope scope = OracleRankScope::ContingencyOnly) {
    return brute_force_is_cause_at_rank(m, ctx, ranking, k, cand, *phi, opt, scope);
}

/// Every actual cause of phi among candidates consistent with the actual
/// world, by exhaustion over all conjunction sizes. Sorted by conjuncts.
inline std::vector<std::map<std::string, Value>> brute_force_enumerate(
    const CausalModel& m, const Context& ctx, const EventFormula& phi,
    const OracleOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    if (cm.num_endo > 6)
        throw input_error("oracle refuses models with more than 6 endogenous variables");
    detail::Instance ins = detail::make_instance(cm, ctx, phi);

    std::vector<std::map<std::string, Value>> out;
    if (!ins.phi.eval(ins.actual)) return out;  // AC1 fails for every candidate

    const std::uint32_t limit = std::uint32_t(1) << cm.num_endo;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        std::map<std::string, Value> cand;
        for (int o = 0; o < cm.num_endo; ++o)
            if (mask >> o & 1u) {
                const int g = cm.num_exo + o;
                cand.emplace(cm.names[g], cm.domains[g][ins.actual[g]]);
            }
        if (brute_force_is_cause(m, ctx, cand, phi, opt)) out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::map<std::string, Value>> brute_force_enumerate(
    const CausalModel& m, const Context& ctx, const EventFormulaPtr& phi,
    const OracleOptions& opt = {}) {
    return brute_force_enumerate(m, ctx, *phi, opt);
}

}  // namespace causelab::oracle
