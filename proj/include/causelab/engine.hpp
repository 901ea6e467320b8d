#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causelab/compile.hpp"
#include "causelab/errors.hpp"
#include "causelab/formula.hpp"
#include "causelab/model.hpp"
#include "causelab/ranking.hpp"

namespace causelab {

/// Candidate cause: a nonempty conjunction of primitive events over
/// distinct endogenous variables.
struct CauseCandidate {
    std::map<std::string, Value> conjuncts;

    bool operator==(const CauseCandidate&) const = default;
    bool operator<(const CauseCandidate& o) const { return conjuncts < o.conjuncts; }
};

/// Certificate for the counterfactual clause: the contingency set W with
/// its setting w', the alternative candidate setting x', and the actual
/// values z* of Z = V - W.
struct Witness {
    std::vector<std::string> w_set;           // declaration order
    std::map<std::string, Value> w_prime;
    std::map<std::string, Value> x_prime;
    std::map<std::string, Value> z_star;

    bool operator==(const Witness&) const = default;
};

enum class Clause { None, AC1, AC2, AC3 };

inline const char* to_string(Clause c) {
    switch (c) {
        case Clause::None: return "none";
        case Clause::AC1: return "AC1";
        case Clause::AC2: return "AC2";
        case Clause::AC3: return "AC3";
    }
    return "?";
}

/// Freezing: w' equals the actual values of W, so the contingency merely
/// holds the world in place. Contingent: some variable in W is set away
/// from its actual value; a cause certified only by contingent witnesses
/// is contributory rather than strictly actual.
enum class WitnessClass { None, Freezing, Contingent };

inline const char* to_string(WitnessClass c) {
    switch (c) {
        case WitnessClass::None: return "none";
        case WitnessClass::Freezing: return "freezing";
        case WitnessClass::Contingent: return "contingent";
    }
    return "?";
}

struct SearchStats {
    std::uint64_t triples_examined = 0;  // (W, w', x') attempts across all sweeps
    std::uint64_t subsets_checked = 0;   // counterfactual solves inside AC2(b)

    bool operator==(const SearchStats&) const = default;
};

struct Verdict {
    bool is_cause = false;
    Clause failed_clause = Clause::None;
    std::optional<Witness> witness;
    WitnessClass witness_class = WitnessClass::None;
    std::optional<std::vector<Witness>> all_witnesses;
    SearchStats stats;

    // diagnostics consumed by the text renderer
    bool ac1_holds = false;
    std::optional<Witness> near_miss;  // first attempt passing AC2(a) but not AC2(b)
    std::optional<std::vector<std::string>> near_miss_failing_subset;
    std::optional<CauseCandidate> ac3_subset;  // strict subset that satisfies AC1+AC2

    bool operator==(const Verdict&) const = default;
};

/// Which intervention defines the world whose rank admits a witness under
/// rank-limited causality: only the contingency W <- w' (default), or the
/// contingency together with the candidate's counterfactual setting x'.
enum class RankScope { ContingencyOnly, WithCandidate };

struct CauseOptions {
    bool forbid_trivial = false;   // require X=x and !phi to be jointly satisfiable
    bool witness_all = false;      // collect every witness, not just the first
    bool strict_retention = false; // AC2(b) variant: all of Z must keep its actual value
    std::uint64_t guard = std::uint64_t(1) << 24;  // max (W, w', x') triples per sweep
    std::size_t max_conjuncts = 1; // enumerate_causes: conjunction size ceiling
    RankScope rank_scope = RankScope::ContingencyOnly;
};

struct Ac2Check {
    bool a_holds = false;
    bool b_holds = false;
    std::optional<std::vector<std::string>> b_failing_subset;
};

// ---------------------------------------------------------------------------

namespace detail {

/// Advances a combination of positions 0..n-1; standard lexicographic step.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t s = c.size();
    std::size_t i = s;
    while (i-- > 0) {
        if (c[i] < n - s + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

/// Visits subsets of `items` ascending by size, lexicographic within a
/// size. Stops early when `fn` returns true; returns whether it stopped.
template <typename Fn>
inline bool for_each_subset(const std::vector<int>& items, Fn&& fn) {
    const std::size_t n = items.size();
    std::vector<int> subset;
    if (fn(subset)) return true;
    std::vector<std::size_t> c;
    for (std::size_t s = 1; s <= n; ++s) {
        c.resize(s);
        for (std::size_t i = 0; i < s; ++i) c[i] = i;
        while (true) {
            subset.clear();
            for (std::size_t i : c) subset.push_back(items[i]);
            if (fn(subset)) return true;
            if (!next_combination(c, n)) break;
        }
    }
    return false;
}

/// Mixed-radix odometer over per-position value sequences; the last
/// position varies fastest. Zero positions yield exactly one (empty) tuple.
struct Odometer {
    const std::vector<std::vector<std::uint16_t>>* orders = nullptr;
    std::vector<std::size_t> pos;
    bool exhausted = false;

    void reset(const std::vector<std::vector<std::uint16_t>>& o) {
        orders = &o;
        pos.assign(o.size(), 0);
        exhausted = false;
    }
    std::uint16_t value(std::size_t i) const { return (*orders)[i][pos[i]]; }
    bool advance() {
        std::size_t i = pos.size();
        while (i-- > 0) {
            if (++pos[i] < (*orders)[i].size()) return true;
            pos[i] = 0;
        }
        exhausted = true;
        return false;
    }
};

struct FoundWitness {
    std::vector<int> w;                 // global indices, ascending
    std::vector<std::uint16_t> w_vals;  // parallel to w
    std::vector<std::uint16_t> x_vals;  // parallel to the candidate variables
};

/// One cause query lowered onto the compiled model. Owns the scratch
/// buffers so the exponential sweeps never allocate per solve.
class EngineCtx {
public:
    EngineCtx(const CompiledModel& cm, const Context& ctx, const EventFormula& phi,
              const CauseOptions& opt)
        : cm_(cm), opt_(opt), exo_(cm.encode_context(ctx)),
          phi_(CompiledFormula::build(cm, phi)), ov_(cm.num_endo, -1) {
        cm_.solve_into(exo_, ov_, actual_);
    }

    const CompiledModel& cm() const { return cm_; }
    const std::vector<std::uint16_t>& actual() const { return actual_; }
    const CauseOptions& options() const { return opt_; }
    SearchStats& stats() { return stats_; }

    void set_ranking(const RankingFunction& rf, Rank max_rank) {
        rank_by_endo_.clear();
        for (const auto& [world, rank] : rf.ranks) {
            std::vector<std::uint16_t> key(cm_.num_endo);
            std::size_t assigned = 0;
            for (const auto& [name, val] : world.assignment) {
                const int g = cm_.var(name);
                if (g < 0 || cm_.is_exo(g))
                    throw input_error("malformed ranking: world assigns '" + name +
                                      "', which is not an endogenous variable");
                key[cm_.ordinal(g)] = static_cast<std::uint16_t>(cm_.require_value(g, val));
                ++assigned;
            }
            if (static_cast<int>(assigned) != cm_.num_endo)
                throw input_error("malformed ranking: a world does not assign every endogenous variable");
            rank_by_endo_[std::move(key)] = rank;
        }
        // the actual world of this context is unsurprising by definition
        std::vector<std::uint16_t> actual_key(actual_.begin() + cm_.num_exo, actual_.end());
        rank_by_endo_[std::move(actual_key)] = Rank::finite(0);
        max_rank_ = max_rank;
        use_rank_ = true;
    }

    std::vector<int> encode_candidate(const CauseCandidate& cand) const {
        if (cand.conjuncts.empty()) throw input_error("cause candidate is empty");
        std::vector<int> xs;
        for (const auto& [name, val] : cand.conjuncts) {
            const int g = cm_.require_endogenous(name);
            cm_.require_value(g, val);
            xs.push_back(g);
        }
        std::sort(xs.begin(), xs.end());
        return xs;
    }

    bool candidate_actual(const CauseCandidate& cand) const {
        for (const auto& [name, val] : cand.conjuncts) {
            const int g = cm_.require_endogenous(name);
            if (actual_[g] != static_cast<std::uint16_t>(cm_.require_value(g, val))) return false;
        }
        return true;
    }

    bool phi_actual() { return phi_.eval(actual_); }

    /// AC1's optional strengthening: X=x and !phi must be satisfiable by
    /// some assignment of the mentioned variables (trivial self-causation
    /// fails this).
    bool consistent_with_not_phi(const std::vector<int>& xs) {
        std::set<int> vars;
        phi_.collect_vars(vars);
        std::vector<int> free;
        for (int g : vars)
            if (!std::binary_search(xs.begin(), xs.end(), g)) free.push_back(g);
        std::vector<std::uint16_t> probe = actual_;
        // candidate variables stay at their actual (= candidate) values
        std::vector<std::size_t> idx(free.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < free.size(); ++i)
                probe[free[i]] = static_cast<std::uint16_t>(idx[i]);
            if (!phi_.eval(probe)) return true;
            std::size_t i = free.size();
            bool carried = false;
            while (i-- > 0) {
                if (++idx[i] < cm_.domains[free[i]].size()) {
                    carried = true;
                    break;
                }
                idx[i] = 0;
            }
            if (!carried) return false;
        }
    }

    struct SweepOutcome {
        std::optional<FoundWitness> first;
        std::optional<FoundWitness> near_miss;
        std::vector<int> near_miss_subset;
        std::vector<FoundWitness> all;
        bool freezing_found = false;
    };

    /// The deterministic witness sweep for AC2. W ranges over subsets of
    /// V - X ascending by size then lexicographic by declaration index;
    /// w' tries the actual values first, then domain order; x' follows
    /// domain order. The first passing triple is the reported witness.
    SweepOutcome sweep(const std::vector<int>& xs, bool collect_all, bool freezing_only,
                       bool apply_rank) {
        SweepOutcome out;
        std::vector<int> cands;
        for (int g = cm_.num_exo; g < cm_.num_exo + cm_.num_endo; ++g)
            if (!std::binary_search(xs.begin(), xs.end(), g)) cands.push_back(g);

        check_guard(xs, cands);

        std::vector<std::vector<std::uint16_t>> x_orders(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t v = 0; v < cm_.domains[xs[i]].size(); ++v)
                x_orders[i].push_back(static_cast<std::uint16_t>(v));

        std::vector<std::vector<std::uint16_t>> w_orders;
        std::vector<int> z_minus_x;
        const bool stopped = for_each_subset(cands, [&](const std::vector<int>& w) {
            w_orders.assign(w.size(), {});
            for (std::size_t i = 0; i < w.size(); ++i) {
                const std::uint16_t actual_val = actual_[w[i]];
                w_orders[i].push_back(actual_val);
                if (!freezing_only)
                    for (std::size_t v = 0; v < cm_.domains[w[i]].size(); ++v)
                        if (v != actual_val)
                            w_orders[i].push_back(static_cast<std::uint16_t>(v));
            }
            z_minus_x.clear();
            for (int g : cands)
                if (!std::binary_search(w.begin(), w.end(), g)) z_minus_x.push_back(g);

            Odometer wo;
            wo.reset(w_orders);
            do {
                if (apply_rank && opt_.rank_scope == RankScope::ContingencyOnly &&
                    !rank_admits(w, wo, nullptr, nullptr))
                    continue;
                Odometer xo;
                xo.reset(x_orders);
                do {
                    ++stats_.triples_examined;
                    if (apply_rank && opt_.rank_scope == RankScope::WithCandidate &&
                        !rank_admits(w, wo, &xs, &xo))
                        continue;
                    if (!ac2a_holds(xs, xo, w, wo)) continue;
                    std::vector<int> failing;
                    if (ac2b_holds(xs, w, wo, z_minus_x, &failing)) {
                        FoundWitness fw;
                        fw.w = w;
                        for (std::size_t i = 0; i < w.size(); ++i) fw.w_vals.push_back(wo.value(i));
                        for (std::size_t i = 0; i < xs.size(); ++i) fw.x_vals.push_back(xo.value(i));
                        bool freezing = true;
                        for (std::size_t i = 0; i < w.size(); ++i)
                            if (fw.w_vals[i] != actual_[w[i]]) freezing = false;
                        out.freezing_found = out.freezing_found || freezing;
                        if (!out.first) out.first = fw;
                        if (collect_all)
                            out.all.push_back(std::move(fw));
                        else
                            return true;  // first witness in deterministic order
                    } else if (!out.near_miss) {
                        FoundWitness fw;
                        fw.w = w;
                        for (std::size_t i = 0; i < w.size(); ++i) fw.w_vals.push_back(wo.value(i));
                        for (std::size_t i = 0; i < xs.size(); ++i) fw.x_vals.push_back(xo.value(i));
                        out.near_miss = std::move(fw);
                        out.near_miss_subset = failing;
                    }
                } while (xo.advance());
            } while (wo.advance());
            return false;
        });
        (void)stopped;
        return out;
    }

    Ac2Check check_witness(const std::vector<int>& xs, const std::vector<int>& w,
                           const std::vector<std::uint16_t>& w_vals,
                           const std::vector<std::uint16_t>& x_vals) {
        Ac2Check out;
        std::fill(ov_.begin(), ov_.end(), -1);
        for (std::size_t i = 0; i < w.size(); ++i) ov_[cm_.ordinal(w[i])] = w_vals[i];
        for (std::size_t i = 0; i < xs.size(); ++i) ov_[cm_.ordinal(xs[i])] = x_vals[i];
        cm_.solve_into(exo_, ov_, frame_);
        out.a_holds = !phi_.eval(frame_);

        std::vector<int> z_minus_x;
        for (int g = cm_.num_exo; g < cm_.num_exo + cm_.num_endo; ++g)
            if (!std::binary_search(xs.begin(), xs.end(), g) &&
                !std::binary_search(w.begin(), w.end(), g))
                z_minus_x.push_back(g);
        std::vector<int> failing;
        Odometer wo;
        std::vector<std::vector<std::uint16_t>> fixed(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) fixed[i] = {w_vals[i]};
        wo.reset(fixed);
        out.b_holds = ac2b_holds(xs, w, wo, z_minus_x, &failing);
        if (!out.b_holds) {
            std::vector<std::string> names;
            for (int g : failing) names.push_back(cm_.names[g]);
            out.b_failing_subset = std::move(names);
        }
        return out;
    }

    Witness materialize(const std::vector<int>& xs, const FoundWitness& fw) const {
        Witness w;
        for (std::size_t i = 0; i < fw.w.size(); ++i) {
            const int g = fw.w[i];
            w.w_set.push_back(cm_.names[g]);
            w.w_prime.emplace(cm_.names[g], cm_.domains[g][fw.w_vals[i]]);
        }
        for (std::size_t i = 0; i < xs.size(); ++i)
            w.x_prime.emplace(cm_.names[xs[i]], cm_.domains[xs[i]][fw.x_vals[i]]);
        for (int g = cm_.num_exo; g < cm_.num_exo + cm_.num_endo; ++g)
            if (!std::binary_search(fw.w.begin(), fw.w.end(), g))
                w.z_star.emplace(cm_.names[g], cm_.domains[g][actual_[g]]);
        return w;
    }

    CauseCandidate materialize_candidate(const std::vector<int>& xs) const {
        CauseCandidate c;
        for (int g : xs) c.conjuncts.emplace(cm_.names[g], cm_.domains[g][actual_[g]]);
        return c;
    }

    /// AC3: some strict nonempty subset of the conjuncts already satisfies
    /// AC1 (automatic here) and AC2. Under rank-limited causality the
    /// subsets face the unrestricted AC2, keeping the verdict monotone in
    /// the rank bound.
    std::optional<std::vector<int>> ac3_violation(const std::vector<int>& xs) {
        if (xs.size() <= 1) return std::nullopt;
        std::optional<std::vector<int>> hit;
        for_each_subset(xs, [&](const std::vector<int>& sub) {
            if (sub.empty() || sub.size() == xs.size()) return false;
            if (opt_.forbid_trivial && !consistent_with_not_phi(sub)) return false;
            SweepOutcome o = sweep(sub, false, false, false);
            if (o.first) {
                hit = sub;
                return true;
            }
            return false;
        });
        return hit;
    }

    /// Every W for which some (w', x') passes AC2, as sorted global index
    /// sets. Used by active-process extraction.
    std::vector<std::vector<int>> passing_w_sets(const std::vector<int>& xs) {
        std::vector<int> cands;
        for (int g = cm_.num_exo; g < cm_.num_exo + cm_.num_endo; ++g)
            if (!std::binary_search(xs.begin(), xs.end(), g)) cands.push_back(g);
        check_guard(xs, cands);

        std::vector<std::vector<std::uint16_t>> x_orders(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t v = 0; v < cm_.domains[xs[i]].size(); ++v)
                x_orders[i].push_back(static_cast<std::uint16_t>(v));

        std::vector<std::vector<int>> passing;
        std::vector<std::vector<std::uint16_t>> w_orders;
        std::vector<int> z_minus_x;
        for_each_subset(cands, [&](const std::vector<int>& w) {
            w_orders.assign(w.size(), {});
            for (std::size_t i = 0; i < w.size(); ++i) {
                const std::uint16_t actual_val = actual_[w[i]];
                w_orders[i].push_back(actual_val);
                for (std::size_t v = 0; v < cm_.domains[w[i]].size(); ++v)
                    if (v != actual_val) w_orders[i].push_back(static_cast<std::uint16_t>(v));
            }
            z_minus_x.clear();
            for (int g : cands)
                if (!std::binary_search(w.begin(), w.end(), g)) z_minus_x.push_back(g);
            Odometer wo;
            wo.reset(w_orders);
            bool pass = false;
            do {
                Odometer xo;
                xo.reset(x_orders);
                do {
                    ++stats_.triples_examined;
                    if (!ac2a_holds(xs, xo, w, wo)) continue;
                    if (ac2b_holds(xs, w, wo, z_minus_x, nullptr)) {
                        pass = true;
                        break;
                    }
                } while (xo.advance());
            } while (!pass && wo.advance());
            if (pass) passing.push_back(w);
            return false;
        });
        return passing;
    }

private:
    void check_guard(const std::vector<int>& xs, const std::vector<int>& cands) const {
        // Search space is sum over W of |dom(W)| * |dom(X)| triples, i.e.
        // prod(1 + |dom(v)|) * prod |dom(x)|. Abort up front when it
        // exceeds the ceiling; a truncated sweep could silently miss a
        // witness.
        long double total = 1.0L;
        for (int g : cands) total *= 1.0L + static_cast<long double>(cm_.domains[g].size());
        for (int g : xs) total *= static_cast<long double>(cm_.domains[g].size());
        if (total > static_cast<long double>(opt_.guard))
            throw guard_error("witness search space (about " + std::to_string((double)total) +
                              " triples) exceeds the guard of " + std::to_string(opt_.guard) +
                              " triples");
    }

    bool rank_admits(const std::vector<int>& w, const Odometer& wo,
                     const std::vector<int>* xs, const Odometer* xo) {
        std::fill(ov_.begin(), ov_.end(), -1);
        for (std::size_t i = 0; i < w.size(); ++i) ov_[cm_.ordinal(w[i])] = wo.value(i);
        if (xs)
            for (std::size_t i = 0; i < xs->size(); ++i)
                ov_[cm_.ordinal((*xs)[i])] = xo->value(i);
        cm_.solve_into(exo_, ov_, frame_);
        rank_key_.assign(frame_.begin() + cm_.num_exo, frame_.end());
        auto it = rank_by_endo_.find(rank_key_);
        const Rank r = it == rank_by_endo_.end() ? Rank::infinity() : it->second;
        return r <= max_rank_;
    }

    bool ac2a_holds(const std::vector<int>& xs, const Odometer& xo,
                    const std::vector<int>& w, const Odometer& wo) {
        std::fill(ov_.begin(), ov_.end(), -1);
        for (std::size_t i = 0; i < w.size(); ++i) ov_[cm_.ordinal(w[i])] = wo.value(i);
        for (std::size_t i = 0; i < xs.size(); ++i) ov_[cm_.ordinal(xs[i])] = xo.value(i);
        cm_.solve_into(exo_, ov_, frame_);
        return !phi_.eval(frame_);
    }

    /// AC2(b): with X back at its actual values and W still at w', phi must
    /// hold, and keep holding when any subset of Z - X is pinned to its
    /// actual values. Subsets run ascending by size, lexicographic within a
    /// size; the first violator is reported. Subsets meeting X would pin
    /// values the intervention already fixes, so they are skipped. In the
    /// strict variant the subset sweep is replaced by the requirement that
    /// every variable of Z keeps its actual value outright.
    bool ac2b_holds(const std::vector<int>& xs, const std::vector<int>& w, const Odometer& wo,
                    const std::vector<int>& z_minus_x, std::vector<int>* failing) {
        if (opt_.strict_retention) {
            ++stats_.subsets_checked;
            std::fill(ov_.begin(), ov_.end(), -1);
            for (std::size_t i = 0; i < w.size(); ++i) ov_[cm_.ordinal(w[i])] = wo.value(i);
            for (int g : xs) ov_[cm_.ordinal(g)] = actual_[g];
            cm_.solve_into(exo_, ov_, frame_);
            if (!phi_.eval(frame_)) {
                if (failing) failing->clear();
                return false;
            }
            for (int g : z_minus_x)
                if (frame_[g] != actual_[g]) {
                    if (failing) *failing = {g};
                    return false;
                }
            for (int g : xs)
                if (frame_[g] != actual_[g]) {
                    if (failing) *failing = {g};
                    return false;
                }
            return true;
        }
        bool ok = true;
        for_each_subset(z_minus_x, [&](const std::vector<int>& zp) {
            ++stats_.subsets_checked;
            std::fill(ov_.begin(), ov_.end(), -1);
            for (std::size_t i = 0; i < w.size(); ++i) ov_[cm_.ordinal(w[i])] = wo.value(i);
            for (int g : xs) ov_[cm_.ordinal(g)] = actual_[g];
            for (int g : zp) ov_[cm_.ordinal(g)] = actual_[g];
            cm_.solve_into(exo_, ov_, frame_);
            if (!phi_.eval(frame_)) {
                ok = false;
                if (failing) *failing = zp;
                return true;
            }
            return false;
        });
        return ok;
    }

    const CompiledModel& cm_;
    CauseOptions opt_;
    std::vector<std::uint16_t> exo_;
    CompiledFormula phi_;
    std::vector<int> ov_;
    std::vector<std::uint16_t> actual_;
    std::vector<std::uint16_t> frame_;
    std::vector<std::uint16_t> rank_key_;
    bool use_rank_ = false;
    std::map<std::vector<std::uint16_t>, Rank> rank_by_endo_;
    Rank max_rank_ = Rank::infinity();
    SearchStats stats_;
};

inline Verdict decide_cause(const CompiledModel& cm, const Context& ctx,
                            const CauseCandidate& cand, const EventFormula& phi,
                            const CauseOptions& opt, const RankingFunction* ranking,
                            Rank max_rank) {
    EngineCtx ec(cm, ctx, phi, opt);
    const std::vector<int> xs = ec.encode_candidate(cand);
    const bool apply_rank = ranking != nullptr;
    if (apply_rank) ec.set_ranking(*ranking, max_rank);

    Verdict v;
    v.ac1_holds = ec.candidate_actual(cand) && ec.phi_actual();
    if (!v.ac1_holds || (opt.forbid_trivial && !ec.consistent_with_not_phi(xs))) {
        v.failed_clause = Clause::AC1;
        v.stats = ec.stats();
        return v;
    }

    EngineCtx::SweepOutcome found = ec.sweep(xs, opt.witness_all, false, apply_rank);
    if (!found.first) {
        v.failed_clause = Clause::AC2;
        if (found.near_miss) {
            v.near_miss = ec.materialize(xs, *found.near_miss);
            std::vector<std::string> names;
            for (int g : found.near_miss_subset) names.push_back(cm.names[g]);
            v.near_miss_failing_subset = std::move(names);
        }
        v.stats = ec.stats();
        return v;
    }

    if (auto sub = ec.ac3_violation(xs)) {
        v.failed_clause = Clause::AC3;
        v.witness = ec.materialize(xs, *found.first);
        v.ac3_subset = ec.materialize_candidate(*sub);
        v.stats = ec.stats();
        return v;
    }

    v.is_cause = true;
    v.witness = ec.materialize(xs, *found.first);
    bool freezing = found.freezing_found;
    if (!freezing && !opt.witness_all) {
        // the first witness is contingent; probe whether any freezing
        // witness certifies the cause before classifying it contributory
        EngineCtx::SweepOutcome probe = ec.sweep(xs, false, true, apply_rank);
        freezing = probe.first.has_value();
    }
    v.witness_class = freezing ? WitnessClass::Freezing : WitnessClass::Contingent;
    if (opt.witness_all) {
        std::vector<Witness> all;
        all.reserve(found.all.size());
        for (const auto& fw : found.all) all.push_back(ec.materialize(xs, fw));
        v.all_witnesses = std::move(all);
    }
    v.stats = ec.stats();
    return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public operations

/// AC1: the candidate conjunction and the outcome both hold in the actual
/// world of (model, context).
inline bool check_ac1(const CausalModel& m, const Context& ctx, const CauseCandidate& cand,
                      const EventFormula& phi) {
    CompiledModel cm = CompiledModel::build(m);
    CauseOptions opt;
    detail::EngineCtx ec(cm, ctx, phi, opt);
    ec.encode_candidate(cand);
    return ec.candidate_actual(cand) && ec.phi_actual();
}

inline bool check_ac1(const CausalModel& m, const Context& ctx, const CauseCandidate& cand,
                      const EventFormulaPtr& phi) {
    return check_ac1(m, ctx, cand, *phi);
}

/// Evaluates both halves of AC2 for an explicitly given witness. On an
/// AC2(b) failure, `b_failing_subset` is the first violating subset of
/// Z - X in the deterministic order (ascending size, then lexicographic).
inline Ac2Check check_ac2_witness(const CausalModel& m, const Context& ctx,
                                  const CauseCandidate& cand, const EventFormula& phi,
                                  const Witness& witness, const CauseOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    detail::EngineCtx ec(cm, ctx, phi, opt);
    const std::vector<int> xs = ec.encode_candidate(cand);

    std::vector<int> w;
    std::vector<std::uint16_t> w_vals;
    if (witness.w_set.size() != witness.w_prime.size())
        throw input_error("malformed witness: w_prime must assign exactly the variables of W");
    std::vector<std::pair<int, std::uint16_t>> w_enc;
    for (const auto& name : witness.w_set) {
        const int g = cm.require_endogenous(name);
        if (std::binary_search(xs.begin(), xs.end(), g))
            throw input_error("malformed witness: '" + name + "' is part of the candidate");
        auto it = witness.w_prime.find(name);
        if (it == witness.w_prime.end())
            throw input_error("malformed witness: w_prime does not assign '" + name + "'");
        w_enc.emplace_back(g, static_cast<std::uint16_t>(cm.require_value(g, it->second)));
    }
    std::sort(w_enc.begin(), w_enc.end());
    for (auto [g, val] : w_enc) {
        if (!w.empty() && w.back() == g)
            throw input_error("malformed witness: duplicate variable in W");
        w.push_back(g);
        w_vals.push_back(val);
    }

    std::vector<std::uint16_t> x_vals;
    if (witness.x_prime.size() != xs.size())
        throw input_error("malformed witness: x_prime must assign exactly the candidate variables");
    for (int g : xs) {
        auto it = witness.x_prime.find(cm.names[g]);
        if (it == witness.x_prime.end())
            throw input_error("malformed witness: x_prime does not assign '" + cm.names[g] + "'");
        x_vals.push_back(static_cast<std::uint16_t>(cm.require_value(g, it->second)));
    }

    if (!witness.z_star.empty()) {
        for (const auto& [name, val] : witness.z_star) {
            const int g = cm.require_endogenous(name);
            if (std::binary_search(w.begin(), w.end(), g))
                throw input_error("malformed witness: z_star assigns '" + name + "' from W");
            if (ec.actual()[g] != static_cast<std::uint16_t>(cm.require_value(g, val)))
                throw input_error("malformed witness: z_star disagrees with the actual world on '" +
                                  name + "'");
        }
    }

    return ec.check_witness(xs, w, w_vals, x_vals);
}

inline Ac2Check check_ac2_witness(const CausalModel& m, const Context& ctx,
                                  const CauseCandidate& cand, const EventFormulaPtr& phi,
                                  const Witness& witness, const CauseOptions& opt = {}) {
    return check_ac2_witness(m, ctx, cand, *phi, witness, opt);
}

/// Exhaustive deterministic search for an AC2 witness; the returned witness
/// is the first in the canonical order (W ascending by size then
/// lexicographic; actual values first for w'; domain order for x').
inline std::optional<Witness> find_witness(const CausalModel& m, const Context& ctx,
                                           const CauseCandidate& cand, const EventFormula& phi,
                                           const CauseOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    detail::EngineCtx ec(cm, ctx, phi, opt);
    const std::vector<int> xs = ec.encode_candidate(cand);
    auto sweep = ec.sweep(xs, false, false, false);
    if (!sweep.first) return std::nullopt;
    return ec.materialize(xs, *sweep.first);
}

inline std::optional<Witness> find_witness(const CausalModel& m, const Context& ctx,
                                           const CauseCandidate& cand, const EventFormulaPtr& phi,
                                           const CauseOptions& opt = {}) {
    return find_witness(m, ctx, cand, *phi, opt);
}

/// Full actual-cause decision: AC1, the AC2 witness search, and the AC3
/// minimality check over strict subsets of the conjuncts.
inline Verdict is_actual_cause(const CausalModel& m, const Context& ctx,
                               const CauseCandidate& cand, const EventFormula& phi,
                               const CauseOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    return detail::decide_cause(cm, ctx, cand, phi, opt, nullptr, Rank::infinity());
}

inline Verdict is_actual_cause(const CausalModel& m, const Context& ctx,
                               const CauseCandidate& cand, const EventFormulaPtr& phi,
                               const CauseOptions& opt = {}) {
    return is_actual_cause(m, ctx, cand, *phi, opt);
}

/// Rank-limited decision: a witness is admitted only when its contingency
/// world has rank at most `k` under the given ranking. The contingency
/// world is the solution after imposing only W <- w' (or also X <- x'
/// under RankScope::WithCandidate). Unlisted worlds rank infinite; the
/// actual world always ranks 0.
inline Verdict is_cause_at_rank(const CausalModel& m, const Context& ctx,
                                const RankingFunction& ranking, Rank k,
                                const CauseCandidate& cand, const EventFormula& phi,
                                const CauseOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    return detail::decide_cause(cm, ctx, cand, phi, opt, &ranking, k);
}

inline Verdict is_cause_at_rank(const CausalModel& m, const Context& ctx,
                                const RankingFunction& ranking, Rank k,
                                const CauseCandidate& cand, const EventFormulaPtr& phi,
                                const CauseOptions& opt = {}) {
    return is_cause_at_rank(m, ctx, ranking, k, cand, *phi, opt);
}

/// All actual causes of phi whose conjunction size is at most
/// `opt.max_conjuncts`, with their witnesses, ordered by variable names.
/// Candidates necessarily take their actual values (anything else fails
/// AC1 immediately).
inline std::vector<std::pair<CauseCandidate, Witness>> enumerate_causes(
    const CausalModel& m, const Context& ctx, const EventFormula& phi,
    const CauseOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    detail::EngineCtx probe(cm, ctx, phi, opt);
    std::vector<std::pair<CauseCandidate, Witness>> out;
    if (!probe.phi_actual()) return out;

    std::vector<int> endo;
    for (int g = cm.num_exo; g < cm.num_exo + cm.num_endo; ++g) endo.push_back(g);
    const std::size_t cap = std::min(opt.max_conjuncts, endo.size());

    detail::for_each_subset(endo, [&](const std::vector<int>& xs) {
        if (xs.empty()) return false;
        if (xs.size() > cap) return true;  // subsets come in ascending size
        CauseCandidate cand = probe.materialize_candidate(xs);
        Verdict v = detail::decide_cause(cm, ctx, cand, phi, opt, nullptr, Rank::infinity());
        if (v.is_cause) out.emplace_back(std::move(cand), std::move(*v.witness));
        return false;
    });
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

inline std::vector<std::pair<CauseCandidate, Witness>> enumerate_causes(
    const CausalModel& m, const Context& ctx, const EventFormulaPtr& phi,
    const CauseOptions& opt = {}) {
    return enumerate_causes(m, ctx, *phi, opt);
}

/// Minimal (by inclusion) sets Z containing the candidate's variables such
/// that some witness with W = V - Z passes AC2: the variable sets that
/// mediate between the candidate and the outcome.
inline std::vector<std::vector<std::string>> active_processes(const CausalModel& m,
                                                              const Context& ctx,
                                                              const CauseCandidate& cand,
                                                              const EventFormula& phi,
                                                              const CauseOptions& opt = {}) {
    CompiledModel cm = CompiledModel::build(m);
    detail::EngineCtx ec(cm, ctx, phi, opt);
    const std::vector<int> xs = ec.encode_candidate(cand);
    if (!ec.candidate_actual(cand) || !ec.phi_actual())
        throw input_error("active processes are defined only when AC1 holds");

    std::vector<std::vector<int>> passing_w = ec.passing_w_sets(xs);
    // minimal Z corresponds to maximal W
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 0; i < passing_w.size(); ++i) {
        bool maximal = true;
        for (std::size_t j = 0; j < passing_w.size() && maximal; ++j) {
            if (i == j || passing_w[j].size() <= passing_w[i].size()) continue;
            maximal = !std::includes(passing_w[j].begin(), passing_w[j].end(),
                                     passing_w[i].begin(), passing_w[i].end());
        }
        if (!maximal) continue;
        std::vector<std::string> z;
        for (int g = cm.num_exo; g < cm.num_exo + cm.num_endo; ++g)
            if (!std::binary_search(passing_w[i].begin(), passing_w[i].end(), g))
                z.push_back(cm.names[g]);
        out.push_back(std::move(z));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

inline std::vector<std::vector<std::string>> active_processes(const CausalModel& m,
                                                              const Context& ctx,
                                                              const CauseCandidate& cand,
                                                              const EventFormulaPtr& phi,
                                                              const CauseOptions& opt = {}) {
    return active_processes(m, ctx, cand, *phi, opt);
}

/// Freezing iff w' equals the actual values of W in solve(model, context).
inline WitnessClass classify_witness(const CausalModel& m, const Context& ctx,
                                     const Witness& witness) {
    CompiledModel cm = CompiledModel::build(m);
    auto exo = cm.encode_context(ctx);
    std::vector<int> ov(cm.num_endo, -1);
    std::vector<std::uint16_t> frame;
    cm.solve_into(exo, ov, frame);
    for (const auto& name : witness.w_set) {
        const int g = cm.require_endogenous(name);
        auto it = witness.w_prime.find(name);
        if (it == witness.w_prime.end())
            throw input_error("malformed witness: w_prime does not assign '" + name + "'");
        if (frame[g] != static_cast<std::uint16_t>(cm.require_value(g, it->second)))
            return WitnessClass::Contingent;
    }
    return WitnessClass::Freezing;
}

}  // namespace causelab
