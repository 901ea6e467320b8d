#pragma once

// Built-in scenario registry: each entry bundles a model (kept as the
// exact text shipped under corpus/), its canonical context, an optional
// ranking, and the expected cause verdicts that the regression suite and
// the `regress` command replay.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causelab/compile.hpp"
#include "causelab/engine.hpp"
#include "causelab/errors.hpp"
#include "causelab/model.hpp"
#include "causelab/parse.hpp"
#include "causelab/ranking.hpp"

namespace causelab::corpus {

/// Rank assigned to the far-fetched loanshark worlds; rank-limited queries
/// below this bound reject the loanshark contingency.
inline constexpr std::uint64_t kLoansharkFancifulRank = 5;

struct VerdictRow {
    std::string example;
    std::string query;
    bool expected;
    std::string locus;
};

struct ExampleEntry {
    std::string name;
    CausalModel model;
    Context context;
    std::optional<RankingFunction> ranking;
    std::vector<VerdictRow> expected;
    std::string model_text;    // exact content of the shipped .scm file
    std::string context_text;  // canonical context, e.g. "U=u11"
    std::string ranking_text;  // exact content of the shipped .ranking file, if any
};

namespace detail {

constexpr std::string_view kForestFireDisjunctive = R"(# Two arsonists drop lit matches in a dry forest; either match alone
# suffices to burn it down.
model "forest_fire_disjunctive"
exo U in {u00, u10, u01, u11}
var ML1 in {0, 1}
var ML2 in {0, 1}
var FB in {0, 1}
eq ML1(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq ML2(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq FB(U, ML1, ML2) = ML1 or ML2
)";

constexpr std::string_view kForestFireConjunctive = R"(# Two arsonists drop lit matches in a dry forest; both matches are
# needed to burn it down.
model "forest_fire_conjunctive"
exo U in {u00, u10, u01, u11}
var ML1 in {0, 1}
var ML2 in {0, 1}
var FB in {0, 1}
eq ML1(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq ML2(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq FB(U, ML1, ML2) = ML1 and ML2
)";

constexpr std::string_view kAprilShowers = R"(# Heavy April rain keeps the forest wet through May; electric storms hit
# in May and June. ES atomizes the (May, June) storm pattern: sMJ.
# F: 0 no fire, 1 fire in May, 2 fire in June.
model "april_showers"
exo U in {u0, u1}
var AS in {0, 1}
var ES in {s00, s10, s01, s11}
var F in {0, 1, 2}
eq AS(U) = table { (u0)->0; (u1)->1 }
eq ES(U) = table { (u0)->s00; (u1)->s11 }
eq F(AS, ES) = table { (0,s00)->0; (0,s10)->1; (0,s01)->2; (0,s11)->1; (1,s00)->0; (1,s10)->0; (1,s01)->2; (1,s11)->2 }
)";

constexpr std::string_view kRockThrowCoarse = R"(# Suzy and Billy both throw rocks at a bottle. The coarse model only
# records who throws and whether the bottle shatters.
model "rock_throw_coarse"
exo U in {u00, u10, u01, u11}
var ST in {0, 1}
var BT in {0, 1}
var BS in {0, 1}
eq ST(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq BT(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq BS(ST, BT) = ST or BT
)";

constexpr std::string_view kRockThrowThreeval = R"(# Same story with a three-valued outcome: 1 the bottle shatters from
# Suzy's rock (hers arrives first), 2 from Billy's, 0 it stays intact.
model "rock_throw_threeval"
exo U in {u00, u10, u01, u11}
var ST in {0, 1}
var BT in {0, 1}
var BS in {0, 1, 2}
eq ST(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq BT(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq BS(ST, BT) = table { (0,0)->0; (0,1)->2; (1,0)->1; (1,1)->1 }
)";

constexpr std::string_view kRockThrowRefined = R"(# Refined preemption model for the context where Suzy throws first: her
# hit blocks Billy's rock from hitting the intact bottle.
model "rock_throw_refined"
exo U in {u00, u10, u01, u11}
var ST in {0, 1}
var BT in {0, 1}
var SH in {0, 1}
var BH in {0, 1}
var BS in {0, 1}
eq ST(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq BT(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq SH(ST) = ST
eq BH(BT, SH) = BT and not SH
eq BS(SH, BH) = SH or BH
)";

constexpr std::string_view kMedication = R"(# Billy is hospitalized with a nonfatal disease. Treatment on Monday
# makes Tuesday treatment unnecessary; one dose heals, two doses kill.
# BMC: 0 fine all Tuesday, 1 sick in the morning then fine, 2 sick all
# day, 3 dead in the afternoon.
model "medication"
exo U in {u0, u1}
var MT in {0, 1}
var TT in {0, 1}
var BMC in {0, 1, 2, 3}
eq MT(U) = table { (u0)->0; (u1)->1 }
eq TT(MT) = not MT
eq BMC(MT, TT) = table { (0,0)->2; (0,1)->1; (1,0)->0; (1,1)->3 }
)";

constexpr std::string_view kVotingSimple = R"(# Two voters; the measure passes when at least one votes in favor.
model "voting_simple"
exo U in {u00, u10, u01, u11}
var V1 in {0, 1}
var V2 in {0, 1}
var P in {0, 1}
eq V1(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq V2(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq P(V1, V2) = V1 or V2
)";

constexpr std::string_view kVotingMachine = R"(# Same vote, but a machine tabulates the total before the outcome is
# read off the tally.
model "voting_machine"
exo U in {u00, u10, u01, u11}
var V1 in {0, 1}
var V2 in {0, 1}
var M in {0, 1, 2}
var P in {0, 1}
eq V1(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq V2(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq M(V1, V2) = V1 + V2
eq P(M) = min(M, 1)
)";

constexpr std::string_view kSwitch3var = R"(# A switch routes an oncoming train: flipped means the left-hand track.
# The tracks reconverge, so the train arrives either way.
model "switch_3var"
exo U in {u0, u1}
var F in {0, 1}
var T in {0, 1}
var A in {0, 1}
eq F(U) = table { (u0)->0; (u1)->1 }
eq T(F) = not F
eq A(T) = 1
)";

constexpr std::string_view kSwitchTracks = R"(# The same switch with each track modeled as its own mechanism, so a
# track can fail independently of the switch position.
model "switch_tracks"
exo U in {u0, u1}
var F in {0, 1}
var LT in {0, 1}
var RT in {0, 1}
var A in {0, 1}
eq F(U) = table { (u0)->0; (u1)->1 }
eq LT(F) = F
eq RT(F) = not F
eq A(LT, RT) = LT or RT
)";

constexpr std::string_view kFingerBasic = R"(# Fred's finger is severed at the factory; the health plan has it sewn
# back on, so a month later it is functional regardless.
model "finger_basic"
exo U in {u0, u1}
var FS in {0, 1}
var FF in {0, 1}
eq FS(U) = table { (u0)->0; (u1)->1 }
eq FF(FS) = 1
)";

constexpr std::string_view kFingerLoanshark = R"(# Larry the Loanshark might be waiting to cut off Fred's finger and
# throw it away; losing the finger at the factory would preempt him.
model "finger_loanshark"
exo U in {u00, u10, u01, u11}
var FS in {0, 1}
var LL in {0, 1}
var LC in {0, 1}
var FF in {0, 1}
eq FS(U) = table { (u00)->0; (u10)->1; (u01)->0; (u11)->1 }
eq LL(U) = table { (u00)->0; (u10)->0; (u01)->1; (u11)->1 }
eq LC(LL, FS) = LL and not FS
eq FF(LC) = not LC
)";

constexpr std::string_view kFingerLoansharkRanking =
    R"(# Worlds where Larry waits outside (LL=1) are far-fetched; rank 5.
FS=0,LL=0,LC=0,FF=0	0
FS=0,LL=0,LC=0,FF=1	0
FS=0,LL=0,LC=1,FF=0	0
FS=0,LL=0,LC=1,FF=1	0
FS=1,LL=0,LC=0,FF=0	0
FS=1,LL=0,LC=0,FF=1	0
FS=1,LL=0,LC=1,FF=0	0
FS=1,LL=0,LC=1,FF=1	0
FS=0,LL=1,LC=0,FF=0	5
FS=0,LL=1,LC=0,FF=1	5
FS=0,LL=1,LC=1,FF=0	5
FS=0,LL=1,LC=1,FF=1	5
FS=1,LL=1,LC=0,FF=0	5
FS=1,LL=1,LC=0,FF=1	5
FS=1,LL=1,LC=1,FF=0	5
FS=1,LL=1,LC=1,FF=1	5
)";

struct EntrySpec {
    std::string_view name;
    std::string_view model_text;
    std::string_view context_text;
    std::string_view ranking_text;  // empty when absent
    std::vector<VerdictRow> rows;
};

inline std::vector<ExampleEntry> build_registry() {
    auto rows = [](std::string_view example,
                   std::vector<std::tuple<std::string_view, bool, std::string_view>> qs) {
        std::vector<VerdictRow> out;
        for (auto& [q, e, l] : qs)
            out.push_back({std::string(example), std::string(q), e, std::string(l)});
        return out;
    };

    std::vector<EntrySpec> specs;
    specs.push_back({"forest_fire_disjunctive", kForestFireDisjunctive, "U=u11", "",
                     rows("forest_fire_disjunctive",
                          {{"cause ML1=1 of FB=1", true, "two arsonists, either match suffices"},
                           {"cause ML2=1 of FB=1", true, "two arsonists, either match suffices"},
                           {"cause ML1=1 & ML2=1 of FB=1", false,
                            "the pair of matches is not a minimal cause"}})});
    specs.push_back({"forest_fire_conjunctive", kForestFireConjunctive, "U=u11", "",
                     rows("forest_fire_conjunctive",
                          {{"cause ML1=1 of FB=1", true, "two arsonists, both matches needed"},
                           {"cause ML2=1 of FB=1", true, "two arsonists, both matches needed"},
                           {"cause ML1=1 & ML2=1 of FB=1", false,
                            "the pair of matches is not a minimal cause"}})});
    specs.push_back({"april_showers", kAprilShowers, "U=u1", "",
                     rows("april_showers",
                          {{"cause AS=1 of F=2", true, "April rain caused the fire to be a June fire"},
                           {"cause AS=1 of F=1 | F=2", false, "April rain did not cause the fire itself"},
                           {"cause ES=s11 of F=2", true, "the storms caused the June fire"},
                           {"cause ES=s11 of F=1 | F=2", true, "the storms caused there to be a fire"},
                           {"cause AS=1 & ES=s11 of F=2", false, "conjunction fails minimality"},
                           {"cause AS=1 & ES=s11 of F=1 | F=2", false, "conjunction fails minimality"}})});
    specs.push_back({"rock_throw_coarse", kRockThrowCoarse, "U=u11", "",
                     rows("rock_throw_coarse",
                          {{"cause ST=1 of BS=1", true, "coarse model cannot break the symmetry"},
                           {"cause BT=1 of BS=1", true, "coarse model cannot break the symmetry"}})});
    specs.push_back({"rock_throw_threeval", kRockThrowThreeval, "U=u11", "",
                     rows("rock_throw_threeval",
                          {{"cause ST=1 of BS=1", true, "Suzy's throw shatters the bottle her way"},
                           {"cause BT=1 of BS=1", false, "without Suzy the bottle shatters Billy's way"}})});
    specs.push_back({"rock_throw_refined", kRockThrowRefined, "U=u11", "",
                     rows("rock_throw_refined",
                          {{"cause ST=1 of BS=1", true, "Suzy preempts Billy; her throw is the cause"},
                           {"cause BT=1 of BS=1", false, "restoring BH=0 exposes Billy's throw as idle"}})});
    specs.push_back({"medication", kMedication, "U=u1", "",
                     rows("medication",
                          {{"cause MT=1 of BMC=0", true, "Monday's treatment made Billy fine on Tuesday"},
                           {"cause MT=1 of TT=0", true, "Monday's treatment preempted Tuesday's"},
                           {"cause TT=0 of BMC=0 | BMC=1 | BMC=2", true,
                            "skipping the second dose kept Billy alive"},
                           {"cause MT=1 of BMC=0 | BMC=1 | BMC=2", false,
                            "causality does not chain through to Billy's being alive"}})});
    specs.push_back({"voting_simple", kVotingSimple, "U=u11", "",
                     rows("voting_simple",
                          {{"cause V1=1 of P=1", true, "each favorable vote is a cause of passage"},
                           {"cause V2=1 of P=1", true, "each favorable vote is a cause of passage"}})});
    specs.push_back({"voting_machine", kVotingMachine, "U=u11", "",
                     rows("voting_machine",
                          {{"cause V1=1 of P=1", true, "the tally drops to 1 yet the measure still passes"},
                           {"cause V2=1 of P=1", true, "the tally drops to 1 yet the measure still passes"}})});
    specs.push_back({"switch_3var", kSwitch3var, "U=u1", "",
                     rows("switch_3var",
                          {{"cause F=1 of T=0", true, "flipping the switch sends the train left"},
                           {"cause F=1 of A=1", false, "the train arrives whichever way the switch points"}})});
    specs.push_back({"switch_tracks", kSwitchTracks, "U=u1", "",
                     rows("switch_tracks",
                          {{"cause F=1 of A=1", true,
                            "with tracks as separate mechanisms, the switch counts as a cause"}})});
    specs.push_back({"finger_basic", kFingerBasic, "U=u1", "",
                     rows("finger_basic",
                          {{"cause FS=1 of FF=1", false, "the finger heals whether or not it was severed"}})});
    specs.push_back({"finger_loanshark", kFingerLoanshark, "U=u10", kFingerLoansharkRanking,
                     rows("finger_loanshark",
                          {{"cause FS=1 of FF=1", true,
                            "the accident preempts Larry, so it causes the recovery"},
                           {"cause@0 FS=1 of FF=1", false, "at rank 0 the loanshark contingency is barred"},
                           {"cause@5 FS=1 of FF=1", true, "rank 5 admits the loanshark contingency"},
                           {"cause@inf FS=1 of FF=1", true, "an infinite bound never filters witnesses"}})});

    std::vector<ExampleEntry> registry;
    for (auto& spec : specs) {
        ExampleEntry e;
        e.name = std::string(spec.name);
        e.model_text = std::string(spec.model_text);
        e.context_text = std::string(spec.context_text);
        e.ranking_text = std::string(spec.ranking_text);
        e.model = parse_model(e.model_text);
        e.context = parse_context(e.context_text);
        if (!spec.ranking_text.empty()) e.ranking = parse_ranking(e.ranking_text);
        e.expected = std::move(spec.rows);
        ValidationReport rep = validate_model(e.model);
        if (!rep.ok())
            throw model_error("registry entry '" + e.name + "' is invalid: " + rep.summary());
        registry.push_back(std::move(e));
    }
    return registry;
}

inline const std::vector<ExampleEntry>& registry() {
    static const std::vector<ExampleEntry> r = build_registry();
    return r;
}

}  // namespace detail

inline std::vector<std::string> example_names() {
    std::vector<std::string> names;
    for (const auto& e : detail::registry()) names.push_back(e.name);
    return names;
}

inline const ExampleEntry& load_example(const std::string& name) {
    for (const auto& e : detail::registry())
        if (e.name == name) return e;
    std::string msg = "unknown example '" + name + "'; available:";
    for (const auto& e : detail::registry()) msg += " " + e.name;
    throw input_error(msg);
}

/// The full regression table, one row per stated verdict.
inline std::vector<VerdictRow> verdict_table() {
    std::vector<VerdictRow> rows;
    for (const auto& e : detail::registry())
        rows.insert(rows.end(), e.expected.begin(), e.expected.end());
    return rows;
}

/// A cause query over one entry: `cause[@K] X=x[& Y=y...] of <phi>`.
struct CauseQuery {
    CauseCandidate candidate;
    EventFormulaPtr phi;
    std::optional<Rank> rank;
};

inline CauseQuery parse_query(const std::string& text) {
    causelab::detail::Parser p(text);
    if (!p.accept_ident("cause")) p.fail("expected 'cause'");
    CauseQuery q;
    if (p.accept(causelab::detail::Tok::At)) {
        if (p.accept_ident("inf"))
            q.rank = Rank::infinity();
        else
            q.rank = Rank::finite(std::stoull(p.expect(causelab::detail::Tok::Int, "a rank").text));
    }
    while (true) {
        auto var = p.expect(causelab::detail::Tok::Ident, "a variable name");
        p.expect(causelab::detail::Tok::Assign, "'='");
        Value val = p.expect_value();
        if (!q.candidate.conjuncts.emplace(var.text, std::move(val)).second)
            throw parse_error("duplicate candidate variable '" + var.text + "'", var.line,
                              var.column);
        if (!p.accept(causelab::detail::Tok::Amp)) break;
    }
    if (!p.accept_ident("of")) p.fail("expected 'of'");
    q.phi = causelab::detail::parse_phi_or(p);
    p.expect_end();
    return q;
}

/// Runs one query against an entry with the engine.
inline bool run_query(const ExampleEntry& entry, const CauseQuery& q,
                      const CauseOptions& opt = {}) {
    if (q.rank) {
        RankingFunction empty;
        const RankingFunction& rf = entry.ranking ? *entry.ranking : empty;
        return is_cause_at_rank(entry.model, entry.context, rf, *q.rank, q.candidate, *q.phi, opt)
            .is_cause;
    }
    return is_actual_cause(entry.model, entry.context, q.candidate, *q.phi, opt).is_cause;
}

/// Content of the shipped expected-verdicts sidecar for one entry: header
/// comments naming the model file, context, and ranking file, then one
/// `query TAB expected TAB locus` row per line.
inline std::string expected_file_text(const ExampleEntry& entry) {
    std::string s;
    s += "# model: " + entry.name + ".scm\n";
    s += "# context: " + entry.context_text + "\n";
    if (!entry.ranking_text.empty()) s += "# ranking: " + entry.name + ".ranking\n";
    for (const auto& row : entry.expected)
        s += row.query + "\t" + (row.expected ? "true" : "false") + "\t" + row.locus + "\n";
    return s;
}

}  // namespace causelab::corpus
