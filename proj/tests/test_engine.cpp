#include <gtest/gtest.h>

#include "causelab/corpus.hpp"
#include "causelab/engine.hpp"
#include "causelab/parse.hpp"
#include "causelab/verdict_io.hpp"
#include "generators.hpp"

using namespace causelab;

namespace {

const corpus::ExampleEntry& entry(const std::string& name) {
    return corpus::load_example(name);
}

CauseCandidate cand(const std::string& text) {
    return CauseCandidate{parse_assignments(text, '&')};
}

EventFormulaPtr phi(const std::string& text) { return parse_event_formula(text); }

Verdict decide(const std::string& example, const std::string& cand_text,
               const std::string& phi_text, CauseOptions opt = {}) {
    const auto& e = entry(example);
    return is_actual_cause(e.model, e.context, cand(cand_text), phi(phi_text), opt);
}

}  // namespace

TEST(Ac1, ActualWorldGate) {
    const auto& m1 = entry("forest_fire_disjunctive");
    EXPECT_TRUE(check_ac1(m1.model, m1.context, cand("ML1=1"), phi("FB=1")));
    EXPECT_FALSE(check_ac1(m1.model, m1.context, cand("ML1=0"), phi("FB=1")));
    const auto& m2 = entry("forest_fire_conjunctive");
    EXPECT_TRUE(check_ac1(m2.model, m2.context, cand("ML1=1&ML2=1"), phi("FB=1")));
}

TEST(Ac1, FailuresShortCircuitTheVerdict) {
    Verdict v = decide("forest_fire_disjunctive", "ML1=0", "FB=1");
    EXPECT_FALSE(v.is_cause);
    EXPECT_EQ(v.failed_clause, Clause::AC1);
    EXPECT_FALSE(v.witness.has_value());

    Verdict w = decide("forest_fire_disjunctive", "ML1=1", "FB=0");
    EXPECT_EQ(w.failed_clause, Clause::AC1);
}

TEST(Ac1, GateHoldsAcrossTheWholeCorpus) {
    // falsify either side of every table row's query: verdict must be AC1
    for (const auto& row : corpus::verdict_table()) {
        const auto& e = entry(row.example);
        auto q = corpus::parse_query(row.query);
        World actual = solve(e.model, e.context);

        CauseCandidate off = q.candidate;
        auto& [var, val] = *off.conjuncts.begin();
        for (const auto& other : e.model.signature.domains.at(var))
            if (other != *actual.value_of(var)) {
                val = other;
                break;
            }
        Verdict v = is_actual_cause(e.model, e.context, off, *q.phi);
        EXPECT_EQ(v.failed_clause, Clause::AC1) << row.example << "  " << row.query;

        Verdict w = is_actual_cause(e.model, e.context, q.candidate,
                                    *EventFormula::make_not(q.phi));
        if (!eval_event(actual, *q.phi)) continue;  // negation now holds; skip
        EXPECT_EQ(w.failed_clause, Clause::AC1) << row.example << "  " << row.query;
    }
}

TEST(Ac2Witness, ArsonContingencySatisfiesBothHalves) {
    const auto& e = entry("forest_fire_disjunctive");
    Witness w;
    w.w_set = {"ML2"};
    w.w_prime = {{"ML2", "0"}};
    w.x_prime = {{"ML1", "0"}};
    Ac2Check r = check_ac2_witness(e.model, e.context, cand("ML1=1"), phi("FB=1"), w);
    EXPECT_TRUE(r.a_holds);
    EXPECT_TRUE(r.b_holds);
}

TEST(Ac2Witness, SymmetricRockWitnessFailsOnRestoredBH) {
    const auto& e = entry("rock_throw_refined");
    Witness w;
    w.w_set = {"ST"};
    w.w_prime = {{"ST", "0"}};
    w.x_prime = {{"BT", "0"}};
    Ac2Check r = check_ac2_witness(e.model, e.context, cand("BT=1"), phi("BS=1"), w);
    EXPECT_TRUE(r.a_holds);
    EXPECT_FALSE(r.b_holds);
    ASSERT_TRUE(r.b_failing_subset.has_value());
    EXPECT_EQ(*r.b_failing_subset, std::vector<std::string>{"BH"});
}

TEST(Ac2Witness, MedicationSecondDoseFailsAtEmptySubset) {
    const auto& e = entry("medication");
    Witness w;
    w.w_set = {"TT"};
    w.w_prime = {{"TT", "1"}};
    w.x_prime = {{"MT", "0"}};
    Ac2Check r =
        check_ac2_witness(e.model, e.context, cand("MT=1"), phi("BMC=0 | BMC=1 | BMC=2"), w);
    EXPECT_FALSE(r.a_holds);  // Billy survives either setting of MT
    EXPECT_FALSE(r.b_holds);  // with MT back at 1, the second dose kills him
    ASSERT_TRUE(r.b_failing_subset.has_value());
    EXPECT_TRUE(r.b_failing_subset->empty());
}

TEST(Ac2Witness, MalformedWitnessesAreRejected) {
    const auto& e = entry("forest_fire_disjunctive");
    Witness overlap;
    overlap.w_set = {"ML1"};
    overlap.w_prime = {{"ML1", "0"}};
    overlap.x_prime = {{"ML1", "0"}};
    EXPECT_THROW(check_ac2_witness(e.model, e.context, cand("ML1=1"), phi("FB=1"), overlap),
                 input_error);

    Witness drifted;
    drifted.w_set = {"ML2"};
    drifted.w_prime = {{"ML2", "0"}};
    drifted.x_prime = {{"ML1", "0"}};
    drifted.z_star = {{"FB", "0"}};  // actual FB is 1
    EXPECT_THROW(check_ac2_witness(e.model, e.context, cand("ML1=1"), phi("FB=1"), drifted),
                 input_error);
}

TEST(FindWitness, ConjunctiveFireNeedsNoContingency) {
    const auto& e = entry("forest_fire_conjunctive");
    auto w = find_witness(e.model, e.context, cand("ML1=1"), phi("FB=1"));
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(w->w_set.empty());
}

TEST(FindWitness, NoPartitionRescuesBilly) {
    const auto& e = entry("rock_throw_refined");
    EXPECT_FALSE(find_witness(e.model, e.context, cand("BT=1"), phi("BS=1")).has_value());
}

TEST(FindWitness, VotingMachineUsesTheOtherVoter) {
    const auto& e = entry("voting_machine");
    auto w = find_witness(e.model, e.context, cand("V1=1"), phi("P=1"));
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->w_set, std::vector<std::string>{"V2"});
    EXPECT_EQ(w->w_prime.at("V2"), "0");
    EXPECT_EQ(w->z_star.at("M"), "2");
}

TEST(IsCause, SpecExampleBattery) {
    EXPECT_TRUE(decide("forest_fire_disjunctive", "ML1=1", "FB=1").is_cause);
    EXPECT_TRUE(decide("medication", "MT=1", "BMC=0").is_cause);
    EXPECT_FALSE(decide("medication", "MT=1", "BMC=0 | BMC=1 | BMC=2").is_cause);
    EXPECT_FALSE(decide("april_showers", "AS=1", "F=1 | F=2").is_cause);
    EXPECT_FALSE(decide("switch_3var", "F=1", "A=1").is_cause);
    EXPECT_FALSE(decide("finger_basic", "FS=1", "FF=1").is_cause);
    EXPECT_TRUE(decide("finger_loanshark", "FS=1", "FF=1").is_cause);

    Verdict sw = decide("switch_tracks", "F=1", "A=1");
    ASSERT_TRUE(sw.is_cause);
    EXPECT_EQ(sw.witness->w_set, std::vector<std::string>{"RT"});
    EXPECT_EQ(sw.witness->w_prime.at("RT"), "0");
}

TEST(IsCause, ConjunctionFailsMinimality) {
    Verdict v = decide("forest_fire_conjunctive", "ML1=1&ML2=1", "FB=1");
    EXPECT_FALSE(v.is_cause);
    EXPECT_EQ(v.failed_clause, Clause::AC3);
    ASSERT_TRUE(v.ac3_subset.has_value());
    EXPECT_EQ(v.ac3_subset->conjuncts, (std::map<std::string, Value>{{"ML1", "1"}}));
}

TEST(IsCause, ArsonWitnessSetsMatchTheNarrative) {
    Verdict v = decide("forest_fire_disjunctive", "ML1=1", "FB=1");
    ASSERT_TRUE(v.is_cause);
    EXPECT_EQ(v.witness->w_set, std::vector<std::string>{"ML2"});
    EXPECT_EQ(v.witness->w_prime.at("ML2"), "0");
    EXPECT_EQ(v.witness->x_prime.at("ML1"), "0");
    EXPECT_EQ(v.witness->z_star,
              (std::map<std::string, Value>{{"ML1", "1"}, {"FB", "1"}}));
    EXPECT_EQ(v.witness_class, WitnessClass::Contingent);
}

TEST(IsCause, MedicationAliveNearMissDiagnostic) {
    Verdict v = decide("medication", "MT=1", "BMC=0 | BMC=1 | BMC=2");
    EXPECT_EQ(v.failed_clause, Clause::AC2);
    ASSERT_TRUE(v.near_miss.has_value());
    ASSERT_TRUE(v.near_miss_failing_subset.has_value());
    EXPECT_TRUE(v.near_miss_failing_subset->empty());
    std::string text = render_verdict(v, false);
    EXPECT_NE(text.find("AC2(b) violated with Z' = {}"), std::string::npos);
}

TEST(IsCause, Ac3RenderingNamesTheSubset) {
    Verdict v = decide("forest_fire_disjunctive", "ML1=1&ML2=1", "FB=1");
    std::string text = render_verdict(v, false);
    EXPECT_NE(text.find("AC3: fails — subset {ML1=1} already a cause"), std::string::npos);
}

TEST(IsCause, TrivialSelfCausation) {
    EXPECT_TRUE(decide("forest_fire_disjunctive", "FB=1", "FB=1").is_cause);
    CauseOptions opt;
    opt.forbid_trivial = true;
    Verdict v = decide("forest_fire_disjunctive", "FB=1", "FB=1", opt);
    EXPECT_FALSE(v.is_cause);
    EXPECT_EQ(v.failed_clause, Clause::AC1);
    // a non-trivial cause is unaffected by the option
    EXPECT_TRUE(decide("forest_fire_disjunctive", "ML1=1", "FB=1", opt).is_cause);
}

TEST(IsCause, EmptyCandidateIsRejected) {
    const auto& e = entry("forest_fire_disjunctive");
    EXPECT_THROW(is_actual_cause(e.model, e.context, CauseCandidate{}, phi("FB=1")), input_error);
    EXPECT_THROW(is_actual_cause(e.model, e.context, cand("U=u11"), phi("FB=1")), input_error);
}

TEST(IsCause, StrictRetentionDropsTheMachineCauses) {
    CauseOptions strict;
    strict.strict_retention = true;
    EXPECT_FALSE(decide("voting_machine", "V1=1", "P=1", strict).is_cause);
    EXPECT_FALSE(decide("voting_machine", "V2=1", "P=1", strict).is_cause);
    // without the tally variable the strict variant is harmless
    EXPECT_TRUE(decide("voting_simple", "V1=1", "P=1", strict).is_cause);
    EXPECT_TRUE(decide("voting_machine", "V1=1", "P=1").is_cause);
}

TEST(IsCause, WitnessAllCollectsTheFullSet) {
    CauseOptions opt;
    opt.witness_all = true;
    Verdict v = decide("forest_fire_disjunctive", "ML1=1", "FB=1", opt);
    ASSERT_TRUE(v.is_cause);
    ASSERT_TRUE(v.all_witnesses.has_value());
    ASSERT_EQ(v.all_witnesses->size(), 1u);
    EXPECT_EQ(v.all_witnesses->front(), *v.witness);
    EXPECT_EQ(v.witness_class, WitnessClass::Contingent);

    const auto& e = entry("forest_fire_disjunctive");
    for (const auto& w : *v.all_witnesses) {
        Ac2Check r = check_ac2_witness(e.model, e.context, cand("ML1=1"), phi("FB=1"), w);
        EXPECT_TRUE(r.a_holds && r.b_holds);
    }
}

TEST(Enumerate, ForestFireCausesWithAndWithoutTrivial) {
    const auto& e = entry("forest_fire_disjunctive");
    auto causes = enumerate_causes(e.model, e.context, phi("FB=1"));
    std::vector<std::string> names;
    for (const auto& [c, w] : causes) names.push_back(c.conjuncts.begin()->first);
    EXPECT_EQ(names, (std::vector<std::string>{"FB", "ML1", "ML2"}));

    CauseOptions no_trivial;
    no_trivial.forbid_trivial = true;
    auto strict = enumerate_causes(e.model, e.context, phi("FB=1"), no_trivial);
    EXPECT_EQ(strict.size(), 2u);
}

TEST(Enumerate, RefinedRockKeepsSuzyDropsBilly) {
    const auto& e = entry("rock_throw_refined");
    auto causes = enumerate_causes(e.model, e.context, phi("BS=1"));
    bool has_st = false, has_bt = false;
    for (const auto& [c, w] : causes) {
        if (c.conjuncts.count("ST")) has_st = true;
        if (c.conjuncts.count("BT")) has_bt = true;
    }
    EXPECT_TRUE(has_st);
    EXPECT_FALSE(has_bt);
}

TEST(Enumerate, FalseOutcomeYieldsNothing) {
    const auto& e = entry("forest_fire_disjunctive");
    EXPECT_TRUE(enumerate_causes(e.model, e.context, phi("FB=0")).empty());
}

TEST(ActiveProcesses, SpecExamples) {
    const auto& m1 = entry("forest_fire_disjunctive");
    auto p1 = active_processes(m1.model, m1.context, cand("ML1=1"), phi("FB=1"));
    ASSERT_EQ(p1.size(), 1u);
    EXPECT_EQ(p1[0], (std::vector<std::string>{"ML1", "FB"}));

    const auto& vm = entry("voting_machine");
    auto p2 = active_processes(vm.model, vm.context, cand("V1=1"), phi("P=1"));
    ASSERT_EQ(p2.size(), 1u);
    EXPECT_EQ(p2[0], (std::vector<std::string>{"V1", "M", "P"}));

    const auto& sw = entry("switch_tracks");
    auto p3 = active_processes(sw.model, sw.context, cand("F=1"), phi("A=1"));
    ASSERT_EQ(p3.size(), 1u);
    EXPECT_EQ(p3[0], (std::vector<std::string>{"F", "LT", "A"}));
}

TEST(ActiveProcesses, RequiresAc1) {
    const auto& e = entry("forest_fire_disjunctive");
    EXPECT_THROW(active_processes(e.model, e.context, cand("ML1=0"), phi("FB=1")), input_error);
}

TEST(Classify, FreezingAndContingentWitnesses) {
    const auto& e = entry("forest_fire_disjunctive");
    Witness contingent;
    contingent.w_set = {"ML2"};
    contingent.w_prime = {{"ML2", "0"}};
    contingent.x_prime = {{"ML1", "0"}};
    EXPECT_EQ(classify_witness(e.model, e.context, contingent), WitnessClass::Contingent);

    Witness empty_w;
    empty_w.x_prime = {{"ML1", "0"}};
    EXPECT_EQ(classify_witness(e.model, e.context, empty_w), WitnessClass::Freezing);

    Verdict med = decide("medication", "MT=1", "BMC=0");
    ASSERT_TRUE(med.is_cause);
    EXPECT_TRUE(med.witness->w_set.empty());
    EXPECT_EQ(med.witness_class, WitnessClass::Freezing);
}

TEST(Rank, LoansharkThresholds) {
    const auto& e = entry("finger_loanshark");
    const auto& rf = *e.ranking;
    auto q = cand("FS=1");
    auto goal = phi("FF=1");
    EXPECT_FALSE(is_cause_at_rank(e.model, e.context, rf, Rank::finite(0), q, goal).is_cause);
    EXPECT_FALSE(is_cause_at_rank(e.model, e.context, rf, Rank::finite(4), q, goal).is_cause);
    EXPECT_TRUE(is_cause_at_rank(e.model, e.context, rf, Rank::finite(5), q, goal).is_cause);
    EXPECT_TRUE(is_cause_at_rank(e.model, e.context, rf, Rank::infinity(), q, goal).is_cause);

    Verdict blocked = is_cause_at_rank(e.model, e.context, rf, Rank::finite(0), q, goal);
    EXPECT_EQ(blocked.failed_clause, Clause::AC2);
}

TEST(Rank, AlternativeScopeAgreesOnTheCorpus) {
    const auto& e = entry("finger_loanshark");
    CauseOptions opt;
    opt.rank_scope = RankScope::WithCandidate;
    EXPECT_FALSE(is_cause_at_rank(e.model, e.context, *e.ranking, Rank::finite(0), cand("FS=1"),
                                  phi("FF=1"), opt)
                     .is_cause);
    EXPECT_TRUE(is_cause_at_rank(e.model, e.context, *e.ranking, Rank::finite(5), cand("FS=1"),
                                 phi("FF=1"), opt)
                    .is_cause);
}

TEST(Rank, EmptyContingencyIsAdmittedAtRankZero) {
    // the contingency world of W = {} is the actual world, rank 0
    const auto& e = entry("medication");
    RankingFunction rf;  // nothing listed: everything but the actual world is infinite
    Verdict v = is_cause_at_rank(e.model, e.context, rf, Rank::finite(0), cand("MT=1"),
                                 phi("BMC=0"));
    EXPECT_TRUE(v.is_cause);
    EXPECT_TRUE(v.witness->w_set.empty());
}

TEST(Rank, MalformedRankingIsRejected) {
    const auto& e = entry("finger_loanshark");
    RankingFunction partial;
    partial.ranks[parse_world("FS=1")] = Rank::finite(1);
    EXPECT_THROW(
        is_cause_at_rank(e.model, e.context, partial, Rank::finite(1), cand("FS=1"), phi("FF=1")),
        input_error);
}

TEST(Guard, OversizedSearchAbortsUpFront) {
    CausalModel chain;
    chain.name = "chain";
    chain.signature.exogenous = {"U"};
    chain.signature.domains["U"] = {"0", "1"};
    std::string prev = "U";
    for (int i = 0; i < 26; ++i) {
        std::string name = "V" + std::to_string(i);
        chain.signature.endogenous.push_back(name);
        chain.signature.domains[name] = {"0", "1"};
        chain.equations.push_back(StructuralEquation{name, {prev}, ExprBody{Expr::var(prev)}});
        prev = name;
    }
    ASSERT_TRUE(validate_model(chain).ok());
    Context ctx{{{"U", "1"}}};
    EXPECT_THROW(
        is_actual_cause(chain, ctx, CauseCandidate{{{"V0", "1"}}}, phi("V25=1")),
        guard_error);

    CauseOptions tight;
    tight.guard = 1;
    EXPECT_THROW(decide("forest_fire_disjunctive", "ML1=1", "FB=1", tight), guard_error);
}

TEST(Determinism, IdenticalQueriesProduceIdenticalVerdicts) {
    Verdict a = decide("voting_machine", "V1=1", "P=1");
    Verdict b = decide("voting_machine", "V1=1", "P=1");
    EXPECT_EQ(a, b);
    EXPECT_EQ(verdict_to_json(a).dump(2), verdict_to_json(b).dump(2));
    EXPECT_EQ(render_verdict(a, false), render_verdict(b, false));
}

TEST(VerdictJson, DocumentedFieldSetAndRoundTrip) {
    Verdict v = decide("forest_fire_disjunctive", "ML1=1", "FB=1");
    auto j = verdict_to_json(v);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"is_cause", "failed_clause", "witness",
                                              "witness_class", "search_stats"}));
    std::vector<std::string> wkeys;
    for (auto it = j["witness"].begin(); it != j["witness"].end(); ++it)
        wkeys.push_back(it.key());
    EXPECT_EQ(wkeys, (std::vector<std::string>{"W", "w_prime", "x_prime", "z_star"}));
    EXPECT_TRUE(j["search_stats"].contains("triples_examined"));
    EXPECT_TRUE(j["search_stats"].contains("subsets_checked"));

    auto reparsed = nlohmann::ordered_json::parse(j.dump(2));
    EXPECT_EQ(reparsed.dump(2), j.dump(2));

    CauseOptions opt;
    opt.witness_all = true;
    auto with_all = verdict_to_json(decide("forest_fire_disjunctive", "ML1=1", "FB=1", opt));
    EXPECT_TRUE(with_all.contains("all_witnesses"));
}

TEST(Determinism, StatsAreReproducible) {
    Verdict a = decide("rock_throw_refined", "ST=1", "BS=1");
    Verdict b = decide("rock_throw_refined", "ST=1", "BS=1");
    EXPECT_EQ(a.stats.triples_examined, b.stats.triples_examined);
    EXPECT_EQ(a.stats.subsets_checked, b.stats.subsets_checked);
    EXPECT_GT(a.stats.triples_examined, 0u);
}
