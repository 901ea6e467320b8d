#include <gtest/gtest.h>

#include "causelab/corpus.hpp"
#include "causelab/formula.hpp"
#include "causelab/parse.hpp"
#include "generators.hpp"

using namespace causelab;

namespace {

const corpus::ExampleEntry& entry(const std::string& name) {
    return corpus::load_example(name);
}

CausalFormulaPtr bare(EventFormulaPtr phi) {
    return CausalFormula::make_basic(BasicCausalFormula{Intervention{}, std::move(phi)});
}

}  // namespace

TEST(EvalEvent, LeafAndConnectives) {
    World w1{{{"FB", "1"}}};
    EXPECT_TRUE(eval_event(w1, *parse_event_formula("FB=1")));
    World w2{{{"F", "2"}}};
    EXPECT_TRUE(eval_event(w2, *parse_event_formula("F=1 | F=2")));
    World w3{{{"BMC", "3"}}};
    EXPECT_FALSE(eval_event(w3, *parse_event_formula("BMC=0 | BMC=1 | BMC=2")));
    EXPECT_TRUE(eval_event(w3, *parse_event_formula("!(BMC=0) & !(BMC=1)")));
}

TEST(EvalEvent, MissingVariableIsAnError) {
    World w{{{"FB", "1"}}};
    EXPECT_THROW(eval_event(w, *parse_event_formula("ML1=1")), input_error);
}

TEST(Satisfies, ArsonCounterfactuals) {
    const auto& disj = entry("forest_fire_disjunctive");
    const auto& conj = entry("forest_fire_conjunctive");
    auto psi = parse_causal_formula("[ML2<-0](FB=1)");
    EXPECT_TRUE(satisfies(disj.model, disj.context, psi));
    EXPECT_FALSE(satisfies(conj.model, conj.context, psi));
}

TEST(Satisfies, TautologyHoldsEverywhere) {
    for (const auto& name : corpus::example_names()) {
        const auto& e = entry(name);
        const std::string var = e.model.signature.endogenous.front();
        const std::string val = e.model.signature.domains.at(var).front();
        auto psi = parse_causal_formula("[](" + var + "=" + val + ") | !([](" + var + "=" + val + "))");
        EXPECT_TRUE(satisfies(e.model, e.context, psi)) << name;
    }
}

TEST(Satisfies, SignatureMismatchNamesTheSymbol) {
    const auto& e = entry("forest_fire_disjunctive");
    try {
        satisfies(e.model, e.context, parse_causal_formula("[](NOPE=1)"));
        FAIL();
    } catch (const input_error& err) {
        EXPECT_NE(std::string(err.what()).find("NOPE"), std::string::npos);
    }
    // primitive events range over endogenous variables only
    EXPECT_THROW(satisfies(e.model, e.context, parse_causal_formula("[](U=u11)")), input_error);
    EXPECT_THROW(satisfies(e.model, e.context, parse_causal_formula("[](FB=9)")), input_error);
    EXPECT_THROW(satisfies(e.model, e.context, parse_causal_formula("[U<-u00](FB=1)")),
                 input_error);
}

TEST(Satisfies, ConnectivesAreClassical) {
    gen::Rng rng(77);
    for (const auto& name : corpus::example_names()) {
        const auto& e = entry(name);
        World actual = solve(e.model, e.context);
        for (int i = 0; i < 20; ++i) {
            auto phi1 = gen::random_phi(rng, e.model, actual);
            auto phi2 = gen::random_phi(rng, e.model, actual);
            auto psi1 = bare(phi1);
            auto psi2 = bare(phi2);
            const bool a = satisfies(e.model, e.context, psi1);
            const bool b = satisfies(e.model, e.context, psi2);
            EXPECT_EQ(satisfies(e.model, e.context, CausalFormula::make_and(psi1, psi2)), a && b);
            EXPECT_EQ(satisfies(e.model, e.context, CausalFormula::make_or(psi1, psi2)), a || b);
            EXPECT_EQ(satisfies(e.model, e.context, CausalFormula::make_not(psi1)), !a);
        }
    }
}

TEST(Satisfies, EmptyInterventionMatchesDirectEvaluation) {
    gen::Rng rng(78);
    for (const auto& name : corpus::example_names()) {
        const auto& e = entry(name);
        World actual = solve(e.model, e.context);
        for (int i = 0; i < 20; ++i) {
            auto phi = gen::random_phi(rng, e.model, actual);
            EXPECT_EQ(satisfies(e.model, e.context, bare(phi)), eval_event(actual, *phi)) << name;
        }
    }
}

TEST(Satisfies, InterventionComposesWithSubmodels) {
    gen::Rng rng(79);
    for (const auto& name : corpus::example_names()) {
        const auto& e = entry(name);
        World actual = solve(e.model, e.context);
        const auto& endo = e.model.signature.endogenous;
        for (int i = 0; i < 12; ++i) {
            Intervention iv;
            const int k = rng.below(3);
            for (int j = 0; j < k; ++j) {
                const auto& var = endo[rng.below(static_cast<int>(endo.size()))];
                const auto& dom = e.model.signature.domains.at(var);
                iv.assignment[var] = dom[rng.below(static_cast<int>(dom.size()))];
            }
            auto phi = gen::random_phi(rng, e.model, actual);
            auto inside = CausalFormula::make_basic(BasicCausalFormula{iv, phi});
            EXPECT_EQ(satisfies(e.model, e.context, inside),
                      satisfies(intervene(e.model, iv), e.context, bare(phi)))
                << name;
        }
    }
}
