#include <gtest/gtest.h>

#include "causelab/corpus.hpp"
#include "causelab/formula.hpp"
#include "causelab/parse.hpp"
#include "generators.hpp"

using namespace causelab;

TEST(ParsePhi, DisjunctionOfEvents) {
    auto f = parse_event_formula("F=1 | F=2");
    ASSERT_EQ(f->kind, EventFormula::Kind::Or);
    EXPECT_EQ(f->lhs->event.variable, "F");
    EXPECT_EQ(f->lhs->event.value, "1");
    EXPECT_EQ(f->rhs->event.value, "2");
}

TEST(ParsePhi, Negation) {
    auto f = parse_event_formula("!(FB=1)");
    ASSERT_EQ(f->kind, EventFormula::Kind::Not);
    EXPECT_EQ(f->lhs->kind, EventFormula::Kind::Event);
    EXPECT_EQ(f->lhs->event.variable, "FB");
}

TEST(ParsePhi, ThreeLeafDisjunctionAssociatesLeft) {
    auto f = parse_event_formula("BMC=0 | BMC=1 | BMC=2");
    ASSERT_EQ(f->kind, EventFormula::Kind::Or);
    ASSERT_EQ(f->lhs->kind, EventFormula::Kind::Or);
    EXPECT_EQ(f->rhs->event.value, "2");
    EXPECT_EQ(f->lhs->rhs->event.value, "1");
}

TEST(ParsePhi, PrecedenceNotOverAndOverOr) {
    auto f = parse_event_formula("A=1 | B=2 & !C=3");
    ASSERT_EQ(f->kind, EventFormula::Kind::Or);
    ASSERT_EQ(f->rhs->kind, EventFormula::Kind::And);
    EXPECT_EQ(f->rhs->rhs->kind, EventFormula::Kind::Not);
}

TEST(ParsePhi, ErrorsCarryPosition) {
    try {
        parse_event_formula("FB=1 |\n  !");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.line, 2);
        EXPECT_GT(e.column, 1);
    }
    EXPECT_THROW(parse_event_formula("FB="), parse_error);
    EXPECT_THROW(parse_event_formula("(A=1"), parse_error);
    EXPECT_THROW(parse_event_formula("A==1"), parse_error);
    EXPECT_THROW(parse_event_formula("A=1 extra"), parse_error);
}

TEST(ParsePsi, SingleBasicFormula) {
    auto f = parse_causal_formula("[ML2<-0](FB=1)");
    ASSERT_EQ(f->kind, CausalFormula::Kind::Basic);
    EXPECT_EQ(f->basic.intervention.assignment.at("ML2"), "0");
    EXPECT_EQ(f->basic.body->event.variable, "FB");
}

TEST(ParsePsi, EmptyInterventionBrackets) {
    auto f = parse_causal_formula("[](FB=1)");
    ASSERT_EQ(f->kind, CausalFormula::Kind::Basic);
    EXPECT_TRUE(f->basic.intervention.empty());
}

TEST(ParsePsi, ConjunctionOfBasics) {
    auto f = parse_causal_formula("[V2<-0](P=1) & [V1<-0,V2<-0](!(P=1))");
    ASSERT_EQ(f->kind, CausalFormula::Kind::And);
    EXPECT_EQ(f->lhs->basic.intervention.assignment.size(), 1u);
    EXPECT_EQ(f->rhs->basic.intervention.assignment.size(), 2u);
    EXPECT_EQ(f->rhs->basic.body->kind, EventFormula::Kind::Not);
}

TEST(ParsePsi, Errors) {
    EXPECT_THROW(parse_causal_formula("[A<-1,A<-2](X=1)"), parse_error);
    EXPECT_THROW(parse_causal_formula("[A<-1]X=1"), parse_error);  // parens are mandatory
    EXPECT_THROW(parse_causal_formula("[A<1](X=1)"), parse_error);
    EXPECT_THROW(parse_causal_formula("FB=1"), parse_error);
}

TEST(RoundTrip, CorpusQueriesSurviveParsePrintParse) {
    for (const auto& row : corpus::verdict_table()) {
        auto q = corpus::parse_query(row.query);
        auto reparsed = parse_event_formula(to_string(*q.phi));
        EXPECT_TRUE(equal(*q.phi, *reparsed)) << row.query;
    }
}

TEST(RoundTrip, RandomEventFormulas) {
    gen::Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        auto ast = gen::random_event_ast(rng);
        auto reparsed = parse_event_formula(to_string(*ast));
        EXPECT_TRUE(equal(*ast, *reparsed)) << to_string(*ast);
    }
}

TEST(RoundTrip, RandomCausalFormulas) {
    gen::Rng rng(2025);
    for (int i = 0; i < 300; ++i) {
        auto ast = gen::random_causal_ast(rng);
        auto reparsed = parse_causal_formula(to_string(*ast));
        EXPECT_TRUE(equal(*ast, *reparsed)) << to_string(*ast);
    }
}

TEST(ParseModel, CommentsAndBlankLines) {
    CausalModel m = parse_model(
        "# header comment\n"
        "model \"demo\"\n"
        "\n"
        "exo U in {a, b} # trailing comment\n"
        "var X in {0, 1}\n"
        "eq X(U) = table { (a)->0; (b)->1 }\n");
    EXPECT_EQ(m.name, "demo");
    EXPECT_TRUE(validate_model(m).ok());
    EXPECT_EQ(solve(m, Context{{{"U", "b"}}}).assignment.at("X"), "1");
}

TEST(ParseModel, ExpressionOperators) {
    CausalModel m = parse_model(
        "exo U in {0, 1, 2}\n"
        "var A in {0, 1, 2}\n"
        "var B in {0, 1}\n"
        "var C in {0, 1, 2, 3, 4}\n"
        "eq A(U) = min(U + 1, 2)\n"
        "eq B(A, U) = ite(A == U, 1, 0)\n"
        "eq C(A, B) = max(A - B, 0) + 2\n");
    ASSERT_TRUE(validate_model(m).ok()) << validate_model(m).summary();
    World w = solve(m, Context{{{"U", "1"}}});
    EXPECT_EQ(w.assignment.at("A"), "2");
    EXPECT_EQ(w.assignment.at("B"), "0");
    EXPECT_EQ(w.assignment.at("C"), "4");
}

TEST(ParseModel, Errors) {
    EXPECT_THROW(parse_model("model \"a\"\nmodel \"b\"\n"), parse_error);
    EXPECT_THROW(parse_model("var A in {0,1}\nvar A in {0,1}\n"), parse_error);
    EXPECT_THROW(parse_model("frobnicate A\n"), parse_error);
    EXPECT_THROW(parse_model("model \"unterminated\n"), parse_error);
    EXPECT_THROW(parse_model("var A in {0,1}\neq A() < 1\n"), parse_error);
    try {
        parse_model("exo U in {a}\nvar X in {0,1}\neq X(U) = table { (a)->0 \n");
        FAIL();
    } catch (const parse_error& e) {
        EXPECT_EQ(e.line, 3);
    }
}

TEST(ParseAssignments, ContextAndCandidateSeparators) {
    Context ctx = parse_context("U=u11, V=3");
    EXPECT_EQ(ctx.assignment.at("U"), "u11");
    EXPECT_EQ(ctx.assignment.at("V"), "3");
    EXPECT_TRUE(parse_context("").assignment.empty());

    auto cand = parse_assignments("ML1=1&ML2=1", '&');
    EXPECT_EQ(cand.size(), 2u);
    EXPECT_THROW(parse_assignments("A=1,B=2", '&'), parse_error);
    EXPECT_THROW(parse_assignments("A=1&A=2", '&'), parse_error);
}

TEST(ParseRanking, LoansharkFile) {
    const auto& entry = corpus::load_example("finger_loanshark");
    RankingFunction rf = parse_ranking(entry.ranking_text);
    EXPECT_EQ(rf.ranks.size(), 16u);
    World waiting = parse_world("FS=1,LL=1,LC=0,FF=1");
    EXPECT_EQ(rf.rank_of(waiting), Rank::finite(corpus::kLoansharkFancifulRank));
    World unlisted = parse_world("FS=9,LL=9,LC=9,FF=9");
    EXPECT_TRUE(rf.rank_of(unlisted).is_infinite());
}

TEST(ParseRanking, Errors) {
    EXPECT_THROW(parse_ranking("A=1 5\n"), parse_error);        // no tab
    EXPECT_THROW(parse_ranking("A=1\t-3\n"), parse_error);      // negative
    EXPECT_THROW(parse_ranking("A=1\t5\nA=1\t6\n"), parse_error);  // duplicate world
    RankingFunction rf = parse_ranking("# only comments\n\nA=1\tinf\n");
    EXPECT_TRUE(rf.rank_of(parse_world("A=1")).is_infinite());
}

TEST(ParseRank, NaturalsAndInfinity) {
    EXPECT_EQ(parse_rank("7"), Rank::finite(7));
    EXPECT_TRUE(parse_rank("inf").is_infinite());
    EXPECT_THROW(parse_rank("-1"), parse_error);
    EXPECT_THROW(parse_rank("five"), parse_error);
    EXPECT_LT(Rank::finite(5), Rank::infinity());
}

TEST(ParseQuery, RankAnnotatedQueries) {
    auto q = corpus::parse_query("cause@5 FS=1 of FF=1");
    ASSERT_TRUE(q.rank.has_value());
    EXPECT_EQ(*q.rank, Rank::finite(5));
    auto qi = corpus::parse_query("cause@inf FS=1 of FF=1");
    EXPECT_TRUE(qi.rank->is_infinite());
    auto plain = corpus::parse_query("cause ML1=1 & ML2=1 of FB=1 | FB=0");
    EXPECT_FALSE(plain.rank.has_value());
    EXPECT_EQ(plain.candidate.conjuncts.size(), 2u);
    EXPECT_THROW(corpus::parse_query("cause ML1=1 FB=1"), parse_error);
}
