#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "causelab/compile.hpp"
#include "causelab/corpus.hpp"
#include "causelab/parse.hpp"

using namespace causelab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    EXPECT_TRUE(in.good()) << path;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kCorpusDir = CAUSELAB_CORPUS_DIR;

}  // namespace

TEST(Registry, ThirteenEntries) {
    auto names = corpus::example_names();
    EXPECT_EQ(names.size(), 13u);
    std::set<std::string> set(names.begin(), names.end());
    EXPECT_TRUE(set.count("forest_fire_disjunctive"));
    EXPECT_TRUE(set.count("voting_machine"));
    EXPECT_TRUE(set.count("rock_throw_threeval"));
    EXPECT_TRUE(set.count("finger_loanshark"));
}

TEST(Registry, UnknownNameListsAlternatives) {
    try {
        corpus::load_example("nope");
        FAIL();
    } catch (const input_error& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("voting_machine"), std::string::npos);
        EXPECT_NE(msg.find("medication"), std::string::npos);
    }
}

TEST(Registry, EveryModelValidatesCleanly) {
    for (const auto& name : corpus::example_names()) {
        const auto& e = corpus::load_example(name);
        ValidationReport rep = validate_model(e.model);
        EXPECT_TRUE(rep.ok()) << name << ": " << rep.summary();
        // the canonical context is total and in-domain
        EXPECT_NO_THROW(solve(e.model, e.context)) << name;
    }
}

TEST(Registry, DisjunctiveFireEquationMatchesTheStory) {
    const auto& e = corpus::load_example("forest_fire_disjunctive");
    for (const auto& u : e.model.signature.domains.at("U")) {
        Context ctx{{{"U", u}}};
        World out = solve(intervene(e.model, Intervention{{{"ML1", "0"}, {"ML2", "0"}}}), ctx);
        EXPECT_EQ(out.assignment.at("FB"), "0");
        World on = solve(intervene(e.model, Intervention{{{"ML1", "1"}}}), ctx);
        EXPECT_EQ(on.assignment.at("FB"), "1");
    }
}

TEST(Registry, VotingMachineTabulatesTheVotes) {
    const auto& e = corpus::load_example("voting_machine");
    for (const auto& v1 : {"0", "1"})
        for (const auto& v2 : {"0", "1"}) {
            World w = solve(intervene(e.model, Intervention{{{"V1", v1}, {"V2", v2}}}), e.context);
            const int m = std::stoi(w.assignment.at("M"));
            EXPECT_EQ(m, std::stoi(std::string(v1)) + std::stoi(std::string(v2)));
            EXPECT_EQ(w.assignment.at("P"), m >= 1 ? "1" : "0");
        }
}

TEST(Registry, ThreeValuedBottle) {
    const auto& e = corpus::load_example("rock_throw_threeval");
    EXPECT_EQ(e.model.signature.domains.at("BS"), (std::vector<Value>{"0", "1", "2"}));
    World w = solve(intervene(e.model, Intervention{{{"ST", "0"}}}), e.context);
    EXPECT_EQ(w.assignment.at("BS"), "2");  // Billy's rock shatters it instead
}

TEST(Registry, MedicationOutcomesFollowTheStory) {
    const auto& e = corpus::load_example("medication");
    auto outcome = [&](const char* mt, const char* tt) {
        World w = solve(intervene(e.model, Intervention{{{"MT", mt}, {"TT", tt}}}), e.context);
        return w.assignment.at("BMC");
    };
    EXPECT_EQ(outcome("1", "0"), "0");
    EXPECT_EQ(outcome("0", "1"), "1");
    EXPECT_EQ(outcome("0", "0"), "2");
    EXPECT_EQ(outcome("1", "1"), "3");
}

TEST(VerdictTable, ShapeAndParseability) {
    auto table = corpus::verdict_table();
    EXPECT_GE(table.size(), 16u);
    const auto name_list = corpus::example_names();
    std::set<std::string> names(name_list.begin(), name_list.end());
    for (const auto& row : table) {
        EXPECT_TRUE(names.count(row.example)) << row.example;
        EXPECT_FALSE(row.locus.empty()) << row.query;
        EXPECT_NO_THROW(corpus::parse_query(row.query)) << row.query;
    }
    // specific rows the table must carry
    auto has = [&](const std::string& ex, const std::string& q, bool expected) {
        for (const auto& row : table)
            if (row.example == ex && row.query == q && row.expected == expected) return true;
        return false;
    };
    EXPECT_TRUE(has("rock_throw_refined", "cause ST=1 of BS=1", true));
    EXPECT_TRUE(has("rock_throw_threeval", "cause BT=1 of BS=1", false));
    EXPECT_TRUE(has("switch_3var", "cause F=1 of A=1", false));
}

TEST(VerdictTable, EngineReproducesEveryRow) {
    for (const auto& row : corpus::verdict_table()) {
        const auto& e = corpus::load_example(row.example);
        auto q = corpus::parse_query(row.query);
        EXPECT_EQ(corpus::run_query(e, q), row.expected) << row.example << "  " << row.query;
    }
}

TEST(ShippedFiles, ModelFilesMatchTheRegistryByteForByte) {
    for (const auto& name : corpus::example_names()) {
        const auto& e = corpus::load_example(name);
        EXPECT_EQ(slurp(kCorpusDir + "/" + name + ".scm"), e.model_text) << name;
        EXPECT_EQ(slurp(kCorpusDir + "/" + name + ".expected"), corpus::expected_file_text(e))
            << name;
        if (!e.ranking_text.empty()) {
            EXPECT_EQ(slurp(kCorpusDir + "/" + name + ".ranking"), e.ranking_text) << name;
        }
    }
}

TEST(ShippedFiles, ModelFilesReparseToTheRegistryModels) {
    for (const auto& name : corpus::example_names()) {
        const auto& e = corpus::load_example(name);
        CausalModel reparsed = parse_model(slurp(kCorpusDir + "/" + name + ".scm"));
        EXPECT_EQ(reparsed, e.model) << name;
    }
}

TEST(ShippedFiles, ExpectedSidecarsRoundTrip) {
    for (const auto& name : corpus::example_names()) {
        const auto& e = corpus::load_example(name);
        const std::string text = slurp(kCorpusDir + "/" + name + ".expected");
        std::istringstream in(text);
        std::string line;
        std::size_t row_idx = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto t1 = line.find('\t');
            const auto t2 = line.find('\t', t1 + 1);
            ASSERT_NE(t1, std::string::npos);
            ASSERT_NE(t2, std::string::npos);
            ASSERT_LT(row_idx, e.expected.size());
            EXPECT_EQ(line.substr(0, t1), e.expected[row_idx].query);
            EXPECT_EQ(line.substr(t1 + 1, t2 - t1 - 1),
                      e.expected[row_idx].expected ? "true" : "false");
            EXPECT_EQ(line.substr(t2 + 1), e.expected[row_idx].locus);
            ++row_idx;
        }
        EXPECT_EQ(row_idx, e.expected.size()) << name;
    }
}

TEST(Ranking, ActualWorldRanksZeroAndSetsTakeTheMin) {
    const auto& e = corpus::load_example("finger_loanshark");
    World actual = solve(e.model, e.context);
    EXPECT_EQ(e.ranking->rank_of(actual), Rank::finite(0));

    World fanciful = parse_world("FS=1,LL=1,LC=0,FF=1");
    EXPECT_EQ(e.ranking->rank_of(std::vector<World>{actual, fanciful}), Rank::finite(0));
    EXPECT_EQ(e.ranking->rank_of(std::vector<World>{fanciful}),
              Rank::finite(corpus::kLoansharkFancifulRank));
    EXPECT_TRUE(e.ranking->rank_of(std::vector<World>{}).is_infinite());
}

TEST(ModuleBoundary, OracleDoesNotIncludeTheEngine) {
    // the oracle must stay an independent transcription of the definition
    const std::string path = kCorpusDir + "/../include/causelab/oracle.hpp";
    const std::string src = slurp(path);
    EXPECT_FALSE(src.empty());
    EXPECT_EQ(src.find("#include \"causelab/engine.hpp\""), std::string::npos);
}
