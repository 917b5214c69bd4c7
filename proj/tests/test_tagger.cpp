#include "helpers.hpp"

#include "tbl/incremental.hpp"
#include "tbl/tagger.hpp"

#include <doctest.h>

using namespace tbl;
using tbl::testing::T;
using tbl::testing::currents;

namespace {

const char* kSix = "the/DT can/NN\nthe/DT can/NN\nI/PRP can/MD\n";

Lexicon six_lexicon() {
    Lexicon lex(T("NN"));
    lex.add("the", T("DT"));
    lex.add("I", T("PRP"));
    lex.add("can", T("MD"), 3);
    return lex;
}

} // namespace

TEST_CASE("tag") {
    const auto corpus = parse_corpus(kSix);
    Model model;
    model.lexicon = six_lexicon();

    SUBCASE("no rules gives the baseline") {
        const auto out = tag(model, corpus);
        CHECK(currents(out) == std::vector<Tag>{T("DT"), T("MD"), T("DT"), T("MD"), T("PRP"), T("MD")});
        CHECK(accuracy(out) == doctest::Approx(4.0 / 6.0));
    }
    SUBCASE("rules apply in order") {
        model.rules = {decode("MD>NN @ -1:DT")};
        const auto out = tag(model, corpus);
        CHECK(accuracy(out) == 1.0);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.tokens()[i].truth == corpus.tokens()[i].truth);
    }
    SUBCASE("unknown words get the default tag") {
        const auto out = tag(model, parse_corpus("zebra", CorpusFormat::Raw));
        CHECK(out.tokens()[0].current == T("NN"));
    }
    SUBCASE("an empty corpus stays empty") {
        CHECK(tag(model, Corpus{}).size() == 0);
    }
}

TEST_CASE("replaying a trained model reproduces the trainer's tags") {
    for (std::uint64_t seed = 600; seed < 612; ++seed) {
        auto rc = tbl::testing::random_case(seed);
        CAPTURE(rc.description);
        auto trained = rc.corpus;
        const auto r = train_incremental(trained, rc.lexicon, rc.config);
        CHECK(currents(tag(r.model, rc.corpus)) == currents(trained));
    }
}

TEST_CASE("evaluate_curve") {
    const auto corpus = parse_corpus(kSix);
    Model model;
    model.lexicon = six_lexicon();
    model.rules = {decode("MD>NN @ -1:DT")};

    SUBCASE("training corpus") {
        const auto curve = evaluate_curve(model, corpus);
        REQUIRE(curve.size() == 2);
        CHECK(curve[0].pass == 0);
        CHECK(curve[0].train_acc == doctest::Approx(4.0 / 6.0));
        CHECK(curve[1].train_acc == 1.0);
        CHECK_FALSE(curve[1].test_acc);
    }
    SUBCASE("initially wrong scope") {
        const auto curve = evaluate_curve(model, corpus, std::nullopt, AccuracyScope::InitiallyWrong);
        CHECK(curve[0].train_acc == 0.0);
        CHECK(curve[1].train_acc == 1.0);
    }
    SUBCASE("test corpus") {
        const auto test = parse_corpus("the/DT can/MD");
        const auto curve = evaluate_curve(model, corpus, test);
        CHECK(*curve[0].test_acc == 1.0);
        CHECK(*curve[1].test_acc == 0.5);
    }
    SUBCASE("zero rules gives one point") {
        model.rules.clear();
        CHECK(evaluate_curve(model, corpus).size() == 1);
    }
}

TEST_CASE("curve sweep agrees with tagging each prefix from scratch") {
    for (std::uint64_t seed = 700; seed < 706; ++seed) {
        auto rc = tbl::testing::random_case(seed);
        CAPTURE(rc.description);
        auto trained = rc.corpus;
        const auto r = train_naive(trained, rc.lexicon, rc.config);
        const auto curve = evaluate_curve(r.model, rc.corpus, rc.corpus);
        REQUIRE(curve.size() == r.model.rules.size() + 1);
        for (std::size_t k = 0; k < curve.size(); k += 1 + curve.size() / 8) {
            Model prefix = r.model;
            prefix.rules.resize(k);
            const double expect = accuracy(tag(prefix, rc.corpus));
            CHECK(curve[k].train_acc == expect);
            CHECK(*curve[k].test_acc == expect);
            CHECK(r.curve[k].train_acc == expect);
        }
    }
}
