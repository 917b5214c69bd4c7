#include "helpers.hpp"

#include "tbl/errors.hpp"

#include <doctest.h>

#include <set>

using namespace tbl;
using tbl::testing::T;

namespace {

Rule md_to_nn_after_dt() { return decode("MD>NN @ -1:DT"); }

// "the can . the can" with "can" guessed MD.
Corpus two_can_corpus() {
    auto c = parse_corpus("the/DT can/NN\nthe/DT can/NN\n");
    Lexicon lex(T("NN"));
    lex.add("the", T("DT"));
    lex.add("can", T("MD"));
    baseline_assign(c, lex);
    return c;
}

} // namespace

TEST_CASE("templates validate positions") {
    CHECK(Template({-1}).span() == 1);
    CHECK(Template({2, -1}).positions()[0] == -1);
    CHECK(Template({-5, 5}).span() == 5);
    CHECK_THROWS_AS(Template({0}), ParseError);
    CHECK_THROWS_AS(Template({1, 1}), ParseError);
    CHECK_THROWS_AS(Template({}), ParseError);
    CHECK_THROWS_AS(Template({-6}, kDefaultWindow), ParseError);
}

TEST_CASE("template list parsing") {
    const auto defaults = Template::parse_list("-1; -2; -2,-1; +1; +2; +1,+2; -1,+1");
    CHECK(defaults == Template::default_set());
    CHECK(Template::parse_list("-5,5").front().span() == 5);
    CHECK(Template::format_list(defaults) == "-1; -2; -2,-1; +1; +2; +1,+2; -1,+1");
    CHECK_THROWS_AS(Template::parse_list("-1;;+1"), ParseError);
    CHECK_THROWS_AS(Template::parse_list("-1; x"), ParseError);
    CHECK_THROWS_AS(Template::parse_list("-1; -1"), ParseError);
    CHECK_THROWS_AS(Template::parse_list(""), ParseError);
}

TEST_CASE("instantiate") {
    auto c = parse_corpus("the/DT can/NN");
    c.tokens()[1].current = T("MD");
    const auto r = instantiate(Template({-1}), c, {0, 1});
    REQUIRE(r);
    CHECK(encode(*r) == "MD>NN @ -1:DT");

    CHECK_FALSE(instantiate(Template({-1}), c, {0, 0}));

    c.tokens()[0].current = T("NN");
    const auto first = instantiate(Template({-1}), c, {0, 0});
    REQUIRE(first);
    CHECK(first->context[0].tag == Tag::boundary());
}

TEST_CASE("matches and classify_effect") {
    auto c = parse_corpus("the/DT can/NN\ncan/NN\nthe/DT can/MD\nthe/DT can/VB");
    for (auto& t : c.tokens())
        if (t.word == "can")
            t.current = T("MD");
    const auto rule = md_to_nn_after_dt();
    CHECK(matches(rule, c, {0, 1}));
    CHECK_FALSE(matches(rule, c, {0, 0}));
    CHECK_FALSE(matches(rule, c, {1, 0}));

    CHECK(classify_effect(rule, c, {0, 1}) == Effect::Positive);
    CHECK(classify_effect(rule, c, {2, 1}) == Effect::Negative);
    CHECK(classify_effect(rule, c, {3, 1}) == Effect::Neutral);
    CHECK(classify_effect(rule, c, {1, 0}) == Effect::NoMatch);
}

TEST_CASE("score_rule") {
    const auto c = two_can_corpus();
    CHECK(score_rule(md_to_nn_after_dt(), c) == RuleScore{2, 0, 0});
    CHECK(score_rule(decode("VB>NN @ -1:DT"), c) == RuleScore{});

    RuleScore s{113, 13, 0};
    CHECK(s.score() == 100);
}

TEST_CASE("apply_rule uses snapshot semantics") {
    auto c = two_can_corpus();
    const auto changed = apply_rule(md_to_nn_after_dt(), c);
    CHECK(changed == std::vector<Site>{{0, 1}, {1, 1}});
    CHECK(error_count(c) == 0);
    CHECK(apply_rule(md_to_nn_after_dt(), c).empty());

    // Rewriting site 1 breaks the match at site 2, but both were matched
    // against the pre-application tags.
    auto d = parse_corpus("x/S y/U z/U");
    for (auto& t : d.tokens())
        t.current = T("T");
    const auto overlap = apply_rule(decode("T>U @ -1:T"), d);
    CHECK(overlap == std::vector<Site>{{0, 1}, {0, 2}});
    CHECK(d.tokens()[2].current == T("U"));
}

TEST_CASE("error count drops by exactly the net score") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rc = tbl::testing::random_case(seed);
        baseline_assign(rc.corpus, rc.lexicon);
        for (const auto& cand : enumerate_candidates(rc.corpus, rc.config.templates)) {
            auto copy = rc.corpus;
            const auto before = error_count(copy);
            const auto changed = apply_rule(cand.rule, copy);
            std::size_t fixed = 0;
            for (const auto& s : changed)
                fixed += copy.at(s).truth == cand.rule.to;
            CHECK(fixed == cand.score.pos);
            CHECK(static_cast<std::int64_t>(before) - static_cast<std::int64_t>(error_count(copy)) ==
                  cand.score.score());
            break;
        }
    }
}

TEST_CASE("encode / decode") {
    const auto rule = md_to_nn_after_dt();
    CHECK(rule.from == T("MD"));
    CHECK(rule.to == T("NN"));
    REQUIRE(rule.context.size() == 1);
    CHECK(rule.context[0].offset == -1);
    CHECK(encode(rule) == "MD>NN @ -1:DT");
    CHECK(decode(encode(rule)) == rule);

    const auto wide = decode("NN>VB @ -5:*BOUNDARY*,+5:,");
    CHECK(wide.context[0].tag == Tag::boundary());
    CHECK(wide.context[1].tag == T(","));
    CHECK(encode(wide) == "NN>VB @ -5:*BOUNDARY*,+5:,");

    const auto punct = decode(",>: @ -1:,,+1::");
    CHECK(punct.from == T(","));
    CHECK(punct.to == T(":"));
    CHECK(punct.context[0].tag == T(","));
    CHECK(punct.context[1].tag == T(":"));

    for (const char* bad : {"", "MD>NN", "MD>NN @ ", "MD>MD @ -1:DT", ">NN @ -1:DT", "MD> @ -1:DT",
                            "MD>NN @ 1:DT", "MD>NN @ -1:", "MD>NN @ +1:A,-1:B", "MD>NN @ -1:A,-1:B",
                            "MD>NN @ 0:A", "*BOUNDARY*>NN @ -1:A", "MD>NN @ -1:DT,+1:"})
        CHECK_THROWS_AS(decode(bad), ParseError);
}

TEST_CASE("five-slot rendering") {
    CHECK(render_slots(decode("TO>IN @ +1:AT")) == "— — TO/IN AT —");
    CHECK(render_slots(decode("CS>QL @ +2:CS")) == "— — CS/QL — CS");
    CHECK(render_slots(decode("NN>VB @ -5:A,+5:B")) == "NN>VB @ -5:A,+5:B");
}

TEST_CASE("encode/decode is a bijection on random rules") {
    Rng rng(2024);
    const std::vector<std::string> symbols{"NN", "VB", ",", ":", "PP$", "-LRB-", "A>B", "x,y", "*", "''"};
    std::set<std::string> codes;
    std::set<std::size_t> hashes;
    for (int i = 0; i < 2000; ++i) {
        Rule r;
        // '>' may appear in context tags but not in from/to.
        do {
            r.from = T(symbols[rng.below(symbols.size())].c_str());
            r.to = T(symbols[rng.below(symbols.size())].c_str());
        } while (r.from == r.to || r.from.symbol().find('>') != std::string::npos ||
                 r.to.symbol().find('>') != std::string::npos);
        std::vector<ContextEntry> ctx;
        const auto n = 1 + rng.below(3);
        std::set<int> used;
        while (ctx.size() < n) {
            int off = static_cast<int>(rng.below(11)) - 5;
            if (off == 0 || !used.insert(off).second)
                continue;
            const bool edge = rng.below(5) == 0;
            ctx.push_back({static_cast<std::int8_t>(off),
                           edge ? Tag::boundary() : T(symbols[rng.below(symbols.size())].c_str())});
        }
        r.context = Context::from(ctx);
        const auto code = encode(r);
        CHECK(decode(code) == r);
        CHECK(encode(decode(code)) == code);
    }
}
