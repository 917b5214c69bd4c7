#include "helpers.hpp"

#include "tbl/dependency.hpp"
#include "tbl/errors.hpp"
#include "tbl/incremental.hpp"
#include "tbl/tagger.hpp"

#include <doctest.h>

#include <functional>

using namespace tbl;
using tbl::testing::T;

namespace {

void check_pass_order(const DependencyNode& node) {
    for (const auto& [offset, child] : node.children) {
        CHECK(child->pass < node.pass);
        check_pass_order(*child);
    }
}

} // namespace

TEST_CASE("dependency nodes") {
    SUBCASE("a rule firing on baseline tags makes a leaf") {
        auto c = parse_corpus("the/DT can/NN");
        baseline_assign(c, Lexicon::build(c, T("NN")));
        const auto node = record_application(c, {0, 1}, decode("NN>MD @ -1:DT"), 1);
        CHECK(node->children.empty());
        CHECK(depth(*node) == 1);
        CHECK(node_count(*node) == 1);
        CHECK(c.tokens()[1].dep == node);
    }
    SUBCASE("snapshot recording links to pre-pass nodes only") {
        auto c = parse_corpus("x/T y/T z/T");
        baseline_assign(c, Lexicon::build(c, T("T")));
        const Rule rule = decode("T>U @ -1:T");
        const std::vector<std::size_t> positions{1, 2};
        record_applications(c, positions, rule, 1);
        CHECK(c.tokens()[1].dep->children.empty());
        CHECK(c.tokens()[2].dep->children.empty());
    }
    SUBCASE("context links are bounded by the sentence") {
        auto c = parse_corpus("a/A\nb/B");
        baseline_assign(c, Lexicon::build(c, T("A")));
        record_application(c, {0, 0}, decode("A>C @ +1:*BOUNDARY*"), 1);
        const auto node = record_application(c, {1, 0}, decode("B>C @ -1:*BOUNDARY*"), 2);
        CHECK(node->children.empty());
    }
}

TEST_CASE("chaining builds a depth-two tree") {
    auto cc = tbl::testing::chaining_case();
    const auto r = train_incremental(cc.corpus, cc.lexicon, cc.config);
    REQUIRE(r.model.rules.size() == 2);
    const auto& root = cc.corpus.tokens()[2].dep;
    REQUIRE(root);
    CHECK(encode(root->rule) == "CH_Q>CH_Y @ -1:CH_X");
    CHECK(depth(*root) == 2);
    REQUIRE(root->children.size() == 1);
    CHECK(root->children[0].first == -1);
    CHECK(encode(root->children[0].second->rule) == "CH_P>CH_X @ -1:CH_DT");
    CHECK(root->children[0].second == cc.corpus.tokens()[1].dep);
    check_pass_order(*root);

    const auto report = dependency_report(cc.corpus);
    CHECK(report.changed_sites == 2);
    CHECK(report.multi_node_sites == 1);
    CHECK(report.leverage == doctest::Approx(0.5));
    REQUIRE(report.classes.size() == 2);
    std::size_t multi = 0;
    for (const auto& cls : report.classes)
        if (node_count(*cls.representative) > 1) {
            ++multi;
            CHECK(cls.count == 1);
        }
    CHECK(multi == 1);

    const auto text = format_report(report, r.model);
    CHECK(text.find("changed_sites\t2\n") == 0);
    CHECK(text.find("1\tCH_P>CH_X @ -1:CH_DT\n") != std::string::npos);
    CHECK(text.find("-1: CH_DT CH_P/CH_X — — — (1)\n0: — CH_X CH_Q/CH_Y — — (2)\n") != std::string::npos);
}

TEST_CASE("a corrective rule links to the node it overrides") {
    auto cc = tbl::testing::correction_case();
    const auto r = train_naive(cc.corpus, cc.lexicon, cc.config);
    REQUIRE(r.model.rules.size() >= 2);
    CHECK(encode(r.model.rules[0]) == "CO_P>CO_O @ -1:CO_V");
    CHECK(encode(r.model.rules[1]) == "CO_O>CO_P @ -2:CO_R,-1:CO_V");
    const auto& root = cc.corpus.tokens()[cc.corpus.flat({3, 2})].dep;
    REQUIRE(root);
    REQUIRE(root->children.size() == 1);
    CHECK(root->children[0].first == 0);
    CHECK(encode(root->children[0].second->rule) == "CO_P>CO_O @ -1:CO_V");
    check_pass_order(*root);
}

TEST_CASE("canonical keys") {
    auto leaf = std::make_shared<DependencyNode>(DependencyNode{decode("A>B @ -1:C"), 1, {}});
    auto other_leaf = std::make_shared<DependencyNode>(DependencyNode{decode("A>B @ -1:C"), 1, {}});
    auto left = std::make_shared<DependencyNode>(DependencyNode{decode("D>E @ -1:B"), 2, {{-1, leaf}}});
    auto left_copy = std::make_shared<DependencyNode>(DependencyNode{decode("D>E @ -1:B"), 2, {{-1, other_leaf}}});
    auto mirror = std::make_shared<DependencyNode>(DependencyNode{decode("D>E @ -1:B"), 2, {{+1, leaf}}});
    auto later = std::make_shared<DependencyNode>(DependencyNode{decode("A>B @ -1:C"), 3, {}});

    CHECK(canonical_key(*left) == canonical_key(*left_copy));
    CHECK(canonical_key(*left) != canonical_key(*mirror));
    CHECK(canonical_key(*leaf) != canonical_key(*later));
    CHECK(canonical_key(*leaf, false) == canonical_key(*later, false));
    CHECK(canonical_key(*left) == "(D>E @ -1:B #2 -1=(A>B @ -1:C #1))");
}

TEST_CASE("dependency report requires recording") {
    auto cc = tbl::testing::chaining_case();
    cc.config.record_dependencies = false;
    train_naive(cc.corpus, cc.lexicon, cc.config);
    CHECK_THROWS_AS(dependency_report(cc.corpus), UsageError);
}

TEST_CASE("an untrained recorded corpus has an empty report") {
    auto cc = tbl::testing::chaining_case();
    cc.config.max_passes = 0;
    const auto r = train_naive(cc.corpus, cc.lexicon, cc.config);
    const auto report = dependency_report(cc.corpus);
    CHECK(report.changed_sites == 0);
    CHECK(report.leverage == 0.0);
    CHECK(report.classes.empty());
    CHECK(format_report(report, r.model).find("classes\t0\n") != std::string::npos);
}

TEST_CASE("trainers and replay record identical trees") {
    for (std::uint64_t seed = 500; seed < 510; ++seed) {
        auto rc = tbl::testing::random_case(seed);
        CAPTURE(rc.description);
        rc.config.record_dependencies = true;
        auto a = rc.corpus;
        auto b = rc.corpus;
        const auto naive = train_naive(a, rc.lexicon, rc.config);
        train_incremental(b, rc.lexicon, rc.config);
        const auto replayed = tag(naive.model, rc.corpus, true);
        const auto ra = dependency_report(a);
        const auto rb = dependency_report(b);
        const auto rr = dependency_report(replayed);
        CHECK(ra.changed_sites == rb.changed_sites);
        CHECK(ra.changed_sites == rr.changed_sites);
        REQUIRE(ra.classes.size() == rb.classes.size());
        REQUIRE(ra.classes.size() == rr.classes.size());
        for (std::size_t i = 0; i < ra.classes.size(); ++i) {
            CHECK(ra.classes[i].key == rb.classes[i].key);
            CHECK(ra.classes[i].key == rr.classes[i].key);
            CHECK(ra.classes[i].count == rr.classes[i].count);
        }
        for (const auto& tok : a.tokens())
            if (tok.dep)
                check_pass_order(*tok.dep);
    }
}
