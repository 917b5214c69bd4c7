#include "tbl/errors.hpp"
#include "tbl/synthetic.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace tbl;

TEST_CASE("synthetic samples are deterministic and exactly sized") {
    const auto lang = SyntheticLanguage::generate({}, 11);
    const auto a = lang.sample(1234, 5);
    const auto b = SyntheticLanguage::generate({}, 11).sample(1234, 5);
    CHECK(a.size() == 1234);
    CHECK(a == b);
    CHECK_FALSE(a == lang.sample(1234, 6));
    CHECK(lang.tags().size() == 10);
    CHECK(lang.tags()[3].symbol() == "T03");
    for (std::size_t s = 0; s < a.sentence_count(); ++s)
        CHECK(a.sentence(s).size() <= 20);
}

TEST_CASE("inconsistent synthetic parameters are rejected") {
    SyntheticSpec spec;
    spec.successors = spec.tags + 1;
    CHECK_THROWS_AS(SyntheticLanguage::generate(spec, 1), ContractError);
    spec = {};
    spec.max_sentence = spec.min_sentence - 1;
    CHECK_THROWS_AS(SyntheticLanguage::generate(spec, 1), ContractError);
}

TEST_CASE("resolvable ambiguity: the left tag settles every shared word") {
    SyntheticSpec spec;
    spec.ambiguous_fraction = 0.8;
    spec.successors = 3;
    spec.transition_focus = 1.0;
    spec.resolvable_ambiguity = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto corpus = SyntheticLanguage::generate(spec, seed).sample(20000, seed);
        std::map<std::pair<std::string, Tag>, std::set<Tag>> seen;
        std::set<std::string> ambiguous;
        std::map<std::string, std::set<Tag>> tags_of;
        for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
            const auto sentence = corpus.sentence(s);
            for (std::size_t i = 0; i < sentence.size(); ++i) {
                tags_of[sentence[i].word].insert(sentence[i].truth);
                if (i > 0)
                    seen[{sentence[i].word, sentence[i - 1].truth}].insert(sentence[i].truth);
            }
        }
        for (const auto& [word, tags] : tags_of)
            if (tags.size() > 1)
                ambiguous.insert(word);
        CHECK(!ambiguous.empty());
        for (const auto& [key, tags] : seen)
            CHECK(tags.size() == 1);
    }
}
