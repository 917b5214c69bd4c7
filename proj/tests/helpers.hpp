#pragma once

#include "tbl/corpus.hpp"
#include "tbl/random.hpp"
#include "tbl/rules.hpp"
#include "tbl/synthetic.hpp"
#include "tbl/trainer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tbl::testing {

inline Tag T(const char* symbol) { return Tag::intern(symbol); }

inline std::vector<Tag> currents(const Corpus& c) {
    std::vector<Tag> out;
    for (const auto& t : c.tokens())
        out.push_back(t.current);
    return out;
}

inline std::vector<Template> templates(const char* spec) { return Template::parse_list(spec); }

/// a/DT b/X c/Y with b guessed P and c guessed Q: fixing b enables the rule
/// that fixes c.
struct CraftedCase {
    Corpus corpus;
    Lexicon lexicon;
    TrainerConfig config;
};

inline CraftedCase chaining_case() {
    CraftedCase c{parse_corpus("a/CH_DT b/CH_X c/CH_Y\n"), Lexicon(T("CH_DT")), {}};
    c.lexicon.add("a", T("CH_DT"));
    c.lexicon.add("b", T("CH_P"));
    c.lexicon.add("c", T("CH_Q"));
    c.config.templates = templates("-1");
    c.config.record_dependencies = true;
    return c;
}

/// "p" after "v" is usually CO_O, so a broad rule rewrites it; after "r v"
/// it should stay CO_P, so a later, narrower rule changes it back.
inline CraftedCase correction_case() {
    CraftedCase c{parse_corpus("a/CO_A v/CO_V p/CO_O\n"
                               "b/CO_B v/CO_V p/CO_O\n"
                               "c/CO_C v/CO_V p/CO_O\n"
                               "r/CO_R v/CO_V p/CO_P\n"
                               "r/CO_R v/CO_V p/CO_P\n"
                               "p/CO_P\np/CO_P\np/CO_P\np/CO_P\n"),
                  Lexicon(T("CO_A")), {}};
    c.lexicon = Lexicon::build(c.corpus, T("CO_A"));
    c.config.templates = templates("-1; -2,-1");
    c.config.record_dependencies = true;
    return c;
}

/// One member of the seeded random family used for trainer equivalence:
/// 5-20 tags, 200-2000 tokens, ambiguous vocabularies, and lexicons that are
/// sometimes built from a different sample and padded with spurious counts.
struct RandomCase {
    std::uint64_t seed = 0;
    Corpus corpus;
    Lexicon lexicon{Tag{}};
    TrainerConfig config;
    std::string description;
};

inline RandomCase random_case(std::uint64_t seed) {
    Rng rng(seed * 0x9e3779b97f4a7c15ull + 17);
    SyntheticSpec spec;
    spec.tags = 5 + rng.below(16);
    spec.vocabulary = spec.tags * (3 + rng.below(20));
    spec.ambiguous_fraction = 0.2 + 0.6 * rng.unit();
    spec.secondary_weight = 0.3 + 0.6 * rng.unit();
    spec.min_sentence = 1 + rng.below(8);
    spec.max_sentence = spec.min_sentence + rng.below(20);
    spec.successors = 1 + rng.below(std::min<std::size_t>(4, spec.tags));
    spec.transition_focus = 0.5 + 0.45 * rng.unit();
    const auto lang = SyntheticLanguage::generate(spec, rng.next());

    RandomCase rc;
    rc.seed = seed;
    const std::size_t tokens = 200 + rng.below(1801);
    rc.corpus = lang.sample(tokens, rng.next());
    const Tag default_tag = lang.tags()[rng.below(lang.tags().size())];

    const bool external = rng.below(3) == 0;
    rc.lexicon = Lexicon::build(external ? lang.sample(tokens, rng.next()) : rc.corpus, default_tag);
    const std::size_t injected = rng.below(tokens / 20 + 1);
    for (std::size_t i = 0; i < injected; ++i) {
        const auto& tok = rc.corpus.tokens()[rng.below(rc.corpus.size())];
        rc.lexicon.add(tok.word, lang.tags()[rng.below(lang.tags().size())], 1 + rng.below(3));
    }

    switch (rng.below(5)) {
    case 0: rc.config.templates = templates("-1; +1; -1,+1"); break;
    case 1: rc.config.templates = templates("-5,+5"); break;
    case 2: rc.config.templates = templates("-1; -2; -2,-1; +1; +2; +1,+2; -1,+1; -5,+5"); break;
    default: rc.config.templates = Template::default_set(); break;
    }
    rc.config.threshold = 1 + static_cast<std::int64_t>(rng.below(3) == 0 ? rng.below(3) : 0);
    rc.config.strategy = rng.below(4) == 0 ? Strategy::RandomPositive : Strategy::MaxNetBenefit;
    rc.config.seed = rng.next();
    rc.config.record_dependencies = rng.below(2) == 0;

    rc.description = "seed=" + std::to_string(seed) + " tags=" + std::to_string(spec.tags) +
                     " tokens=" + std::to_string(tokens) + " templates=\"" +
                     Template::format_list(rc.config.templates) + "\" threshold=" +
                     std::to_string(rc.config.threshold) + " strategy=" +
                     std::string(to_string(rc.config.strategy)) + (external ? " lexicon=external" : "");
    return rc;
}

} // namespace tbl::testing
