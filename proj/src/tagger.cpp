#include "tbl/tagger.hpp"

#include "tbl/dependency.hpp"

namespace tbl {

Corpus tag(const Model& model, Corpus corpus, bool record_dependencies) {
    baseline_assign(corpus, model.lexicon);
    corpus.set_dependencies_recorded(record_dependencies);
    for (std::size_t k = 0; k < model.rules.size(); ++k) {
        const auto& rule = model.rules[k];
        const auto hits = match_positions(rule, corpus);
        if (record_dependencies)
            record_applications(corpus, hits, rule, k + 1);
        for (const auto pos : hits)
            corpus.tokens()[pos].current = rule.to;
    }
    return corpus;
}

namespace {

// Tracks accuracy over a fixed subset of tokens as rules are applied.
class Tracker {
public:
    Tracker(Corpus corpus, const Lexicon& lexicon, AccuracyScope scope) : corpus_(std::move(corpus)) {
        baseline_assign(corpus_, lexicon);
        for (const auto& tok : corpus_.tokens())
            mask_.push_back(scope == AccuracyScope::AllTokens || tok.current != tok.truth);
    }

    void apply(const Rule& rule) {
        for (const auto pos : match_positions(rule, corpus_))
            corpus_.tokens()[pos].current = rule.to;
    }

    double accuracy() const {
        std::size_t total = 0, errors = 0;
        const auto tokens = corpus_.tokens();
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!mask_[i])
                continue;
            ++total;
            if (tokens[i].current != tokens[i].truth)
                ++errors;
        }
        return accuracy_from_errors(errors, total);
    }

private:
    Corpus corpus_;
    std::vector<bool> mask_;
};

} // namespace

Curve evaluate_curve(const Model& model, Corpus train, std::optional<Corpus> test, AccuracyScope scope) {
    Tracker train_t(std::move(train), model.lexicon, scope);
    std::optional<Tracker> test_t;
    if (test)
        test_t.emplace(std::move(*test), model.lexicon, scope);

    Curve curve;
    auto point = [&](std::size_t pass) {
        curve.push_back({pass, train_t.accuracy(),
                         test_t ? std::optional<double>(test_t->accuracy()) : std::nullopt});
    };
    point(0);
    for (std::size_t k = 0; k < model.rules.size(); ++k) {
        train_t.apply(model.rules[k]);
        if (test_t)
            test_t->apply(model.rules[k]);
        point(k + 1);
    }
    return curve;
}

} // namespace tbl
