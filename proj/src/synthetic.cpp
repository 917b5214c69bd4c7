#include "tbl/synthetic.hpp"

#include "tbl/errors.hpp"
#include "tbl/random.hpp"

#include <algorithm>
#include <cstdio>

namespace tbl {
namespace {

std::size_t draw(const std::vector<std::size_t>& items, const std::vector<double>& cumulative, Rng& rng) {
    const double x = rng.unit() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return items[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), items.size() - 1)];
}

} // namespace

SyntheticLanguage SyntheticLanguage::generate(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.tags < 2 || spec.vocabulary < spec.tags || spec.min_sentence == 0 ||
        spec.max_sentence < spec.min_sentence || spec.successors == 0 || spec.successors > spec.tags)
        throw ContractError("inconsistent synthetic language parameters");

    Rng rng(seed);
    SyntheticLanguage lang;
    lang.spec_ = spec;
    for (std::size_t t = 0; t < spec.tags; ++t) {
        char name[16];
        std::snprintf(name, sizeof name, "T%02zu", t);
        lang.tags_.push_back(Tag::intern(name));
    }

    lang.transitions_.resize(spec.tags);
    std::vector<std::vector<bool>> preferred(spec.tags, std::vector<bool>(spec.tags, false));
    for (std::size_t t = 0; t < spec.tags; ++t) {
        std::vector<std::size_t> order(spec.tags);
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);

        std::vector<double> weight(spec.tags, (1.0 - spec.transition_focus) / static_cast<double>(spec.tags));
        std::vector<double> raw(spec.successors);
        double raw_total = 0;
        for (auto& r : raw)
            raw_total += (r = 0.5 + rng.unit());
        for (std::size_t i = 0; i < spec.successors; ++i) {
            weight[order[i]] += spec.transition_focus * raw[i] / raw_total;
            preferred[t][order[i]] = true;
        }

        auto& tr = lang.transitions_[t];
        double acc = 0;
        for (std::size_t n = 0; n < spec.tags; ++n) {
            tr.items.push_back(n);
            tr.cumulative.push_back(acc += weight[n]);
        }
    }

    // True when some tag prefers both a and b as successors.
    auto confusable = [&](std::size_t a, std::size_t b) {
        for (std::size_t t = 0; t < spec.tags; ++t)
            if (preferred[t][a] && preferred[t][b])
                return true;
        return false;
    };

    lang.emissions_.resize(spec.tags);
    std::vector<std::size_t> word_tags;
    for (std::size_t w = 0; w < spec.vocabulary; ++w) {
        lang.words_.push_back("w" + std::to_string(w));
        const double base = 1.0 / (1.0 + static_cast<double>(rng.below(8)));
        const std::size_t primary = w % spec.tags;
        lang.emissions_[primary].items.push_back(w);
        lang.emissions_[primary].cumulative.push_back(base);
        word_tags.assign(1, primary);
        if (rng.unit() < spec.ambiguous_fraction) {
            const std::size_t extra = 1 + rng.below(2);
            for (std::size_t k = 0; k < extra; ++k) {
                const std::size_t other = rng.below(spec.tags);
                auto& em = lang.emissions_[other];
                if (std::find(word_tags.begin(), word_tags.end(), other) != word_tags.end())
                    continue;
                if (spec.resolvable_ambiguity &&
                    std::any_of(word_tags.begin(), word_tags.end(), [&](std::size_t t) { return confusable(t, other); }))
                    continue;
                word_tags.push_back(other);
                em.items.push_back(w);
                em.cumulative.push_back(base * spec.secondary_weight);
            }
        }
    }
    for (auto& em : lang.emissions_) {
        double acc = 0;
        for (auto& c : em.cumulative)
            c = (acc += c);
    }
    return lang;
}

Corpus SyntheticLanguage::sample(std::size_t tokens, std::uint64_t seed) const {
    Rng rng(seed);
    Corpus corpus;
    std::size_t produced = 0;
    while (produced < tokens) {
        const std::size_t span = spec_.max_sentence - spec_.min_sentence + 1;
        std::size_t length = spec_.min_sentence + rng.below(span);
        length = std::min(length, tokens - produced);
        std::vector<Token> sentence;
        std::size_t tag = rng.below(tags_.size());
        for (std::size_t i = 0; i < length; ++i) {
            if (i > 0)
                tag = draw(transitions_[tag].items, transitions_[tag].cumulative, rng);
            const auto word = draw(emissions_[tag].items, emissions_[tag].cumulative, rng);
            sentence.push_back(Token{words_[word], tags_[tag], tags_[tag], nullptr});
        }
        produced += length;
        corpus.add_sentence(std::move(sentence));
    }
    return corpus;
}

} // namespace tbl
