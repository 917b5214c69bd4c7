#pragma once

#include "tbl/corpus.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tbl {

/// Parameters of a toy tagged language: a first-order Markov chain over tags
/// (so a tag depends directly only on its +-1 neighbours) emitting words from
/// per-tag vocabularies, with some words shared between tags.
struct SyntheticSpec {
    std::size_t tags = 10;
    std::size_t vocabulary = 300;
    /// Fraction of words that may be emitted by more than one tag.
    double ambiguous_fraction = 0.35;
    /// Emission weight of a word's secondary tags relative to its primary one.
    double secondary_weight = 0.5;
    std::size_t min_sentence = 6;
    std::size_t max_sentence = 20;
    /// Each tag strongly prefers this many successor tags...
    std::size_t successors = 3;
    /// ...which receive this share of its transition mass.
    double transition_focus = 0.85;
    /// Only let two tags share a word when no tag prefers both as successors,
    /// so with transition_focus = 1 the left neighbour's tag settles every
    /// ambiguous word.
    bool resolvable_ambiguity = false;
};

class SyntheticLanguage {
public:
    /// Deterministic in (spec, seed).
    static SyntheticLanguage generate(const SyntheticSpec& spec, std::uint64_t seed);

    /// Exactly `tokens` tokens of text; deterministic in (language, seed).
    Corpus sample(std::size_t tokens, std::uint64_t seed) const;

    const std::vector<Tag>& tags() const { return tags_; }
    const SyntheticSpec& spec() const { return spec_; }

private:
    struct Weighted {
        std::vector<std::size_t> items;
        std::vector<double> cumulative;
    };

    SyntheticSpec spec_;
    std::vector<Tag> tags_;
    std::vector<std::string> words_;
    std::vector<Weighted> transitions_; ///< per tag, over next tags
    std::vector<Weighted> emissions_;   ///< per tag, over words
};

} // namespace tbl
