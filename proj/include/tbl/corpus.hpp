#pragma once

#include "tbl/tag.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tbl {

struct DependencyNode;
/// Provenance of a token's current tag; null means the baseline choice.
using DepLink = std::shared_ptr<const DependencyNode>;

/// Addresses one token: sentence-major, then position within the sentence.
struct Site {
    std::size_t sentence = 0;
    std::size_t index = 0;

    friend bool operator==(const Site&, const Site&) = default;
    friend auto operator<=>(const Site&, const Site&) = default;
};

struct Token {
    std::string word;
    Tag truth;
    Tag current;
    DepLink dep;
};

/// Sentence-segmented tagged text.
///
/// Tokens are stored flat; every site also has a flat index (its position in
/// corpus order) which the trainers use in their inner loops.
class Corpus {
public:
    Corpus() = default;

    void add_sentence(std::vector<Token> tokens);

    std::size_t sentence_count() const { return starts_.size() - 1; }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }

    std::span<const Token> sentence(std::size_t s) const;
    std::span<Token> tokens() { return tokens_; }
    std::span<const Token> tokens() const { return tokens_; }

    /// Throws AddressError for an invalid site.
    const Token& at(Site site) const { return tokens_[flat(site)]; }
    Token& at(Site site) { return tokens_[flat(site)]; }

    /// Current tag `offset` positions away from `site`, or the boundary tag
    /// when that falls outside the sentence. Throws AddressError for an
    /// invalid site.
    Tag tag_at(Site site, int offset) const { return tag_at_flat(flat(site), offset); }

    /// Unchecked flat-index form of tag_at; `pos` must be < size().
    Tag tag_at_flat(std::size_t pos, int offset) const noexcept {
        const std::uint32_t s = sentence_of_[pos];
        const auto target = static_cast<std::ptrdiff_t>(pos) + offset;
        if (target < static_cast<std::ptrdiff_t>(starts_[s]) ||
            target >= static_cast<std::ptrdiff_t>(starts_[s + 1]))
            return Tag::boundary();
        return tokens_[static_cast<std::size_t>(target)].current;
    }

    std::size_t flat(Site site) const;
    Site site(std::size_t pos) const;
    std::size_t sentence_of(std::size_t pos) const { return sentence_of_[pos]; }
    std::size_t sentence_begin(std::size_t s) const { return starts_[s]; }
    std::size_t sentence_end(std::size_t s) const { return starts_[s + 1]; }

    /// Set by trainers and replays that build dependency trees.
    bool dependencies_recorded() const { return dependencies_recorded_; }
    void set_dependencies_recorded(bool on) { dependencies_recorded_ = on; }

    friend bool operator==(const Corpus& a, const Corpus& b);

private:
    std::vector<Token> tokens_;
    std::vector<std::size_t> starts_{0};
    std::vector<std::uint32_t> sentence_of_;
    bool dependencies_recorded_ = false;
};

enum class CorpusFormat {
    Tagged, ///< `word/TAG` items; the tag follows the last slash.
    Raw,    ///< bare words; truth tags are left as none.
};

/// One sentence per line, whitespace-separated items; blank lines skipped.
/// Throws ParseError (with line and column) on a malformed item.
Corpus parse_corpus(std::string_view text, CorpusFormat format = CorpusFormat::Tagged);

enum class TagField { Truth, Current };

/// Inverse of parse_corpus: `word/TAG` items joined by single spaces, one
/// sentence per line, each line newline-terminated.
std::string serialize_corpus(const Corpus& corpus, TagField field = TagField::Truth);

/// Word -> tag frequency table with a configurable tag for unknown words.
class Lexicon {
public:
    using TagCounts = std::map<Tag, std::uint64_t, SymbolLess>;
    using Table = std::map<std::string, TagCounts, std::less<>>;

    explicit Lexicon(Tag default_tag) : default_tag_(default_tag) {}

    /// Counts truth tags per word.
    static Lexicon build(const Corpus& corpus, Tag default_tag);

    void add(std::string_view word, Tag tag, std::uint64_t count = 1);

    /// Most frequent tag for `word`; ties go to the smallest tag symbol.
    /// Unknown words get default_tag().
    Tag most_frequent(std::string_view word) const;

    Tag default_tag() const { return default_tag_; }
    const Table& counts() const { return counts_; }

    friend bool operator==(const Lexicon&, const Lexicon&) = default;

private:
    Tag default_tag_;
    Table counts_;
};

/// Sets every token's current tag to the lexicon's guess and clears its
/// dependency link. Returns the number of tokens whose guess is wrong.
std::size_t baseline_assign(Corpus& corpus, const Lexicon& lexicon);

std::size_t error_count(const Corpus& corpus);

/// Fraction of tokens whose current tag equals the truth; 1 for an empty corpus.
double accuracy(const Corpus& corpus);

inline double accuracy_from_errors(std::size_t errors, std::size_t total) {
    if (total == 0)
        return 1.0;
    return static_cast<double>(total - errors) / static_cast<double>(total);
}

} // namespace tbl
