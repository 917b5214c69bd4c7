#pragma once

#include "tbl/corpus.hpp"
#include "tbl/tag.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tbl {

/// Largest number of context positions a template may test.
inline constexpr std::size_t kMaxContext = 6;
/// Largest |offset| a template position may have.
inline constexpr int kMaxOffset = 64;
/// Default window for template positions (admits the +-5 template).
inline constexpr int kDefaultWindow = 5;

/// A set of nonzero relative positions whose current tags a rule tests.
/// The centre is always tested implicitly through the rule's from-tag.
class Template {
public:
    /// Throws ParseError if a position is zero, repeated, outside `window`,
    /// or if there are none or more than kMaxContext of them.
    explicit Template(std::vector<int> positions, int window = kMaxOffset);

    std::span<const int> positions() const { return positions_; }
    int span() const { return span_; }

    /// Comma-separated offsets with explicit sign on positives, e.g. "-2,-1".
    std::string to_string() const;

    /// Parses a template list: groups separated by ';', offsets inside a group
    /// by ','. A leading '+' is optional. Duplicate templates are rejected.
    static std::vector<Template> parse_list(std::string_view spec, int window = kDefaultWindow);
    static std::string format_list(std::span<const Template> templates);

    /// {-1}, {-2}, {-2,-1}, {+1}, {+2}, {+1,+2}, {-1,+1}.
    static std::vector<Template> default_set();

    friend bool operator==(const Template&, const Template&) = default;

private:
    std::vector<int> positions_;
    int span_ = 0;
};

struct ContextEntry {
    std::int8_t offset = 0;
    Tag tag;

    friend bool operator==(const ContextEntry&, const ContextEntry&) = default;
};

/// Small fixed-capacity offset -> tag map, kept sorted by offset.
class Context {
public:
    Context() = default;

    /// Entries may arrive in any order; duplicates or a zero offset throw ParseError.
    static Context from(std::span<const ContextEntry> entries);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    const ContextEntry* begin() const { return entries_.data(); }
    const ContextEntry* end() const { return entries_.data() + size_; }
    const ContextEntry& operator[](std::size_t i) const { return entries_[i]; }
    int span() const;

    friend bool operator==(const Context& a, const Context& b) {
        return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
    }

private:
    std::array<ContextEntry, kMaxContext> entries_{};
    std::uint8_t size_ = 0;
};

/// "Change `from` to `to` when every context offset holds its tag."
/// Context keys are the positions of the template that generated the rule.
struct Rule {
    Tag from;
    Tag to;
    Context context;

    bool uses(const Template& t) const;

    friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleHash {
    std::size_t operator()(const Rule& r) const noexcept;
};

enum class Effect { Positive, Negative, Neutral, NoMatch };

/// Effect class of a rule at a site it matches, which depends only on the
/// rule's tags and the site's truth.
inline Effect effect_given_match(const Rule& rule, Tag truth) {
    if (rule.to == truth)
        return Effect::Positive;
    if (rule.from == truth)
        return Effect::Negative;
    return Effect::Neutral;
}

struct RuleScore {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    std::uint64_t neut = 0;

    std::int64_t score() const { return static_cast<std::int64_t>(pos) - static_cast<std::int64_t>(neg); }

    void add(Effect e);
    void remove(Effect e);

    friend bool operator==(const RuleScore&, const RuleScore&) = default;
};

/// The rule that would fix `site` under `tmpl`, if the site is wrong.
std::optional<Rule> instantiate(const Template& tmpl, const Corpus& corpus, Site site);
std::optional<Rule> instantiate_flat(const Template& tmpl, const Corpus& corpus, std::size_t pos);

bool matches(const Rule& rule, const Corpus& corpus, Site site);

inline bool matches_flat(const Rule& rule, const Corpus& corpus, std::size_t pos) {
    if (corpus.tokens()[pos].current != rule.from)
        return false;
    for (const auto& e : rule.context)
        if (corpus.tag_at_flat(pos, e.offset) != e.tag)
            return false;
    return true;
}

Effect classify_effect(const Rule& rule, const Corpus& corpus, Site site);

/// Tallies classify_effect over every site against the current tags.
RuleScore score_rule(const Rule& rule, const Corpus& corpus);

/// All matching flat positions in corpus order.
std::vector<std::size_t> match_positions(const Rule& rule, const Corpus& corpus);

/// Snapshot application: finds every match first, then rewrites them.
/// Returns the changed sites in corpus order.
std::vector<Site> apply_rule(const Rule& rule, Corpus& corpus);

/// Canonical form `FROM>TO @ off:TAG[,off:TAG...]`, offsets ascending and
/// signed. Its byte order is the tie-breaking order for rules.
std::string encode(const Rule& rule);

/// Inverse of encode(). Throws ParseError on malformed input. Tags are split
/// at the first '>' and at ",<signed int>:" boundaries, so tag symbols that
/// contain '>' or such a sequence cannot be decoded.
Rule decode(std::string_view text);

/// Display form. Rules reaching at most two positions out are drawn as five
/// space-separated slots for offsets -2..+2, the centre as FROM/TO and unused
/// slots as U+2014. Wider rules fall back to encode().
std::string render_slots(const Rule& rule);

} // namespace tbl
