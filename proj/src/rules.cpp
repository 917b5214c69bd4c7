#include "tbl/rules.hpp"

#include "tbl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace tbl {

// ---------------------------------------------------------------------------
// Template

Template::Template(std::vector<int> positions, int window) : positions_(std::move(positions)) {
    if (positions_.empty())
        throw ParseError("template has no positions");
    if (positions_.size() > kMaxContext)
        throw ParseError("template has more than " + std::to_string(kMaxContext) + " positions");
    window = std::min(window, kMaxOffset);
    std::sort(positions_.begin(), positions_.end());
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        const int p = positions_[i];
        if (p == 0)
            throw ParseError("template position 0 is implicit and may not be listed");
        if (std::abs(p) > window)
            throw ParseError("template position " + std::to_string(p) + " is outside the window of " +
                             std::to_string(window));
        if (i > 0 && positions_[i - 1] == p)
            throw ParseError("template position " + std::to_string(p) + " is repeated");
        span_ = std::max(span_, std::abs(p));
    }
}

namespace {

std::string signed_offset(int p) { return (p > 0 ? "+" : "") + std::to_string(p); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

int parse_offset(std::string_view s) {
    s = trim(s);
    std::string_view digits = s;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
        throw ParseError("bad template offset '" + std::string(s) + "'");
    return negative ? -value : value;
}

} // namespace

std::string Template::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (i)
            out += ',';
        out += signed_offset(positions_[i]);
    }
    return out;
}

std::vector<Template> Template::parse_list(std::string_view spec, int window) {
    std::vector<Template> out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const auto end = std::min(spec.find(';', start), spec.size());
        const auto group = trim(spec.substr(start, end - start));
        if (group.empty())
            throw ParseError("empty template group in '" + std::string(spec) + "'");
        std::vector<int> positions;
        std::size_t p = 0;
        while (p <= group.size()) {
            const auto comma = std::min(group.find(',', p), group.size());
            positions.push_back(parse_offset(group.substr(p, comma - p)));
            p = comma + 1;
        }
        Template t(std::move(positions), window);
        if (std::find(out.begin(), out.end(), t) != out.end())
            throw ParseError("template " + t.to_string() + " listed twice");
        out.push_back(std::move(t));
        start = end + 1;
    }
    return out;
}

std::string Template::format_list(std::span<const Template> templates) {
    std::string out;
    for (std::size_t i = 0; i < templates.size(); ++i) {
        if (i)
            out += "; ";
        out += templates[i].to_string();
    }
    return out;
}

std::vector<Template> Template::default_set() {
    return {Template({-1}), Template({-2}),    Template({-2, -1}), Template({1}),
            Template({2}),  Template({1, 2}),  Template({-1, 1})};
}

// ---------------------------------------------------------------------------
// Context / Rule

Context Context::from(std::span<const ContextEntry> entries) {
    if (entries.size() > kMaxContext)
        throw ParseError("rule context has more than " + std::to_string(kMaxContext) + " entries");
    Context c;
    std::copy(entries.begin(), entries.end(), c.entries_.begin());
    c.size_ = static_cast<std::uint8_t>(entries.size());
    std::sort(c.entries_.begin(), c.entries_.begin() + c.size_,
              [](const ContextEntry& a, const ContextEntry& b) { return a.offset < b.offset; });
    for (std::size_t i = 0; i < c.size_; ++i) {
        if (c.entries_[i].offset == 0)
            throw ParseError("rule context may not test offset 0");
        if (i > 0 && c.entries_[i - 1].offset == c.entries_[i].offset)
            throw ParseError("rule context repeats offset " + std::to_string(c.entries_[i].offset));
    }
    return c;
}

int Context::span() const {
    int s = 0;
    for (const auto& e : *this)
        s = std::max(s, std::abs(static_cast<int>(e.offset)));
    return s;
}

bool Rule::uses(const Template& t) const {
    const auto positions = t.positions();
    if (positions.size() != context.size())
        return false;
    for (std::size_t i = 0; i < positions.size(); ++i)
        if (positions[i] != context[i].offset)
            return false;
    return true;
}

std::size_t RuleHash::operator()(const Rule& r) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(r.from.id());
    mix(r.to.id());
    for (const auto& e : r.context) {
        mix(static_cast<std::uint64_t>(static_cast<std::uint8_t>(e.offset)));
        mix(e.tag.id());
    }
    return static_cast<std::size_t>(h);
}

void RuleScore::add(Effect e) {
    switch (e) {
    case Effect::Positive: ++pos; break;
    case Effect::Negative: ++neg; break;
    case Effect::Neutral: ++neut; break;
    case Effect::NoMatch: break;
    }
}

void RuleScore::remove(Effect e) {
    switch (e) {
    case Effect::Positive: --pos; break;
    case Effect::Negative: --neg; break;
    case Effect::Neutral: --neut; break;
    case Effect::NoMatch: break;
    }
}

// ---------------------------------------------------------------------------
// Matching, scoring, application

std::optional<Rule> instantiate_flat(const Template& tmpl, const Corpus& corpus, std::size_t pos) {
    const Token& tok = corpus.tokens()[pos];
    if (tok.current == tok.truth || tok.truth.is_none())
        return std::nullopt;
    std::array<ContextEntry, kMaxContext> entries{};
    const auto positions = tmpl.positions();
    for (std::size_t i = 0; i < positions.size(); ++i)
        entries[i] = {static_cast<std::int8_t>(positions[i]), corpus.tag_at_flat(pos, positions[i])};
    return Rule{tok.current, tok.truth,
                Context::from(std::span<const ContextEntry>(entries.data(), positions.size()))};
}

std::optional<Rule> instantiate(const Template& tmpl, const Corpus& corpus, Site site) {
    return instantiate_flat(tmpl, corpus, corpus.flat(site));
}

bool matches(const Rule& rule, const Corpus& corpus, Site site) {
    return matches_flat(rule, corpus, corpus.flat(site));
}

Effect classify_effect(const Rule& rule, const Corpus& corpus, Site site) {
    const auto pos = corpus.flat(site);
    if (!matches_flat(rule, corpus, pos))
        return Effect::NoMatch;
    return effect_given_match(rule, corpus.tokens()[pos].truth);
}

RuleScore score_rule(const Rule& rule, const Corpus& corpus) {
    RuleScore score;
    for (std::size_t pos = 0; pos < corpus.size(); ++pos)
        if (matches_flat(rule, corpus, pos))
            score.add(effect_given_match(rule, corpus.tokens()[pos].truth));
    return score;
}

std::vector<std::size_t> match_positions(const Rule& rule, const Corpus& corpus) {
    std::vector<std::size_t> out;
    for (std::size_t pos = 0; pos < corpus.size(); ++pos)
        if (matches_flat(rule, corpus, pos))
            out.push_back(pos);
    return out;
}

std::vector<Site> apply_rule(const Rule& rule, Corpus& corpus) {
    const auto hits = match_positions(rule, corpus);
    std::vector<Site> changed;
    changed.reserve(hits.size());
    for (const auto pos : hits) {
        corpus.tokens()[pos].current = rule.to;
        changed.push_back(corpus.site(pos));
    }
    return changed;
}

// ---------------------------------------------------------------------------
// Encoding

std::string encode(const Rule& rule) {
    std::string out = rule.from.symbol();
    out += '>';
    out += rule.to.symbol();
    out += " @ ";
    bool first = true;
    for (const auto& e : rule.context) {
        if (!first)
            out += ',';
        first = false;
        out += signed_offset(e.offset);
        out += ':';
        out += e.tag.symbol();
    }
    return out;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Length of a "<sign><digits>:" prefix at the start of `s`, or 0.
std::size_t offset_prefix(std::string_view s) {
    if (s.empty() || (s[0] != '+' && s[0] != '-'))
        return 0;
    std::size_t i = 1;
    while (i < s.size() && is_digit(s[i]))
        ++i;
    if (i == 1 || i >= s.size() || s[i] != ':')
        return 0;
    return i + 1;
}

Tag rewrite_tag(std::string_view symbol, std::string_view text) {
    if (symbol.empty())
        throw ParseError("rule '" + std::string(text) + "' has an empty from/to tag");
    if (symbol == kBoundarySymbol)
        throw ParseError("rule '" + std::string(text) + "' rewrites the boundary tag");
    return Tag::intern(symbol);
}

} // namespace

Rule decode(std::string_view text) {
    const auto at = text.find(" @ ");
    if (at == std::string_view::npos)
        throw ParseError("rule '" + std::string(text) + "' lacks ' @ '");
    const auto head = text.substr(0, at);
    auto tail = text.substr(at + 3);

    const auto arrow = head.size() > 1 ? head.find('>', 1) : std::string_view::npos;
    if (arrow == std::string_view::npos)
        throw ParseError("rule '" + std::string(text) + "' lacks 'FROM>TO'");
    Rule rule;
    rule.from = rewrite_tag(head.substr(0, arrow), text);
    rule.to = rewrite_tag(head.substr(arrow + 1), text);
    if (rule.from == rule.to)
        throw ParseError("rule '" + std::string(text) + "' rewrites a tag to itself");

    std::vector<ContextEntry> entries;
    while (true) {
        const auto prefix = offset_prefix(tail);
        if (prefix == 0)
            throw ParseError("rule '" + std::string(text) + "' has a malformed context entry");
        const int offset = std::stoi(std::string(tail.substr(0, prefix - 1)));
        if (offset == 0 || std::abs(offset) > kMaxOffset)
            throw ParseError("rule '" + std::string(text) + "' has offset out of range");
        tail.remove_prefix(prefix);

        // The tag runs to the next ",<sign><digits>:" or to the end.
        std::size_t end = 1;
        while (end < tail.size() && !(tail[end] == ',' && offset_prefix(tail.substr(end + 1)) != 0))
            ++end;
        const auto symbol = tail.substr(0, std::min(end, tail.size()));
        if (symbol.empty())
            throw ParseError("rule '" + std::string(text) + "' has an empty context tag");
        if (!entries.empty() && entries.back().offset >= offset)
            throw ParseError("rule '" + std::string(text) + "' context offsets are not ascending");
        entries.push_back({static_cast<std::int8_t>(offset), Tag::intern(symbol)});
        if (end >= tail.size())
            break;
        tail.remove_prefix(end + 1);
    }
    rule.context = Context::from(entries);
    return rule;
}

std::string render_slots(const Rule& rule) {
    if (rule.context.span() > 2)
        return encode(rule);
    static const std::string kBlank = "—";
    std::array<std::string, 5> slots{kBlank, kBlank, "", kBlank, kBlank};
    slots[2] = rule.from.symbol() + "/" + rule.to.symbol();
    for (const auto& e : rule.context)
        slots[static_cast<std::size_t>(e.offset + 2)] = e.tag.symbol();
    std::string out;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i)
            out += ' ';
        out += slots[i];
    }
    return out;
}

} // namespace tbl
