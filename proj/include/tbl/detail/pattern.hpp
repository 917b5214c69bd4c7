#pragma once

// Lookup key shared by the trainers: a rule minus its to-tag. All rules that
// could fire at a site under one template share the site's pattern key, so a
// single hash probe per (site, template) finds them.

#include "tbl/corpus.hpp"
#include "tbl/rules.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace tbl::detail {

struct PatternKey {
    std::uint32_t tmpl = 0;
    Tag center;
    std::array<Tag, kMaxContext> ctx{};

    friend bool operator==(const PatternKey&, const PatternKey&) = default;
};

struct PatternHash {
    std::size_t operator()(const PatternKey& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ull ^ k.tmpl;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        };
        mix(k.center.id());
        for (const auto t : k.ctx)
            mix(t.id());
        return static_cast<std::size_t>(h);
    }
};

inline PatternKey pattern_at(std::uint32_t tmpl_index, const Template& tmpl, const Corpus& corpus,
                             std::size_t pos) {
    PatternKey key;
    key.tmpl = tmpl_index;
    key.center = corpus.tokens()[pos].current;
    const auto positions = tmpl.positions();
    for (std::size_t i = 0; i < positions.size(); ++i)
        key.ctx[i] = corpus.tag_at_flat(pos, positions[i]);
    return key;
}

inline PatternKey pattern_of(std::uint32_t tmpl_index, const Rule& rule) {
    PatternKey key;
    key.tmpl = tmpl_index;
    key.center = rule.from;
    for (std::size_t i = 0; i < rule.context.size(); ++i)
        key.ctx[i] = rule.context[i].tag;
    return key;
}

/// Index of the template whose positions are the rule's context offsets.
inline std::uint32_t template_index(std::span<const Template> templates, const Rule& rule) {
    for (std::size_t i = 0; i < templates.size(); ++i)
        if (rule.uses(templates[i]))
            return static_cast<std::uint32_t>(i);
    return static_cast<std::uint32_t>(templates.size());
}

inline int max_span(std::span<const Template> templates) {
    int s = 0;
    for (const auto& t : templates)
        s = std::max(s, t.span());
    return s;
}

} // namespace tbl::detail
