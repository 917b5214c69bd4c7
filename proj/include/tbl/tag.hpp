#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace tbl {

/// Spelling of the reserved sentence-edge tag. It can appear in rule
/// contexts but never as a corpus tag.
inline constexpr std::string_view kBoundarySymbol = "*BOUNDARY*";

/// Interned part-of-speech tag.
///
/// Tags compare and hash by handle. The handle order is interning order and
/// carries no meaning; anything user-visible that must be ordered (lexicon
/// tie-breaks, canonical rule encodings) orders by symbol() instead.
/// A default-constructed Tag is "none", used for tokens without a truth tag.
class Tag {
public:
    constexpr Tag() = default;

    /// Returns the handle for `symbol`, creating it on first use. Thread-safe.
    static Tag intern(std::string_view symbol);
    static std::optional<Tag> find(std::string_view symbol);

    static constexpr Tag boundary() { return Tag(0); }

    constexpr bool is_boundary() const { return id_ == 0; }
    constexpr bool is_none() const { return id_ == kNone; }
    constexpr std::uint32_t id() const { return id_; }

    /// "_" for none.
    const std::string& symbol() const;

    friend constexpr bool operator==(Tag, Tag) = default;
    friend constexpr auto operator<=>(Tag, Tag) = default;

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;
    explicit constexpr Tag(std::uint32_t id) : id_(id) {}

    std::uint32_t id_ = kNone;
};

/// Orders tags by spelling.
struct SymbolLess {
    bool operator()(Tag a, Tag b) const { return a.symbol() < b.symbol(); }
};

} // namespace tbl

template <>
struct std::hash<tbl::Tag> {
    std::size_t operator()(tbl::Tag t) const noexcept { return std::hash<std::uint32_t>{}(t.id()); }
};
