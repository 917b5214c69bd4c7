#include "tbl/tag.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace tbl {
namespace {

struct TagTable {
    std::shared_mutex mutex;
    std::deque<std::string> names{std::string(kBoundarySymbol)};
    std::unordered_map<std::string, std::uint32_t> ids{{std::string(kBoundarySymbol), 0}};
};

TagTable& table() {
    static TagTable instance;
    return instance;
}

const std::string kNoneSymbol = "_";

} // namespace

Tag Tag::intern(std::string_view symbol) {
    auto& t = table();
    std::string key(symbol);
    {
        std::shared_lock lock(t.mutex);
        if (auto it = t.ids.find(key); it != t.ids.end())
            return Tag(it->second);
    }
    std::unique_lock lock(t.mutex);
    auto [it, inserted] = t.ids.try_emplace(key, static_cast<std::uint32_t>(t.names.size()));
    if (inserted)
        t.names.push_back(key);
    return Tag(it->second);
}

std::optional<Tag> Tag::find(std::string_view symbol) {
    auto& t = table();
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(std::string(symbol)); it != t.ids.end())
        return Tag(it->second);
    return std::nullopt;
}

const std::string& Tag::symbol() const {
    if (is_none())
        return kNoneSymbol;
    auto& t = table();
    std::shared_lock lock(t.mutex);
    return t.names[id_];
}

} // namespace tbl
