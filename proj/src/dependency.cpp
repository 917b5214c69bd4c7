#include "tbl/dependency.hpp"

#include "tbl/errors.hpp"
#include "tbl/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace tbl {

DepLink make_dependency_node(const Corpus& corpus, std::size_t pos, const Rule& rule, std::size_t pass) {
    auto node = std::make_shared<DependencyNode>();
    node->rule = rule;
    node->pass = pass;
    const auto s = corpus.sentence_of(pos);
    const auto lo = static_cast<std::ptrdiff_t>(corpus.sentence_begin(s));
    const auto hi = static_cast<std::ptrdiff_t>(corpus.sentence_end(s));

    auto attach = [&](int offset) {
        const auto target = static_cast<std::ptrdiff_t>(pos) + offset;
        if (target < lo || target >= hi)
            return;
        if (const auto& dep = corpus.tokens()[static_cast<std::size_t>(target)].dep)
            node->children.emplace_back(offset, dep);
    };
    // Context offsets are sorted, so inserting 0 in place keeps the order.
    bool centre_done = false;
    for (const auto& e : rule.context) {
        if (!centre_done && e.offset > 0) {
            attach(0);
            centre_done = true;
        }
        attach(e.offset);
    }
    if (!centre_done)
        attach(0);
    return node;
}

void record_applications(Corpus& corpus, std::span<const std::size_t> positions, const Rule& rule,
                         std::size_t pass) {
    std::vector<DepLink> nodes;
    nodes.reserve(positions.size());
    for (const auto pos : positions)
        nodes.push_back(make_dependency_node(corpus, pos, rule, pass));
    for (std::size_t i = 0; i < positions.size(); ++i)
        corpus.tokens()[positions[i]].dep = std::move(nodes[i]);
}

DepLink record_application(Corpus& corpus, Site site, const Rule& rule, std::size_t pass) {
    const auto pos = corpus.flat(site);
    auto node = make_dependency_node(corpus, pos, rule, pass);
    corpus.tokens()[pos].dep = node;
    return node;
}

namespace {

using KeyMemo = std::unordered_map<const DependencyNode*, std::string>;

const std::string& key_of(const DependencyNode& node, bool include_pass, KeyMemo& memo) {
    if (auto it = memo.find(&node); it != memo.end())
        return it->second;
    std::string key = "(" + encode(node.rule);
    if (include_pass)
        key += " #" + std::to_string(node.pass);
    for (const auto& [offset, child] : node.children)
        key += " " + std::to_string(offset) + "=" + key_of(*child, include_pass, memo);
    key += ")";
    return memo.emplace(&node, std::move(key)).first->second;
}

void collect(const DependencyNode& node, std::unordered_set<const DependencyNode*>& seen) {
    if (!seen.insert(&node).second)
        return;
    for (const auto& [offset, child] : node.children)
        collect(*child, seen);
}

std::string offset_label(int offset) {
    return (offset > 0 ? "+" : "") + std::to_string(offset) + ":";
}

struct Placed {
    const DependencyNode* node;
    int offset; // relative to the root
};

void place(const DependencyNode& node, int offset, std::set<std::pair<const DependencyNode*, int>>& seen,
           std::vector<Placed>& out) {
    if (!seen.insert({&node, offset}).second)
        return;
    for (const auto& [rel, child] : node.children)
        place(*child, offset + rel, seen, out);
    out.push_back({&node, offset});
}

} // namespace

std::string canonical_key(const DependencyNode& node, bool include_pass) {
    KeyMemo memo;
    return key_of(node, include_pass, memo);
}

std::size_t node_count(const DependencyNode& node) {
    std::unordered_set<const DependencyNode*> seen;
    collect(node, seen);
    return seen.size();
}

std::size_t depth(const DependencyNode& node) {
    std::size_t d = 0;
    for (const auto& [offset, child] : node.children)
        d = std::max(d, depth(*child));
    return d + 1;
}

std::string render_tree(const DependencyNode& root) {
    std::set<std::pair<const DependencyNode*, int>> seen;
    std::vector<Placed> order;
    place(root, 0, seen, order);

    // Common slot window, at least -2..+2 around the root.
    int lo = -2, hi = 2;
    for (const auto& p : order) {
        lo = std::min(lo, p.offset - p.node->rule.context.span());
        hi = std::max(hi, p.offset + p.node->rule.context.span());
    }
    const bool slotted = hi - lo + 1 <= 9;

    std::string out;
    for (const auto& p : order) {
        out += offset_label(p.offset);
        if (slotted) {
            std::vector<std::string> slots(static_cast<std::size_t>(hi - lo + 1), "—");
            slots[static_cast<std::size_t>(p.offset - lo)] =
                p.node->rule.from.symbol() + "/" + p.node->rule.to.symbol();
            for (const auto& e : p.node->rule.context)
                slots[static_cast<std::size_t>(p.offset + e.offset - lo)] = e.tag.symbol();
            for (const auto& s : slots)
                out += " " + s;
        } else {
            out += " " + encode(p.node->rule);
        }
        out += " (" + std::to_string(p.node->pass) + ")\n";
    }
    return out;
}

DependencyReport dependency_report(const Corpus& corpus, bool include_pass) {
    if (!corpus.dependencies_recorded())
        throw UsageError("dependency report requested but dependency recording was not enabled");
    DependencyReport report;
    std::map<std::string, TreeClass> classes;
    KeyMemo memo;
    for (const auto& tok : corpus.tokens()) {
        if (!tok.dep)
            continue;
        ++report.changed_sites;
        if (!tok.dep->children.empty())
            ++report.multi_node_sites;
        const auto& key = key_of(*tok.dep, include_pass, memo);
        auto& cls = classes[key];
        if (cls.count++ == 0) {
            cls.key = key;
            cls.representative = tok.dep;
        }
    }
    if (report.changed_sites)
        report.leverage = static_cast<double>(report.multi_node_sites) / static_cast<double>(report.changed_sites);
    for (auto& [key, cls] : classes)
        report.classes.push_back(std::move(cls));
    std::stable_sort(report.classes.begin(), report.classes.end(),
                     [](const TreeClass& a, const TreeClass& b) { return a.count > b.count; });
    return report;
}

std::string format_report(const DependencyReport& report, const Model& model) {
    char leverage[32];
    std::snprintf(leverage, sizeof leverage, "%.6f", report.leverage);
    std::string out;
    out += "changed_sites\t" + std::to_string(report.changed_sites) + "\n";
    out += "multi_node_sites\t" + std::to_string(report.multi_node_sites) + "\n";
    out += "leverage\t" + std::string(leverage) + "\n";
    out += "classes\t" + std::to_string(report.classes.size()) + "\n";
    out += "rules\t" + std::to_string(model.rules.size()) + "\n";
    for (std::size_t i = 0; i < model.rules.size(); ++i)
        out += std::to_string(i + 1) + "\t" + encode(model.rules[i]) + "\n";
    for (const auto& cls : report.classes) {
        out += "\nx" + std::to_string(cls.count) + "\n";
        out += render_tree(*cls.representative);
    }
    return out;
}

} // namespace tbl
