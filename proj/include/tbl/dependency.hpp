#pragma once

#include "tbl/corpus.hpp"
#include "tbl/rules.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tbl {

struct Model;

/// One rule application at one site. Children are the provenance of every
/// position the rule tested when it fired: offset 0 is the site's own
/// previous node, other offsets are context positions. Positions still
/// holding their baseline tag contribute no child.
struct DependencyNode {
    Rule rule;
    std::size_t pass = 0;
    std::vector<std::pair<int, DepLink>> children; ///< ascending offset
};

/// Builds the node for applying `rule` at flat position `pos` without
/// touching the corpus.
DepLink make_dependency_node(const Corpus& corpus, std::size_t pos, const Rule& rule, std::size_t pass);

/// Records one pass's applications. All nodes are built from the links as
/// they stood before the pass, then installed. Call before rewriting tags.
void record_applications(Corpus& corpus, std::span<const std::size_t> positions, const Rule& rule,
                         std::size_t pass);

/// Single-site form: builds the node, installs it, and returns it.
DepLink record_application(Corpus& corpus, Site site, const Rule& rule, std::size_t pass);

/// Structural key: rule encoding, pass (optionally), and children by offset,
/// recursively. Equal keys mean isomorphic trees; shared subtrees and equal
/// copies are not distinguished.
std::string canonical_key(const DependencyNode& node, bool include_pass = true);

/// Distinct nodes reachable from `node`, itself included.
std::size_t node_count(const DependencyNode& node);

/// Levels on the longest root-to-leaf path; a leaf has depth 1.
std::size_t depth(const DependencyNode& node);

/// Aligned drawing: one line per node as `offset: <rule> (pass)`,
/// offsets relative to the root, children before parents, root last.
std::string render_tree(const DependencyNode& node);

struct TreeClass {
    std::string key;
    std::size_t count = 0;
    DepLink representative;
};

struct DependencyReport {
    std::size_t changed_sites = 0;
    std::size_t multi_node_sites = 0;
    double leverage = 0.0; ///< multi_node_sites / changed_sites, 0 when nothing changed
    std::vector<TreeClass> classes; ///< descending count, then key
};

/// Groups the final tree of every changed site. Throws UsageError when the
/// corpus was not trained or replayed with recording on.
DependencyReport dependency_report(const Corpus& corpus, bool include_pass = true);

/// Text report: stat lines, the learned rules, then each class as
/// "x<count>" followed by its drawing, classes separated by blank lines.
std::string format_report(const DependencyReport& report, const Model& model);

} // namespace tbl
