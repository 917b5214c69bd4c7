#pragma once

#include "tbl/corpus.hpp"
#include "tbl/detail/pattern.hpp"
#include "tbl/rules.hpp"
#include "tbl/trainer.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace tbl {

/// A rule known to the index, its live score, and the sites where it
/// currently matches (ascending flat positions).
struct RuleRecord {
    Rule rule;
    std::uint32_t tmpl = 0;
    RuleScore score;
    std::vector<std::uint32_t> sites;
};

/// Per-pass counters, also the incremental trainer's audit log line.
struct PassStats {
    std::size_t pass = 0;
    std::size_t rules_in_table = 0;
    std::size_t links_total = 0;
    std::size_t unseen_rules_added = 0;
    std::size_t sites_rechecked = 0;
};

/// Bidirectional rule <-> site links for incremental training.
///
/// The table holds every rule that has applied positively somewhere since
/// the index was built. For each table rule r and site s, r links s exactly
/// when r matches s under the current tags, and r's score is the effect
/// tally over its linked sites. Rules whose score drops to zero or below
/// stay in the table with their links.
class TrainerIndex {
public:
    /// Two scans: the first enters every rule instantiable at a wrong site,
    /// the second links each table rule to every site it matches.
    static TrainerIndex build(const Corpus& corpus, std::vector<Template> templates);

    /// Applies a table rule at all of its linked sites, then re-derives the
    /// links of every site within max_span() of a change. Rules first seen
    /// during that re-derivation are added and linked by one corpus scan.
    /// Returns the changed flat positions in corpus order. Throws
    /// ContractError when `rule` is not in the table.
    std::vector<std::size_t> apply_and_update(Corpus& corpus, const Rule& rule, std::size_t pass,
                                              bool record_dependencies, PassStats* stats = nullptr);

    const RuleRecord* find(const Rule& rule) const;
    std::span<const RuleRecord> records() const { return records_; }
    std::span<const std::uint32_t> links_at(std::size_t pos) const { return site_links_[pos]; }
    std::size_t links_total() const { return links_total_; }
    int max_span() const { return max_span_; }
    std::span<const Template> templates() const { return templates_; }

    /// The candidates the selector must see: for MaxNetBenefit, the rules
    /// tied at the top score when it reaches `threshold`; for RandomPositive,
    /// every rule with score >= 1.
    std::vector<ScoredRule> selection_candidates(Strategy strategy, std::int64_t threshold) const;

    /// Brute-force recount of every invariant against `corpus`. Returns one
    /// message per violation; empty means consistent.
    std::vector<std::string> audit(const Corpus& corpus) const;

private:
    explicit TrainerIndex(std::vector<Template> templates, std::size_t corpus_size);

    std::uint32_t add_rule(const Rule& rule, std::uint32_t tmpl);
    void link(std::uint32_t id, std::size_t pos, Tag truth);
    void unlink(std::uint32_t id, std::size_t pos, Tag truth);
    void scan_for(const Corpus& corpus, std::span<const std::uint32_t> ids);

    std::vector<Template> templates_;
    int max_span_ = 0;
    std::vector<RuleRecord> records_;
    std::unordered_map<Rule, std::uint32_t, RuleHash> ids_;
    std::unordered_map<detail::PatternKey, std::vector<std::uint32_t>, detail::PatternHash> by_pattern_;
    std::vector<std::vector<std::uint32_t>> site_links_;
    std::size_t links_total_ = 0;
    std::vector<std::uint64_t> visit_stamp_;
    std::uint64_t visit_generation_ = 0;
};

/// Incremental trainer driven one pass at a time.
class IncrementalTrainer {
public:
    /// Baseline-tags `corpus` and builds the index. The corpus must outlive
    /// the trainer.
    IncrementalTrainer(Corpus& corpus, const Lexicon& lexicon, TrainerConfig config);

    /// Runs one pass; nothing when training has stopped.
    std::optional<TraceRecord> step();

    const TrainerIndex& index() const { return index_; }
    const PassStats& last_stats() const { return stats_; }
    std::size_t errors() const { return errors_; }

    /// Trains to completion and returns the accumulated result.
    TrainResult run(const std::function<void(const PassStats&)>& on_pass = {});

    TrainResult result() const { return result_; }

private:
    Corpus& corpus_;
    TrainerConfig config_;
    TrainerIndex index_;
    RuleSelector selector_;
    TrainResult result_;
    PassStats stats_;
    std::size_t errors_ = 0;
    std::size_t pass_ = 0;
    bool done_ = false;
};

/// Same contract as train_naive, computed incrementally. `on_pass` receives
/// each pass's audit line.
TrainResult train_incremental(Corpus& corpus, const Lexicon& lexicon, const TrainerConfig& config,
                              const std::function<void(const PassStats&)>& on_pass = {});

} // namespace tbl
