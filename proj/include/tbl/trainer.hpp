#pragma once

#include "tbl/corpus.hpp"
#include "tbl/curve.hpp"
#include "tbl/random.hpp"
#include "tbl/rules.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tbl {

enum class Strategy {
    MaxNetBenefit,  ///< highest pos - neg, ties to the smallest encoding
    RandomPositive, ///< uniform over rules with pos - neg >= 1
};

struct TrainerConfig {
    std::vector<Template> templates = Template::default_set();
    /// Minimum pos - neg a greedy choice must reach. 1 = exhaustive.
    std::int64_t threshold = 1;
    Strategy strategy = Strategy::MaxNetBenefit;
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_passes;
    bool record_dependencies = false;
    /// Incremental trainer only: recount every table rule after each pass and
    /// throw ContractError on a mismatch. Slow.
    bool audit = false;

    /// Throws ContractError if threshold < 1 or templates is empty.
    void validate() const;
};

struct TraceRecord {
    std::size_t pass = 0;
    Rule rule;
    RuleScore score;
    std::size_t errors_after = 0;
    double train_accuracy_after = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// A learned tagger: baseline lexicon plus the ordered rule sequence.
struct Model {
    Lexicon lexicon{Tag{}};
    std::vector<Rule> rules;
    /// Settings the model was trained with, written into the model file.
    std::vector<std::pair<std::string, std::string>> settings;

    Tag default_tag() const { return lexicon.default_tag(); }

    friend bool operator==(const Model&, const Model&) = default;
};

struct TrainResult {
    Model model;
    std::vector<TraceRecord> trace;
    Curve curve;
};

struct ScoredRule {
    Rule rule;
    RuleScore score;
};

/// Every rule instantiable at a currently wrong site under some template,
/// scored over the whole corpus. Order is first discovery in corpus order.
std::vector<ScoredRule> enumerate_candidates(const Corpus& corpus, std::span<const Template> templates);

/// Picks the next rule from a scored candidate list.
class RuleSelector {
public:
    RuleSelector(Strategy strategy, std::int64_t threshold, std::uint64_t seed)
        : strategy_(strategy), threshold_(threshold), rng_(seed) {}

    /// Index into `candidates`, or nothing when training should stop.
    /// MaxNetBenefit needs score >= threshold; RandomPositive needs score >= 1
    /// and ignores the threshold. Each RandomPositive call that finds an
    /// eligible rule consumes one draw.
    std::optional<std::size_t> select(std::span<const ScoredRule> candidates);

    Strategy strategy() const { return strategy_; }
    std::int64_t threshold() const { return threshold_; }

private:
    Strategy strategy_;
    std::int64_t threshold_;
    Rng rng_;
};

/// Reference trainer: re-enumerates and rescores all candidates against the
/// whole corpus on every pass. `corpus` is baseline-tagged with `lexicon`
/// first and is left in its final trained state.
TrainResult train_naive(Corpus& corpus, const Lexicon& lexicon, const TrainerConfig& config);

/// Key/value pairs describing a config, as stored in model files.
std::vector<std::pair<std::string, std::string>> describe(const TrainerConfig& config);

std::string_view to_string(Strategy s);

} // namespace tbl
