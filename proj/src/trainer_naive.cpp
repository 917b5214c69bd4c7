#include "tbl/trainer.hpp"

#include "tbl/detail/pattern.hpp"
#include "tbl/dependency.hpp"
#include "tbl/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace tbl {

void TrainerConfig::validate() const {
    if (templates.empty())
        throw ContractError("trainer needs at least one template");
    if (threshold < 1)
        throw ContractError("score threshold must be >= 1");
}

std::string_view to_string(Strategy s) {
    return s == Strategy::MaxNetBenefit ? "greedy" : "random";
}

std::vector<std::pair<std::string, std::string>> describe(const TrainerConfig& config) {
    return {
        {"templates", Template::format_list(config.templates)},
        {"threshold", std::to_string(config.threshold)},
        {"strategy", std::string(to_string(config.strategy))},
        {"seed", std::to_string(config.seed)},
        {"max_passes", config.max_passes ? std::to_string(*config.max_passes) : "none"},
        {"deps", config.record_dependencies ? "1" : "0"},
    };
}

std::vector<ScoredRule> enumerate_candidates(const Corpus& corpus, std::span<const Template> templates) {
    std::vector<ScoredRule> out;
    std::unordered_map<Rule, std::uint32_t, RuleHash> seen;
    std::unordered_map<detail::PatternKey, std::vector<std::uint32_t>, detail::PatternHash> by_pattern;
    std::vector<char> is_from;

    const auto tokens = corpus.tokens();
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        if (tokens[pos].current == tokens[pos].truth)
            continue;
        for (std::uint32_t t = 0; t < templates.size(); ++t) {
            auto rule = instantiate_flat(templates[t], corpus, pos);
            const auto [it, inserted] = seen.try_emplace(*rule, static_cast<std::uint32_t>(out.size()));
            if (!inserted)
                continue;
            by_pattern[detail::pattern_of(t, *rule)].push_back(it->second);
            if (is_from.size() <= rule->from.id())
                is_from.resize(rule->from.id() + 1, 0);
            is_from[rule->from.id()] = 1;
            out.push_back({*rule, {}});
        }
    }
    if (out.empty())
        return out;

    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        const auto centre = tokens[pos].current.id();
        if (centre >= is_from.size() || !is_from[centre])
            continue;
        for (std::uint32_t t = 0; t < templates.size(); ++t) {
            const auto it = by_pattern.find(detail::pattern_at(t, templates[t], corpus, pos));
            if (it == by_pattern.end())
                continue;
            for (const auto id : it->second)
                out[id].score.add(effect_given_match(out[id].rule, tokens[pos].truth));
        }
    }
    return out;
}

std::optional<std::size_t> RuleSelector::select(std::span<const ScoredRule> candidates) {
    if (strategy_ == Strategy::MaxNetBenefit) {
        std::optional<std::size_t> best;
        std::string best_code;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto s = candidates[i].score.score();
            if (s < threshold_)
                continue;
            if (best) {
                const auto b = candidates[*best].score.score();
                if (s < b)
                    continue;
                if (s == b) {
                    auto code = encode(candidates[i].rule);
                    if (code >= best_code)
                        continue;
                    best = i;
                    best_code = std::move(code);
                    continue;
                }
            }
            best = i;
            best_code = encode(candidates[i].rule);
        }
        return best;
    }

    std::vector<std::pair<std::string, std::size_t>> eligible;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].score.score() >= 1)
            eligible.emplace_back(encode(candidates[i].rule), i);
    if (eligible.empty())
        return std::nullopt;
    std::sort(eligible.begin(), eligible.end());
    return eligible[rng_.below(eligible.size())].second;
}

TrainResult train_naive(Corpus& corpus, const Lexicon& lexicon, const TrainerConfig& config) {
    config.validate();
    TrainResult result;
    result.model.lexicon = lexicon;
    result.model.settings = describe(config);

    baseline_assign(corpus, lexicon);
    corpus.set_dependencies_recorded(config.record_dependencies);
    result.curve.push_back({0, accuracy(corpus), std::nullopt});

    RuleSelector selector(config.strategy, config.threshold, config.seed);
    for (std::size_t pass = 1; !config.max_passes || pass <= *config.max_passes; ++pass) {
        const auto candidates = enumerate_candidates(corpus, config.templates);
        const auto pick = selector.select(candidates);
        if (!pick)
            break;
        const auto& chosen = candidates[*pick];

        const auto hits = match_positions(chosen.rule, corpus);
        if (config.record_dependencies)
            record_applications(corpus, hits, chosen.rule, pass);
        for (const auto pos : hits)
            corpus.tokens()[pos].current = chosen.rule.to;

        const double acc = accuracy(corpus);
        result.model.rules.push_back(chosen.rule);
        result.trace.push_back({pass, chosen.rule, chosen.score, error_count(corpus), acc});
        result.curve.push_back({pass, acc, std::nullopt});
    }
    return result;
}

} // namespace tbl
