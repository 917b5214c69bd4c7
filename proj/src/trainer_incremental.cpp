#include "tbl/incremental.hpp"

#include "tbl/dependency.hpp"
#include "tbl/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace tbl {

TrainerIndex::TrainerIndex(std::vector<Template> templates, std::size_t corpus_size)
    : templates_(std::move(templates)),
      max_span_(detail::max_span(templates_)),
      site_links_(corpus_size),
      visit_stamp_(corpus_size, 0) {}

std::uint32_t TrainerIndex::add_rule(const Rule& rule, std::uint32_t tmpl) {
    const auto [it, inserted] = ids_.try_emplace(rule, static_cast<std::uint32_t>(records_.size()));
    if (inserted) {
        records_.push_back({rule, tmpl, {}, {}});
        by_pattern_[detail::pattern_of(tmpl, rule)].push_back(it->second);
    }
    return it->second;
}

void TrainerIndex::link(std::uint32_t id, std::size_t pos, Tag truth) {
    auto& rec = records_[id];
    const auto p = static_cast<std::uint32_t>(pos);
    if (rec.sites.empty() || rec.sites.back() < p)
        rec.sites.push_back(p);
    else
        rec.sites.insert(std::lower_bound(rec.sites.begin(), rec.sites.end(), p), p);
    site_links_[pos].push_back(id);
    rec.score.add(effect_given_match(rec.rule, truth));
    ++links_total_;
}

void TrainerIndex::unlink(std::uint32_t id, std::size_t pos, Tag truth) {
    auto& rec = records_[id];
    const auto p = static_cast<std::uint32_t>(pos);
    rec.sites.erase(std::lower_bound(rec.sites.begin(), rec.sites.end(), p));
    auto& links = site_links_[pos];
    *std::find(links.begin(), links.end(), id) = links.back();
    links.pop_back();
    rec.score.remove(effect_given_match(rec.rule, truth));
    --links_total_;
}

// Links the given (not yet linked) rules at every site they match.
void TrainerIndex::scan_for(const Corpus& corpus, std::span<const std::uint32_t> ids) {
    std::unordered_map<detail::PatternKey, std::vector<std::uint32_t>, detail::PatternHash> wanted;
    std::vector<char> is_from;
    std::vector<char> tmpl_used(templates_.size(), 0);
    for (const auto id : ids) {
        const auto& rec = records_[id];
        wanted[detail::pattern_of(rec.tmpl, rec.rule)].push_back(id);
        if (is_from.size() <= rec.rule.from.id())
            is_from.resize(rec.rule.from.id() + 1, 0);
        is_from[rec.rule.from.id()] = 1;
        tmpl_used[rec.tmpl] = 1;
    }
    const auto tokens = corpus.tokens();
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        const auto centre = tokens[pos].current.id();
        if (centre >= is_from.size() || !is_from[centre])
            continue;
        for (std::uint32_t t = 0; t < templates_.size(); ++t) {
            if (!tmpl_used[t])
                continue;
            const auto it = wanted.find(detail::pattern_at(t, templates_[t], corpus, pos));
            if (it == wanted.end())
                continue;
            for (const auto id : it->second)
                link(id, pos, tokens[pos].truth);
        }
    }
}

TrainerIndex TrainerIndex::build(const Corpus& corpus, std::vector<Template> templates) {
    TrainerIndex index(std::move(templates), corpus.size());
    const auto tokens = corpus.tokens();
    const auto& tmpls = index.templates_;

    // Scan 1: every rule that applies positively somewhere.
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        if (tokens[pos].current == tokens[pos].truth)
            continue;
        for (std::uint32_t t = 0; t < tmpls.size(); ++t)
            index.add_rule(*instantiate_flat(tmpls[t], corpus, pos), t);
    }

    // Scan 2: link and score those rules everywhere they match.
    std::vector<std::uint32_t> all(index.records_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i)
        all[i] = i;
    if (!all.empty())
        index.scan_for(corpus, all);
    return index;
}

const RuleRecord* TrainerIndex::find(const Rule& rule) const {
    const auto it = ids_.find(rule);
    return it == ids_.end() ? nullptr : &records_[it->second];
}

std::vector<std::size_t> TrainerIndex::apply_and_update(Corpus& corpus, const Rule& rule, std::size_t pass,
                                                        bool record_dependencies, PassStats* stats) {
    const auto found = ids_.find(rule);
    if (found == ids_.end())
        throw ContractError("rule " + encode(rule) + " is not in the trainer index");

    const auto& sites = records_[found->second].sites;
    std::vector<std::size_t> changed(sites.begin(), sites.end());

    if (record_dependencies)
        record_applications(corpus, changed, rule, pass);
    auto tokens = corpus.tokens();
    for (const auto pos : changed)
        tokens[pos].current = rule.to;

    // Neighbourhoods of all changes, deduplicated, in corpus order.
    ++visit_generation_;
    std::vector<std::size_t> neighbourhood;
    for (const auto c : changed) {
        const auto s = corpus.sentence_of(c);
        const auto lo = std::max(corpus.sentence_begin(s), c - std::min<std::size_t>(c, max_span_));
        const auto hi = std::min(corpus.sentence_end(s), c + static_cast<std::size_t>(max_span_) + 1);
        for (auto p = lo; p < hi; ++p) {
            if (visit_stamp_[p] == visit_generation_)
                continue;
            visit_stamp_[p] = visit_generation_;
            neighbourhood.push_back(p);
        }
    }
    std::sort(neighbourhood.begin(), neighbourhood.end());

    std::vector<Rule> unseen;
    std::unordered_set<Rule, RuleHash> unseen_set;
    std::vector<std::uint32_t> fresh;
    for (const auto p : neighbourhood) {
        const Tag truth = tokens[p].truth;
        fresh.clear();
        for (std::uint32_t t = 0; t < templates_.size(); ++t) {
            const auto it = by_pattern_.find(detail::pattern_at(t, templates_[t], corpus, p));
            if (it != by_pattern_.end())
                fresh.insert(fresh.end(), it->second.begin(), it->second.end());
        }

        auto& links = site_links_[p];
        for (std::size_t i = links.size(); i-- > 0;) {
            const auto id = links[i];
            if (std::find(fresh.begin(), fresh.end(), id) == fresh.end())
                unlink(id, p, truth);
        }
        for (const auto id : fresh)
            if (std::find(links.begin(), links.end(), id) == links.end())
                link(id, p, truth);

        if (tokens[p].current != truth) {
            for (const auto& tmpl : templates_) {
                auto r = instantiate_flat(tmpl, corpus, p);
                if (!ids_.contains(*r) && unseen_set.insert(*r).second)
                    unseen.push_back(*r);
            }
        }
    }

    if (!unseen.empty()) {
        std::vector<std::uint32_t> added;
        added.reserve(unseen.size());
        for (const auto& r : unseen)
            added.push_back(add_rule(r, detail::template_index(templates_, r)));
        scan_for(corpus, added);
    }

    if (stats) {
        stats->pass = pass;
        stats->rules_in_table = records_.size();
        stats->links_total = links_total_;
        stats->unseen_rules_added = unseen.size();
        stats->sites_rechecked = neighbourhood.size();
    }
    return changed;
}

std::vector<ScoredRule> TrainerIndex::selection_candidates(Strategy strategy, std::int64_t threshold) const {
    std::vector<ScoredRule> out;
    if (strategy == Strategy::RandomPositive) {
        for (const auto& rec : records_)
            if (rec.score.score() >= 1)
                out.push_back({rec.rule, rec.score});
        return out;
    }
    std::int64_t best = threshold;
    for (const auto& rec : records_) {
        const auto s = rec.score.score();
        if (s < best)
            continue;
        if (s > best) {
            best = s;
            out.clear();
        }
        out.push_back({rec.rule, rec.score});
    }
    return out;
}

std::vector<std::string> TrainerIndex::audit(const Corpus& corpus) const {
    std::vector<std::string> problems;
    std::size_t total = 0;
    std::vector<std::vector<std::uint32_t>> expected_links(corpus.size());
    for (std::uint32_t id = 0; id < records_.size(); ++id) {
        const auto& rec = records_[id];
        const auto code = encode(rec.rule);
        if (const auto recount = score_rule(rec.rule, corpus); recount != rec.score)
            problems.push_back(code + ": stored score (" + std::to_string(rec.score.pos) + "," +
                               std::to_string(rec.score.neg) + "," + std::to_string(rec.score.neut) +
                               ") != recount (" + std::to_string(recount.pos) + "," +
                               std::to_string(recount.neg) + "," + std::to_string(recount.neut) + ")");
        const auto matched = match_positions(rec.rule, corpus);
        if (!std::equal(matched.begin(), matched.end(), rec.sites.begin(), rec.sites.end()))
            problems.push_back(code + ": linked sites differ from the brute-force match set");
        for (const auto s : rec.sites)
            expected_links[s].push_back(id);
        total += rec.sites.size();
    }
    for (std::size_t pos = 0; pos < corpus.size(); ++pos) {
        auto have = site_links_[pos];
        std::sort(have.begin(), have.end());
        if (have != expected_links[pos])
            problems.push_back("site " + std::to_string(pos) + ": rule links are not symmetric");
    }
    if (total != links_total_)
        problems.push_back("links_total " + std::to_string(links_total_) + " != " + std::to_string(total));
    for (const auto& cand : enumerate_candidates(corpus, templates_))
        if (!ids_.contains(cand.rule))
            problems.push_back(encode(cand.rule) + ": positive rule missing from the table");
    return problems;
}

// ---------------------------------------------------------------------------

namespace {

const Corpus& prepare(Corpus& corpus, const Lexicon& lexicon, const TrainerConfig& config) {
    config.validate();
    baseline_assign(corpus, lexicon);
    corpus.set_dependencies_recorded(config.record_dependencies);
    return corpus;
}

} // namespace

IncrementalTrainer::IncrementalTrainer(Corpus& corpus, const Lexicon& lexicon, TrainerConfig config)
    : corpus_(corpus),
      config_(std::move(config)),
      index_(TrainerIndex::build(prepare(corpus, lexicon, config_), config_.templates)),
      selector_(config_.strategy, config_.threshold, config_.seed) {
    result_.model.lexicon = lexicon;
    result_.model.settings = describe(config_);
    errors_ = error_count(corpus_);
    result_.curve.push_back({0, accuracy_from_errors(errors_, corpus_.size()), std::nullopt});
}

std::optional<TraceRecord> IncrementalTrainer::step() {
    if (done_)
        return std::nullopt;
    if (config_.max_passes && pass_ >= *config_.max_passes) {
        done_ = true;
        return std::nullopt;
    }
    const auto candidates = index_.selection_candidates(config_.strategy, config_.threshold);
    const auto pick = selector_.select(candidates);
    if (!pick) {
        done_ = true;
        return std::nullopt;
    }
    const ScoredRule chosen = candidates[*pick];
    ++pass_;
    index_.apply_and_update(corpus_, chosen.rule, pass_, config_.record_dependencies, &stats_);

    errors_ -= static_cast<std::size_t>(chosen.score.score());
    const double acc = accuracy_from_errors(errors_, corpus_.size());
    TraceRecord record{pass_, chosen.rule, chosen.score, errors_, acc};
    result_.model.rules.push_back(chosen.rule);
    result_.trace.push_back(record);
    result_.curve.push_back({pass_, acc, std::nullopt});

    if (config_.audit) {
        const auto problems = index_.audit(corpus_);
        if (!problems.empty())
            throw ContractError("index audit failed after pass " + std::to_string(pass_) + ": " + problems.front());
    }
    return record;
}

TrainResult IncrementalTrainer::run(const std::function<void(const PassStats&)>& on_pass) {
    while (step())
        if (on_pass)
            on_pass(stats_);
    return result_;
}

TrainResult train_incremental(Corpus& corpus, const Lexicon& lexicon, const TrainerConfig& config,
                              const std::function<void(const PassStats&)>& on_pass) {
    IncrementalTrainer trainer(corpus, lexicon, config);
    return trainer.run(on_pass);
}

} // namespace tbl
