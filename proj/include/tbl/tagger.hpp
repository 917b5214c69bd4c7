#pragma once

#include "tbl/corpus.hpp"
#include "tbl/curve.hpp"
#include "tbl/trainer.hpp"

#include <optional>

namespace tbl {

/// Baseline-tags `corpus` with the model's lexicon and applies every rule in
/// order. Truth tags are left alone. With `record_dependencies`, dependency
/// trees are rebuilt as if by the trainer (pass k = rule k).
Corpus tag(const Model& model, Corpus corpus, bool record_dependencies = false);

enum class AccuracyScope {
    AllTokens,
    /// Only tokens the baseline got wrong.
    InitiallyWrong,
};

/// Accuracy after each prefix of the rule list, for the training corpus and
/// optionally a test corpus, computed in a single sweep.
Curve evaluate_curve(const Model& model, Corpus train, std::optional<Corpus> test = std::nullopt,
                     AccuracyScope scope = AccuracyScope::AllTokens);

} // namespace tbl
