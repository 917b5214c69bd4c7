#pragma once

#include "tbl/curve.hpp"
#include "tbl/trainer.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tbl {

inline constexpr std::string_view kModelMagic = "tbl-model 1";

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Plain-text model:
///
///     tbl-model 1
///     setting <key>=<value>          (zero or more, in order)
///     default_tag <TAG>
///     tagset <TAG> <TAG> ...         (sorted by symbol; informational)
///     lexicon <n>
///     <word> <TAG>:<count> ...       (n lines, words and tags sorted)
///     rules <m>
///     <canonical rule>               (m lines, learning order)
std::string write_model(const Model& model);

/// Throws ParseError with the offending line number.
Model read_model(std::string_view text);

/// Tags named anywhere in the model, boundary excluded, sorted by symbol.
std::vector<Tag> model_tagset(const Model& model);

/// `# key=value` lines.
std::string format_header(const Settings& settings);

/// Columns: pass rule_canonical rule_display pos neg neut train_acc.
std::string format_trace(std::span<const TraceRecord> trace, const Settings& header = {});

/// Columns: pass train_acc [test_acc].
std::string format_curve(const Curve& curve, const Settings& header = {});

/// Columns: pass rules_in_table links_total unseen_rules_added sites_rechecked.
std::string format_audit_line(std::size_t pass, std::size_t rules_in_table, std::size_t links_total,
                              std::size_t unseen_rules_added, std::size_t sites_rechecked);

/// Fixed six-decimal rendering used by every TSV writer.
std::string format_fraction(double value);

} // namespace tbl
