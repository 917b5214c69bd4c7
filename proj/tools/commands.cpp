#include "commands.hpp"

#include "tbl/corpus.hpp"
#include "tbl/dependency.hpp"
#include "tbl/errors.hpp"
#include "tbl/incremental.hpp"
#include "tbl/model_io.hpp"
#include "tbl/synthetic.hpp"
#include "tbl/tagger.hpp"
#include "tbl/trainer.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace tbl::cli {
namespace {

/// Unreadable or unwritable files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content))
        throw IoError("cannot write '" + path + "'");
}

Corpus load_corpus(const std::string& path, CorpusFormat format = CorpusFormat::Tagged) {
    const auto text = read_file(path);
    try {
        return parse_corpus(text, format);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Model load_model(const std::string& path) {
    const auto text = read_file(path);
    try {
        return read_model(text);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string setting(const Model& model, std::string_view key) {
    for (const auto& [k, v] : model.settings)
        if (k == key)
            return v;
    return {};
}

// key=value lines; '#' starts a comment line.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> values;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ": config line lacks '='", line_no);
        auto key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
            key.pop_back();
        auto value = line.substr(eq + 1);
        const auto vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        values[key] = value;
    }
    return values;
}

// Fills options not given on the command line from a config file.
void apply_config(CLI::App& sub, const std::string& path) {
    if (path.empty())
        return;
    for (const auto& [key, value] : read_config(path)) {
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw UsageError("config key '" + key + "' is not an option of '" + sub.get_name() + "'");
        }
        if (opt->count() > 0 || key == "config")
            continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

std::vector<Template> parse_templates(const std::string& spec, int window) {
    try {
        return Template::parse_list(spec, window);
    } catch (const ParseError& e) {
        throw UsageError(std::string("bad --templates: ") + e.what());
    }
}

Tag parse_default_tag(const std::string& symbol) {
    if (symbol.empty() || symbol == kBoundarySymbol || symbol.find_first_of(" \t\n") != std::string::npos)
        throw UsageError("bad --default-tag '" + symbol + "'");
    return Tag::intern(symbol);
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string config;
    std::string corpus;
    std::string lexicon_corpus;
    std::string test_corpus;
    std::string templates = Template::format_list(Template::default_set());
    int window = kDefaultWindow;
    std::int64_t threshold = 1;
    std::string strategy = "greedy";
    std::uint64_t seed = 0;
    std::string engine = "incremental";
    std::string default_tag;
    std::size_t max_passes = 0;
    bool deps = false;
    bool audit = false;
    std::string audit_log;
    std::string output;
    std::string trace;
    std::string curve;
    std::string deps_report;
};

void add_train(CLI::App& app, TrainArgs& a) {
    auto* sub = app.add_subcommand("train", "Learn a rule sequence from a tagged corpus");
    sub->add_option("--config", a.config, "key=value file supplying defaults for these options");
    sub->add_option("--corpus", a.corpus, "Training corpus (word/TAG items)");
    sub->add_option("--lexicon-corpus", a.lexicon_corpus, "Build the baseline lexicon from this corpus instead");
    sub->add_option("--test-corpus", a.test_corpus, "Held-out corpus for the test curve");
    sub->add_option("--templates", a.templates, "Template list, e.g. \"-1; -2; -2,-1\"");
    sub->add_option("--window", a.window, "Largest allowed |offset| in templates")->check(CLI::Range(1, kMaxOffset));
    sub->add_option("--threshold", a.threshold, "Minimum net score for a greedy pick")->check(CLI::PositiveNumber);
    sub->add_option("--strategy", a.strategy, "greedy or random")->check(CLI::IsMember({"greedy", "random"}));
    sub->add_option("--seed", a.seed, "Seed for the random strategy");
    sub->add_option("--engine", a.engine, "naive or incremental")->check(CLI::IsMember({"naive", "incremental"}));
    sub->add_option("--default-tag", a.default_tag, "Initial tag for words missing from the lexicon");
    sub->add_option("--max-passes", a.max_passes, "Stop after this many rules (0 = no limit)");
    sub->add_flag("--deps", a.deps, "Record dependency trees and write a report");
    sub->add_flag("--audit", a.audit, "Recount the incremental index after every pass");
    sub->add_option("--audit-log", a.audit_log, "Per-pass incremental index statistics (TSV)");
    sub->add_option("-o,--output", a.output, "Model file to write");
    sub->add_option("--trace", a.trace, "Trace TSV (default: MODEL.trace.tsv)");
    sub->add_option("--curve", a.curve, "Curve TSV (default: MODEL.curve.tsv)");
    sub->add_option("--deps-report", a.deps_report, "Dependency report (default: MODEL.deps.txt)");
}

int cmd_train(CLI::App& sub, TrainArgs& a, std::ostream& out) {
    apply_config(sub, a.config);
    if (a.corpus.empty() || a.default_tag.empty() || a.output.empty())
        throw UsageError("train needs --corpus, --default-tag and -o");

    TrainerConfig config;
    config.templates = parse_templates(a.templates, a.window);
    config.threshold = a.threshold;
    config.strategy = a.strategy == "random" ? Strategy::RandomPositive : Strategy::MaxNetBenefit;
    config.seed = a.seed;
    if (a.max_passes > 0)
        config.max_passes = a.max_passes;
    config.record_dependencies = a.deps;
    config.audit = a.audit;
    const Tag default_tag = parse_default_tag(a.default_tag);

    Corpus corpus = load_corpus(a.corpus);
    const Lexicon lexicon = a.lexicon_corpus.empty()
                                ? Lexicon::build(corpus, default_tag)
                                : Lexicon::build(load_corpus(a.lexicon_corpus), default_tag);
    std::optional<Corpus> test;
    if (!a.test_corpus.empty())
        test = load_corpus(a.test_corpus);
    const Corpus original = corpus;

    std::string audit_log;
    TrainResult result;
    if (a.engine == "naive") {
        result = train_naive(corpus, lexicon, config);
    } else {
        result = train_incremental(corpus, lexicon, config, [&](const PassStats& s) {
            audit_log += format_audit_line(s.pass, s.rules_in_table, s.links_total, s.unseen_rules_added,
                                           s.sites_rechecked);
        });
    }

    // Settings that determine the model; the engine does not, so it is left
    // out to keep models from both engines byte-identical.
    Settings settings{{"corpus", a.corpus},
                      {"lexicon_corpus", a.lexicon_corpus.empty() ? "-" : a.lexicon_corpus},
                      {"default_tag", a.default_tag},
                      {"window", std::to_string(a.window)}};
    for (auto& kv : describe(config))
        settings.push_back(std::move(kv));
    result.model.settings = settings;

    Settings header = settings;
    header.emplace_back("engine", a.engine);
    header.emplace_back("test_corpus", a.test_corpus.empty() ? "-" : a.test_corpus);

    Curve curve = test ? evaluate_curve(result.model, original, std::move(test)) : result.curve;

    write_file(a.output, write_model(result.model));
    write_file(a.trace.empty() ? a.output + ".trace.tsv" : a.trace, format_trace(result.trace, header));
    write_file(a.curve.empty() ? a.output + ".curve.tsv" : a.curve, format_curve(curve, header));
    if (!a.audit_log.empty())
        write_file(a.audit_log, format_header(header) +
                                    "pass\trules_in_table\tlinks_total\tunseen_rules_added\tsites_rechecked\n" +
                                    audit_log);
    if (a.deps)
        write_file(a.deps_report.empty() ? a.output + ".deps.txt" : a.deps_report,
                   format_header(header) + format_report(dependency_report(corpus), result.model));

    out << "rules\t" << result.model.rules.size() << "\n";
    out << "train_accuracy\t" << format_fraction(result.curve.back().train_acc) << "\n";
    if (curve.back().test_acc)
        out << "test_accuracy\t" << format_fraction(*curve.back().test_acc) << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct TagArgs {
    std::string model;
    std::string input;
    std::string output;
    bool raw = false;
};

int cmd_tag(const TagArgs& a, std::ostream& out, std::ostream& err) {
    const Model model = load_model(a.model);
    const Corpus input = load_corpus(a.input, a.raw ? CorpusFormat::Raw : CorpusFormat::Tagged);

    if (!a.raw) {
        const auto known = model_tagset(model);
        const std::set<Tag> tagset(known.begin(), known.end());
        std::set<std::string> unknown;
        for (const auto& tok : input.tokens())
            if (!tagset.contains(tok.truth))
                unknown.insert(tok.truth.symbol());
        for (const auto& symbol : unknown)
            err << "warning: tag '" << symbol << "' does not occur in the model\n";
    }

    const auto text = serialize_corpus(tag(model, input), TagField::Current);
    if (a.output.empty() || a.output == "-")
        out << text;
    else
        write_file(a.output, text);
    return kOk;
}

struct EvalArgs {
    std::string model;
    std::string corpus;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const Model model = load_model(a.model);
    const Corpus corpus = load_corpus(a.corpus);
    const Curve curve = evaluate_curve(model, corpus);
    out << "tokens\t" << corpus.size() << "\n";
    out << "rules\t" << model.rules.size() << "\n";
    out << "baseline_accuracy\t" << format_fraction(curve.front().train_acc) << "\n";
    out << "accuracy\t" << format_fraction(curve.back().train_acc) << "\n";
    return kOk;
}

struct CurveArgs {
    std::string model;
    std::string train;
    std::string test;
    std::string output;
    bool initially_wrong = false;
};

int cmd_curve(const CurveArgs& a, std::ostream& out) {
    const Model model = load_model(a.model);
    std::optional<Corpus> test;
    if (!a.test.empty())
        test = load_corpus(a.test);
    const Curve curve = evaluate_curve(model, load_corpus(a.train), std::move(test),
                                       a.initially_wrong ? AccuracyScope::InitiallyWrong : AccuracyScope::AllTokens);
    Settings header = model.settings;
    header.emplace_back("curve_train", a.train);
    header.emplace_back("curve_test", a.test.empty() ? "-" : a.test);
    header.emplace_back("scope", a.initially_wrong ? "initially_wrong" : "all");
    const auto text = format_curve(curve, header);
    if (a.output.empty() || a.output == "-")
        out << text;
    else
        write_file(a.output, text);
    return kOk;
}

struct DepsArgs {
    std::string model;
    std::string corpus;
    std::string output;
    bool ignore_pass = false;
};

int cmd_deps(const DepsArgs& a, std::ostream& out) {
    const Model model = load_model(a.model);
    if (setting(model, "deps") != "1")
        throw UsageError("model was trained without --deps; no dependency report available");
    // Replaying the rules reproduces the training trajectory, and with it
    // the dependency trees.
    const Corpus replayed = tag(model, load_corpus(a.corpus), true);
    const auto text = format_header(model.settings) +
                      format_report(dependency_report(replayed, !a.ignore_pass), model);
    if (a.output.empty() || a.output == "-")
        out << text;
    else
        write_file(a.output, text);
    return kOk;
}

struct SynthArgs {
    std::size_t tags = 10;
    std::size_t vocabulary = 300;
    double ambiguity = 0.35;
    std::size_t tokens = 5000;
    std::uint64_t language_seed = 1;
    std::uint64_t seed = 1;
    std::string output;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    SyntheticSpec spec;
    spec.tags = a.tags;
    spec.vocabulary = a.vocabulary;
    spec.ambiguous_fraction = a.ambiguity;
    try {
        const auto lang = SyntheticLanguage::generate(spec, a.language_seed);
        const auto text = serialize_corpus(lang.sample(a.tokens, a.seed));
        if (a.output.empty() || a.output == "-")
            out << text;
        else
            write_file(a.output, text);
    } catch (const ContractError& e) {
        throw UsageError(e.what());
    }
    return kOk;
}

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transformation-based tagger: learn, apply and analyse rule sequences"};
    app.require_subcommand(1);

    TrainArgs train_args;
    add_train(app, train_args);

    TagArgs tag_args;
    auto* tag_cmd = app.add_subcommand("tag", "Tag a corpus with a learned model");
    tag_cmd->add_option("--model", tag_args.model)->required();
    tag_cmd->add_option("--in", tag_args.input)->required();
    tag_cmd->add_option("-o,--output", tag_args.output, "Output file (default: stdout)");
    tag_cmd->add_flag("--raw", tag_args.raw, "Input items are bare words without /TAG");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Accuracy of a model on a gold corpus");
    eval_cmd->add_option("--model", eval_args.model)->required();
    eval_cmd->add_option("--corpus", eval_args.corpus)->required();

    CurveArgs curve_args;
    auto* curve_cmd = app.add_subcommand("curve", "Per-rule accuracy curve (TSV)");
    curve_cmd->add_option("--model", curve_args.model)->required();
    curve_cmd->add_option("--train", curve_args.train)->required();
    curve_cmd->add_option("--test", curve_args.test);
    curve_cmd->add_option("-o,--output", curve_args.output, "Output file (default: stdout)");
    curve_cmd->add_flag("--initially-wrong", curve_args.initially_wrong,
                        "Measure only tokens the baseline got wrong");

    DepsArgs deps_args;
    auto* deps_cmd = app.add_subcommand("deps", "Dependency-tree report for a model trained with --deps");
    deps_cmd->add_option("--model", deps_args.model)->required();
    deps_cmd->add_option("--corpus", deps_args.corpus, "The training corpus")->required();
    deps_cmd->add_option("-o,--output", deps_args.output, "Output file (default: stdout)");
    deps_cmd->add_flag("--ignore-pass", deps_args.ignore_pass, "Group trees regardless of pass numbers");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic tagged corpus");
    synth_cmd->add_option("--tags", synth_args.tags);
    synth_cmd->add_option("--vocabulary", synth_args.vocabulary);
    synth_cmd->add_option("--ambiguity", synth_args.ambiguity)->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--tokens", synth_args.tokens);
    synth_cmd->add_option("--language-seed", synth_args.language_seed);
    synth_cmd->add_option("--seed", synth_args.seed);
    synth_cmd->add_option("-o,--output", synth_args.output, "Output file (default: stdout)");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (app.got_subcommand("train"))
            return cmd_train(*app.get_subcommand("train"), train_args, out);
        if (app.got_subcommand("tag"))
            return cmd_tag(tag_args, out, err);
        if (app.got_subcommand("eval"))
            return cmd_eval(eval_args, out);
        if (app.got_subcommand("curve"))
            return cmd_curve(curve_args, out);
        if (app.got_subcommand("deps"))
            return cmd_deps(deps_args, out);
        return cmd_synth(synth_args, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
}

} // namespace tbl::cli
