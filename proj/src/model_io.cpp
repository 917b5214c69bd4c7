#include "tbl/model_io.hpp"

#include "tbl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

namespace tbl {

std::vector<Tag> model_tagset(const Model& model) {
    std::set<Tag, SymbolLess> tags;
    if (!model.default_tag().is_none())
        tags.insert(model.default_tag());
    for (const auto& [word, counts] : model.lexicon.counts())
        for (const auto& [tag, n] : counts)
            tags.insert(tag);
    for (const auto& r : model.rules) {
        tags.insert(r.from);
        tags.insert(r.to);
        for (const auto& e : r.context)
            if (!e.tag.is_boundary())
                tags.insert(e.tag);
    }
    return {tags.begin(), tags.end()};
}

std::string write_model(const Model& model) {
    std::string out(kModelMagic);
    out += '\n';
    for (const auto& [key, value] : model.settings)
        out += "setting " + key + "=" + value + "\n";
    out += "default_tag " + model.default_tag().symbol() + "\n";
    out += "tagset";
    for (const auto t : model_tagset(model))
        out += " " + t.symbol();
    out += "\n";
    out += "lexicon " + std::to_string(model.lexicon.counts().size()) + "\n";
    for (const auto& [word, counts] : model.lexicon.counts()) {
        out += word;
        for (const auto& [tag, n] : counts)
            out += " " + tag.symbol() + ":" + std::to_string(n);
        out += "\n";
    }
    out += "rules " + std::to_string(model.rules.size()) + "\n";
    for (const auto& r : model.rules)
        out += encode(r) + "\n";
    return out;
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::string_view next(std::string_view what) {
        if (text_.empty())
            throw ParseError("model ends before " + std::string(what), line_ + 1);
        ++line_;
        const auto nl = text_.find('\n');
        auto line = text_.substr(0, nl);
        text_ = nl == std::string_view::npos ? std::string_view{} : text_.substr(nl + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        return line;
    }

    bool at_end() const { return text_.empty(); }
    std::size_t line() const { return line_; }

private:
    std::string_view text_;
    std::size_t line_ = 0;
};

std::size_t parse_count(std::string_view s, std::size_t line) {
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("expected a count, got '" + std::string(s) + "'", line);
    return n;
}

std::string_view expect_prefix(std::string_view line, std::string_view keyword, std::size_t line_no) {
    if (line.substr(0, keyword.size()) != keyword || line.size() <= keyword.size() ||
        line[keyword.size()] != ' ')
        throw ParseError("expected '" + std::string(keyword) + " ...'", line_no);
    return line.substr(keyword.size() + 1);
}

} // namespace

Model read_model(std::string_view text) {
    LineReader in(text);
    if (in.next("header") != kModelMagic)
        throw ParseError("not a model file (expected '" + std::string(kModelMagic) + "')", 1);

    Model model;
    auto line = in.next("default_tag");
    while (line.starts_with("setting ")) {
        const auto body = line.substr(8);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ParseError("setting line lacks key=value", in.line());
        model.settings.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
        line = in.next("default_tag");
    }
    const auto default_symbol = expect_prefix(line, "default_tag", in.line());
    if (default_symbol == kBoundarySymbol)
        throw ParseError("default tag may not be the boundary tag", in.line());
    model.lexicon = Lexicon(Tag::intern(default_symbol));

    line = in.next("tagset");
    if (line != "tagset" && !line.starts_with("tagset "))
        throw ParseError("expected 'tagset ...'", in.line());

    const auto n_words = parse_count(expect_prefix(in.next("lexicon"), "lexicon", in.line()), in.line());
    for (std::size_t i = 0; i < n_words; ++i) {
        line = in.next("lexicon entry");
        const auto sp = line.find(' ');
        if (sp == std::string_view::npos || sp == 0)
            throw ParseError("lexicon entry needs a word and at least one TAG:count", in.line());
        const auto word = line.substr(0, sp);
        auto rest = line.substr(sp + 1);
        while (!rest.empty()) {
            const auto next_sp = rest.find(' ');
            const auto item = rest.substr(0, next_sp);
            rest = next_sp == std::string_view::npos ? std::string_view{} : rest.substr(next_sp + 1);
            const auto colon = item.rfind(':');
            if (colon == std::string_view::npos || colon == 0)
                throw ParseError("bad lexicon item '" + std::string(item) + "'", in.line());
            const auto n = parse_count(item.substr(colon + 1), in.line());
            if (n == 0)
                throw ParseError("lexicon counts must be positive", in.line());
            model.lexicon.add(word, Tag::intern(item.substr(0, colon)), n);
        }
    }

    const auto n_rules = parse_count(expect_prefix(in.next("rules"), "rules", in.line()), in.line());
    model.rules.reserve(n_rules);
    for (std::size_t i = 0; i < n_rules; ++i) {
        line = in.next("rule");
        try {
            model.rules.push_back(decode(line));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), in.line());
        }
    }
    while (!in.at_end())
        if (!in.next("end").empty())
            throw ParseError("trailing content after the rule list", in.line());
    return model;
}

std::string format_fraction(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

std::string format_header(const Settings& settings) {
    std::string out;
    for (const auto& [key, value] : settings)
        out += "# " + key + "=" + value + "\n";
    return out;
}

std::string format_trace(std::span<const TraceRecord> trace, const Settings& header) {
    std::string out = format_header(header);
    out += "pass\trule_canonical\trule_display\tpos\tneg\tneut\ttrain_acc\n";
    for (const auto& r : trace) {
        out += std::to_string(r.pass) + "\t" + encode(r.rule) + "\t" + render_slots(r.rule) + "\t" +
               std::to_string(r.score.pos) + "\t" + std::to_string(r.score.neg) + "\t" +
               std::to_string(r.score.neut) + "\t" + format_fraction(r.train_accuracy_after) + "\n";
    }
    return out;
}

std::string format_curve(const Curve& curve, const Settings& header) {
    const bool with_test = std::any_of(curve.begin(), curve.end(), [](const auto& p) { return p.test_acc.has_value(); });
    std::string out = format_header(header);
    out += with_test ? "pass\ttrain_acc\ttest_acc\n" : "pass\ttrain_acc\n";
    for (const auto& p : curve) {
        out += std::to_string(p.pass) + "\t" + format_fraction(p.train_acc);
        if (with_test)
            out += "\t" + (p.test_acc ? format_fraction(*p.test_acc) : std::string("NA"));
        out += "\n";
    }
    return out;
}

std::string format_audit_line(std::size_t pass, std::size_t rules_in_table, std::size_t links_total,
                              std::size_t unseen_rules_added, std::size_t sites_rechecked) {
    return std::to_string(pass) + "\t" + std::to_string(rules_in_table) + "\t" + std::to_string(links_total) +
           "\t" + std::to_string(unseen_rules_added) + "\t" + std::to_string(sites_rechecked) + "\n";
}

} // namespace tbl
