#include "tbl/corpus.hpp"

#include "tbl/errors.hpp"

#include <algorithm>
#include <limits>

namespace tbl {

void Corpus::add_sentence(std::vector<Token> tokens) {
    if (tokens.empty())
        return;
    const auto s = static_cast<std::uint32_t>(sentence_count());
    for (auto& t : tokens) {
        tokens_.push_back(std::move(t));
        sentence_of_.push_back(s);
    }
    starts_.push_back(tokens_.size());
}

std::span<const Token> Corpus::sentence(std::size_t s) const {
    if (s >= sentence_count())
        throw AddressError("sentence " + std::to_string(s) + " out of range");
    return std::span<const Token>(tokens_).subspan(starts_[s], starts_[s + 1] - starts_[s]);
}

std::size_t Corpus::flat(Site site) const {
    if (site.sentence >= sentence_count() ||
        site.index >= starts_[site.sentence + 1] - starts_[site.sentence])
        throw AddressError("site (" + std::to_string(site.sentence) + ", " +
                           std::to_string(site.index) + ") does not address a token");
    return starts_[site.sentence] + site.index;
}

Site Corpus::site(std::size_t pos) const {
    if (pos >= tokens_.size())
        throw AddressError("flat position " + std::to_string(pos) + " out of range");
    const std::size_t s = sentence_of_[pos];
    return {s, pos - starts_[s]};
}

// Structure and the word/truth/current triple; dependency links are not compared.
bool operator==(const Corpus& a, const Corpus& b) {
    return a.starts_ == b.starts_ &&
           std::equal(a.tokens_.begin(), a.tokens_.end(), b.tokens_.begin(), b.tokens_.end(),
                      [](const Token& x, const Token& y) {
                          return x.word == y.word && x.truth == y.truth && x.current == y.current;
                      });
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

Token parse_item(std::string_view item, CorpusFormat format, std::size_t line, std::size_t column) {
    if (format == CorpusFormat::Raw)
        return Token{std::string(item), Tag{}, Tag{}, nullptr};

    const auto slash = item.rfind('/');
    if (slash == std::string_view::npos)
        throw ParseError("item '" + std::string(item) + "' has no '/TAG' part", line, column);
    const auto word = item.substr(0, slash);
    const auto tag = item.substr(slash + 1);
    if (word.empty())
        throw ParseError("item '" + std::string(item) + "' has an empty word", line, column);
    if (tag.empty())
        throw ParseError("item '" + std::string(item) + "' has an empty tag", line, column);
    if (tag == kBoundarySymbol)
        throw ParseError("tag " + std::string(kBoundarySymbol) + " is reserved", line,
                         column + slash + 1);
    const Tag t = Tag::intern(tag);
    return Token{std::string(word), t, t, nullptr};
}

} // namespace

Corpus parse_corpus(std::string_view text, CorpusFormat format) {
    Corpus corpus;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        std::vector<Token> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && is_space(line[i]))
                ++i;
            const std::size_t start = i;
            while (i < line.size() && !is_space(line[i]))
                ++i;
            if (i > start)
                tokens.push_back(parse_item(line.substr(start, i - start), format, line_no, start + 1));
        }
        corpus.add_sentence(std::move(tokens));
    }
    return corpus;
}

std::string serialize_corpus(const Corpus& corpus, TagField field) {
    std::string out;
    for (std::size_t s = 0; s < corpus.sentence_count(); ++s) {
        bool first = true;
        for (const auto& tok : corpus.sentence(s)) {
            if (!first)
                out += ' ';
            first = false;
            out += tok.word;
            out += '/';
            out += (field == TagField::Truth ? tok.truth : tok.current).symbol();
        }
        out += '\n';
    }
    return out;
}

Lexicon Lexicon::build(const Corpus& corpus, Tag default_tag) {
    Lexicon lex(default_tag);
    for (const auto& tok : corpus.tokens())
        if (!tok.truth.is_none())
            lex.add(tok.word, tok.truth);
    return lex;
}

void Lexicon::add(std::string_view word, Tag tag, std::uint64_t count) {
    if (count == 0)
        return;
    auto it = counts_.find(word);
    if (it == counts_.end())
        it = counts_.emplace(std::string(word), TagCounts{}).first;
    it->second[tag] += count;
}

Tag Lexicon::most_frequent(std::string_view word) const {
    const auto it = counts_.find(word);
    if (it == counts_.end())
        return default_tag_;
    // Map iterates in symbol order, so the first maximum wins ties.
    Tag best;
    std::uint64_t best_count = 0;
    for (const auto& [tag, n] : it->second) {
        if (n > best_count) {
            best = tag;
            best_count = n;
        }
    }
    return best;
}

std::size_t baseline_assign(Corpus& corpus, const Lexicon& lexicon) {
    std::size_t errors = 0;
    for (auto& tok : corpus.tokens()) {
        tok.current = lexicon.most_frequent(tok.word);
        tok.dep.reset();
        if (tok.current != tok.truth)
            ++errors;
    }
    return errors;
}

std::size_t error_count(const Corpus& corpus) {
    return static_cast<std::size_t>(std::count_if(corpus.tokens().begin(), corpus.tokens().end(),
                                                  [](const Token& t) { return t.current != t.truth; }));
}

double accuracy(const Corpus& corpus) {
    return accuracy_from_errors(error_count(corpus), corpus.size());
}

} // namespace tbl
