#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tbl {

/// Malformed input text (corpus, rule string, template spec, model file).
/// line/column are 1-based; zero when the position is not meaningful.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0)
            return what;
        std::string out = "line " + std::to_string(line);
        if (column != 0)
            out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

/// A site that does not address a token of the corpus.
class AddressError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A caller broke an operation's precondition (e.g. applying a rule the
/// index never saw).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A request that cannot be honoured with the given inputs, such as asking
/// for a dependency report when recording was off.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tbl
