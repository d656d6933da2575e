#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eofbc {

// Position of a token or node in the original source text. Lines and
// columns are 1-based; column counts bytes, which is good enough for the
// ASCII-heavy EO subset handled here.
struct SourceSpan {
    std::string file;
    int line = 1;
    int column = 1;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(column);
    }
};

class Error : public std::runtime_error {
public:
    Error(SourceSpan span, const std::string& message)
        : std::runtime_error(span.str() + ": " + message), span_(std::move(span)), message_(message) {}

    const SourceSpan& span() const { return span_; }
    const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::string message_;
};

class LexError : public Error {
public:
    enum class Kind { TabIndentation, OddIndentation, BadCharacter, UnterminatedString };

    LexError(Kind kind, SourceSpan span, const std::string& message)
        : Error(std::move(span), message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class ParseError : public Error {
public:
    ParseError(SourceSpan span, const std::string& message, std::vector<std::string> expected = {})
        : Error(std::move(span), message), expected_(std::move(expected)) {}

    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::vector<std::string> expected_;
};

class DuplicateDecorateeError : public Error {
public:
    using Error::Error;
};

class UnresolvedDecorateeError : public Error {
public:
    UnresolvedDecorateeError(std::string name, SourceSpan span)
        : Error(std::move(span), "unresolved decoratee '" + name + "'"), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class DecorationCycleError : public Error {
public:
    DecorationCycleError(std::vector<std::string> fqns, SourceSpan span)
        : Error(std::move(span), "decoration cycle: " + join(fqns)), fqns_(std::move(fqns)) {}

    const std::vector<std::string>& fqns() const { return fqns_; }

private:
    static std::string join(const std::vector<std::string>& fqns) {
        std::string out;
        for (const auto& f : fqns) {
            if (!out.empty()) out += " -> ";
            out += f;
        }
        return out;
    }

    std::vector<std::string> fqns_;
};

class MethodNotFoundError : public Error {
public:
    MethodNotFoundError(const std::string& object_fqn, const std::string& method)
        : Error(SourceSpan{}, "no method '" + method + "' reachable from object '" + object_fqn + "'"),
          object_fqn_(object_fqn), method_(method) {}

    const std::string& object_fqn() const { return object_fqn_; }
    const std::string& method() const { return method_; }

private:
    std::string object_fqn_;
    std::string method_;
};

class UnknownSuperclassError : public Error {
public:
    UnknownSuperclassError(std::string name, SourceSpan span)
        : Error(std::move(span), "unknown superclass '" + name + "'"), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class MalformedTestError : public Error {
public:
    MalformedTestError(std::string path, const std::string& reason)
        : Error(SourceSpan{path, 1, 1}, "malformed test file: " + reason), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace eofbc
