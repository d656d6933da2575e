#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "eofbc/source.hpp"
#include "eofbc/token.hpp"

namespace eofbc {

namespace detail {

inline bool is_id_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

// Identifiers follow EO conventions: letters, digits, '_' and '-'
// (e.g. `is-inside`, `derived_again`, `run_constructor`).
inline bool is_id_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

}  // namespace detail

// Lexes one EO source unit into a flat token stream. Indentation is
// significant: a fixed 2-space step produces INDENT/DEDENT tokens. Tabs in
// leading whitespace and indents that are not a multiple of two are
// rejected. Comments (`# ...`), blank lines and `\r` are discarded; the
// token stream is identical for `\n` and `\r\n` inputs.
inline std::vector<Token> tokenize(std::string_view source, const std::string& file = "<input>") {
    std::vector<Token> tokens;
    int indent_level = 0;
    std::size_t pos = 0;
    int line_no = 0;

    while (pos < source.size()) {
        ++line_no;
        std::size_t eol = source.find('\n', pos);
        std::string_view line = source.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? source.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            if (line[i] == '\t') {
                throw LexError(LexError::Kind::TabIndentation, {file, line_no, static_cast<int>(i) + 1},
                               "tab character in indentation");
            }
            ++i;
        }
        // Blank and comment-only lines do not affect indentation.
        if (i == line.size() || line[i] == '#') continue;

        if (i % 2 != 0) {
            throw LexError(LexError::Kind::OddIndentation, {file, line_no, static_cast<int>(i) + 1},
                           "indentation of " + std::to_string(i) + " spaces is not a multiple of 2");
        }
        int level = static_cast<int>(i / 2);
        SourceSpan line_start{file, line_no, static_cast<int>(i) + 1};
        for (; indent_level < level; ++indent_level) tokens.push_back({TokenKind::Indent, "", line_start});
        for (; indent_level > level; --indent_level) tokens.push_back({TokenKind::Dedent, "", line_start});

        while (i < line.size()) {
            char c = line[i];
            SourceSpan span{file, line_no, static_cast<int>(i) + 1};
            if (c == ' ') {
                ++i;
                continue;
            }
            if (c == '#') break;  // trailing comment
            switch (c) {
                case '[': tokens.push_back({TokenKind::LBrack, "[", span}); ++i; continue;
                case ']': tokens.push_back({TokenKind::RBrack, "]", span}); ++i; continue;
                case '>': tokens.push_back({TokenKind::Arrow, ">", span}); ++i; continue;
                case '.': tokens.push_back({TokenKind::Dot, ".", span}); ++i; continue;
                case '(': tokens.push_back({TokenKind::LParen, "(", span}); ++i; continue;
                case ')': tokens.push_back({TokenKind::RParen, ")", span}); ++i; continue;
                case '@': tokens.push_back({TokenKind::At, "@", span}); ++i; continue;
                case '^': tokens.push_back({TokenKind::Hat, "^", span}); ++i; continue;
                default: break;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = i;
                while (i < line.size() &&
                       (std::isdigit(static_cast<unsigned char>(line[i])) || line[i] == '.')) {
                    // A dot is part of the literal only when followed by a digit,
                    // so `3.add` still lexes as OPAQUE(3) DOT ID(add).
                    if (line[i] == '.' &&
                        !(i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
                        break;
                    }
                    ++i;
                }
                tokens.push_back({TokenKind::Opaque, std::string(line.substr(start, i - start)), span});
                continue;
            }
            if (c == '"') {
                std::size_t start = i++;
                while (i < line.size() && line[i] != '"') ++i;
                if (i == line.size()) {
                    throw LexError(LexError::Kind::UnterminatedString, span, "unterminated string literal");
                }
                ++i;
                tokens.push_back({TokenKind::Opaque, std::string(line.substr(start, i - start)), span});
                continue;
            }
            if (detail::is_id_start(c)) {
                std::size_t start = i;
                while (i < line.size() && detail::is_id_part(line[i])) ++i;
                tokens.push_back({TokenKind::Id, std::string(line.substr(start, i - start)), span});
                continue;
            }
            throw LexError(LexError::Kind::BadCharacter, span, std::string("unexpected character '") + c + "'");
        }
        tokens.push_back({TokenKind::Newline, "", {file, line_no, static_cast<int>(line.size()) + 1}});
    }

    SourceSpan eof{file, line_no + 1, 1};
    for (; indent_level > 0; --indent_level) tokens.push_back({TokenKind::Dedent, "", eof});
    return tokens;
}

}  // namespace eofbc
