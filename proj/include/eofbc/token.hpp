#pragma once

#include <string>

#include "eofbc/source.hpp"

namespace eofbc {

enum class TokenKind {
    LBrack,
    RBrack,
    Arrow,   // >
    Dot,
    LParen,
    RParen,
    Id,
    Opaque,  // numeric or string literal, never interpreted
    At,      // @
    Hat,     // ^
    Newline,
    Indent,
    Dedent,
};

struct Token {
    TokenKind kind;
    std::string text;
    SourceSpan span;
};

inline const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::LBrack: return "LBRACK";
        case TokenKind::RBrack: return "RBRACK";
        case TokenKind::Arrow: return "ARROW";
        case TokenKind::Dot: return "DOT";
        case TokenKind::LParen: return "LPAREN";
        case TokenKind::RParen: return "RPAREN";
        case TokenKind::Id: return "ID";
        case TokenKind::Opaque: return "OPAQUE";
        case TokenKind::At: return "AT";
        case TokenKind::Hat: return "HAT";
        case TokenKind::Newline: return "NL";
        case TokenKind::Indent: return "INDENT";
        case TokenKind::Dedent: return "DEDENT";
    }
    return "?";
}

}  // namespace eofbc
