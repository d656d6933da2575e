#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eofbc/ast.hpp"
#include "eofbc/lexer.hpp"
#include "eofbc/token.hpp"

namespace eofbc {

// Recursive-descent parser for the EO subset. Horizontal applications
// (`self.f self y > @`) and vertical ones (head on the binding line,
// arguments indented one level) produce identical Application nodes. The
// reversed dot form (`length. > len` with the receiver as the first
// indented argument) is accepted for plain attribute names.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    EoProgram parse_program() {
        EoProgram program;
        std::set<std::string> names;
        while (!at_end()) {
            EoBinding binding = parse_binding();
            if (binding.name == "@") {
                throw ParseError(binding.span, "decoratee binding '@' is not allowed at the top level");
            }
            if (!names.insert(binding.name).second) {
                throw ParseError(binding.span, "duplicate top-level binding '" + binding.name + "'");
            }
            program.objects.push_back(std::move(binding));
        }
        return program;
    }

private:
    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{TokenKind::Newline, "", {}};
        return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : eof;
    }

    bool check(TokenKind k, std::size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() && tokens_[pos_ + ahead].kind == k;
    }

    Token advance() { return tokens_[pos_++]; }

    SourceSpan here() const {
        if (!at_end()) return peek().span;
        return tokens_.empty() ? SourceSpan{} : tokens_.back().span;
    }

    Token expect(TokenKind k, const std::string& what) {
        if (!check(k)) {
            std::string got = at_end() ? "end of input" : token_kind_name(peek().kind);
            throw ParseError(here(), "expected " + what + ", got " + got, {token_kind_name(k)});
        }
        return advance();
    }

    std::string parse_binding_name() {
        if (check(TokenKind::Id)) return advance().text;
        if (check(TokenKind::At)) {
            advance();
            return "@";
        }
        throw ParseError(here(), "expected binding name or '@'", {"ID", "AT"});
    }

    EoBinding parse_binding() {
        SourceSpan start = here();
        if (check(TokenKind::LBrack)) {
            advance();
            EoAbstract abstract;
            std::set<std::string> seen;
            while (check(TokenKind::Id)) {
                Token p = advance();
                if (!seen.insert(p.text).second) {
                    throw ParseError(p.span, "duplicate void attribute '" + p.text + "'");
                }
                abstract.params.push_back(p.text);
            }
            expect(TokenKind::RBrack, "']'");
            expect(TokenKind::Arrow, "'>'");
            std::string name = parse_binding_name();
            expect(TokenKind::Newline, "end of line");
            if (check(TokenKind::Indent)) {
                advance();
                bool has_decoratee = false;
                std::set<std::string> bound;
                while (!check(TokenKind::Dedent)) {
                    EoBinding inner = parse_binding();
                    if (inner.name == "@") {
                        if (has_decoratee) {
                            throw DuplicateDecorateeError(inner.span,
                                                          "object '" + name + "' has more than one decoratee binding");
                        }
                        has_decoratee = true;
                    } else if (!bound.insert(inner.name).second) {
                        throw ParseError(inner.span, "duplicate attribute '" + inner.name + "' in object '" + name + "'");
                    }
                    abstract.bindings.push_back(std::move(inner));
                }
                expect(TokenKind::Dedent, "dedent");
            }
            return EoBinding{name, EoExpr{std::move(abstract), start}, start};
        }

        auto [head, dangling] = parse_line_expr();
        expect(TokenKind::Arrow, "'>'");
        std::string name = parse_binding_name();
        expect(TokenKind::Newline, "end of line");
        std::vector<EoExpr> args;
        if (check(TokenKind::Indent)) {
            advance();
            args = parse_arg_lines();
            expect(TokenKind::Dedent, "dedent");
        }
        EoExpr value = combine(std::move(head), dangling, std::move(args));
        return EoBinding{name, std::move(value), start};
    }

    std::vector<EoExpr> parse_arg_lines() {
        std::vector<EoExpr> args;
        while (!check(TokenKind::Dedent) && !at_end()) {
            auto [head, dangling] = parse_line_expr();
            expect(TokenKind::Newline, "end of line");
            std::vector<EoExpr> nested;
            if (check(TokenKind::Indent)) {
                advance();
                nested = parse_arg_lines();
                expect(TokenKind::Dedent, "dedent");
            }
            args.push_back(combine(std::move(head), dangling, std::move(nested)));
        }
        if (args.empty()) throw ParseError(here(), "expected at least one argument line");
        return args;
    }

    EoExpr combine(EoExpr head, bool dangling_dot, std::vector<EoExpr> args) {
        if (dangling_dot) {
            if (!head.is<EoRef>()) {
                throw ParseError(head.span, "reversed dot form requires a plain attribute name");
            }
            if (args.empty()) {
                throw ParseError(head.span, "reversed dot application needs an indented receiver argument");
            }
            std::string attribute = head.as<EoRef>().name;
            SourceSpan span = head.span;
            EoExpr receiver = std::move(args.front());
            args.erase(args.begin());
            EoExpr base{EoDotAccess{Box<EoExpr>(std::move(receiver)), std::move(attribute)}, span};
            if (args.empty()) return base;
            return EoExpr{EoApplication{Box<EoExpr>(std::move(base)), std::move(args)}, span};
        }
        if (args.empty()) return head;
        if (head.is<EoApplication>()) {
            auto& app = head.as<EoApplication>();
            for (auto& a : args) app.args.push_back(std::move(a));
            return head;
        }
        SourceSpan span = head.span;
        return EoExpr{EoApplication{Box<EoExpr>(std::move(head)), std::move(args)}, span};
    }

    bool starts_primary() const {
        return check(TokenKind::LParen) || check(TokenKind::Hat) || check(TokenKind::Id) ||
               check(TokenKind::Opaque);
    }

    // One horizontal expression: juxtaposed primaries form an application.
    // Returns the expression plus a flag for a trailing dangling dot
    // (reversed application form).
    std::pair<EoExpr, bool> parse_line_expr() {
        SourceSpan start = here();
        if (!starts_primary()) throw ParseError(start, "expected expression", {"ID", "OPAQUE", "LPAREN", "HAT"});
        EoExpr head = parse_primary();
        std::vector<EoExpr> args;
        while (starts_primary()) args.push_back(parse_primary());
        bool dangling = false;
        if (check(TokenKind::Dot) && (check(TokenKind::Arrow, 1) || check(TokenKind::Newline, 1))) {
            advance();
            dangling = true;
        }
        if (args.empty()) return {std::move(head), dangling};
        EoExpr app{EoApplication{Box<EoExpr>(std::move(head)), std::move(args)}, start};
        return {std::move(app), dangling};
    }

    EoExpr parse_paren_expr() {
        SourceSpan start = expect(TokenKind::LParen, "'('").span;
        if (!starts_primary()) throw ParseError(here(), "expected expression", {"ID", "OPAQUE", "LPAREN", "HAT"});
        EoExpr head = parse_primary();
        std::vector<EoExpr> args;
        while (starts_primary()) args.push_back(parse_primary());
        expect(TokenKind::RParen, "')'");
        if (args.empty()) return head;
        return EoExpr{EoApplication{Box<EoExpr>(std::move(head)), std::move(args)}, start};
    }

    EoExpr parse_primary() {
        SourceSpan start = here();
        EoExpr base;
        if (check(TokenKind::LParen)) {
            base = parse_paren_expr();
        } else if (check(TokenKind::Hat)) {
            advance();
            int ups = 1;
            while (check(TokenKind::Dot) && check(TokenKind::Hat, 1)) {
                advance();
                advance();
                ++ups;
            }
            base = EoExpr{EoLocator{ups}, start};
        } else if (check(TokenKind::Id)) {
            Token id = advance();
            if (is_builtin_atom(id.text)) {
                base = EoExpr{EoOpaque{id.text}, start};
            } else {
                base = EoExpr{EoRef{id.text}, start};
            }
        } else if (check(TokenKind::Opaque)) {
            base = EoExpr{EoOpaque{advance().text}, start};
        } else {
            throw ParseError(start, "expected expression", {"ID", "OPAQUE", "LPAREN", "HAT"});
        }
        while (check(TokenKind::Dot) && check(TokenKind::Id, 1)) {
            advance();
            Token attr = advance();
            base = EoExpr{EoDotAccess{Box<EoExpr>(std::move(base)), attr.text}, start};
        }
        return base;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

inline EoProgram parse(std::vector<Token> tokens) { return Parser(std::move(tokens)).parse_program(); }

inline EoProgram parse_source(std::string_view source, const std::string& file = "<input>") {
    return parse(tokenize(source, file));
}

}  // namespace eofbc
