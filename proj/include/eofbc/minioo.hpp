#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eofbc/ast.hpp"
#include "eofbc/source.hpp"

namespace eofbc::minioo {

// --- model ---------------------------------------------------------------

struct MiniExpr;

struct MiniNumber {
    std::string text;
};

struct MiniName {
    std::string name;  // parameter or local name
};

struct MiniFieldRef {
    std::string field;  // this.<field>
};

struct MiniCall {
    std::string method;  // receiver is always `this`
    std::vector<MiniExpr> args;
};

struct MiniBinary {
    std::string op;
    Box<MiniExpr> lhs;
    Box<MiniExpr> rhs;
};

struct MiniExpr {
    std::variant<MiniNumber, MiniName, MiniFieldRef, MiniCall, MiniBinary> node;
    SourceSpan span;

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(node);
    }
};

struct MiniStatement;

struct MiniFieldAssign {
    std::string field;
    MiniExpr value;
};

struct MiniMethodCall {
    MiniCall call;
};

struct MiniReturn {
    std::optional<MiniExpr> value;
};

struct MiniIf {
    MiniExpr condition;
    std::vector<MiniStatement> then_body;
    std::vector<MiniStatement> else_body;
};

struct MiniWhile {
    MiniExpr condition;
    std::vector<MiniStatement> body;
};

struct MiniStatement {
    std::variant<MiniFieldAssign, MiniMethodCall, MiniReturn, MiniIf, MiniWhile> node;
    SourceSpan span;

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(node);
    }
};

struct MiniMethod {
    std::string name;
    std::vector<std::string> params;
    std::vector<MiniStatement> body;
    SourceSpan span;
};

struct MiniConstructor {
    std::vector<std::string> params;
    std::optional<std::vector<MiniExpr>> super_args;  // `super(...)` as the first statement
    std::vector<MiniStatement> body;
    SourceSpan span;
};

struct ClassModel {
    std::string name;
    std::optional<std::string> superclass;  // absent means classObject
    std::vector<std::pair<std::string, std::optional<MiniExpr>>> fields;
    std::optional<MiniConstructor> constructor;
    std::vector<MiniMethod> methods;
    SourceSpan span;
};

// --- lexer+parser ----------------------------------------------------------

namespace detail {

struct MiniToken {
    std::string text;
    SourceSpan span;
    bool is_number = false;
    bool is_word = false;
};

inline std::vector<MiniToken> lex(std::string_view source, const std::string& file) {
    std::vector<MiniToken> tokens;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto bump = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (source[i + k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        i += n;
    };
    while (i < source.size()) {
        char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            bump(1);
            continue;
        }
        if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
            while (i < source.size() && source[i] != '\n') bump(1);
            continue;
        }
        SourceSpan span{file, line, column};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < source.size() &&
                   (std::isalnum(static_cast<unsigned char>(source[i])) || source[i] == '_')) {
                bump(1);
            }
            tokens.push_back({std::string(source.substr(start, i - start)), span, false, true});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < source.size() && std::isdigit(static_cast<unsigned char>(source[i]))) bump(1);
            tokens.push_back({std::string(source.substr(start, i - start)), span, true, false});
            continue;
        }
        static const char* two_char[] = {"<=", ">=", "==", "!="};
        bool matched = false;
        for (const char* op : two_char) {
            if (source.substr(i, 2) == op) {
                tokens.push_back({op, span, false, false});
                bump(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("{}();,.=+-*/%<>").find(c) != std::string::npos) {
            tokens.push_back({std::string(1, c), span, false, false});
            bump(1);
            continue;
        }
        throw ParseError(span, std::string("unexpected character '") + c + "'");
    }
    return tokens;
}

class MiniParser {
public:
    MiniParser(std::vector<MiniToken> tokens, std::string file)
        : tokens_(std::move(tokens)), file_(std::move(file)) {}

    std::vector<ClassModel> parse_unit() {
        std::vector<ClassModel> classes;
        while (!at_end()) classes.push_back(parse_class());
        std::set<std::string> names;
        for (const auto& c : classes) {
            if (!names.insert(c.name).second) {
                throw ParseError(c.span, "duplicate class '" + c.name + "'");
            }
        }
        for (const auto& c : classes) {
            if (c.superclass && names.count(*c.superclass) == 0) {
                throw UnknownSuperclassError(*c.superclass, c.span);
            }
        }
        return classes;
    }

private:
    bool at_end() const { return pos_ >= tokens_.size(); }

    const MiniToken& peek(std::size_t ahead = 0) const {
        static const MiniToken eof{"<eof>", {}, false, false};
        return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : eof;
    }

    bool check(const std::string& text, std::size_t ahead = 0) const { return peek(ahead).text == text; }

    MiniToken advance() {
        if (at_end()) throw ParseError(last_span(), "unexpected end of input");
        return tokens_[pos_++];
    }

    SourceSpan last_span() const { return tokens_.empty() ? SourceSpan{file_, 1, 1} : tokens_.back().span; }

    MiniToken expect(const std::string& text) {
        if (!check(text)) {
            throw ParseError(peek().span.file.empty() ? last_span() : peek().span,
                             "expected '" + text + "', got '" + peek().text + "'", {text});
        }
        return advance();
    }

    std::string expect_ident() {
        if (!peek().is_word) throw ParseError(peek().span, "expected identifier, got '" + peek().text + "'");
        return advance().text;
    }

    ClassModel parse_class() {
        SourceSpan span = peek().span;
        expect("class");
        ClassModel model;
        model.span = span;
        model.name = expect_ident();
        if (check("extends")) {
            advance();
            model.superclass = expect_ident();
        }
        expect("{");
        std::set<std::string> member_names;
        while (!check("}")) {
            parse_member(model, member_names);
        }
        expect("}");
        return model;
    }

    void parse_member(ClassModel& model, std::set<std::string>& member_names) {
        SourceSpan span = peek().span;
        if (check("int") && peek(2).text != "(") {
            advance();
            std::string name = expect_ident();
            if (!member_names.insert(name).second) {
                throw ParseError(span, "duplicate member '" + name + "'");
            }
            std::optional<MiniExpr> init;
            if (check("=")) {
                advance();
                init = parse_expr();
            }
            expect(";");
            model.fields.emplace_back(name, std::move(init));
            return;
        }
        if ((check("void") || check("int")) && peek(2).text == "(") {
            advance();
            MiniMethod method;
            method.span = span;
            method.name = expect_ident();
            if (!member_names.insert(method.name).second) {
                throw ParseError(span, "duplicate member '" + method.name + "'");
            }
            method.params = parse_params();
            method.body = parse_block(false);
            model.methods.push_back(std::move(method));
            return;
        }
        if (peek().is_word && peek().text == model.name && check("(", 1)) {
            advance();
            if (model.constructor) throw ParseError(span, "duplicate constructor");
            MiniConstructor ctor;
            ctor.span = span;
            ctor.params = parse_params();
            expect("{");
            if (check("super")) {
                advance();
                expect("(");
                ctor.super_args = parse_args();
                expect(")");
                expect(";");
            }
            while (!check("}")) ctor.body.push_back(parse_statement());
            expect("}");
            model.constructor = std::move(ctor);
            return;
        }
        throw ParseError(span, "expected field, method or constructor declaration, got '" + peek().text + "'");
    }

    std::vector<std::string> parse_params() {
        expect("(");
        std::vector<std::string> params;
        while (!check(")")) {
            if (!params.empty()) expect(",");
            expect("int");
            params.push_back(expect_ident());
        }
        expect(")");
        return params;
    }

    std::vector<MiniStatement> parse_block(bool /*allow_super*/) {
        expect("{");
        std::vector<MiniStatement> body;
        while (!check("}")) body.push_back(parse_statement());
        expect("}");
        return body;
    }

    MiniStatement parse_statement() {
        SourceSpan span = peek().span;
        if (check("return")) {
            advance();
            MiniReturn ret;
            if (!check(";")) ret.value = parse_expr();
            expect(";");
            return {std::move(ret), span};
        }
        if (check("if")) {
            advance();
            expect("(");
            MiniIf node{parse_expr(), {}, {}};
            expect(")");
            node.then_body = parse_block(false);
            if (check("else")) {
                advance();
                node.else_body = parse_block(false);
            }
            return {std::move(node), span};
        }
        if (check("while")) {
            advance();
            expect("(");
            MiniWhile node{parse_expr(), {}};
            expect(")");
            node.body = parse_block(false);
            return {std::move(node), span};
        }
        if (check("super")) {
            throw ParseError(span, "'super(...)' is only allowed as the first statement of a constructor");
        }
        if (check("this")) {
            advance();
            expect(".");
            std::string name = expect_ident();
            if (check("(")) {
                advance();
                MiniMethodCall call{MiniCall{name, parse_args()}};
                expect(")");
                expect(";");
                return {std::move(call), span};
            }
            expect("=");
            MiniFieldAssign assign{name, parse_expr()};
            expect(";");
            return {std::move(assign), span};
        }
        if (peek().is_word && check("(", 1)) {
            std::string name = advance().text;
            advance();
            MiniMethodCall call{MiniCall{name, parse_args()}};
            expect(")");
            expect(";");
            return {std::move(call), span};
        }
        throw ParseError(span, "expected statement, got '" + peek().text + "'");
    }

    std::vector<MiniExpr> parse_args() {
        std::vector<MiniExpr> args;
        while (!check(")")) {
            if (!args.empty()) expect(",");
            args.push_back(parse_expr());
        }
        return args;
    }

    MiniExpr parse_expr() { return parse_comparison(); }

    MiniExpr parse_comparison() {
        MiniExpr lhs = parse_additive();
        static const char* ops[] = {"<=", ">=", "==", "!=", "<", ">"};
        for (const char* op : ops) {
            if (check(op)) {
                SourceSpan span = advance().span;
                MiniExpr rhs = parse_additive();
                return {MiniBinary{op, Box<MiniExpr>(std::move(lhs)), Box<MiniExpr>(std::move(rhs))}, span};
            }
        }
        return lhs;
    }

    MiniExpr parse_additive() {
        MiniExpr lhs = parse_multiplicative();
        while (check("+") || check("-")) {
            std::string op = advance().text;
            SourceSpan span = lhs.span;
            MiniExpr rhs = parse_multiplicative();
            lhs = {MiniBinary{op, Box<MiniExpr>(std::move(lhs)), Box<MiniExpr>(std::move(rhs))}, span};
        }
        return lhs;
    }

    MiniExpr parse_multiplicative() {
        MiniExpr lhs = parse_primary();
        while (check("*") || check("/") || check("%")) {
            std::string op = advance().text;
            SourceSpan span = lhs.span;
            MiniExpr rhs = parse_primary();
            lhs = {MiniBinary{op, Box<MiniExpr>(std::move(lhs)), Box<MiniExpr>(std::move(rhs))}, span};
        }
        return lhs;
    }

    MiniExpr parse_primary() {
        SourceSpan span = peek().span;
        if (check("(")) {
            advance();
            MiniExpr inner = parse_expr();
            expect(")");
            return inner;
        }
        if (peek().is_number) return {MiniNumber{advance().text}, span};
        if (check("this")) {
            advance();
            expect(".");
            std::string name = expect_ident();
            if (check("(")) {
                advance();
                MiniCall call{name, parse_args()};
                expect(")");
                return {std::move(call), span};
            }
            return {MiniFieldRef{name}, span};
        }
        if (peek().is_word) {
            std::string name = advance().text;
            if (check("(")) {
                advance();
                MiniCall call{name, parse_args()};
                expect(")");
                return {std::move(call), span};
            }
            return {MiniName{name}, span};
        }
        throw ParseError(span, "expected expression, got '" + peek().text + "'");
    }

    std::vector<MiniToken> tokens_;
    std::string file_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parses the documented mini-OO grammar (see docs/mini-oo.md) into an
// order-preserving class list. Superclasses may be declared later in the
// same unit; an undeclared one raises UnknownSuperclassError.
inline std::vector<ClassModel> parse_mini_oo(std::string_view source, const std::string& file = "<input>") {
    return detail::MiniParser(detail::lex(source, file), file).parse_unit();
}

}  // namespace eofbc::minioo
