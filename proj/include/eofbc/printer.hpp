#pragma once

#include <stdexcept>
#include <string>

#include "eofbc/ast.hpp"

namespace eofbc {

namespace detail {

inline std::string print_expr(const EoExpr& expr);

inline std::string print_operand(const EoExpr& expr) {
    std::string s = print_expr(expr);
    if (expr.is<EoApplication>()) return "(" + s + ")";
    return s;
}

inline std::string print_expr(const EoExpr& expr) {
    if (expr.is<EoRef>()) return expr.as<EoRef>().name;
    if (expr.is<EoOpaque>()) return expr.as<EoOpaque>().text;
    if (expr.is<EoLocator>()) {
        std::string s = "^";
        for (int i = 1; i < expr.as<EoLocator>().ups; ++i) s += ".^";
        return s;
    }
    if (expr.is<EoDotAccess>()) {
        const auto& dot = expr.as<EoDotAccess>();
        return print_operand(*dot.receiver) + "." + dot.attribute;
    }
    if (expr.is<EoApplication>()) {
        const auto& app = expr.as<EoApplication>();
        std::string s = print_operand(*app.head);
        for (const auto& arg : app.args) s += " " + print_operand(arg);
        return s;
    }
    throw std::logic_error("abstract object in expression position cannot be printed inline");
}

inline void print_binding(const EoBinding& binding, int indent, std::string& out) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    if (binding.value.is<EoAbstract>()) {
        const auto& abstract = binding.value.as<EoAbstract>();
        out += pad + "[";
        for (std::size_t i = 0; i < abstract.params.size(); ++i) {
            if (i > 0) out += " ";
            out += abstract.params[i];
        }
        out += "] > " + binding.name + "\n";
        for (const auto& inner : abstract.bindings) print_binding(inner, indent + 2, out);
        return;
    }
    out += pad + print_expr(binding.value) + " > " + binding.name + "\n";
}

}  // namespace detail

// Canonical textual form: applications are rendered horizontally with
// parentheses around nested applications, abstract objects vertically at a
// 2-space step, one blank line between top-level bindings. Parsing the
// result yields a structurally identical tree.
inline std::string pretty_print(const EoProgram& program) {
    std::string out;
    for (std::size_t i = 0; i < program.objects.size(); ++i) {
        if (i > 0) out += "\n";
        detail::print_binding(program.objects[i], 0, out);
    }
    return out;
}

inline std::string pretty_print(const EoExpr& expr) { return detail::print_expr(expr); }

}  // namespace eofbc
