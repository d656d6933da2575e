#pragma once

#include <string>
#include <vector>

#include "eofbc/ast.hpp"
#include "eofbc/minioo.hpp"
#include "eofbc/printer.hpp"

namespace eofbc::minioo {

namespace detail {

inline EoExpr eo_ref(const std::string& name) { return {EoRef{name}, {}}; }
inline EoExpr eo_opaque(const std::string& text) { return {EoOpaque{text}, {}}; }

inline EoExpr eo_dot(EoExpr receiver, const std::string& attribute) {
    return {EoDotAccess{Box<EoExpr>(std::move(receiver)), attribute}, {}};
}

inline EoExpr eo_apply(EoExpr head, std::vector<EoExpr> args) {
    return {EoApplication{Box<EoExpr>(std::move(head)), std::move(args)}, {}};
}

inline EoBinding eo_bind(const std::string& name, EoExpr value) { return {name, std::move(value), {}}; }

inline const char* binary_atom(const std::string& op) {
    if (op == "+") return "add";
    if (op == "-") return "sub";
    if (op == "*") return "mul";
    if (op == "/") return "div";
    if (op == "%") return "mod";
    if (op == "<") return "less";
    if (op == "<=") return "leq";
    if (op == ">") return "greater";
    if (op == ">=") return "geq";
    if (op == "==") return "eq";
    return "neq";
}

inline EoExpr translate_expr(const MiniExpr& expr) {
    if (expr.is<MiniNumber>()) return eo_opaque(expr.as<MiniNumber>().text);
    if (expr.is<MiniName>()) return eo_ref(expr.as<MiniName>().name);
    if (expr.is<MiniFieldRef>()) return eo_dot(eo_ref("self"), expr.as<MiniFieldRef>().field);
    if (expr.is<MiniCall>()) {
        const auto& call = expr.as<MiniCall>();
        std::vector<EoExpr> args;
        args.push_back(eo_ref("self"));
        for (const auto& a : call.args) args.push_back(translate_expr(a));
        return eo_apply(eo_dot(eo_ref("self"), call.method), std::move(args));
    }
    const auto& binary = expr.as<MiniBinary>();
    return eo_apply(eo_dot(translate_expr(*binary.lhs), binary_atom(binary.op)), {translate_expr(*binary.rhs)});
}

inline EoExpr seq_of(std::vector<EoExpr> items) {
    items.push_back(eo_ref("self"));
    return eo_apply(eo_opaque("seq"), std::move(items));
}

inline void translate_statements(const std::vector<MiniStatement>& statements, std::vector<EoExpr>& out);

inline void translate_statement(const MiniStatement& statement, std::vector<EoExpr>& out) {
    if (statement.is<MiniFieldAssign>()) {
        const auto& assign = statement.as<MiniFieldAssign>();
        out.push_back(eo_apply(eo_dot(eo_dot(eo_ref("self"), assign.field), "write"), {translate_expr(assign.value)}));
        return;
    }
    if (statement.is<MiniMethodCall>()) {
        const auto& call = statement.as<MiniMethodCall>().call;
        std::vector<EoExpr> args;
        args.push_back(eo_ref("self"));
        for (const auto& a : call.args) args.push_back(translate_expr(a));
        out.push_back(eo_apply(eo_dot(eo_ref("self"), call.method), std::move(args)));
        return;
    }
    if (statement.is<MiniReturn>()) {
        const auto& ret = statement.as<MiniReturn>();
        if (ret.value) out.push_back(translate_expr(*ret.value));
        return;
    }
    if (statement.is<MiniIf>()) {
        // Branch conditions stay opaque guard applications; both arms are
        // emitted so every call site survives for the analyzer.
        const auto& branch = statement.as<MiniIf>();
        std::vector<EoExpr> then_items;
        translate_statements(branch.then_body, then_items);
        std::vector<EoExpr> else_items;
        translate_statements(branch.else_body, else_items);
        out.push_back(eo_apply(eo_dot(translate_expr(branch.condition), "if"),
                            {seq_of(std::move(then_items)), seq_of(std::move(else_items))}));
        return;
    }
    const auto& loop = statement.as<MiniWhile>();
    std::vector<EoExpr> body_items;
    translate_statements(loop.body, body_items);
    out.push_back(eo_apply(eo_dot(translate_expr(loop.condition), "while"), {seq_of(std::move(body_items))}));
}

inline void translate_statements(const std::vector<MiniStatement>& statements, std::vector<EoExpr>& out) {
    for (const auto& s : statements) translate_statement(s, out);
}

inline EoBinding translate_method(const MiniMethod& method) {
    EoAbstract abstract;
    abstract.params.push_back("self");
    for (const auto& p : method.params) abstract.params.push_back(p);
    std::vector<EoExpr> items;
    translate_statements(method.body, items);
    abstract.bindings.push_back(eo_bind("@", seq_of(std::move(items))));
    return eo_bind(method.name, EoExpr{std::move(abstract), {}});
}

}  // namespace detail

// Translation scheme: a class becomes an object factory. The factory
// decorates its superclass's factory; `new` builds `super` via the
// superclass's `new` and wraps it in a `self` instance object carrying
// `memory` fields, the `run_constructor` method and all translated
// methods; `constructor` chains `new` with `run_constructor`. Method
// receivers are explicit: every `this`-call becomes `self.f self args...`.
inline EoProgram translate(const std::vector<ClassModel>& classes) {
    using namespace detail;
    EoProgram program;

    {
        EoAbstract root_new;
        root_new.bindings.push_back(eo_bind("self", EoExpr{EoAbstract{}, {}}));
        root_new.bindings.push_back(eo_bind("@", eo_ref("self")));
        EoAbstract root;
        root.bindings.push_back(eo_bind("new", EoExpr{std::move(root_new), {}}));
        program.objects.push_back(eo_bind("classObject", EoExpr{std::move(root), {}}));
    }

    for (const ClassModel& model : classes) {
        std::string factory = "class" + model.name;
        std::string super_factory = model.superclass ? "class" + *model.superclass : "classObject";

        EoAbstract instance;  // the `self` object inside `new`
        instance.bindings.push_back(eo_bind("@", eo_ref("super")));
        for (const auto& [field, init] : model.fields) {
            (void)init;
            instance.bindings.push_back(eo_bind(field, eo_opaque("memory")));
        }

        {
            EoAbstract run_ctor;
            run_ctor.params.push_back("self");
            if (model.constructor) {
                for (const auto& p : model.constructor->params) run_ctor.params.push_back(p);
            }
            std::vector<EoExpr> items;
            if (model.superclass) {
                std::vector<EoExpr> super_args;
                super_args.push_back(eo_ref("super"));
                if (model.constructor && model.constructor->super_args) {
                    for (const auto& a : *model.constructor->super_args) super_args.push_back(translate_expr(a));
                }
                items.push_back(eo_apply(eo_dot(eo_ref("super"), "run_constructor"), std::move(super_args)));
            }
            for (const auto& [field, init] : model.fields) {
                if (init) {
                    items.push_back(eo_apply(eo_dot(eo_dot(eo_ref("self"), field), "write"), {translate_expr(*init)}));
                }
            }
            if (model.constructor) translate_statements(model.constructor->body, items);
            run_ctor.bindings.push_back(eo_bind("@", seq_of(std::move(items))));
            instance.bindings.push_back(eo_bind("run_constructor", EoExpr{std::move(run_ctor), {}}));
        }

        for (const MiniMethod& method : model.methods) instance.bindings.push_back(translate_method(method));

        EoAbstract factory_new;
        factory_new.bindings.push_back(eo_bind("super", eo_dot(eo_ref(super_factory), "new")));
        factory_new.bindings.push_back(eo_bind("self", EoExpr{std::move(instance), {}}));
        factory_new.bindings.push_back(eo_bind("@", eo_ref("self")));

        EoAbstract ctor;
        if (model.constructor) {
            for (const auto& p : model.constructor->params) ctor.params.push_back(p);
        }
        ctor.bindings.push_back(eo_bind("self", eo_ref("new")));
        {
            std::vector<EoExpr> items;
            std::vector<EoExpr> run_args;
            run_args.push_back(eo_ref("self"));
            if (model.constructor) {
                for (const auto& p : model.constructor->params) run_args.push_back(eo_ref(p));
            }
            items.push_back(eo_apply(eo_dot(eo_ref("self"), "run_constructor"), std::move(run_args)));
            ctor.bindings.push_back(eo_bind("@", seq_of(std::move(items))));
        }

        EoAbstract factory_object;
        factory_object.bindings.push_back(eo_bind("@", eo_ref(super_factory)));
        factory_object.bindings.push_back(eo_bind("new", EoExpr{std::move(factory_new), {}}));
        factory_object.bindings.push_back(eo_bind("constructor", EoExpr{std::move(ctor), {}}));
        program.objects.push_back(eo_bind(factory, EoExpr{std::move(factory_object), {}}));
    }
    return program;
}

// EO source text for the translated classes, in the canonical print form.
inline std::string translate_to_text(const std::vector<ClassModel>& classes) {
    return pretty_print(translate(classes));
}

}  // namespace eofbc::minioo
