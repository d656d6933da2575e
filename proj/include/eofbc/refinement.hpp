#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "eofbc/analysis.hpp"
#include "eofbc/ast.hpp"
#include "eofbc/object_tree.hpp"

namespace eofbc {

// An application `s.f a1 ... aN` where `s` is the enclosing method's
// receiver void attribute and appears among the arguments.
struct InlineCandidate {
    CallSite site;
    std::string method_name;
    const MethodInfo* enclosing_method = nullptr;
    std::string enclosing_object_fqn;
    std::string receiver_param;
    int nesting_below_method = 0;  // abstract levels between the call and its method
};

// The candidate with dispatch fixed: every receiver occurrence becomes a
// locator chain pointing at the method owner.
struct StaticForm {
    InlineCandidate candidate;
    std::string owner_fqn;   // nearest object in the decoration chain defining the attribute
    int locator_depth = 1;   // abstract-object levels from the call site up to the method's parent
};

namespace detail {

inline void collect_candidates(const EoExpr& expr, const std::string& receiver, int depth,
                               const std::string& method_name, const MethodInfo* method,
                               const std::string& object_fqn, std::vector<InlineCandidate>& out) {
    if (expr.is<EoApplication>()) {
        const auto& app = expr.as<EoApplication>();
        if (app.head->is<EoDotAccess>()) {
            const auto& dot = app.head->as<EoDotAccess>();
            if (dot.receiver->is<EoRef>() && dot.receiver->as<EoRef>().name == receiver) {
                bool among_args = std::any_of(app.args.begin(), app.args.end(), [&](const EoExpr& a) {
                    return a.is<EoRef>() && a.as<EoRef>().name == receiver;
                });
                if (among_args) {
                    InlineCandidate candidate;
                    candidate.site.method_name = dot.attribute;
                    candidate.site.self_passed_first = !app.args.empty() && app.args.front().is<EoRef>() &&
                                                       app.args.front().as<EoRef>().name == receiver;
                    candidate.site.self_among_args = true;
                    candidate.site.span = expr.span;
                    candidate.method_name = method_name;
                    candidate.enclosing_method = method;
                    candidate.enclosing_object_fqn = object_fqn;
                    candidate.receiver_param = receiver;
                    candidate.nesting_below_method = depth;
                    out.push_back(std::move(candidate));
                }
            }
        }
        collect_candidates(*app.head, receiver, depth, method_name, method, object_fqn, out);
        for (const auto& arg : app.args) {
            collect_candidates(arg, receiver, depth, method_name, method, object_fqn, out);
        }
        return;
    }
    if (expr.is<EoDotAccess>()) {
        collect_candidates(*expr.as<EoDotAccess>().receiver, receiver, depth, method_name, method, object_fqn, out);
        return;
    }
    if (expr.is<EoAbstract>()) {
        const auto& abstract = expr.as<EoAbstract>();
        if (std::find(abstract.params.begin(), abstract.params.end(), receiver) != abstract.params.end()) return;
        for (const auto& b : abstract.bindings) {
            collect_candidates(b.value, receiver, depth + 1, method_name, method, object_fqn, out);
        }
    }
}

}  // namespace detail

// Inline candidates inside one object's methods, in source order.
inline std::vector<InlineCandidate> find_inline_candidates(const ObjectNode& node) {
    std::vector<InlineCandidate> out;
    if (node.ast == nullptr) return out;
    for (const auto& binding : node.ast->bindings) {
        auto it = node.own_methods.find(binding.name);
        if (it == node.own_methods.end()) continue;
        const MethodInfo& method = it->second;
        if (!binding.value.is<EoAbstract>()) continue;
        for (const auto& inner : binding.value.as<EoAbstract>().bindings) {
            detail::collect_candidates(inner.value, method.params.front(), 0, method.name, &method, node.fqn, out);
        }
    }
    return out;
}

// A candidate is inlinable when the method's parent object has the called
// attribute, directly or through its decoration chain; the static form
// records where the attribute is actually defined and how many levels the
// replacement locator must climb.
inline std::optional<StaticForm> is_inlinable(const InlineCandidate& candidate, const ObjectTree& tree) {
    const ObjectNode* node = tree.find(candidate.enclosing_object_fqn);
    if (node == nullptr) return std::nullopt;
    auto hit = lookup_attribute(*node, candidate.site.method_name);
    if (!hit) return std::nullopt;
    StaticForm form;
    form.candidate = candidate;
    form.owner_fqn = hit->owner_fqn;
    form.locator_depth = candidate.nesting_below_method + 1;
    return form;
}

namespace detail {

inline bool same_span(const SourceSpan& a, const SourceSpan& b) {
    return a.line == b.line && a.column == b.column && a.file == b.file;
}

inline bool rewrite_static_form(EoExpr& expr, const StaticForm& form) {
    if (expr.is<EoApplication>() && same_span(expr.span, form.candidate.site.span)) {
        auto& app = expr.as<EoApplication>();
        if (app.head->is<EoDotAccess>()) {
            auto& dot = app.head->as<EoDotAccess>();
            if (dot.receiver->is<EoRef>() && dot.receiver->as<EoRef>().name == form.candidate.receiver_param) {
                SourceSpan recv_span = dot.receiver->span;
                *dot.receiver = EoExpr{EoLocator{form.locator_depth}, recv_span};
                for (auto& arg : app.args) {
                    if (arg.is<EoRef>() && arg.as<EoRef>().name == form.candidate.receiver_param) {
                        arg = EoExpr{EoLocator{form.locator_depth}, arg.span};
                    }
                }
                return true;
            }
        }
    }
    bool changed = false;
    if (expr.is<EoApplication>()) {
        auto& app = expr.as<EoApplication>();
        changed = rewrite_static_form(*app.head, form);
        for (auto& arg : app.args) changed = rewrite_static_form(arg, form) || changed;
    } else if (expr.is<EoDotAccess>()) {
        changed = rewrite_static_form(*expr.as<EoDotAccess>().receiver, form);
    } else if (expr.is<EoAbstract>()) {
        for (auto& b : expr.as<EoAbstract>().bindings) changed = rewrite_static_form(b.value, form) || changed;
    }
    return changed;
}

}  // namespace detail

// Rewritten copy of the program: inside the candidate application, every
// occurrence of the receiver (head receiver and direct arguments) is
// replaced by a locator of the static form's depth. Everything else is
// untouched.
inline EoProgram apply_static_form(const EoProgram& program, const StaticForm& form) {
    EoProgram copy = program;
    for (auto& binding : copy.objects) detail::rewrite_static_form(binding.value, form);
    return copy;
}

struct CycleClassification {
    bool unanticipated = false;
    std::optional<StaticForm> witness;
};

// A reported cycle is unanticipated when one of its call edges is an
// inlinable candidate sitting in a (possibly indirect) decoratee of the
// analyzed object: fixing that edge's dispatch statically breaks the cycle.
inline CycleClassification classify_cycle(const DefectReport& report, const ObjectTree& tree) {
    const ObjectNode* analyzed = tree.find(report.object_fqn);
    if (analyzed == nullptr) return {};
    auto method_of = [&](const ChainLink& link) {
        return link.method_fqn.substr(report.object_fqn.size() + 1);
    };
    for (std::size_t i = 0; i + 1 < report.chain.size(); ++i) {
        const ChainLink& caller = report.chain[i];
        if (!caller.redefined_in) continue;  // call site is in the analyzed object itself
        const ObjectNode* definer = tree.find(*caller.redefined_in);
        if (definer == nullptr) continue;
        std::string caller_method = method_of(caller);
        std::string callee_method = method_of(report.chain[i + 1]);
        for (const InlineCandidate& candidate : find_inline_candidates(*definer)) {
            if (candidate.method_name != caller_method) continue;
            if (candidate.site.method_name != callee_method) continue;
            auto form = is_inlinable(candidate, tree);
            if (form) return {true, std::move(form)};
        }
    }
    return {};
}

}  // namespace eofbc
