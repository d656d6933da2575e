#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eofbc/ast.hpp"
#include "eofbc/printer.hpp"

namespace eofbc {

// A recorded self-dispatch site: `r.f r ...` where `r` is the enclosing
// method's receiver parameter. Calls through any other receiver are not
// part of this analysis.
struct CallSite {
    std::string method_name;
    bool receiver_is_self = true;
    bool self_passed_first = false;
    bool self_among_args = false;
    SourceSpan span;
};

struct MethodInfo {
    std::string name;
    std::vector<std::string> params;
    std::vector<CallSite> calls;
    std::string defining_fqn;
    SourceSpan span;
    const EoAbstract* ast = nullptr;  // borrowed from the parsed program
};

enum class AttrKind { Method, Child, Value };

struct ObjectNode;

// A method as visible from some object, together with the nearest object
// in the decoration chain that (re)defines it.
struct ExtendedMethod {
    std::string owner_fqn;
    const MethodInfo* info = nullptr;
};

struct ObjectNode {
    std::string name;
    std::string fqn;
    SourceSpan span;
    const EoAbstract* ast = nullptr;

    ObjectNode* parent = nullptr;
    std::vector<std::unique_ptr<ObjectNode>> children;

    // Decoratee: value expression of the '@' binding, if any. Before
    // resolution only the expression (and its printable name) is known.
    const EoExpr* decoratee_expr = nullptr;
    std::string decoratee_name;    // printable form of the expression, or ""
    ObjectNode* decoratee = nullptr;  // filled by resolve(); stays null for
                                      // dynamic/opaque decoratees

    std::map<std::string, MethodInfo> own_methods;
    std::map<std::string, AttrKind> attributes;  // all bound attributes by name
    std::map<std::string, ExtendedMethod> extended_methods;  // empty until resolve()

    bool is_synthetic() const { return ast == nullptr; }

    const ObjectNode* find_child(const std::string& child_name) const {
        for (const auto& c : children) {
            if (c->name == child_name) return c.get();
        }
        return nullptr;
    }
};

class ObjectTree {
public:
    ObjectTree() : root_(std::make_unique<ObjectNode>()) {}

    ObjectNode& root() { return *root_; }
    const ObjectNode& root() const { return *root_; }

    const ObjectNode* find(const std::string& fqn) const {
        auto it = by_fqn_.find(fqn);
        return it == by_fqn_.end() ? nullptr : it->second;
    }

    bool resolved() const { return resolved_; }

    // Total number of method bindings in the context; the default bound of
    // the symbolic exercise.
    int total_method_count() const { return total_methods_; }

    template <class Fn>
    void for_each_node(Fn&& fn) const {
        walk(*root_, fn);
    }

    // --- construction helpers (used by build_partial_tree) --------------

    ObjectNode* add_node(ObjectNode* parent, std::string name, const EoAbstract* ast, SourceSpan span) {
        auto node = std::make_unique<ObjectNode>();
        node->name = std::move(name);
        node->fqn = parent->fqn.empty() ? node->name : parent->fqn + "." + node->name;
        node->span = std::move(span);
        node->ast = ast;
        node->parent = parent;
        ObjectNode* raw = node.get();
        by_fqn_[raw->fqn] = raw;
        parent->children.push_back(std::move(node));
        return raw;
    }

    void count_method() { ++total_methods_; }
    void mark_resolved() { resolved_ = true; }

private:
    template <class Fn>
    static void walk(const ObjectNode& node, Fn& fn) {
        if (!node.is_synthetic()) fn(node);
        for (const auto& c : node.children) walk(*c, fn);
    }

    std::unique_ptr<ObjectNode> root_;
    std::map<std::string, ObjectNode*> by_fqn_;
    int total_methods_ = 0;
    bool resolved_ = false;
};

namespace detail {

inline bool is_receiver_name(const std::string& name) { return name == "self" || name == "this"; }

inline bool is_method_shape(const EoAbstract& abstract) {
    return !abstract.params.empty() && is_receiver_name(abstract.params.front());
}

// Collects `r.f r ...` call sites in source order, walking into nested
// abstract objects unless they rebind the receiver name.
inline void collect_calls(const EoExpr& expr, const std::string& receiver, std::vector<CallSite>& out) {
    if (expr.is<EoApplication>()) {
        const auto& app = expr.as<EoApplication>();
        if (app.head->is<EoDotAccess>()) {
            const auto& dot = app.head->as<EoDotAccess>();
            if (dot.receiver->is<EoRef>() && dot.receiver->as<EoRef>().name == receiver) {
                CallSite site;
                site.method_name = dot.attribute;
                site.self_passed_first =
                    !app.args.empty() && app.args.front().is<EoRef>() && app.args.front().as<EoRef>().name == receiver;
                site.self_among_args = std::any_of(app.args.begin(), app.args.end(), [&](const EoExpr& a) {
                    return a.is<EoRef>() && a.as<EoRef>().name == receiver;
                });
                site.span = expr.span;
                out.push_back(std::move(site));
            }
        }
        collect_calls(*app.head, receiver, out);
        for (const auto& arg : app.args) collect_calls(arg, receiver, out);
        return;
    }
    if (expr.is<EoDotAccess>()) {
        collect_calls(*expr.as<EoDotAccess>().receiver, receiver, out);
        return;
    }
    if (expr.is<EoAbstract>()) {
        const auto& abstract = expr.as<EoAbstract>();
        if (std::find(abstract.params.begin(), abstract.params.end(), receiver) != abstract.params.end()) {
            return;  // receiver shadowed by an inner void attribute
        }
        for (const auto& b : abstract.bindings) collect_calls(b.value, receiver, out);
    }
}

inline void build_object(ObjectTree& tree, ObjectNode* node, const EoAbstract& abstract) {
    for (const auto& binding : abstract.bindings) {
        if (binding.name == "@") {
            node->decoratee_expr = &binding.value;
            node->decoratee_name = binding.value.is<EoAbstract>() ? "@" : pretty_print(binding.value);
            if (binding.value.is<EoAbstract>()) {
                // Anonymous inline decoratee: materialized as a child named "@".
                ObjectNode* child = tree.add_node(node, "@", &binding.value.as<EoAbstract>(), binding.span);
                build_object(tree, child, binding.value.as<EoAbstract>());
            }
            continue;
        }
        if (binding.value.is<EoAbstract>()) {
            const auto& inner = binding.value.as<EoAbstract>();
            if (is_method_shape(inner)) {
                MethodInfo method;
                method.name = binding.name;
                method.params = inner.params;
                method.defining_fqn = node->fqn;
                method.span = binding.span;
                method.ast = &inner;
                for (const auto& b : inner.bindings) collect_calls(b.value, inner.params.front(), method.calls);
                node->own_methods.emplace(binding.name, std::move(method));
                node->attributes[binding.name] = AttrKind::Method;
                tree.count_method();
            } else {
                node->attributes[binding.name] = AttrKind::Child;
                ObjectNode* child = tree.add_node(node, binding.name, &inner, binding.span);
                build_object(tree, child, inner);
            }
        } else {
            node->attributes[binding.name] = AttrKind::Value;
        }
    }
}

}  // namespace detail

// First pass: the partially-resolved object tree. Every abstract object
// becomes a node carrying its package-prefixed fully-qualified name, the
// printable name of its decoratee, and the partial call graph (method
// names only). Unknown names are deferred to resolution.
inline ObjectTree build_partial_tree(const EoProgram& program, const std::string& package = "") {
    ObjectTree tree;
    ObjectNode* anchor = &tree.root();
    if (!package.empty()) anchor = tree.add_node(anchor, package, nullptr, {});
    for (const auto& binding : program.objects) {
        if (!binding.value.is<EoAbstract>()) continue;  // top-level value bindings are not objects
        ObjectNode* node = tree.add_node(anchor, binding.name, &binding.value.as<EoAbstract>(), binding.span);
        detail::build_object(tree, node, binding.value.as<EoAbstract>());
    }
    return tree;
}

// Multi-file context: every program's top-level objects are merged under
// its package (which may be empty), and decoration may reach across files.
inline ObjectTree build_partial_tree(const std::vector<std::pair<std::string, const EoProgram*>>& units) {
    ObjectTree tree;
    std::map<std::string, ObjectNode*> package_nodes;
    for (const auto& [package, program] : units) {
        ObjectNode* anchor = &tree.root();
        if (!package.empty()) {
            auto it = package_nodes.find(package);
            if (it != package_nodes.end()) {
                anchor = it->second;
            } else {
                anchor = tree.add_node(anchor, package, nullptr, {});
                package_nodes[package] = anchor;
            }
        }
        for (const auto& binding : program->objects) {
            if (!binding.value.is<EoAbstract>()) continue;
            if (anchor->find_child(binding.name)) {
                throw ParseError(binding.span, "duplicate top-level binding '" + binding.name + "' in context");
            }
            ObjectNode* node = tree.add_node(anchor, binding.name, &binding.value.as<EoAbstract>(), binding.span);
            detail::build_object(tree, node, binding.value.as<EoAbstract>());
        }
    }
    return tree;
}

namespace detail {

enum class LexicalKind { None, Param, Abstract, Alias, Value };

struct LexicalHit {
    LexicalKind kind = LexicalKind::None;
    ObjectNode* child = nullptr;       // for Abstract
    const EoExpr* alias_value = nullptr;  // for Alias
    ObjectNode* alias_owner = nullptr;
};

// Innermost-scope-first lookup of a bare name: void attributes shadow
// bound attributes of the same object; enclosing objects are searched
// outward up to the top level.
inline LexicalHit lexical_lookup(ObjectNode* from, const std::string& name) {
    for (ObjectNode* scope = from; scope != nullptr; scope = scope->parent) {
        if (scope->ast != nullptr) {
            const auto& params = scope->ast->params;
            if (std::find(params.begin(), params.end(), name) != params.end()) {
                return {LexicalKind::Param, nullptr, nullptr, scope};
            }
        }
        for (const auto& child : scope->children) {
            if (child->name == name) return {LexicalKind::Abstract, child.get(), nullptr, scope};
        }
        if (scope->ast != nullptr) {
            for (const auto& binding : scope->ast->bindings) {
                if (binding.name != name || binding.value.is<EoAbstract>()) continue;
                if (binding.value.is<EoRef>() || binding.value.is<EoDotAccess>()) {
                    return {LexicalKind::Alias, nullptr, &binding.value, scope};
                }
                return {LexicalKind::Value, nullptr, nullptr, scope};
            }
        }
    }
    return {};
}

inline ObjectNode* ancestor(ObjectNode* node, int ups) {
    ObjectNode* cur = node;
    for (int i = 0; i < ups && cur != nullptr; ++i) cur = cur->parent;
    return (cur != nullptr && !cur->is_synthetic()) ? cur : nullptr;
}

// Resolves a reference-like decoratee expression to an object node.
// Returns nullptr for value-like expressions (applications, atoms, void
// attributes) whose target is not statically known; throws
// UnresolvedDecorateeError for reference expressions that fail to resolve.
inline ObjectNode* resolve_reference(ObjectNode* scope, const EoExpr& expr, int alias_hops_left) {
    if (expr.is<EoRef>()) {
        const std::string& name = expr.as<EoRef>().name;
        LexicalHit hit = lexical_lookup(scope, name);
        if (hit.kind == LexicalKind::Abstract) return hit.child;
        if (hit.kind == LexicalKind::Param) return nullptr;  // dynamic decoratee, e.g. `center > @`
        if (hit.kind == LexicalKind::Value) return nullptr;  // decorating a plain value
        if (hit.kind == LexicalKind::Alias) {
            if (alias_hops_left <= 0) throw UnresolvedDecorateeError(name, expr.span);
            return resolve_reference(hit.alias_owner, *hit.alias_value, alias_hops_left - 1);
        }
        throw UnresolvedDecorateeError(name, expr.span);
    }
    if (expr.is<EoDotAccess>()) {
        // Dotted path: resolve the base, then descend named children.
        std::vector<std::string> path;
        const EoExpr* base = &expr;
        while (base->is<EoDotAccess>()) {
            path.push_back(base->as<EoDotAccess>().attribute);
            base = &*base->as<EoDotAccess>().receiver;
        }
        std::reverse(path.begin(), path.end());
        ObjectNode* node = nullptr;
        if (base->is<EoRef>()) {
            node = resolve_reference(scope, *base, alias_hops_left);
            if (node == nullptr) return nullptr;
        } else if (base->is<EoLocator>()) {
            node = ancestor(scope->parent, base->as<EoLocator>().ups - 1);
            if (node == nullptr) throw UnresolvedDecorateeError(pretty_print(expr), expr.span);
        } else {
            return nullptr;  // e.g. an application result; not statically known
        }
        for (const auto& segment : path) {
            const ObjectNode* next = node->find_child(segment);
            if (next == nullptr) throw UnresolvedDecorateeError(pretty_print(expr), expr.span);
            node = const_cast<ObjectNode*>(next);
        }
        return node;
    }
    if (expr.is<EoLocator>()) {
        ObjectNode* node = ancestor(scope->parent, expr.as<EoLocator>().ups - 1);
        if (node == nullptr) throw UnresolvedDecorateeError(pretty_print(expr), expr.span);
        return node;
    }
    return nullptr;  // Application / Opaque: carried through, never interpreted
}

inline void resolve_node(ObjectNode& node) {
    if (node.decoratee_expr == nullptr || node.decoratee != nullptr) return;
    if (node.decoratee_expr->is<EoAbstract>()) {
        node.decoratee = const_cast<ObjectNode*>(node.find_child("@"));
        return;
    }
    node.decoratee = resolve_reference(&node, *node.decoratee_expr, 1);
}

inline void check_decoration_cycles(const ObjectNode& node) {
    std::vector<std::string> chain;
    const ObjectNode* cur = &node;
    while (cur != nullptr) {
        if (std::find(chain.begin(), chain.end(), cur->fqn) != chain.end()) {
            chain.push_back(cur->fqn);
            throw DecorationCycleError(std::move(chain), node.span);
        }
        chain.push_back(cur->fqn);
        cur = cur->decoratee;
    }
}

inline void fill_extended(ObjectNode& node) {
    node.extended_methods.clear();
    for (const ObjectNode* cur = &node; cur != nullptr; cur = cur->decoratee) {
        for (const auto& [name, info] : cur->own_methods) {
            node.extended_methods.emplace(name, ExtendedMethod{cur->fqn, &info});  // nearest definition wins
        }
    }
}

inline void resolve_recursive(ObjectNode& node) {
    resolve_node(node);
    for (auto& child : node.children) resolve_recursive(*child);
}

inline void finish_recursive(ObjectNode& node) {
    if (!node.is_synthetic()) {
        check_decoration_cycles(node);
        fill_extended(node);
    }
    for (auto& child : node.children) finish_recursive(*child);
}

}  // namespace detail

// Second pass: link decoratee names to nodes, reject decoration cycles
// and fill each node's extended call graph with "last redefined in"
// owners. Idempotent.
inline ObjectTree& resolve(ObjectTree& tree) {
    detail::resolve_recursive(tree.root());
    detail::finish_recursive(tree.root());
    tree.mark_resolved();
    return tree;
}

struct AttributeHit {
    std::string owner_fqn;
    AttrKind kind = AttrKind::Value;
    const MethodInfo* method = nullptr;  // set when kind == Method
};

// Nearest binding of `name` along the decoration chain, starting at the
// node itself. NotFound is a value (empty optional), not an error.
inline std::optional<AttributeHit> lookup_attribute(const ObjectNode& node, const std::string& name) {
    for (const ObjectNode* cur = &node; cur != nullptr; cur = cur->decoratee) {
        auto it = cur->attributes.find(name);
        if (it != cur->attributes.end()) {
            AttributeHit hit;
            hit.owner_fqn = cur->fqn;
            hit.kind = it->second;
            if (it->second == AttrKind::Method) hit.method = &cur->own_methods.at(name);
            return hit;
        }
    }
    return std::nullopt;
}

// Deterministic text dump of either tree state, for golden tests and
// debugging: one node per line, children sorted by name.
inline std::string dump_tree(const ObjectNode& node, int indent = 0) {
    std::string out;
    int child_indent = indent;
    if (node.parent != nullptr) {
        out += std::string(static_cast<std::size_t>(indent), ' ');
        out += node.fqn;
        if (node.decoratee != nullptr) {
            out += " @-> " + node.decoratee->fqn;
        } else if (!node.decoratee_name.empty()) {
            out += " @~> " + node.decoratee_name;
        }
        if (!node.own_methods.empty() || !node.extended_methods.empty()) {
            out += " |";
            for (const auto& [name, info] : node.own_methods) {
                out += " " + name + "(";
                for (std::size_t i = 0; i < info.calls.size(); ++i) {
                    if (i > 0) out += ",";
                    out += info.calls[i].method_name;
                }
                out += ")";
            }
            for (const auto& [name, ext] : node.extended_methods) {
                if (node.own_methods.count(name) != 0) continue;
                out += " " + name + "<-" + ext.owner_fqn;
            }
        }
        out += "\n";
        child_indent = indent + 2;
    }
    std::vector<const ObjectNode*> kids;
    for (const auto& c : node.children) kids.push_back(c.get());
    std::sort(kids.begin(), kids.end(), [](const ObjectNode* a, const ObjectNode* b) { return a->name < b->name; });
    for (const ObjectNode* c : kids) out += dump_tree(*c, child_indent);
    return out;
}

inline std::string dump_tree(const ObjectTree& tree) { return dump_tree(tree.root(), 0); }

}  // namespace eofbc
