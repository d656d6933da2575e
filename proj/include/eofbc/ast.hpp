#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "eofbc/source.hpp"

namespace eofbc {

// Deep-copying smart pointer so expression nodes keep value semantics:
// copying a program copies the whole tree, which makes rewrites on copies
// trivially safe.
template <class T>
class Box {
public:
    Box() = default;
    explicit Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }
    explicit operator bool() const { return static_cast<bool>(ptr_); }

private:
    std::unique_ptr<T> ptr_;
};

struct EoExpr;
struct EoBinding;

// An abstract object: void attributes (params) plus bound attributes.
struct EoAbstract {
    std::vector<std::string> params;
    std::vector<EoBinding> bindings;
};

// Application of a head expression to one or more arguments.
struct EoApplication {
    Box<EoExpr> head;
    std::vector<EoExpr> args;
};

struct EoDotAccess {
    Box<EoExpr> receiver;
    std::string attribute;
};

// A bare name, resolved lexically.
struct EoRef {
    std::string name;
};

// Chain of `^`: ups = 1 for `^`, 2 for `^.^`, ...
struct EoLocator {
    int ups = 1;
};

// Literals and builtin atoms (`memory`, `seq`, ...) carried through verbatim
// and never interpreted.
struct EoOpaque {
    std::string text;
};

struct EoExpr {
    std::variant<EoAbstract, EoApplication, EoDotAccess, EoRef, EoLocator, EoOpaque> node;
    SourceSpan span;

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(node);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(node);
    }
    template <class T>
    T& as() {
        return std::get<T>(node);
    }
};

struct EoBinding {
    std::string name;  // identifier or "@" for the decoratee
    EoExpr value;
    SourceSpan span;
};

struct EoProgram {
    std::vector<EoBinding> objects;
};

// Names that parse as opaque atoms rather than lexical references.
inline bool is_builtin_atom(const std::string& name) {
    return name == "memory" || name == "seq" || name == "write";
}

// --- structural equality (spans excluded) ------------------------------

inline bool structurally_equal(const EoExpr& a, const EoExpr& b);

inline bool structurally_equal(const EoBinding& a, const EoBinding& b) {
    return a.name == b.name && structurally_equal(a.value, b.value);
}

inline bool structurally_equal(const EoAbstract& a, const EoAbstract& b) {
    if (a.params != b.params || a.bindings.size() != b.bindings.size()) return false;
    for (std::size_t i = 0; i < a.bindings.size(); ++i) {
        if (!structurally_equal(a.bindings[i], b.bindings[i])) return false;
    }
    return true;
}

inline bool structurally_equal(const EoExpr& a, const EoExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (a.is<EoAbstract>()) return structurally_equal(a.as<EoAbstract>(), b.as<EoAbstract>());
    if (a.is<EoApplication>()) {
        const auto& x = a.as<EoApplication>();
        const auto& y = b.as<EoApplication>();
        if (x.args.size() != y.args.size() || !structurally_equal(*x.head, *y.head)) return false;
        for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!structurally_equal(x.args[i], y.args[i])) return false;
        }
        return true;
    }
    if (a.is<EoDotAccess>()) {
        const auto& x = a.as<EoDotAccess>();
        const auto& y = b.as<EoDotAccess>();
        return x.attribute == y.attribute && structurally_equal(*x.receiver, *y.receiver);
    }
    if (a.is<EoRef>()) return a.as<EoRef>().name == b.as<EoRef>().name;
    if (a.is<EoLocator>()) return a.as<EoLocator>().ups == b.as<EoLocator>().ups;
    return a.as<EoOpaque>().text == b.as<EoOpaque>().text;
}

inline bool structurally_equal(const EoProgram& a, const EoProgram& b) {
    if (a.objects.size() != b.objects.size()) return false;
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
        if (!structurally_equal(a.objects[i], b.objects[i])) return false;
    }
    return true;
}

}  // namespace eofbc
