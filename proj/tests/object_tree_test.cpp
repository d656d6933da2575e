#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "eofbc/object_tree.hpp"
#include "eofbc/parser.hpp"
#include "support/examples.hpp"

using namespace eofbc;

namespace {

ObjectTree resolved_tree(const char* source, const std::string& package = "") {
    static std::vector<std::unique_ptr<EoProgram>> keep_alive;
    keep_alive.push_back(std::make_unique<EoProgram>(parse_source(source)));
    ObjectTree tree = build_partial_tree(*keep_alive.back(), package);
    resolve(tree);
    return tree;
}

}  // namespace

TEST_CASE("partial tree of the example program") {
    EoProgram program = parse_source(examples::kExampleProgram);
    ObjectTree tree = build_partial_tree(program);
    for (const char* fqn : {"a", "a.new", "b", "b.new", "c", "c.new"}) {
        CAPTURE(fqn);
        CHECK(tree.find(fqn) != nullptr);
    }
    const ObjectNode* a_new = tree.find("a.new");
    REQUIRE(a_new->own_methods.count("f") == 1);
    REQUIRE(a_new->own_methods.at("f").calls.size() == 1);
    CHECK(a_new->own_methods.at("f").calls[0].method_name == "g");
    CHECK(a_new->decoratee_name == "b.new");
    CHECK(a_new->decoratee == nullptr);  // names only before resolution
    const ObjectNode* c_new = tree.find("c.new");
    CHECK(c_new->own_methods.at("g").calls.size() == 1);
    CHECK(c_new->own_methods.at("g").calls[0].method_name == "f");
    CHECK(c_new->own_methods.at("f").calls.empty());
    CHECK(tree.total_method_count() == 3);
}

TEST_CASE("partial tree of the motivating context") {
    EoProgram program = parse_source(examples::kMotivating);
    ObjectTree tree = build_partial_tree(program, "test");
    const ObjectNode* base = tree.find("test.base");
    REQUIRE(base != nullptr);
    CHECK(base->own_methods.at("n").calls.empty());
    REQUIRE(base->own_methods.at("m").calls.size() == 1);
    CHECK(base->own_methods.at("m").calls[0].method_name == "n");
    CHECK(base->own_methods.at("m").calls[0].self_passed_first);
    const ObjectNode* derived = tree.find("test.derived");
    REQUIRE(derived != nullptr);
    CHECK(derived->decoratee_name == "base");
    CHECK(derived->own_methods.at("n").calls[0].method_name == "m");
}

TEST_CASE("empty program yields an empty tree") {
    EoProgram program = parse_source("");
    ObjectTree tree = build_partial_tree(program);
    CHECK(tree.root().children.empty());
    CHECK(tree.total_method_count() == 0);
}

TEST_CASE("resolution links the example program's chain and owners") {
    ObjectTree tree = resolved_tree(examples::kExampleProgram);
    const ObjectNode* a_new = tree.find("a.new");
    const ObjectNode* b_new = tree.find("b.new");
    const ObjectNode* c_new = tree.find("c.new");
    CHECK(a_new->decoratee == b_new);
    CHECK(b_new->decoratee == c_new);
    // b.new acquires g and f from c.new.
    REQUIRE(b_new->extended_methods.count("g") == 1);
    REQUIRE(b_new->extended_methods.count("f") == 1);
    CHECK(b_new->extended_methods.at("g").owner_fqn == "c.new");
    // a.new's call target g is owned by c.new, f stays its own.
    CHECK(a_new->extended_methods.at("g").owner_fqn == "c.new");
    CHECK(a_new->extended_methods.at("f").owner_fqn == "a.new");
}

TEST_CASE("attribute lookup through the decoration chain with shadowing") {
    ObjectTree tree = resolved_tree(examples::kXyz);
    const ObjectNode* z = tree.find("z");
    auto a = lookup_attribute(*z, "a");
    auto b = lookup_attribute(*z, "b");
    auto c = lookup_attribute(*z, "c");
    REQUIRE(a);
    REQUIRE(b);
    REQUIRE(c);
    CHECK(a->owner_fqn == "y");
    CHECK(b->owner_fqn == "x");
    CHECK(c->owner_fqn == "z");
}

TEST_CASE("decorating an undeclared name fails") {
    EoProgram program = parse_source("[] > a\n  q > @\n");
    ObjectTree tree = build_partial_tree(program);
    try {
        resolve(tree);
        FAIL("expected UnresolvedDecorateeError");
    } catch (const UnresolvedDecorateeError& e) {
        CHECK(e.name() == "q");
    }
}

TEST_CASE("lookup examples") {
    ObjectTree tree = resolved_tree(examples::kOwnerViaDecoration);
    auto f = lookup_attribute(*tree.find("b"), "f");
    REQUIRE(f);
    CHECK(f->owner_fqn == "a");
    CHECK(f->kind == AttrKind::Method);

    ObjectTree motivating = resolved_tree(examples::kMotivating);
    auto n = lookup_attribute(*motivating.find("derived"), "n");
    REQUIRE(n);
    CHECK(n->owner_fqn == "derived");  // shadowing wins
    CHECK(!lookup_attribute(*motivating.find("derived"), "zzz"));
}

TEST_CASE("resolution is idempotent") {
    EoProgram program = parse_source(examples::kExampleProgram);
    ObjectTree tree = build_partial_tree(program);
    resolve(tree);
    std::string once = dump_tree(tree);
    resolve(tree);
    CHECK(dump_tree(tree) == once);
}

TEST_CASE("extended methods restricted to own names equal own methods") {
    ObjectTree tree = resolved_tree(examples::kThreeObject, "test");
    tree.for_each_node([&](const ObjectNode& node) {
        for (const auto& [name, info] : node.own_methods) {
            REQUIRE(node.extended_methods.count(name) == 1);
            CHECK(node.extended_methods.at(name).owner_fqn == node.fqn);
            CHECK(node.extended_methods.at(name).info == &info);
        }
    });
}

TEST_CASE("decoration cycles are rejected") {
    EoProgram program = parse_source(
        "[] > a\n"
        "  b > @\n"
        "[] > b\n"
        "  a > @\n");
    ObjectTree tree = build_partial_tree(program);
    try {
        resolve(tree);
        FAIL("expected DecorationCycleError");
    } catch (const DecorationCycleError& e) {
        CHECK(e.fqns().size() >= 3);  // a -> b -> a
    }
    EoProgram self_loop = parse_source("[] > a\n  a > @\n");
    ObjectTree loop_tree = build_partial_tree(self_loop);
    CHECK_THROWS_AS(resolve(loop_tree), DecorationCycleError);
}

TEST_CASE("acyclic chains resolve without a cycle error") {
    CHECK_NOTHROW(resolved_tree(examples::kThreeObject));
}

TEST_CASE("void-attribute decoratee stays dynamic") {
    ObjectTree tree = resolved_tree(examples::kPointCircle);
    const ObjectNode* circle = tree.find("circle");
    REQUIRE(circle != nullptr);
    CHECK(circle->decoratee == nullptr);  // `center > @` refers to a void attribute
    CHECK(circle->decoratee_name == "center");
}

TEST_CASE("alias decoratee is followed one step") {
    ObjectTree tree = resolved_tree(
        "[] > classA\n"
        "  [] > new\n"
        "[] > classB\n"
        "  [] > new\n"
        "    classA.new > super\n"
        "    [] > this\n"
        "      super > @\n");
    const ObjectNode* this_node = tree.find("classB.new.this");
    REQUIRE(this_node != nullptr);
    REQUIRE(this_node->decoratee != nullptr);
    CHECK(this_node->decoratee->fqn == "classA.new");
}

TEST_CASE("alias of an alias is flagged instead of guessed") {
    EoProgram program = parse_source(
        "[] > classA\n"
        "[] > holder\n"
        "  classA > one\n"
        "  one > two\n"
        "  [] > inner\n"
        "    two > @\n");
    ObjectTree tree = build_partial_tree(program);
    CHECK_THROWS_AS(resolve(tree), UnresolvedDecorateeError);
}

TEST_CASE("locator decoratee resolves against the parent chain") {
    ObjectTree tree = resolved_tree(
        "[] > outer\n"
        "  [] > sibling\n"
        "  [] > holder\n"
        "    [] > inner\n"
        "      ^.^.sibling > @\n");
    const ObjectNode* inner = tree.find("outer.holder.inner");
    REQUIRE(inner != nullptr);
    REQUIRE(inner->decoratee != nullptr);
    CHECK(inner->decoratee->fqn == "outer.sibling");
}

TEST_CASE("dotted decoratee path descends nested objects") {
    ObjectTree tree = resolved_tree(
        "[] > very_outer\n"
        "  [] > outer\n"
        "    [] > base\n"
        "      [self v] > n\n"
        "        v > @\n"
        "\n"
        "[] > derived\n"
        "  very_outer.outer.base > @\n",
        "test");
    const ObjectNode* derived = tree.find("test.derived");
    REQUIRE(derived->decoratee != nullptr);
    CHECK(derived->decoratee->fqn == "test.very_outer.outer.base");
    CHECK(derived->extended_methods.at("n").owner_fqn == "test.very_outer.outer.base");
}

TEST_CASE("multi-file context merges under per-file packages") {
    EoProgram lib = parse_source("[] > base\n  [self v] > m\n    self.n self v > @\n");
    EoProgram app = parse_source("[] > derived\n  lib.base > @\n");
    ObjectTree tree = build_partial_tree({{"lib", &lib}, {"app", &app}});
    resolve(tree);
    const ObjectNode* derived = tree.find("app.derived");
    REQUIRE(derived != nullptr);
    REQUIRE(derived->decoratee != nullptr);
    CHECK(derived->decoratee->fqn == "lib.base");
}

TEST_CASE("bare cross-file decoration works with empty packages") {
    EoProgram lib = parse_source("[] > base\n  [self v] > m\n    v > @\n");
    EoProgram app = parse_source("[] > derived\n  base > @\n");
    ObjectTree tree = build_partial_tree({{"", &lib}, {"", &app}});
    resolve(tree);
    CHECK(tree.find("derived")->decoratee == tree.find("base"));
}

TEST_CASE("tree dump is deterministic and sorted") {
    ObjectTree tree = resolved_tree(examples::kMotivating, "test");
    std::string dump = dump_tree(tree);
    CHECK(dump ==
          "test\n"
          "  test.base | m(n) n()\n"
          "  test.derived @-> test.base | n(m) m<-test.base\n");
}

TEST_CASE("calls on receivers other than the method's own are ignored") {
    ObjectTree tree = resolved_tree(
        "[] > a\n"
        "  [self other] > m\n"
        "    other.f other > @\n");
    CHECK(tree.find("a")->own_methods.at("m").calls.empty());
}

TEST_CASE("receiver rebinding inside nested abstracts stops collection") {
    ObjectTree tree = resolved_tree(
        "[] > a\n"
        "  [self] > m\n"
        "    [me] > helper\n"
        "      self.f self > @\n");
    // helper does not rebind self, so the nested call still belongs to m.
    CHECK(tree.find("a")->own_methods.at("m").calls.size() == 1);
    ObjectTree shadowed = resolved_tree(
        "[] > b\n"
        "  [self] > m\n"
        "    [self] > helper\n"
        "      self.f self > @\n");
    CHECK(shadowed.find("b")->own_methods.at("m").calls.empty());
}

TEST_CASE("calls where self is not passed first are recorded and flagged") {
    ObjectTree tree = resolved_tree(
        "[] > a\n"
        "  [self v] > m\n"
        "    self.n v self > @\n");
    const auto& calls = tree.find("a")->own_methods.at("m").calls;
    REQUIRE(calls.size() == 1);
    CHECK(!calls[0].self_passed_first);
    CHECK(calls[0].self_among_args);
}
