#include <doctest.h>

#include "refmirror/lang/ast_ops.hpp"
#include "refmirror/lang/lexer.hpp"
#include "refmirror/lang/parser.hpp"
#include "refmirror/lang/paths.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/support/errors.hpp"

using namespace refmirror;
using namespace refmirror::lang;

namespace {

std::string reprint(const std::string& src) { return print_unit(parse(src)); }

/// parse . print . parse . print must be a fixed point
void check_roundtrip(const std::string& src) {
    std::string once = reprint(src);
    std::string twice = reprint(once);
    CHECK(once == twice);
}

}  // namespace

TEST_CASE("lexer basics") {
    auto tokens = lex("int x = a >>> 2; // trailing\n");
    REQUIRE(tokens.size() == 8);  // int x = a >>> 2 ; EOF
    CHECK(tokens[0].is_keyword("int"));
    CHECK(tokens[4].is(">>>"));
    CHECK(tokens.back().kind == TokenKind::EndOfFile);

    CHECK_THROWS_AS(lex("\"unterminated"), SyntaxError);
    CHECK_THROWS_AS(lex("/* open"), SyntaxError);
    CHECK_THROWS_AS(lex("int `x;"), SyntaxError);
    CHECK(is_valid_identifier("foo_1"));
    CHECK(!is_valid_identifier("class"));
    CHECK(!is_valid_identifier("2x"));
}

TEST_CASE("printer canonical form") {
    std::string src =
        "class A { int f(int a,int b){ if(a>b) return a; else return b; } }";
    std::string expected =
        "class A {\n"
        "    int f(int a, int b) {\n"
        "        if (a > b) {\n"
        "            return a;\n"
        "        } else {\n"
        "            return b;\n"
        "        }\n"
        "    }\n"
        "}\n";
    CHECK(reprint(src) == expected);
}

TEST_CASE("redundant parens are dropped and needed ones kept") {
    std::string src = "class A { int f(int x) { return ((x + 1)) * (2 + (x)); } }";
    auto unit = parse(src);
    std::string printed = print_unit(unit);
    CHECK(printed.find("return (x + 1) * (2 + x);") != std::string::npos);
    check_roundtrip(src);

    std::string assoc = "class A { int f(int x) { return x - (1 - x) - 1; } }";
    CHECK(reprint(assoc).find("return x - (1 - x) - 1;") != std::string::npos);

    std::string unary = "class A { int f(int x) { return -(-x) + (-x); } }";
    CHECK(reprint(unary).find("return -(-x) + -x;") != std::string::npos);
    check_roundtrip(unary);
}

TEST_CASE("multi declarator split and control bodies wrapped") {
    std::string src = "class A { void f() { int a = 1, b = 2; while (a < b) a++; } }";
    auto unit = parse(src);
    std::string printed = print_unit(unit);
    CHECK(printed.find("int a = 1;\n") != std::string::npos);
    CHECK(printed.find("int b = 2;\n") != std::string::npos);
    CHECK(printed.find("while (a < b) {\n") != std::string::npos);
    check_roundtrip(src);
}

TEST_CASE("else-if chains stay flat") {
    std::string src =
        "class A { int f(int x) { if (x > 2) { return 2; } else if (x > 1) return 1; else { return 0; } } }";
    std::string printed = reprint(src);
    CHECK(printed.find("} else if (x > 1) {") != std::string::npos);
    check_roundtrip(src);
}

TEST_CASE("fields split and modifiers are ordered") {
    std::string src = "class A { static public int x = 1, y; final int z = 3; }";
    std::string printed = reprint(src);
    CHECK(printed.find("public static int x = 1;") != std::string::npos);
    CHECK(printed.find("public static int y;") != std::string::npos);
    CHECK(printed.find("final int z = 3;") != std::string::npos);
    check_roundtrip(src);
}

TEST_CASE("opaque expressions round-trip verbatim") {
    // array indexing is outside the dialect
    std::string src = "class A { int f(int[] a, int i) { return a[i + 1] * 2; } }";
    std::string printed = reprint(src);
    CHECK(printed.find("a[i + 1] * 2") != std::string::npos);
    check_roundtrip(src);

    std::string lambda = "class A { void f() { run(x -> x + 1); } }";
    CHECK(reprint(lambda).find("x -> x + 1") != std::string::npos);
    check_roundtrip(lambda);

    std::string sw =
        "class A { void f(int x) { switch (x) { case 1: break; default: break; } } }";
    std::string sw_printed = reprint(sw);
    CHECK(sw_printed.find("switch (x)") != std::string::npos);
    check_roundtrip(sw);
}

TEST_CASE("statement constructs print and round-trip") {
    std::string src =
        "class A {\n"
        "  int total;\n"
        "  void f(java.util.List<String> xs) throws Exception {\n"
        "    for (int i = 0; i < 10; i++) { total += i; }\n"
        "    for (String s : xs) { use(s); }\n"
        "    try (Res r = open()) { r.work(); } catch (Error | Fault e) { throw e; } finally { done(); }\n"
        "    do { total--; } while (total > 0);\n"
        "  }\n"
        "  void use(String s) {}\n"
        "  Res open() { return null; }\n"
        "  void done() {}\n"
        "}\n";
    std::string printed = reprint(src);
    CHECK(printed.find("for (int i = 0; i < 10; i++) {") != std::string::npos);
    CHECK(printed.find("for (String s : xs) {") != std::string::npos);
    CHECK(printed.find("try (Res r = open()) {") != std::string::npos);
    CHECK(printed.find("catch (Error | Fault e) {") != std::string::npos);
    CHECK(printed.find("} finally {") != std::string::npos);
    CHECK(printed.find("do { total--; } while (total > 0);") != std::string::npos);
    check_roundtrip(src);
}

TEST_CASE("generics normalize consistently") {
    std::string src =
        "class A { java.util.Map<String,java.util.List<Integer>> m; void f() { m = new java.util.HashMap<>(); } }";
    std::string printed = reprint(src);
    CHECK(printed.find("java.util.Map<String, java.util.List<Integer>> m;") != std::string::npos);
    CHECK(printed.find("new java.util.HashMap<>()") != std::string::npos);
    check_roundtrip(src);
}

TEST_CASE("unbalanced structure raises SyntaxError") {
    CHECK_THROWS_AS(parse("class A { void f() { if (x { } }"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { void f() { int x = ; } }"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { void f() {"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { void f() { } } }"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { int = 3; }"), SyntaxError);
}

TEST_CASE("duplicate declarations raise SyntaxError") {
    CHECK_THROWS_AS(parse("class A { int x; int x; }"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { void f(int a) {} void f(int b) {} }"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { void f(int a) { int a = 1; } }"), SyntaxError);
    CHECK_THROWS_AS(parse("class A { void f() { int a = 1; { int a = 2; } } }"), SyntaxError);
    // overloads with different arity are fine
    CHECK_NOTHROW(parse("class A { void f(int a) {} void f(int a, int b) {} }"));
    // a local may shadow a field
    CHECK_NOTHROW(parse("class A { int x; void f() { int x = 1; use(x); } void use(int v) {} }"));
}

TEST_CASE("bindings: locals shadow fields, sequential visibility") {
    std::string src =
        "class A {\n"
        "  int x;\n"
        "  int f() {\n"
        "    int y = x;\n"      // x -> field
        "    int x = y + 1;\n"  // init's x -> field (name not yet visible)
        "    return x;\n"       // x -> local
        "  }\n"
        "}\n";
    auto unit = parse(src);

    const ClassDecl& a = *unit.types[0];
    NodeId field_id = a.members[0].field->id;
    const MethodDecl& f = *a.members[1].method;

    NodeId local_x = static_cast<const LocalVarDeclStmt&>(*f.body->stmts[1]).var->id;

    std::vector<std::pair<std::string, NodeId>> refs;
    walk_exprs(static_cast<const Node&>(f), [&](const Expr& e) {
        if (e.kind() == NodeKind::NameRef) {
            auto resolved = unit.resolve(e.id);
            refs.emplace_back(static_cast<const NameRef&>(e).name, resolved.value_or(kInvalidNode));
        }
    });
    REQUIRE(refs.size() == 3);
    CHECK(refs[0] == std::pair<std::string, NodeId>{"x", field_id});
    CHECK(refs[2] == std::pair<std::string, NodeId>{"x", local_x});
}

TEST_CASE("bindings: method calls by name and arity") {
    std::string src =
        "class A {\n"
        "  int f(int v) { return v; }\n"
        "  int f(int v, int w) { return v + w; }\n"
        "  int g() { return f(1) + f(1, 2) + h(); }\n"
        "}\n"
        "class B { int h() { return 1; } }\n";
    auto unit = parse(src);
    const ClassDecl& a = *unit.types[0];
    NodeId f1 = a.members[0].method->id;
    NodeId f2 = a.members[1].method->id;
    NodeId h = unit.types[1]->members[0].method->id;

    std::vector<NodeId> calls;
    walk_exprs(static_cast<const Node&>(*a.members[2].method), [&](const Expr& e) {
        if (e.kind() == NodeKind::MethodCall) {
            calls.push_back(unit.resolve(e.id).value_or(kInvalidNode));
        }
    });
    REQUIRE(calls.size() == 3);
    CHECK(calls[0] == f1);
    CHECK(calls[1] == f2);
    CHECK(calls[2] == h);  // unique unit-wide match
}

TEST_CASE("entity paths round-trip through find_decl") {
    std::string src =
        "class Outer {\n"
        "  int count;\n"
        "  class Inner { void go(String s) { int n = 0; for (int n2 : items()) { use(n2); } } int[] items() { return null; } void use(int v) {} }\n"
        "  void twice(int a, int b) { int t = a; { int q = b; use(q); } int t2 = t; use(t2); }\n"
        "  void use(int v) {}\n"
        "}\n";
    auto unit = parse(src);

    const ClassDecl& outer = *unit.types[0];
    const ClassDecl& inner = *outer.members[1].nested;
    const MethodDecl& go = *inner.members[0].method;
    const MethodDecl& twice = *outer.members[2].method;

    CHECK(path_of(unit, outer.id) == "Outer");
    CHECK(path_of(unit, inner.id) == "Outer.Inner");
    CHECK(path_of(unit, outer.members[0].field->id) == "Outer#count");
    CHECK(path_of(unit, go.id) == "Outer.Inner#go(String)");
    CHECK(path_of(unit, go.params[0]->id) == "Outer.Inner#go(String)/p0");

    NodeId n_id = static_cast<const LocalVarDeclStmt&>(*go.body->stmts[0]).var->id;
    CHECK(path_of(unit, n_id) == "Outer.Inner#go(String)/local:n:0");

    NodeId q_id = static_cast<const LocalVarDeclStmt&>(
                      *static_cast<const Block&>(*twice.body->stmts[1]).stmts[0])
                      .var->id;
    CHECK(path_of(unit, q_id) == "Outer#twice(int,int)/local:q:0");

    for (NodeId id : {outer.id, inner.id, go.id, go.params[0]->id, n_id, q_id}) {
        const Node* found = find_decl(unit, path_of(unit, id));
        REQUIRE(found != nullptr);
        CHECK(found->id == id);
    }
    CHECK(find_decl(unit, "Outer#missing") == nullptr);
    CHECK(find_decl(unit, "Nope") == nullptr);
}

TEST_CASE("block paths") {
    std::string src =
        "class A { void f(int x) {\n"
        "  if (x > 0) { while (x > 0) { x--; } } else { x++; }\n"
        "  try { go(); } catch (Error e) { x = 0; } finally { x = 1; }\n"
        "} void go() {} }\n";
    auto unit = parse(src);
    const MethodDecl& f = *unit.types[0]->members[0].method;

    const Block* body = resolve_block_path(f, "");
    REQUIRE(body == f.body.get());

    const Block* loop = resolve_block_path(f, "0t/0d");
    REQUIRE(loop != nullptr);
    CHECK(loop->stmts.size() == 1);

    std::string path;
    REQUIRE(block_path_of(f, *loop, path));
    CHECK(path == "0t/0d");

    const Block* catch_body = resolve_block_path(f, "1c0");
    REQUIRE(catch_body != nullptr);
    std::string catch_path;
    REQUIRE(block_path_of(f, *catch_body, catch_path));
    CHECK(catch_path == "1c0");

    CHECK(resolve_block_path(f, "1f") != nullptr);
    CHECK(resolve_block_path(f, "9t") == nullptr);
    CHECK(resolve_block_path(f, "0e") != nullptr);
}

TEST_CASE("count_loc ignores blank lines") {
    CHECK(count_loc("") == 0);
    CHECK(count_loc("a\n\nb\n   \nc") == 3);
    CHECK(count_loc("one\n") == 1);
}

TEST_CASE("clones are structurally identical") {
    std::string src =
        "class A { int x; int f(int a) { if (a > 0) { return a; } return x; } }";
    auto unit = parse(src);
    auto copy = clone_class(*unit.types[0]);
    CHECK(print_class(*copy) == print_class(*unit.types[0]));
}

TEST_CASE("spans index into the original text") {
    std::string src = "class A {\n    int f() { return 42; }\n}\n";
    auto unit = parse(src);
    const MethodDecl& f = *unit.types[0]->members[0].method;
    CHECK(src.substr(f.span.start_offset, f.span.end_offset - f.span.start_offset) ==
          "int f() { return 42; }");
    CHECK(f.span.start_line == 2);
    CHECK(f.span.end_line == 2);
}

TEST_CASE("parse_expression handles snippets and alien text") {
    auto e = parse_expression("a + b * 2");
    CHECK(print_expr(*e) == "a + b * 2");
    auto opaque = parse_expression("values[i]");
    CHECK(opaque->kind() == NodeKind::OpaqueExpr);
    CHECK(print_expr(*opaque) == "values[i]");
    CHECK_THROWS_AS(parse_expression(""), SyntaxError);
}
