#include <doctest.h>

#include "refmirror/engine/engine.hpp"
#include "refmirror/lang/parser.hpp"
#include "refmirror/lang/paths.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/support/errors.hpp"

using namespace refmirror;
using namespace refmirror::lang;
using detect::RefactoringInstance;
using detect::RefactoringKind;
namespace eng = refmirror::engine;

namespace {

RefactoringInstance mk(RefactoringKind kind, detect::RefactoringParams params) {
    RefactoringInstance inst;
    inst.kind = kind;
    inst.params = std::move(params);
    return inst;
}

Span at_line(int line) {
    Span s;
    s.start_line = line;
    s.end_line = line;
    return s;
}

bool has_error(const eng::CheckReport& r, const std::string& rule) {
    for (const auto& v : r.violations)
        if (v.rule == rule && v.severity == eng::Severity::Error) return true;
    return false;
}

bool has_warning(const eng::CheckReport& r, const std::string& rule) {
    for (const auto& v : r.violations)
        if (v.rule == rule && v.severity == eng::Severity::Warning) return true;
    return false;
}

std::string apply_text(const std::string& src, const RefactoringInstance& inst) {
    return print_unit(eng::apply(parse(src), inst));
}

}  // namespace

// ---- renames ---------------------------------------------------------------------

TEST_CASE("rename variable updates the declaration and every reference") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int total = a + 1;\n"
        "        return total * 2;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::RenameVariable,
                   detect::RenameParams{.enclosing = "A#f(int)",
                                        .old_name = "total",
                                        .new_name = "sum"});
    CHECK(eng::check(parse(src), inst).ok());
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a) {\n"
          "        int sum = a + 1;\n"
          "        return sum * 2;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("rename parameter and attribute rewrite qualified references too") {
    std::string src =
        "class A {\n"
        "    int count;\n"
        "    void bump(int by) {\n"
        "        this.count = count + by;\n"
        "    }\n"
        "}\n";
    auto field = mk(RefactoringKind::RenameAttribute,
                    detect::RenameParams{.enclosing = "A", .old_name = "count", .new_name = "total"});
    CHECK(apply_text(src, field) ==
          "class A {\n"
          "    int total;\n"
          "\n"
          "    void bump(int by) {\n"
          "        this.total = total + by;\n"
          "    }\n"
          "}\n");

    auto param = mk(RefactoringKind::RenameParameter,
                    detect::RenameParams{.enclosing = "A#bump(int)",
                                         .old_name = "by",
                                         .new_name = "delta"});
    std::string out = apply_text(src, param);
    CHECK(out.find("void bump(int delta)") != std::string::npos);
    CHECK(out.find("count + delta") != std::string::npos);
}

TEST_CASE("rename method rewrites every call site") {
    std::string src =
        "class A {\n"
        "    int twice(int v) {\n"
        "        return v + v;\n"
        "    }\n"
        "\n"
        "    int quad(int v) {\n"
        "        return twice(twice(v));\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::RenameMethod,
                   detect::RenameParams{.enclosing = "A",
                                        .old_name = "twice",
                                        .new_name = "dbl",
                                        .signature = "twice(int)"});
    std::string out = apply_text(src, inst);
    CHECK(out.find("int dbl(int v)") != std::string::npos);
    CHECK(out.find("dbl(dbl(v))") != std::string::npos);
    CHECK(out.find("twice") == std::string::npos);
}

TEST_CASE("rename preconditions: names and targets") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        return a;\n"
        "    }\n"
        "}\n";
    auto unit = parse(src);

    auto bad = mk(RefactoringKind::RenameParameter,
                  detect::RenameParams{.enclosing = "A#f(int)", .old_name = "a", .new_name = "class"});
    CHECK(has_error(eng::check(unit, bad), "rename.invalid-name"));

    auto same = mk(RefactoringKind::RenameParameter,
                   detect::RenameParams{.enclosing = "A#f(int)", .old_name = "a", .new_name = "a"});
    auto report = eng::check(unit, same);
    CHECK(report.ok());
    CHECK(!report.ok(/*strict=*/true));
    CHECK(has_warning(report, "rename.same-name"));

    auto missing = mk(RefactoringKind::RenameVariable,
                      detect::RenameParams{.enclosing = "A#f(int)", .old_name = "nope", .new_name = "x"});
    CHECK(has_error(eng::check(unit, missing), "target.missing"));
    CHECK_THROWS_AS(eng::apply(unit, missing), PreconditionError);
    eng::ApplyOptions unchecked{false, false};
    CHECK_THROWS_AS(eng::apply(unit, missing, unchecked), UnknownEntityError);
}

TEST_CASE("rename collisions surface through the dry run") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int b = a + 1;\n"
        "        return b;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::RenameParameter,
                   detect::RenameParams{.enclosing = "A#f(int)", .old_name = "a", .new_name = "b"});
    CHECK(has_error(eng::check(parse(src), inst), "rename.collision"));
    CHECK_THROWS_AS(eng::apply(parse(src), inst), PreconditionError);
}

TEST_CASE("renames that capture a reference are rejected") {
    std::string src =
        "class A {\n"
        "    int x;\n"
        "\n"
        "    int f(int a) {\n"
        "        int y = a;\n"
        "        return y + x;\n"
        "    }\n"
        "}\n";
    // After y -> x the field read on the next line would bind to the local.
    auto inst = mk(RefactoringKind::RenameVariable,
                   detect::RenameParams{.enclosing = "A#f(int)", .old_name = "y", .new_name = "x"});
    CHECK(has_error(eng::check(parse(src), inst), "rename.capture"));
    CHECK_THROWS_AS(eng::apply(parse(src), inst), PreconditionError);
}

TEST_CASE("renames stop at text the parser kept opaque") {
    std::string src =
        "class A {\n"
        "    int total;\n"
        "\n"
        "    void reset() {\n"
        "        switch (total) { default: total = 0; }\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::RenameAttribute,
                   detect::RenameParams{.enclosing = "A", .old_name = "total", .new_name = "count"});
    CHECK(has_error(eng::check(parse(src), inst), "rename.opaque-reference"));

    std::string src2 =
        "class A {\n"
        "    int count;\n"
        "\n"
        "    void reset() {\n"
        "        switch (flag) { default: count1 = 0; }\n"
        "    }\n"
        "}\n";
    // `count1` is a different identifier, so the old name is safe — but the
    // new name already appears in the opaque text.
    auto inst2 = mk(RefactoringKind::RenameAttribute,
                    detect::RenameParams{.enclosing = "A", .old_name = "count", .new_name = "flag"});
    CHECK(has_error(eng::check(parse(src2), inst2), "rename.opaque-reference"));
}

// ---- extract_variable ---------------------------------------------------------------

TEST_CASE("extract variable folds every occurrence onto one declaration") {
    std::string src =
        "class A {\n"
        "    int f(int a, int b) {\n"
        "        int p = a * b + 1;\n"
        "        int q = a * b + 1 + a;\n"
        "        return p + q;\n"
        "    }\n"
        "}\n";
    auto all = mk(RefactoringKind::ExtractVariable,
                  detect::ExtractVariableParams{.enclosing_method = "A#f(int,int)",
                                                .expression = "a * b + 1",
                                                .new_name = "r",
                                                .declared_type = "int"});
    CHECK(apply_text(src, all) ==
          "class A {\n"
          "    int f(int a, int b) {\n"
          "        int r = a * b + 1;\n"
          "        int p = r;\n"
          "        int q = r + a;\n"
          "        return p + q;\n"
          "    }\n"
          "}\n");

    auto one = mk(RefactoringKind::ExtractVariable,
                  detect::ExtractVariableParams{.enclosing_method = "A#f(int,int)",
                                                .expression = "a * b + 1",
                                                .occurrence_spans = {at_line(4)},
                                                .new_name = "r",
                                                .declared_type = "int"});
    CHECK(apply_text(src, one) ==
          "class A {\n"
          "    int f(int a, int b) {\n"
          "        int p = a * b + 1;\n"
          "        int r = a * b + 1;\n"
          "        int q = r + a;\n"
          "        return p + q;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract variable hoists to the common block of branched occurrences") {
    std::string src =
        "class A {\n"
        "    void f(int a, int b) {\n"
        "        if (a > 0) {\n"
        "            log(a * b);\n"
        "        } else {\n"
        "            log(a * b + b);\n"
        "        }\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractVariable,
                   detect::ExtractVariableParams{.enclosing_method = "A#f(int,int)",
                                                 .expression = "a * b",
                                                 .new_name = "m"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    void f(int a, int b) {\n"
          "        var m = a * b;\n"
          "        if (a > 0) {\n"
          "            log(m);\n"
          "        } else {\n"
          "            log(m + b);\n"
          "        }\n"
          "    }\n"
          "\n"
          "    void log(int v) {\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract variable preconditions") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int p = g(a);\n"
        "        return p;\n"
        "    }\n"
        "\n"
        "    int g(int v) {\n"
        "        return v;\n"
        "    }\n"
        "}\n";
    auto unit = parse(src);

    auto absent = mk(RefactoringKind::ExtractVariable,
                     detect::ExtractVariableParams{.enclosing_method = "A#f(int)",
                                                   .expression = "a - 9",
                                                   .new_name = "r"});
    CHECK(has_error(eng::check(unit, absent), "extract_variable.no-occurrence"));
    CHECK_THROWS_AS(eng::apply(unit, absent), PreconditionError);

    auto taken = mk(RefactoringKind::ExtractVariable,
                    detect::ExtractVariableParams{.enclosing_method = "A#f(int)",
                                                  .expression = "g(a)",
                                                  .new_name = "p"});
    CHECK(has_error(eng::check(unit, taken), "extract_variable.name-in-scope"));

    auto effect = mk(RefactoringKind::ExtractVariable,
                     detect::ExtractVariableParams{.enclosing_method = "A#f(int)",
                                                   .expression = "g(a)",
                                                   .new_name = "r"});
    auto report = eng::check(unit, effect);
    CHECK(report.ok());
    CHECK(has_warning(report, "extract_variable.side-effect"));
}

// ---- inline_variable ----------------------------------------------------------------

TEST_CASE("inline variable substitutes the initializer with correct precedence") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int t = a + 1;\n"
        "        return t * t;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineVariable,
                   detect::InlineVariableParams{.enclosing_method = "A#f(int)",
                                                .variable_name = "t"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a) {\n"
          "        return (a + 1) * (a + 1);\n"
          "    }\n"
          "}\n");
}

TEST_CASE("inline variable clears a for-loop initializer slot") {
    std::string src =
        "class A {\n"
        "    int f(int n) {\n"
        "        int s = 0;\n"
        "        for (int lim = n * 2; s < lim; s = s + 1) {\n"
        "            log(s);\n"
        "        }\n"
        "        return s;\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineVariable,
                   detect::InlineVariableParams{.enclosing_method = "A#f(int)",
                                                .variable_name = "lim"});
    std::string out = apply_text(src, inst);
    CHECK(out.find("for (; s < n * 2; s = s + 1)") != std::string::npos);
    CHECK(out.find("lim") == std::string::npos);
}

TEST_CASE("inline variable preconditions") {
    auto unit_of = [](const char* body) {
        return parse(std::string("class A {\n    int f(int a) {\n") + body +
                     "    }\n\n    int g(int v) {\n        return v;\n    }\n}\n");
    };
    auto inst = mk(RefactoringKind::InlineVariable,
                   detect::InlineVariableParams{.enclosing_method = "A#f(int)",
                                                .variable_name = "t"});

    auto reassigned = unit_of("        int t = a;\n        t = t + 1;\n        return t;\n");
    CHECK(has_error(eng::check(reassigned, inst), "inline_variable.reassigned"));

    auto mutated = unit_of("        int t = a + 1;\n        a = 5;\n        return t;\n");
    CHECK(has_error(eng::check(mutated, inst), "inline_variable.operand-mutated"));

    auto effect = unit_of("        int t = g(a);\n        return t + t;\n");
    auto report = eng::check(effect, inst);
    CHECK(report.ok());
    CHECK(has_warning(report, "inline_variable.side-effect"));
    CHECK_THROWS_AS(eng::apply(effect, inst, eng::ApplyOptions{/*strict=*/true, true}),
                    PreconditionError);

    auto bare = unit_of("        int t;\n        t = 5;\n        return t;\n");
    CHECK(has_error(eng::check(bare, inst), "inline_variable.no-initializer"));

    std::string catch_src =
        "class A {\n"
        "    int f(int a) {\n"
        "        try {\n"
        "            return a;\n"
        "        } catch (Exception t) {\n"
        "            return 0;\n"
        "        }\n"
        "    }\n"
        "}\n";
    CHECK(has_error(eng::check(parse(catch_src), inst), "inline_variable.no-initializer"));
}

// ---- extract_method -----------------------------------------------------------------

TEST_CASE("extract method moves statements with no live value") {
    std::string src =
        "class A {\n"
        "    void f(int a) {\n"
        "        int x = a + 1;\n"
        "        log(x);\n"
        "        log(a);\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int)",
                                               .new_method_name = "helper",
                                               .first_index = 0,
                                               .count = 2});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    void f(int a) {\n"
          "        helper(a);\n"
          "        log(a);\n"
          "    }\n"
          "\n"
          "    private void helper(int a) {\n"
          "        int x = a + 1;\n"
          "        log(x);\n"
          "    }\n"
          "\n"
          "    void log(int v) {\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract method returns a trailing declaration's value") {
    std::string src =
        "class A {\n"
        "    int f(int a, int b) {\n"
        "        int sum = a + b;\n"
        "        return sum * 2;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int,int)",
                                               .new_method_name = "helper",
                                               .first_index = 0,
                                               .count = 1});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a, int b) {\n"
          "        int sum = helper(a, b);\n"
          "        return sum * 2;\n"
          "    }\n"
          "\n"
          "    private int helper(int a, int b) {\n"
          "        return a + b;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract method returns through a trailing assignment") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int r = 0;\n"
        "        r = a * 3;\n"
        "        return r;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int)",
                                               .new_method_name = "helper",
                                               .first_index = 1,
                                               .count = 1});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a) {\n"
          "        int r = 0;\n"
          "        r = helper(a);\n"
          "        return r;\n"
          "    }\n"
          "\n"
          "    private int helper(int a) {\n"
          "        return a * 3;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract method carries a mid-range declaration out by value") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int x = a;\n"
        "        x = x + 1;\n"
        "        return x;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int)",
                                               .new_method_name = "helper",
                                               .first_index = 0,
                                               .count = 2});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a) {\n"
          "        int x = helper(a);\n"
          "        return x;\n"
          "    }\n"
          "\n"
          "    private int helper(int a) {\n"
          "        int x = a;\n"
          "        x = x + 1;\n"
          "        return x;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract method passes a loop-carried variable through") {
    std::string src =
        "class A {\n"
        "    int f(int n) {\n"
        "        int s = 0;\n"
        "        int i = 0;\n"
        "        while (i < n) {\n"
        "            s = s + i;\n"
        "            i = i + 1;\n"
        "        }\n"
        "        return s;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int)",
                                               .new_method_name = "helper",
                                               .block_path = "2d",
                                               .first_index = 0,
                                               .count = 1});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int n) {\n"
          "        int s = 0;\n"
          "        int i = 0;\n"
          "        while (i < n) {\n"
          "            s = helper(s, i);\n"
          "            i = i + 1;\n"
          "        }\n"
          "        return s;\n"
          "    }\n"
          "\n"
          "    private int helper(int s, int i) {\n"
          "        s = s + i;\n"
          "        return s;\n"
          "    }\n"
          "}\n");

    // Both body statements write values the next iteration reads.
    auto both = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int)",
                                               .new_method_name = "helper",
                                               .block_path = "2d",
                                               .first_index = 0,
                                               .count = 2});
    CHECK(has_error(eng::check(parse(src), both), "extract_method.live-out"));
}

TEST_CASE("extract method renames inputs to the requested parameters") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int d = a + 1;\n"
        "        return d;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int)",
                                               .new_method_name = "lift",
                                               .parameter_names = {"v"},
                                               .first_index = 0,
                                               .count = 1});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a) {\n"
          "        int d = lift(a);\n"
          "        return d;\n"
          "    }\n"
          "\n"
          "    private int lift(int v) {\n"
          "        return v + 1;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract method control-flow rejections") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        while (a > 0) {\n"
        "            log(a);\n"
        "            break;\n"
        "        }\n"
        "        return a;\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto unit = parse(src);

    auto escapes = mk(RefactoringKind::ExtractMethod,
                      detect::ExtractMethodParams{.source_method = "A#f(int)",
                                                  .new_method_name = "helper",
                                                  .block_path = "0d",
                                                  .first_index = 0,
                                                  .count = 2});
    CHECK(has_error(eng::check(unit, escapes), "extract_method.control-flow"));
    CHECK_THROWS_AS(eng::apply(unit, escapes), PreconditionError);

    // The whole loop keeps its break inside; that range is fine.
    auto whole = mk(RefactoringKind::ExtractMethod,
                    detect::ExtractMethodParams{.source_method = "A#f(int)",
                                                .new_method_name = "helper",
                                                .first_index = 0,
                                                .count = 1});
    CHECK(eng::check(unit, whole).ok());

    auto returns = mk(RefactoringKind::ExtractMethod,
                      detect::ExtractMethodParams{.source_method = "A#f(int)",
                                                  .new_method_name = "helper",
                                                  .first_index = 0,
                                                  .count = 2});
    CHECK(has_error(eng::check(unit, returns), "extract_method.control-flow"));
}

TEST_CASE("extract method liveness and collision rejections") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int x = a;\n"
        "        int y = a + 1;\n"
        "        return x + y;\n"
        "    }\n"
        "\n"
        "    int helper(int v) {\n"
        "        return v;\n"
        "    }\n"
        "}\n";
    auto unit = parse(src);

    auto two = mk(RefactoringKind::ExtractMethod,
                  detect::ExtractMethodParams{.source_method = "A#f(int)",
                                              .new_method_name = "pair",
                                              .first_index = 0,
                                              .count = 2});
    CHECK(has_error(eng::check(unit, two), "extract_method.live-out"));

    auto clash = mk(RefactoringKind::ExtractMethod,
                    detect::ExtractMethodParams{.source_method = "A#f(int)",
                                                .new_method_name = "helper",
                                                .first_index = 0,
                                                .count = 1});
    CHECK(has_error(eng::check(unit, clash), "extract_method.name-collision"));
}

// ---- inline_method ------------------------------------------------------------------

TEST_CASE("inline method substitutes an expression body at expression sites") {
    std::string src =
        "class A {\n"
        "    int twice(int v) {\n"
        "        return v + v;\n"
        "    }\n"
        "\n"
        "    int f(int a) {\n"
        "        return twice(a) * 3;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#twice(int)"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int a) {\n"
          "        return (a + a) * 3;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("inline method splices statement bodies at every call site") {
    std::string src =
        "class A {\n"
        "    void f(int a) {\n"
        "        pair(a);\n"
        "        pair(a + 1);\n"
        "    }\n"
        "\n"
        "    void pair(int v) {\n"
        "        log(v);\n"
        "        log(v * 2);\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#pair(int)"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    void f(int a) {\n"
          "        log(a);\n"
          "        log(a * 2);\n"
          "        log(a + 1);\n"
          "        log((a + 1) * 2);\n"
          "    }\n"
          "\n"
          "    void log(int v) {\n"
          "    }\n"
          "}\n");
}

TEST_CASE("inline method renames moved locals that would collide") {
    std::string src =
        "class A {\n"
        "    int f(int x) {\n"
        "        int t = 1;\n"
        "        int r = calc(x);\n"
        "        return r + t;\n"
        "    }\n"
        "\n"
        "    int calc(int a) {\n"
        "        int t = a * 2;\n"
        "        return t + 1;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#calc(int)"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int x) {\n"
          "        int t = 1;\n"
          "        int t_1 = x * 2;\n"
          "        int r = t_1 + 1;\n"
          "        return r + t;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("inline method assigns the result through at assignment sites") {
    std::string src =
        "class A {\n"
        "    int f(int x) {\n"
        "        int r = 0;\n"
        "        r = bump(x);\n"
        "        return r;\n"
        "    }\n"
        "\n"
        "    int bump(int a) {\n"
        "        log(a);\n"
        "        return a + 1;\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#bump(int)"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int f(int x) {\n"
          "        int r = 0;\n"
          "        log(x);\n"
          "        r = x + 1;\n"
          "        return r;\n"
          "    }\n"
          "\n"
          "    void log(int v) {\n"
          "    }\n"
          "}\n");
}

TEST_CASE("inline method reaches field initializers") {
    std::string src =
        "class A {\n"
        "    int seed() {\n"
        "        return 7;\n"
        "    }\n"
        "\n"
        "    int start = seed();\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#seed()"});
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    int start = 7;\n"
          "}\n");
}

TEST_CASE("inline method hard rejections") {
    std::string recursive =
        "class A {\n"
        "    int fact(int n) {\n"
        "        return n * fact(n - 1);\n"
        "    }\n"
        "}\n";
    auto r = mk(RefactoringKind::InlineMethod,
                detect::InlineMethodParams{.inlined_method = "A#fact(int)"});
    CHECK(has_error(eng::check(parse(recursive), r), "inline_method.recursive"));
    eng::ApplyOptions unchecked{false, false};
    CHECK_THROWS_AS(eng::apply(parse(recursive), r, unchecked), PreconditionError);

    std::string bodyless =
        "class A {\n"
        "    abstract int g(int a);\n"
        "\n"
        "    int f(int a) {\n"
        "        return g(a);\n"
        "    }\n"
        "}\n";
    auto g = mk(RefactoringKind::InlineMethod,
                detect::InlineMethodParams{.inlined_method = "A#g(int)"});
    CHECK(has_error(eng::check(parse(bodyless), g), "inline_method.no-body"));
    CHECK_THROWS_AS(eng::apply(parse(bodyless), g, unchecked), PreconditionError);

    std::string shaped =
        "class A {\n"
        "    int calc(int a) {\n"
        "        log(a);\n"
        "        return a + 1;\n"
        "    }\n"
        "\n"
        "    int f(int x) {\n"
        "        return calc(x) * 2;\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto c = mk(RefactoringKind::InlineMethod,
                detect::InlineMethodParams{.inlined_method = "A#calc(int)"});
    CHECK(has_error(eng::check(parse(shaped), c), "inline_method.call-shape"));
    CHECK_THROWS_AS(eng::apply(parse(shaped), c, unchecked), PreconditionError);
}

TEST_CASE("inline method and qualified call sites") {
    std::string dependent =
        "class A {\n"
        "    int count;\n"
        "\n"
        "    int get() {\n"
        "        return count;\n"
        "    }\n"
        "\n"
        "    int read(A other) {\n"
        "        return other.get();\n"
        "    }\n"
        "}\n";
    auto g = mk(RefactoringKind::InlineMethod,
                detect::InlineMethodParams{.inlined_method = "A#get()"});
    CHECK(has_error(eng::check(parse(dependent), g), "inline_method.qualified-call"));

    std::string pure =
        "class B {\n"
        "    int dbl(int v) {\n"
        "        return v * 2;\n"
        "    }\n"
        "\n"
        "    int f(B other, int a) {\n"
        "        return other.dbl(a);\n"
        "    }\n"
        "}\n";
    auto d = mk(RefactoringKind::InlineMethod,
                detect::InlineMethodParams{.inlined_method = "B#dbl(int)"});
    auto report = eng::check(parse(pure), d);
    CHECK(report.ok());
    CHECK(has_warning(report, "inline_method.qualified-call"));
    CHECK(apply_text(pure, d) ==
          "class B {\n"
          "    int f(B other, int a) {\n"
          "        return a * 2;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("inline method result handling at bare statement sites") {
    std::string src =
        "class A {\n"
        "    int next(int v) {\n"
        "        log(v);\n"
        "        return bump(v);\n"
        "    }\n"
        "\n"
        "    void f(int a) {\n"
        "        next(a);\n"
        "    }\n"
        "\n"
        "    int bump(int v) {\n"
        "        return v + 1;\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#next(int)"});
    auto report = eng::check(parse(src), inst);
    CHECK(report.ok());
    CHECK(has_warning(report, "inline_method.discarded-result"));
    CHECK(apply_text(src, inst) ==
          "class A {\n"
          "    void f(int a) {\n"
          "        log(a);\n"
          "        bump(a);\n"
          "    }\n"
          "\n"
          "    int bump(int v) {\n"
          "        return v + 1;\n"
          "    }\n"
          "\n"
          "    void log(int v) {\n"
          "    }\n"
          "}\n");

    // A value that cannot stand alone as a statement blocks the inline.
    std::string stuck =
        "class A {\n"
        "    int next(int v) {\n"
        "        log(v);\n"
        "        return v + 1;\n"
        "    }\n"
        "\n"
        "    void f(int a) {\n"
        "        next(a);\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    CHECK(has_error(eng::check(parse(stuck), inst), "inline_method.call-shape"));
}

// ---- extract_class ------------------------------------------------------------------

TEST_CASE("extract class moves members behind a delegate with a back reference") {
    std::string src =
        "class Order {\n"
        "    int qty;\n"
        "    int price;\n"
        "\n"
        "    int total() {\n"
        "        return qty * price;\n"
        "    }\n"
        "\n"
        "    int doubled() {\n"
        "        return total() * 2;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractClass,
                   detect::ExtractClassParams{.source_class = "Order",
                                              .moved_fields = {"price"},
                                              .moved_methods = {"total()"},
                                              .new_class_name = "Pricing"});
    CHECK(eng::check(parse(src), inst).ok());
    CHECK(apply_text(src, inst) ==
          "class Order {\n"
          "    int qty;\n"
          "    private Pricing delegate = new Pricing(this);\n"
          "\n"
          "    int doubled() {\n"
          "        return delegate.total() * 2;\n"
          "    }\n"
          "}\n"
          "\n"
          "class Pricing {\n"
          "    private Order src;\n"
          "\n"
          "    public Pricing(Order src) {\n"
          "        this.src = src;\n"
          "    }\n"
          "\n"
          "    int price;\n"
          "\n"
          "    int total() {\n"
          "        return src.qty * price;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract class keeps self-contained moves plain") {
    std::string src =
        "class Box {\n"
        "    int w;\n"
        "    int h;\n"
        "\n"
        "    int area() {\n"
        "        return w * h;\n"
        "    }\n"
        "\n"
        "    void describe() {\n"
        "        log(area());\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractClass,
                   detect::ExtractClassParams{.source_class = "Box",
                                              .moved_fields = {"w", "h"},
                                              .moved_methods = {"area()"},
                                              .new_class_name = "Shape"});
    CHECK(apply_text(src, inst) ==
          "class Box {\n"
          "    private Shape delegate = new Shape();\n"
          "\n"
          "    void describe() {\n"
          "        log(delegate.area());\n"
          "    }\n"
          "\n"
          "    void log(int v) {\n"
          "    }\n"
          "}\n"
          "\n"
          "class Shape {\n"
          "    int w;\n"
          "    int h;\n"
          "\n"
          "    int area() {\n"
          "        return w * h;\n"
          "    }\n"
          "}\n");
}

TEST_CASE("extract class preconditions") {
    std::string src =
        "class Data {\n"
        "    int val;\n"
        "\n"
        "    Data(int v) {\n"
        "        this.val = v;\n"
        "    }\n"
        "}\n"
        "\n"
        "class User {\n"
        "    int f(Data d) {\n"
        "        return d.val;\n"
        "    }\n"
        "}\n";
    auto unit = parse(src);

    auto external = mk(RefactoringKind::ExtractClass,
                       detect::ExtractClassParams{.source_class = "Data",
                                                  .moved_fields = {"val"},
                                                  .new_class_name = "Holder"});
    CHECK(has_error(eng::check(unit, external), "extract_class.external-reference"));

    auto ctor = mk(RefactoringKind::ExtractClass,
                   detect::ExtractClassParams{.source_class = "Data",
                                              .moved_methods = {"Data(int)"},
                                              .new_class_name = "Holder"});
    CHECK(has_error(eng::check(unit, ctor), "extract_class.constructor-move"));

    auto empty = mk(RefactoringKind::ExtractClass,
                    detect::ExtractClassParams{.source_class = "Data", .new_class_name = "Holder"});
    CHECK(has_error(eng::check(unit, empty), "extract_class.no-members"));

    auto clash = mk(RefactoringKind::ExtractClass,
                    detect::ExtractClassParams{.source_class = "Data",
                                               .moved_fields = {"val"},
                                               .new_class_name = "User"});
    CHECK(has_error(eng::check(unit, clash), "extract_class.name-collision"));
}

// ---- inverses -----------------------------------------------------------------------

TEST_CASE("renames invert to the opposite rename") {
    std::string src =
        "class A {\n"
        "    int f(int a) {\n"
        "        int total = a + 1;\n"
        "        return total * 2;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::RenameVariable,
                   detect::RenameParams{.enclosing = "A#f(int)",
                                        .old_name = "total",
                                        .new_name = "sum"});
    auto before = parse(src);
    auto after = eng::apply(before, inst);
    auto inv = eng::invert(before, inst, after);
    CHECK(inv.kind == RefactoringKind::RenameVariable);
    CHECK(inv.rename().old_name == "sum");
    CHECK(inv.rename().new_name == "total");
    CHECK(same_structure(eng::apply(after, inv), before));

    std::string msrc =
        "class A {\n"
        "    int twice(int v) {\n"
        "        return v + v;\n"
        "    }\n"
        "\n"
        "    int quad(int v) {\n"
        "        return twice(twice(v));\n"
        "    }\n"
        "}\n";
    auto minst = mk(RefactoringKind::RenameMethod,
                    detect::RenameParams{.enclosing = "A",
                                         .old_name = "twice",
                                         .new_name = "dbl",
                                         .signature = "twice(int)"});
    auto mbefore = parse(msrc);
    auto mafter = eng::apply(mbefore, minst);
    auto minv = eng::invert(mbefore, minst, mafter);
    CHECK(minv.rename().signature == "dbl(int)");
    CHECK(same_structure(eng::apply(mafter, minv), mbefore));
}

TEST_CASE("variable extraction and inlining invert into each other") {
    std::string src =
        "class A {\n"
        "    int f(int a, int b) {\n"
        "        int p = a * b + 1;\n"
        "        int q = a * b + 1 + a;\n"
        "        return p + q;\n"
        "    }\n"
        "}\n";
    auto ex = mk(RefactoringKind::ExtractVariable,
                 detect::ExtractVariableParams{.enclosing_method = "A#f(int,int)",
                                               .expression = "a * b + 1",
                                               .new_name = "r",
                                               .declared_type = "int"});
    auto before = parse(src);
    auto after = eng::apply(before, ex);
    auto inv = eng::invert(before, ex, after);
    CHECK(inv.kind == RefactoringKind::InlineVariable);
    CHECK(inv.inline_variable().variable_name == "r");
    CHECK(same_structure(eng::apply(after, inv, eng::ApplyOptions{false, false}), before));

    // and back again: inlining r inverts to re-extracting it
    auto inv2 = eng::invert(after, inv, eng::apply(after, inv, eng::ApplyOptions{false, false}));
    CHECK(inv2.kind == RefactoringKind::ExtractVariable);
    CHECK(inv2.extract_variable().expression == "a * b + 1");
    CHECK(inv2.extract_variable().new_name == "r");
}

TEST_CASE("method extraction inverts to an inline of the new method") {
    std::string src =
        "class A {\n"
        "    int f(int a, int b) {\n"
        "        int sum = a + b;\n"
        "        return sum * 2;\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::ExtractMethodParams{.source_method = "A#f(int,int)",
                                               .new_method_name = "helper",
                                               .first_index = 0,
                                               .count = 1});
    auto before = parse(src);
    auto after = eng::apply(before, inst);
    auto inv = eng::invert(before, inst, after);
    CHECK(inv.kind == RefactoringKind::InlineMethod);
    CHECK(inv.inline_method().inlined_method == "A#helper(int,int)");
    CHECK(same_structure(eng::apply(after, inv, eng::ApplyOptions{false, false}), before));
}

TEST_CASE("method inlining inverts to re-extraction when shapes allow") {
    std::string src =
        "class A {\n"
        "    void f(int a) {\n"
        "        start(a);\n"
        "        tail(a);\n"
        "    }\n"
        "\n"
        "    private void tail(int n) {\n"
        "        log(n);\n"
        "        log(n + 1);\n"
        "    }\n"
        "\n"
        "    void start(int v) {\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inst = mk(RefactoringKind::InlineMethod,
                   detect::InlineMethodParams{.inlined_method = "A#tail(int)"});
    auto before = parse(src);
    auto after = eng::apply(before, inst);
    auto inv = eng::invert(before, inst, after);
    CHECK(inv.kind == RefactoringKind::ExtractMethod);
    CHECK(inv.extract_method().new_method_name == "tail");
    CHECK(inv.extract_method().parameter_names == std::vector<std::string>{"n"});
    CHECK(same_structure(eng::apply(after, inv, eng::ApplyOptions{false, false}), before));
}

TEST_CASE("inverses that cannot exist are refused") {
    std::string multi =
        "class A {\n"
        "    void f(int a) {\n"
        "        pair(a);\n"
        "        pair(a + 1);\n"
        "    }\n"
        "\n"
        "    void pair(int v) {\n"
        "        log(v);\n"
        "    }\n"
        "\n"
        "    void log(int v) {\n"
        "    }\n"
        "}\n";
    auto inl = mk(RefactoringKind::InlineMethod,
                  detect::InlineMethodParams{.inlined_method = "A#pair(int)"});
    auto before = parse(multi);
    auto after = eng::apply(before, inl);
    CHECK_THROWS_AS(eng::invert(before, inl, after), NotInvertibleError);

    std::string boxed =
        "class Box {\n"
        "    int w;\n"
        "\n"
        "    int area() {\n"
        "        return w;\n"
        "    }\n"
        "}\n";
    auto ec = mk(RefactoringKind::ExtractClass,
                 detect::ExtractClassParams{.source_class = "Box",
                                            .moved_fields = {"w"},
                                            .moved_methods = {"area()"},
                                            .new_class_name = "Shape"});
    auto ec_before = parse(boxed);
    auto ec_after = eng::apply(ec_before, ec);
    CHECK_THROWS_AS(eng::invert(ec_before, ec, ec_after), NotInvertibleError);
}

// ---- the contract between check and apply ---------------------------------------------

TEST_CASE("a clean check means the apply goes through") {
    struct Case {
        std::string src;
        RefactoringInstance inst;
    };
    std::string base =
        "class A {\n"
        "    int f(int a) {\n"
        "        int t = a + 1;\n"
        "        return t * t;\n"
        "    }\n"
        "\n"
        "    int g(int v) {\n"
        "        return v;\n"
        "    }\n"
        "}\n";
    std::vector<Case> cases;
    cases.push_back({base, mk(RefactoringKind::RenameVariable,
                              detect::RenameParams{.enclosing = "A#f(int)",
                                                   .old_name = "t",
                                                   .new_name = "u"})});
    cases.push_back({base, mk(RefactoringKind::RenameVariable,
                              detect::RenameParams{.enclosing = "A#f(int)",
                                                   .old_name = "t",
                                                   .new_name = "a"})});
    cases.push_back({base, mk(RefactoringKind::RenameMethod,
                              detect::RenameParams{.enclosing = "A",
                                                   .old_name = "g",
                                                   .new_name = "f"})});
    cases.push_back({base, mk(RefactoringKind::InlineVariable,
                              detect::InlineVariableParams{.enclosing_method = "A#f(int)",
                                                           .variable_name = "t"})});
    cases.push_back({base, mk(RefactoringKind::ExtractVariable,
                              detect::ExtractVariableParams{.enclosing_method = "A#f(int)",
                                                            .expression = "a + 1",
                                                            .new_name = "t"})});
    cases.push_back({base, mk(RefactoringKind::ExtractMethod,
                              detect::ExtractMethodParams{.source_method = "A#f(int)",
                                                          .new_method_name = "g",
                                                          .first_index = 0,
                                                          .count = 1})});
    cases.push_back({base, mk(RefactoringKind::ExtractMethod,
                              detect::ExtractMethodParams{.source_method = "A#f(int)",
                                                          .new_method_name = "lift",
                                                          .first_index = 0,
                                                          .count = 2})});
    cases.push_back({base, mk(RefactoringKind::InlineMethod,
                              detect::InlineMethodParams{.inlined_method = "A#g(int)"})});

    for (size_t i = 0; i < cases.size(); ++i) {
        CAPTURE(i);
        auto unit = parse(cases[i].src);
        auto report = eng::check(unit, cases[i].inst);
        if (report.ok()) {
            CHECK_NOTHROW(eng::apply(unit, cases[i].inst));
        } else {
            CHECK_THROWS_AS(eng::apply(unit, cases[i].inst), PreconditionError);
        }
    }
}

TEST_CASE("params that do not match the kind are a caller error") {
    auto unit = parse("class A {\n}\n");
    auto inst = mk(RefactoringKind::ExtractMethod,
                   detect::RenameParams{.enclosing = "A", .old_name = "x", .new_name = "y"});
    CHECK_THROWS_AS(eng::check(unit, inst), KindMismatchError);
    CHECK_THROWS_AS(eng::apply(unit, inst), KindMismatchError);
}
