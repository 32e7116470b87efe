#include <random>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "refmirror/detect/detector.hpp"
#include "refmirror/engine/engine.hpp"
#include "refmirror/lang/parser.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/mirror/mirror.hpp"
#include "refmirror/support/errors.hpp"

using namespace refmirror;
using detect::RefactoringKind;
namespace testgen = refmirror::testgen;

TEST_CASE("identical inputs give an empty report") {
    const char* src = R"(class A {
    int f(int n) {
        return n + 1;
    }
}
)";
    auto report = mirror::mirror(src, src);
    CHECK(report.applied.empty());
    CHECK(report.skipped.empty());
    CHECK(report.residual.empty());
    CHECK(report.clean());
    CHECK(report.detected == 0);
    CHECK(report.reapply_rate() == doctest::Approx(1.0));
    CHECK(report.c_hat == lang::print_unit(lang::parse(src)));
}

TEST_CASE("formatting-only differences are not residual") {
    const char* a = "class A { int f(int n) { return n + 1; } }\n";
    const char* b = R"(class A {
    int f(int n) {
        return n + 1;
    }
}
)";
    auto report = mirror::mirror(a, b);
    CHECK(report.clean());
    CHECK(report.applied.empty());
}

TEST_CASE("a single rename is applied and leaves nothing behind") {
    const char* before = R"(class Counter {
    int bump(int step) {
        int next = step + 1;
        return next;
    }
}
)";
    const char* after = R"(class Counter {
    int bump(int step) {
        int sum = step + 1;
        return sum;
    }
}
)";
    auto report = mirror::mirror(before, after);
    REQUIRE(report.applied.size() == 1);
    CHECK(report.applied[0].kind == RefactoringKind::RenameVariable);
    CHECK(report.skipped.empty());
    CHECK(report.residual.empty());
    CHECK(report.c_hat == lang::print_unit(lang::parse(after)));
    CHECK(report.reapply_rate() == doctest::Approx(1.0));
}

TEST_CASE("valid inline is kept while a control-flow rewrite is quarantined") {
    // The modified side inlines `t` (fine) but also collapses an if/else into
    // a ternary, silently dropping behavior changes into one expression. The
    // inline is replayed; the rewrite stays out of c-hat.
    const char* before = R"(class Guard {
    int pick(int a, int b) {
        int t = a + b;
        if (t > 0) {
            return t;
        } else {
            return b;
        }
    }
}
)";
    const char* after = R"(class Guard {
    int pick(int a, int b) {
        return a + b > 0 ? a + b : b;
    }
}
)";
    auto report = mirror::mirror(before, after);
    REQUIRE(report.applied.size() == 1);
    CHECK(report.applied[0].kind == RefactoringKind::InlineVariable);
    CHECK(report.applied[0].inline_variable().variable_name == "t");
    REQUIRE(report.residual.size() == 1);
    CHECK(report.residual[0].classification == mirror::ResidualClass::SemanticChange);
    CHECK(report.residual[0].after_excerpt.find('?') != std::string::npos);
    // c-hat keeps the if statement: the inline applied, the rewrite did not.
    CHECK(report.c_hat.find("if (a + b > 0)") != std::string::npos);
    CHECK(report.c_hat.find('?') == std::string::npos);
}

TEST_CASE("declaration placement divergence is expected, not residual") {
    // The model hoisted the repeated expression but declared it in a narrower
    // block than the engine chooses. The extraction itself is applied; the
    // placement difference is the engine's own doing and is not quarantined.
    const char* before = R"(class Loader {
    int load(int n) {
        if (n > 0) {
            int a = n * 3 + 1;
            return a;
        } else {
            return n * 3;
        }
    }
}
)";
    const char* after = R"(class Loader {
    int load(int n) {
        if (n > 0) {
            int base = n * 3;
            int a = base + 1;
            return a;
        } else {
            return n * 3;
        }
    }
}
)";
    auto report = mirror::mirror(before, after);
    REQUIRE(report.applied.size() == 1);
    CHECK(report.applied[0].kind == RefactoringKind::ExtractVariable);
    CHECK(report.applied[0].extract_variable().new_name == "base");
    CHECK(report.residual.empty());
}

TEST_CASE("a dropped statement inside a renamed method stays residual") {
    const char* before = R"(class Svc {
    void prepare(int n) {
        log(n);
        log(n + 1);
        log(n + 2);
    }

    void log(int x) {
    }
}
)";
    const char* after = R"(class Svc {
    void setup(int n) {
        log(n);
        log(n + 1);
    }

    void log(int x) {
    }
}
)";
    auto report = mirror::mirror(before, after);
    REQUIRE(report.applied.size() == 1);
    CHECK(report.applied[0].kind == RefactoringKind::RenameMethod);
    REQUIRE(report.residual.size() == 1);
    CHECK(report.residual[0].before_excerpt.find("log(n + 2);") != std::string::npos);
    CHECK(report.residual[0].classification == mirror::ResidualClass::SemanticChange);
    // The rename landed in c-hat, the deletion did not.
    CHECK(report.c_hat.find("void setup(int n)") != std::string::npos);
    CHECK(report.c_hat.find("log(n + 2);") != std::string::npos);
}

TEST_CASE("an unparseable modification is one syntax_error_source hunk") {
    const char* before = R"(class A {
    int f(int n) {
        return n + 1;
    }
}
)";
    const char* after = "class A { int f(int n) { return n + ; } ";  // truncated garbage
    auto report = mirror::mirror(before, after);
    CHECK(report.applied.empty());
    CHECK(report.detected == 0);
    REQUIRE(report.residual.size() == 1);
    CHECK(report.residual[0].classification == mirror::ResidualClass::SyntaxErrorSource);
    CHECK(report.c_hat == lang::print_unit(lang::parse(before)));
}

TEST_CASE("an unparseable original is the caller's error") {
    CHECK_THROWS_AS(mirror::mirror("class {", "class A {\n}\n"), refmirror::SyntaxError);
}

TEST_CASE("mirror is idempotent on its own output") {
    const char* before = R"(class Counter {
    int bump(int step) {
        int next = step + 1;
        return next;
    }
}
)";
    const char* after = R"(class Counter {
    int bump(int step) {
        int sum = step + 2;
        return sum;
    }
}
)";
    auto first = mirror::mirror(before, after);
    auto again = mirror::mirror(first.c_hat, first.c_hat);
    CHECK(again.applied.empty());
    CHECK(again.residual.empty());
}

TEST_CASE("every change in c-hat is attributable to an applied instance") {
    // Replaying `applied` over the original must reproduce c-hat exactly.
    std::mt19937 rng(424242u);
    const RefactoringKind kinds[] = {
        RefactoringKind::RenameMethod,   RefactoringKind::InlineVariable,
        RefactoringKind::ExtractMethod,  RefactoringKind::ExtractVariable,
        RefactoringKind::ExtractClass,   RefactoringKind::InlineMethod,
    };
    for (int i = 0; i < 24; ++i) {
        auto gc = testgen::gen_case(rng, kinds[i % 6]);
        lang::SourceUnit before = lang::parse(gc.source);
        lang::SourceUnit target = engine::apply(before, gc.instance);

        auto report = mirror::mirror(gc.source, lang::print_unit(target));
        CAPTURE(gc.source);
        REQUIRE(report.applied.size() == 1);
        CHECK(report.residual.empty());

        lang::SourceUnit replay = lang::parse(gc.source);
        for (const auto& inst : report.applied) replay = engine::apply(replay, inst);
        CHECK(lang::print_unit(replay) == report.c_hat);
        CHECK(report.c_hat == lang::print_unit(target));
    }
}

TEST_CASE("injected edits are quarantined alongside applied refactorings") {
    std::mt19937 rng(31337u);
    for (int i = 0; i < 20; ++i) {
        auto gc = testgen::gen_case(
            rng, i % 2 ? RefactoringKind::RenameVariable : RefactoringKind::RenameAttribute);
        lang::SourceUnit before = lang::parse(gc.source);
        lang::SourceUnit target = engine::apply(before, gc.instance);

        // Inject a non-refactoring edit: a fresh statement at the top of the
        // first method body.
        std::string text = lang::print_unit(target);
        auto pos = text.find(") {\n");
        REQUIRE(pos != std::string::npos);
        std::string injected = "spy(" + std::to_string(50 + i) + ");";
        text.insert(pos + 4, "        " + injected + "\n");

        auto report = mirror::mirror(gc.source, text);
        CAPTURE(gc.source);
        CAPTURE(text);
        REQUIRE(report.applied.size() == 1);
        CHECK(same_instance(report.applied[0], gc.instance));
        REQUIRE(report.residual.size() == 1);
        CHECK(report.residual[0].after_excerpt.find(injected) != std::string::npos);
        CHECK(report.c_hat.find(injected) == std::string::npos);  // never adopted
    }
}

TEST_CASE("report serializes with spans, reasons and rates") {
    const char* before = R"(class Svc {
    void prepare(int n) {
        log(n);
        log(n + 1);
        log(n + 2);
    }

    void log(int x) {
    }
}
)";
    const char* after = R"(class Svc {
    void setup(int n) {
        log(n);
        log(n + 2);
    }

    void log(int x) {
    }
}
)";
    auto report = mirror::mirror(before, after);
    auto j = mirror::to_json(report);
    CHECK(j["applied"].size() == report.applied.size());
    CHECK(j["clean"] == report.clean());
    CHECK(j["detected"] == report.detected);
    CHECK(j["reapply_rate"] == doctest::Approx(report.reapply_rate()));
    REQUIRE(j["residual"].size() == 1);
    CHECK(j["residual"][0]["classification"] == "semantic_change");
    CHECK(j["residual"][0]["before_span"].contains("start_line"));
    CHECK(j["c_hat"] == report.c_hat);
}
