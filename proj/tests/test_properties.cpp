#include <random>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "refmirror/detect/detector.hpp"
#include "refmirror/engine/engine.hpp"
#include "refmirror/lang/parser.hpp"
#include "refmirror/lang/printer.hpp"

using namespace refmirror::detect;
namespace lang = refmirror::lang;
namespace engine = refmirror::engine;
namespace testgen = refmirror::testgen;

namespace {

const RefactoringKind kAllKinds[] = {
    RefactoringKind::RenameVariable,  RefactoringKind::RenameParameter,
    RefactoringKind::RenameAttribute, RefactoringKind::RenameMethod,
    RefactoringKind::InlineVariable,  RefactoringKind::InlineMethod,
    RefactoringKind::ExtractVariable, RefactoringKind::ExtractMethod,
    RefactoringKind::ExtractClass,
};

bool is_rename(RefactoringKind k) {
    return k == RefactoringKind::RenameVariable || k == RefactoringKind::RenameParameter ||
           k == RefactoringKind::RenameAttribute || k == RefactoringKind::RenameMethod;
}

}  // namespace

TEST_CASE("generated refactorings round-trip through the detector") {
    std::mt19937 rng(918273645u);
    int total = 0, recovered = 0;
    int rename_total = 0, rename_recovered = 0;

    for (int i = 0; i < 225; ++i) {
        auto kind = kAllKinds[i % 9];
        auto gc = testgen::gen_case(rng, kind);
        CAPTURE(gc.source);
        CAPTURE(to_json(gc.instance).dump(2));

        lang::SourceUnit before = lang::parse(gc.source);
        auto report = engine::check(before, gc.instance);
        REQUIRE_MESSAGE(report.ok(), (report.violations.empty()
                                          ? std::string("no violations")
                                          : report.violations.front().rule + ": " +
                                                report.violations.front().message));
        lang::SourceUnit after = engine::apply(before, gc.instance);

        auto found = detect(before, after);
        ++total;
        if (is_rename(kind)) ++rename_total;
        bool hit = found.size() == 1 && same_instance(found[0], gc.instance);
        if (hit) {
            ++recovered;
            if (is_rename(kind)) ++rename_recovered;
        } else {
            // Leave a trail for the failing seed without stopping the run.
            CAPTURE(found.size());
            if (!found.empty()) CAPTURE(to_json(found[0]).dump(2));
            CHECK_MESSAGE(hit, "case " << i << " (" << kind_name(kind) << ") not recovered");
        }
    }

    CHECK(rename_recovered == rename_total);
    CHECK(recovered * 100 >= total * 99);
}

TEST_CASE("recovered instances survive unrelated noise in the modified unit") {
    std::mt19937 rng(5150u);
    for (int i = 0; i < 60; ++i) {
        auto kind = kAllKinds[i % 4];  // the four rename kinds
        auto gc = testgen::gen_case(rng, kind);
        CAPTURE(gc.source);

        lang::SourceUnit before = lang::parse(gc.source);
        lang::SourceUnit after = engine::apply(before, gc.instance);

        // Splice an unexplained method into the modified side.
        std::string text = lang::print_unit(after);
        auto pos = text.rfind('}');
        REQUIRE(pos != std::string::npos);
        pos = text.rfind('}', pos - 1);
        REQUIRE(pos != std::string::npos);
        std::string noisy = text.substr(0, pos + 1) + "\n\n    int stray" +
                            std::to_string(i) + "() {\n        return " + std::to_string(40 + i) +
                            ";\n    }" + text.substr(pos + 1);
        lang::SourceUnit disturbed = lang::parse(noisy);

        auto found = detect(before, disturbed);
        bool hit = false;
        for (const auto& f : found) hit = hit || same_instance(f, gc.instance);
        CAPTURE(noisy);
        CHECK_MESSAGE(hit, "case " << i << " lost under noise");
    }
}

TEST_CASE("detection output is identical across repeated runs") {
    std::mt19937 rng(777u);
    for (auto kind : kAllKinds) {
        auto gc = testgen::gen_case(rng, kind);
        lang::SourceUnit before = lang::parse(gc.source);
        lang::SourceUnit after = engine::apply(before, gc.instance);

        auto a = detect(before, after);
        auto b = detect(before, after);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i)
            CHECK(to_json(a[i]).dump() == to_json(b[i]).dump());
    }
}
