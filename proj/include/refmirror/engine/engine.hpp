#pragma once

#include <string>
#include <vector>

#include "refmirror/detect/refactoring.hpp"
#include "refmirror/lang/source_unit.hpp"

namespace refmirror::engine {

enum class Severity { Error, Warning };

struct Violation {
    std::string rule;  // e.g. "rename.collision"
    Severity severity = Severity::Error;
    std::string message;
};

struct CheckReport {
    std::vector<Violation> violations;

    bool ok(bool strict = false) const {
        for (auto& v : violations) {
            if (v.severity == Severity::Error) return false;
            if (strict && v.severity == Severity::Warning) return false;
        }
        return true;
    }
};

struct ApplyOptions {
    bool strict = false;      // warnings block the apply
    bool run_checks = true;   // verification passes may skip the catalog
};

/// Evaluates the precondition catalog for one instance against a unit.
/// Unknown target entities surface as violations, not exceptions.
CheckReport check(const lang::SourceUnit& unit, const detect::RefactoringInstance& instance);

/// Applies the instance and returns the resulting unit, reparsed from the
/// printed mutation so spans, ids and bindings are parser-derived.
/// Throws PreconditionError when the catalog rejects the instance and
/// UnknownEntityError when a target entity cannot be resolved.
lang::SourceUnit apply(const lang::SourceUnit& unit, const detect::RefactoringInstance& instance,
                       const ApplyOptions& options = {});

/// Builds the inverse instance, expressed against `after` = apply(before,
/// instance). Throws NotInvertibleError for extract_class, for
/// inline_method with multiple or expression-position call sites, and for
/// other shapes whose reversal is not representable.
detect::RefactoringInstance invert(const lang::SourceUnit& before,
                                   const detect::RefactoringInstance& instance,
                                   const lang::SourceUnit& after);

}  // namespace refmirror::engine
