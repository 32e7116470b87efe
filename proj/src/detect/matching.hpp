#pragma once

// Internal pairing structures behind match_entities(). The detector works on
// these directly; the public EntityMatch list is a flattened view.

#include <vector>

#include "refmirror/detect/detector.hpp"
#include "refmirror/lang/ast.hpp"

namespace refmirror::detect::internal {

using namespace refmirror::lang;

/// A local-like declaration with the statement that introduces it
/// (null for catch parameters, for-each variables and try resources).
struct LocalDecl {
    const VarDecl* var = nullptr;
    const LocalVarDeclStmt* stmt = nullptr;
};

struct ParamPair {
    const VarDecl* before = nullptr;
    const VarDecl* after = nullptr;
    double sim = 1.0;
};

struct LocalPair {
    LocalDecl before;
    LocalDecl after;
    double sim = 1.0;
};

struct MethodPair {
    const MethodDecl* before = nullptr;
    const MethodDecl* after = nullptr;
    double sim = 1.0;
    std::vector<ParamPair> params;
    std::vector<LocalPair> locals;
    std::vector<LocalDecl> gone_locals;  // in before only
    std::vector<LocalDecl> new_locals;   // in after only
};

struct FieldPair {
    const FieldDecl* before = nullptr;
    const FieldDecl* after = nullptr;
    double sim = 1.0;
};

struct ClassPair {
    const ClassDecl* before = nullptr;
    const ClassDecl* after = nullptr;
    double sim = 1.0;
    std::vector<FieldPair> fields;
    std::vector<MethodPair> methods;
    std::vector<const FieldDecl*> gone_fields;
    std::vector<const MethodDecl*> gone_methods;
    std::vector<const FieldDecl*> new_fields;
    std::vector<const MethodDecl*> new_methods;
};

struct Correspondence {
    std::vector<ClassPair> classes;  // matched pairs, all nesting levels
    std::vector<const ClassDecl*> gone_classes;
    std::vector<const ClassDecl*> new_classes;
};

Correspondence correspond(const SourceUnit& before, const SourceUnit& after,
                          const DetectorOptions& options);

std::vector<LocalDecl> locals_of(const MethodDecl& m);

}  // namespace refmirror::detect::internal
