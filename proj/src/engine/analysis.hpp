#pragma once

// Kind-specific analyses shared by check(), apply() and invert(). Everything
// here inspects without mutating; `SourceUnit&` parameters are non-const only
// because the site scanners hand back mutable slots for apply() to splice.

#include "engine_util.hpp"

namespace refmirror::engine::analysis {

using namespace util;

// ---- rename ------------------------------------------------------------------

/// Declaration targeted by a rename instance, or kInvalidNode with `error`
/// set. rename_method tolerates an empty signature when the name is unique.
NodeId resolve_rename_target(const SourceUnit& unit, RefactoringKind kind,
                             const detect::RenameParams& p, std::string& error);

// ---- extract_method ------------------------------------------------------------

struct ExtractAnalysis {
    const MethodDecl* method = nullptr;
    const ClassDecl* owner = nullptr;
    StmtRange range;

    struct Input {
        const VarDecl* decl = nullptr;
        std::string param_name;  // possibly renamed
        std::string param_type;
        bool opaque_mention = false;  // referenced only by name inside opaque text
    };
    std::vector<Input> inputs;

    /// How the single live-out value leaves the extracted body.
    ///   DeclLast    range ends with `T x = expr;`, x unused elsewhere inside
    ///   AssignLast  range ends with `x = expr;`, x declared before the range
    ///   DeclInRange x declared somewhere in the range, returned by name
    ///   AssignMid   x declared before the range, assigned inside, returned
    ///   None        nothing flows out
    enum class LiveOut { None, DeclLast, AssignLast, DeclInRange, AssignMid };
    LiveOut live_case = LiveOut::None;
    const VarDecl* live_out = nullptr;
    std::vector<std::string> live_out_names;  // every candidate, for diagnostics

    std::vector<Violation> violations;
};

/// Throws UnknownEntityError when the method, block or range is missing.
ExtractAnalysis analyze_extract(SourceUnit& unit, const detect::ExtractMethodParams& p);

// ---- inline_method -------------------------------------------------------------

struct CallSite {
    const MethodDecl* caller = nullptr;  // null for a field initializer site
    const FieldDecl* field = nullptr;
    std::string caller_path;
    SlotSite site;        // chain is empty for field initializer sites
    ExprPtr* slot = nullptr;
    bool qualified = false;  // call has a target other than `this`

    enum class Form { StmtForm, AssignForm, DeclForm, ExprForm };
    Form form = Form::ExprForm;
};

struct InlineAnalysis {
    const MethodDecl* method = nullptr;
    const ClassDecl* owner = nullptr;

    /// Expression       single `return expr;`, inlined at expression level
    /// Stmts            no result: plain statements (trailing bare `return;` dropped)
    /// StmtsWithResult  statements followed by a single trailing `return expr;`
    enum class Shape { Expression, Stmts, StmtsWithResult };
    Shape shape = Shape::Stmts;
    size_t moved_count = 0;             // body statements that move to call sites
    const Expr* result = nullptr;       // returned expression, when any
    bool instance_dependent = false;    // body touches `this` state

    std::vector<CallSite> sites;        // document order
    std::vector<Violation> violations;  // shape problems (early returns, no body)
};

/// Throws UnknownEntityError when the method is missing.
InlineAnalysis analyze_inline(SourceUnit& unit, const detect::InlineMethodParams& p);

}  // namespace refmirror::engine::analysis
