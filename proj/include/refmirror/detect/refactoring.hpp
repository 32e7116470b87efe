#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "refmirror/lang/span.hpp"

namespace refmirror::detect {

enum class RefactoringKind {
    ExtractClass,
    ExtractMethod,
    ExtractVariable,
    InlineMethod,
    InlineVariable,
    RenameAttribute,
    RenameMethod,
    RenameParameter,
    RenameVariable,
};

/// snake_case wire name, e.g. "extract_method"
std::string kind_name(RefactoringKind kind);
RefactoringKind kind_from_name(const std::string& name);  // UnsupportedKindError

/// Shared by the four rename kinds. `enclosing` is the owning class path
/// for attributes/methods and the owning method path for parameters and
/// variables. `signature` is set for rename_method ("name(T1,T2)").
struct RenameParams {
    std::string enclosing;
    std::string old_name;
    std::string new_name;
    lang::Span decl_span;
    std::string signature;
};

struct ExtractMethodParams {
    std::string source_method;  // path of the method extracted from
    std::vector<lang::Span> extracted_spans;
    std::string new_method_name;
    std::vector<std::string> parameter_names;
    std::vector<std::string> parameter_types;
    std::string return_variable;  // live-out variable, "" when none
    std::string return_type;      // "void" when no live-out
    std::string modifiers;
    std::string block_path;  // block holding the extracted range
    int first_index = 0;     // range position within that block
    int count = 0;
    int call_site_index = 0;  // index of the replacement call statement
    std::vector<std::string> statement_texts;  // canonical texts of the range
};

struct ExtractVariableParams {
    std::string enclosing_method;
    std::string expression;  // canonical text of the extracted expression
    std::vector<lang::Span> occurrence_spans;
    std::string new_name;
    std::string declared_type;
};

struct InlineMethodParams {
    std::string inlined_method;
    std::vector<lang::Span> call_site_spans;
};

struct InlineVariableParams {
    std::string enclosing_method;
    std::string variable_name;
    lang::Span decl_span;
    std::vector<lang::Span> use_spans;
};

struct ExtractClassParams {
    std::string source_class;
    std::vector<std::string> moved_fields;
    std::vector<std::string> moved_methods;  // signatures "name(T1,T2)"
    std::string new_class_name;
    std::string delegate_field;  // field of the new type left in the source
};

using RefactoringParams = std::variant<RenameParams, ExtractMethodParams, ExtractVariableParams,
                                       InlineMethodParams, InlineVariableParams, ExtractClassParams>;

struct RefactoringInstance {
    RefactoringKind kind = RefactoringKind::RenameVariable;
    RefactoringParams params;
    double similarity = 1.0;  // 1.0 = signature-identical match

    const RenameParams& rename() const { return std::get<RenameParams>(params); }
    const ExtractMethodParams& extract_method() const { return std::get<ExtractMethodParams>(params); }
    const ExtractVariableParams& extract_variable() const {
        return std::get<ExtractVariableParams>(params);
    }
    const InlineMethodParams& inline_method() const { return std::get<InlineMethodParams>(params); }
    const InlineVariableParams& inline_variable() const {
        return std::get<InlineVariableParams>(params);
    }
    const ExtractClassParams& extract_class() const { return std::get<ExtractClassParams>(params); }

    /// Earliest line this instance touches in the original document;
    /// used for deterministic ordering.
    int anchor_line() const;
};

nlohmann::json to_json(const RefactoringInstance& instance);
RefactoringInstance instance_from_json(const nlohmann::json& j);  // MissingFieldError

/// Semantic equality: kind, entity paths, names and span line sets agree.
bool same_instance(const RefactoringInstance& a, const RefactoringInstance& b);

/// Sorts by kind name, then anchor line, then serialized form.
void sort_instances(std::vector<RefactoringInstance>& instances);

}  // namespace refmirror::detect
