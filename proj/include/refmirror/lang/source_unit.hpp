#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "refmirror/lang/ast.hpp"

namespace refmirror::lang {

/// Target of a resolved name reference: a declaration in the unit or external.
struct Binding {
    NodeId decl = kInvalidNode;  // kInvalidNode means external
    bool is_external() const { return decl == kInvalidNode; }
};

/// A parsed document: AST, binding table, span bookkeeping.
/// Immutable after construction; safe to share between threads.
struct SourceUnit {
    std::string raw_text;
    std::string package_header;          // dotted name after "package", empty if absent
    std::vector<std::string> imports;    // text between "import" and ";" per directive
    std::vector<std::unique_ptr<ClassDecl>> types;

    /// reference node id -> declaration binding (every NameRef, qualified
    /// field name and MethodCall name has an entry)
    std::map<NodeId, Binding> binding_table;

    int loc = 0;  // non-blank line count of raw_text

    const Node* find(NodeId id) const;
    Node* find_mutable(NodeId id);

    /// Innermost declaration for a reference node; nullopt = external.
    std::optional<NodeId> resolve(NodeId ref) const;
};

/// Deep copy preserving node ids, spans and the binding table; the copy is
/// safe to mutate before reprinting.
SourceUnit clone_unit(const SourceUnit& unit);

/// Non-blank line count. Deterministic; a line is blank when it contains
/// only whitespace.
int count_loc(const std::string& text);

}  // namespace refmirror::lang
