#pragma once

// Shared internals for the transformation engine. Not installed; the public
// surface is include/refmirror/engine/engine.hpp.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "refmirror/detect/refactoring.hpp"
#include "refmirror/engine/engine.hpp"
#include "refmirror/lang/ast_ops.hpp"
#include "refmirror/lang/paths.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/lang/source_unit.hpp"
#include "refmirror/support/errors.hpp"

namespace refmirror::engine::util {

using detect::RefactoringInstance;
using detect::RefactoringKind;
using namespace refmirror::lang;

// ---- entity resolution -----------------------------------------------------

const ClassDecl& require_class(const SourceUnit& unit, const std::string& path);
const MethodDecl& require_method(const SourceUnit& unit, const std::string& path);
ClassDecl& require_class_mut(SourceUnit& unit, const std::string& path);
MethodDecl& require_method_mut(SourceUnit& unit, const std::string& path);

/// Class that owns the given member declaration id, or nullptr.
const ClassDecl* owner_class_of(const SourceUnit& unit, NodeId member);

/// Dotted path of a class ("Outer.Inner").
std::string class_path_of(const SourceUnit& unit, const ClassDecl& c);

const FieldDecl* field_in(const ClassDecl& c, const std::string& name);
const MethodDecl* method_in(const ClassDecl& c, const std::string& signature);
const VarDecl* param_named(const MethodDecl& m, const std::string& name);

/// Local-like declarations (locals, catch/for-each/resource variables) named
/// `name`, in document order.
std::vector<const VarDecl*> locals_named(const MethodDecl& m, const std::string& name);

/// The unique local named `name`, or — when several share the name — the one
/// whose declaration starts on `hint_line`. Null when unresolved.
const VarDecl* find_local(const MethodDecl& m, const std::string& name, int hint_line);

// ---- renaming --------------------------------------------------------------

/// Applies `renames` (decl id -> new name) to the declarations themselves and
/// to every reference the binding table resolves to one of them. Mutates the
/// unit's AST in place; spans and binding entries are left stale, so callers
/// must print + reparse afterwards.
void rename_in_unit(SourceUnit& unit, const std::map<NodeId, std::string>& renames);

/// Renames references only, inside a detached fragment (e.g. a cloned method
/// body before insertion elsewhere). `bindings` is the table of the unit the
/// fragment was cloned from; clone_* preserve node ids, so lookups still hold.
void rename_refs(Node& root, const std::map<NodeId, Binding>& bindings,
                 const std::map<NodeId, std::string>& renames);

// ---- expression analysis ---------------------------------------------------

/// True when evaluating the expression could observably change state:
/// calls, allocations, assignments, increments/decrements, or opaque text.
bool has_side_effects(const Expr& e);

/// All expression nodes in `m` whose canonical text equals `text`,
/// in evaluation-independent walk order.
std::vector<const Expr*> occurrences_of(const MethodDecl& m, const std::string& text);

/// True when the lexed text contains `name` as an identifier token.
bool mentions_identifier(const std::string& text, const std::string& name);

bool is_this_literal(const Expr* e);

/// Opaque fragments (statements or expressions) under `root` whose text
/// mentions any of `names` as an identifier.
bool opaque_mentions(const SourceUnit& unit, const std::string& name);
bool opaque_mentions_in(const MethodDecl& m, const std::string& name);

// ---- scopes & names --------------------------------------------------------

/// Every simple name visible somewhere inside `m`: parameters, locals
/// (including catch/for-each/resource variables), and fields of the owning
/// class chain. Superset used for collision-free fresh names.
std::set<std::string> names_in_method(const SourceUnit& unit, const MethodDecl& m);

/// `base` if free, else base_1, base_2, ...
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

// ---- statement ranges ------------------------------------------------------

struct StmtRange {
    Block* block = nullptr;      // owning block inside a (cloned) unit
    size_t first = 0;            // index of first statement
    size_t count = 0;            // number of statements
};

/// Resolves `{method_path, block_path, first, count}` against a unit.
/// Throws UnknownEntityError when out of bounds.
StmtRange resolve_range(SourceUnit& unit, const std::string& method_path,
                        const std::string& block_path, size_t first, size_t count);

/// Variables declared directly at the top level of the range (visible after
/// it if they stayed in place).
std::vector<const VarDecl*> range_top_level_decls(const StmtRange& r);

// ---- expression slot sites ---------------------------------------------------

/// An owning expression slot together with the statement spine above it.
/// `chain` runs from the method body downwards; each entry is (block, index
/// of the statement the slot lives under). The last entry addresses the
/// statement that directly owns the slot, so replacements and insertions
/// know where to splice.
struct SlotSite {
    std::vector<std::pair<Block*, size_t>> chain;
    ExprPtr* slot = nullptr;

    Block* block() const { return chain.back().first; }
    size_t index() const { return chain.back().second; }
    Stmt* stmt() const { return block()->stmts[index()].get(); }
};

/// Every expression slot under the method body, document order. A slot inside
/// a `for` header belongs to the `for` statement itself.
std::vector<SlotSite> slot_sites(MethodDecl& m);

/// Visits `root` and every block nested under it, outermost first.
void walk_blocks(Block& root, const std::function<void(Block&)>& fn);

/// A `T x = ...;` statement (or for-init) declaring a given name.
struct DeclStmtSite {
    Block* block = nullptr;
    size_t index = 0;
    LocalVarDeclStmt* stmt = nullptr;
    ForStmt* loop = nullptr;  // set when the declaration is a for-init
};

std::vector<DeclStmtSite> decl_stmt_sites(MethodDecl& m, const std::string& name);

/// Picks one site, using the span hint to break ties between same-named
/// locals. Null when nothing (or nothing unambiguous) matches.
const DeclStmtSite* pick_decl_site(const std::vector<DeclStmtSite>& sites, int hint_line);

// ---- structural walk correspondence ----------------------------------------

/// Declaration nodes (classes, methods, fields, vars) in deterministic walk
/// order. Used to pair up "the same declaration" across a shape-preserving
/// transformation such as a rename.
std::vector<const Node*> decls_in_order(const SourceUnit& unit);

/// For every reference in walk order: index into decls_in_order of its
/// target, or -1 for external references.
std::vector<int> reference_targets(const SourceUnit& unit);

// ---- misc ------------------------------------------------------------------

bool is_identifier(const std::string& s);

/// Throws KindMismatchError when the params variant does not belong to the
/// instance's kind.
void require_kind_params(const RefactoringInstance& instance);

}  // namespace refmirror::engine::util
