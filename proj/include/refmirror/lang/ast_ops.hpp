#pragma once

#include <functional>
#include <memory>

#include "refmirror/lang/ast.hpp"

namespace refmirror::lang {

// Deep clones. Node ids and spans are copied verbatim; transformations that
// need fresh bookkeeping reprint and reparse instead.
ExprPtr clone_expr(const Expr& e);
StmtPtr clone_stmt(const Stmt& s);
BlockPtr clone_block(const Block& b);
VarDeclPtr clone_var(const VarDecl& v);
std::unique_ptr<FieldDecl> clone_field(const FieldDecl& f);
std::unique_ptr<MethodDecl> clone_method(const MethodDecl& m);
std::unique_ptr<ClassDecl> clone_class(const ClassDecl& c);

/// Visits every expression below `root` (including expressions nested in
/// statements), pre-order. `root` may be any node.
void walk_exprs(Node& root, const std::function<void(Expr&)>& fn);
void walk_exprs(const Node& root, const std::function<void(const Expr&)>& fn);

/// Visits every statement in a block, recursively, pre-order.
void walk_stmts(Block& block, const std::function<void(Stmt&)>& fn);
void walk_stmts(const Block& block, const std::function<void(const Stmt&)>& fn);

/// Visits every node (decls, stmts, exprs) below root, pre-order.
void walk_nodes(const Node& root, const std::function<void(const Node&)>& fn);

/// Visits every owning expression slot below root so callers can replace
/// subtrees in place. Recurses into whatever the slot holds after `fn` ran.
void walk_expr_slots(Stmt& s, const std::function<void(ExprPtr&)>& fn);
void walk_expr_slots(Block& b, const std::function<void(ExprPtr&)>& fn);
void walk_expr_slots(ExprPtr& slot, const std::function<void(ExprPtr&)>& fn);
void walk_expr_slots(ClassDecl& c, const std::function<void(ExprPtr&)>& fn);

}  // namespace refmirror::lang
