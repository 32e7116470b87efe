#pragma once

#include <memory>
#include <string>
#include <vector>

#include "refmirror/lang/span.hpp"

namespace refmirror::lang {

enum class NodeKind {
    // declarations
    ClassDecl,
    FieldDecl,
    MethodDecl,
    VarDecl,  // parameter, local, catch parameter, for-each variable, try resource
    // statements
    Block,
    LocalVarDeclStmt,
    ExprStmt,
    IfStmt,
    WhileStmt,
    ForStmt,
    ForEachStmt,
    ReturnStmt,
    ThrowStmt,
    TryStmt,
    CatchClause,
    BreakStmt,
    ContinueStmt,
    // expressions
    Literal,
    NameRef,
    FieldAccess,
    MethodCall,
    Unary,
    Binary,
    Assign,
    Ternary,
    ObjectCreation,
    Cast,
    OpaqueExpr,
};

struct Node {
    NodeId id = kInvalidNode;
    Span span;

    virtual ~Node() = default;
    virtual NodeKind kind() const = 0;
};

struct Expr : Node {};
struct Stmt : Node {};

using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

// --- Expressions ---------------------------------------------------------

struct Literal final : Expr {
    std::string text;  // verbatim: 42, "s", 'c', true, false, null, this, super
    NodeKind kind() const override { return NodeKind::Literal; }
};

struct NameRef final : Expr {
    std::string name;
    NodeKind kind() const override { return NodeKind::NameRef; }
};

struct FieldAccess final : Expr {
    ExprPtr target;
    std::string name;
    NodeKind kind() const override { return NodeKind::FieldAccess; }
};

struct MethodCall final : Expr {
    ExprPtr target;  // null for unqualified calls
    std::string name;
    std::vector<ExprPtr> args;
    NodeKind kind() const override { return NodeKind::MethodCall; }
};

struct Unary final : Expr {
    std::string op;
    bool postfix = false;
    ExprPtr operand;
    NodeKind kind() const override { return NodeKind::Unary; }
};

struct Binary final : Expr {
    std::string op;
    ExprPtr lhs;
    ExprPtr rhs;
    NodeKind kind() const override { return NodeKind::Binary; }
};

struct Assign final : Expr {
    std::string op;  // =, +=, -=, ...
    ExprPtr lhs;
    ExprPtr rhs;
    NodeKind kind() const override { return NodeKind::Assign; }
};

struct Ternary final : Expr {
    ExprPtr cond;
    ExprPtr then_expr;
    ExprPtr else_expr;
    NodeKind kind() const override { return NodeKind::Ternary; }
};

struct ObjectCreation final : Expr {
    std::string type_text;
    std::vector<ExprPtr> args;
    NodeKind kind() const override { return NodeKind::ObjectCreation; }
};

struct Cast final : Expr {
    std::string type_text;
    ExprPtr operand;
    NodeKind kind() const override { return NodeKind::Cast; }
};

/// Atomic fallback for constructs outside the dialect; round-trips verbatim.
struct OpaqueExpr final : Expr {
    std::string text;
    NodeKind kind() const override { return NodeKind::OpaqueExpr; }
};

// --- Statements ----------------------------------------------------------

struct Block final : Stmt {
    std::vector<StmtPtr> stmts;
    NodeKind kind() const override { return NodeKind::Block; }
};

using BlockPtr = std::unique_ptr<Block>;

enum class VarRole { Param, Local, CatchParam, ForEachVar, Resource };

/// A single-name variable declaration core shared by parameters, locals,
/// catch parameters, for-each variables and try resources.
struct VarDecl final : Node {
    VarRole role = VarRole::Local;
    std::string modifiers;  // verbatim, e.g. "final"
    std::string type_text;
    std::string name;
    NodeKind kind() const override { return NodeKind::VarDecl; }
};

using VarDeclPtr = std::unique_ptr<VarDecl>;

struct LocalVarDeclStmt final : Stmt {
    VarDeclPtr var;
    ExprPtr init;  // may be null
    NodeKind kind() const override { return NodeKind::LocalVarDeclStmt; }
};

struct ExprStmt final : Stmt {
    ExprPtr expr;
    NodeKind kind() const override { return NodeKind::ExprStmt; }
};

struct IfStmt final : Stmt {
    ExprPtr cond;
    BlockPtr then_block;
    StmtPtr else_stmt;  // null, Block, or IfStmt (else-if chain)
    NodeKind kind() const override { return NodeKind::IfStmt; }
};

struct WhileStmt final : Stmt {
    ExprPtr cond;
    BlockPtr body;
    NodeKind kind() const override { return NodeKind::WhileStmt; }
};

struct ForStmt final : Stmt {
    StmtPtr init;  // null, LocalVarDeclStmt or ExprStmt
    ExprPtr cond;  // may be null
    std::vector<ExprPtr> update;
    BlockPtr body;
    NodeKind kind() const override { return NodeKind::ForStmt; }
};

struct ForEachStmt final : Stmt {
    VarDeclPtr var;
    ExprPtr iterable;
    BlockPtr body;
    NodeKind kind() const override { return NodeKind::ForEachStmt; }
};

struct ReturnStmt final : Stmt {
    ExprPtr value;  // may be null
    NodeKind kind() const override { return NodeKind::ReturnStmt; }
};

struct ThrowStmt final : Stmt {
    ExprPtr value;
    NodeKind kind() const override { return NodeKind::ThrowStmt; }
};

struct CatchClause final : Node {
    VarDeclPtr param;  // type_text may be a union type "A | B"
    BlockPtr body;
    NodeKind kind() const override { return NodeKind::CatchClause; }
};

using CatchClausePtr = std::unique_ptr<CatchClause>;

struct TryResource {
    VarDeclPtr var;
    ExprPtr init;
};

struct TryStmt final : Stmt {
    std::vector<TryResource> resources;
    BlockPtr body;
    std::vector<CatchClausePtr> catches;
    BlockPtr finally_block;  // may be null
    NodeKind kind() const override { return NodeKind::TryStmt; }
};

struct BreakStmt final : Stmt {
    NodeKind kind() const override { return NodeKind::BreakStmt; }
};

struct ContinueStmt final : Stmt {
    NodeKind kind() const override { return NodeKind::ContinueStmt; }
};

// --- Declarations --------------------------------------------------------

struct FieldDecl final : Node {
    std::string modifiers;
    std::string type_text;
    std::string name;
    ExprPtr init;  // may be null
    NodeKind kind() const override { return NodeKind::FieldDecl; }
};

struct MethodDecl final : Node {
    std::string modifiers;
    std::string return_type;  // empty for constructors
    std::string name;
    bool is_constructor = false;
    std::vector<VarDeclPtr> params;
    std::string throws_text;  // verbatim after "throws", empty if absent
    BlockPtr body;            // null for abstract declarations
    NodeKind kind() const override { return NodeKind::MethodDecl; }
};

struct ClassDecl final : Node {
    std::string modifiers;
    bool is_interface = false;
    std::string name;
    std::string heritage;  // verbatim "extends X implements Y", empty if absent
    struct Member {
        // exactly one of these is set
        std::unique_ptr<FieldDecl> field;
        std::unique_ptr<MethodDecl> method;
        std::unique_ptr<ClassDecl> nested;
    };
    std::vector<Member> members;
    NodeKind kind() const override { return NodeKind::ClassDecl; }
};

}  // namespace refmirror::lang
