#pragma once

#include <string>
#include <string_view>

#include "refmirror/lang/ast.hpp"
#include "refmirror/lang/source_unit.hpp"

namespace refmirror::lang {

/// Operator precedence of an expression node; higher binds tighter.
/// Assignment 1, ternary 2, || 3, && 4, | 5, ^ 6, & 7, equality 8,
/// relational/instanceof 9, shift 10, additive 11, multiplicative 12,
/// prefix/cast 13, postfix and other primaries 14+.
int expr_precedence(const Expr& e);

std::string print_unit(const SourceUnit& unit);
std::string print_class(const ClassDecl& c);
std::string print_method(const MethodDecl& m);
std::string print_stmt(const Stmt& s);
std::string print_expr(const Expr& e);

/// Joins the tokens of a type with canonical spacing, e.g.
/// "Map < String , int [ ] >" becomes "Map<String, int[]>".
std::string normalize_type(std::string_view text);

/// Annotations first (source order), then modifier keywords in the
/// conventional order (public .. strictfp), single-space separated.
std::string normalize_modifiers(std::string_view text);

/// Structural equality: both sides canonically print to the same text.
bool same_structure(const SourceUnit& a, const SourceUnit& b);

}  // namespace refmirror::lang
