#pragma once

#include <string>

#include "refmirror/lang/source_unit.hpp"

namespace refmirror::lang {

/// Stable textual addresses for declarations:
///   Outer.Inner                 nested class
///   Class#field                 field
///   Class#method(T1,T2)         method (parameter types comma-joined)
///   Class#method(T1,T2)/p0      parameter by position
///   Class#method(T1,T2)/local:x:0   local-like declaration by name and
///                               ordinal among same-named locals, in
///                               document order (catch parameters, for-each
///                               variables and resources count as locals)
std::string path_of(const SourceUnit& unit, NodeId decl);

/// "name(T1,T2)" — the signature segment used inside method paths.
std::string method_signature(const MethodDecl& m);

/// Declaration for a path; nullptr when nothing matches.
const Node* find_decl(const SourceUnit& unit, const std::string& path);

/// Block addresses inside a method body: steps joined with '/', each step
/// being a statement index followed by selector letters applied in turn:
/// 't' then-block, 'e' else branch, 'd' loop body, 'y' try body,
/// 'c<k>' catch body k, 'f' finally. "" is the body itself.
/// Example: "2t/0d" = loop body of statement 0 inside the then-block of
/// statement 2.
const Block* resolve_block_path(const MethodDecl& method, const std::string& path);

/// Inverse of resolve_block_path; empty for the body, nullopt-like empty
/// string + false when the block is not part of the method.
bool block_path_of(const MethodDecl& method, const Block& target, std::string& out);

}  // namespace refmirror::lang
