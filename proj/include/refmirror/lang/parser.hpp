#pragma once

#include <string_view>

#include "refmirror/lang/source_unit.hpp"

namespace refmirror::lang {

/// Parses a document in the Java-subset dialect and resolves bindings.
/// Expressions outside the dialect degrade to opaque nodes that round-trip
/// verbatim; unbalanced structure raises SyntaxError.
SourceUnit parse(std::string_view source);

/// Parses an isolated expression snippet (no bindings). Snippets outside
/// the dialect come back as a single opaque node.
ExprPtr parse_expression(std::string_view text);

}  // namespace refmirror::lang
