#pragma once

#include "refmirror/lang/source_unit.hpp"

namespace refmirror::lang {

/// Resolves every name reference, qualified field access, method call and
/// object creation in the unit, filling unit.binding_table. External names
/// get an entry with decl == kInvalidNode. Raises SyntaxError on duplicate
/// declarations (two fields with one name, two methods with one signature,
/// a local shadowing another local or parameter in scope).
void bind(SourceUnit& unit);

}  // namespace refmirror::lang
