#pragma once

#include <vector>

#include "refmirror/lang/source_unit.hpp"

namespace refmirror::mirror {

/// One differing region between two parsed documents, at declaration and
/// statement granularity. The span on a side where material is absent is
/// zero-width, anchored where the missing material would sit: a pure
/// insertion has a zero-width before span, a pure deletion a zero-width
/// after span.
struct DiffRegion {
    lang::Span before_span;
    lang::Span after_span;
};

/// Structural difference between two units. Empty iff they print identically.
std::vector<DiffRegion> diff_units(const lang::SourceUnit& before,
                                   const lang::SourceUnit& after);

/// Total differing extent in characters, both sides combined.
long diff_measure(const std::vector<DiffRegion>& regions);

/// True when every after-side region of `narrow` with nonzero width lies
/// inside some after-side region of `broad`. Only meaningful when both were
/// diffed against the same after document, whose offsets are shared.
bool after_side_within(const std::vector<DiffRegion>& narrow,
                       const std::vector<DiffRegion>& broad);

}  // namespace refmirror::mirror
