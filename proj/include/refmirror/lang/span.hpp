#pragma once

#include <cstdint>

namespace refmirror::lang {

/// Half-open character range [start_offset, end_offset) with 1-based line numbers.
struct Span {
    int start_offset = 0;
    int end_offset = 0;
    int start_line = 1;
    int end_line = 1;

    bool contains(int offset) const { return offset >= start_offset && offset < end_offset; }

    bool overlaps(const Span& other) const {
        return start_offset < other.end_offset && other.start_offset < end_offset;
    }

    bool overlaps_lines(const Span& other) const {
        return start_line <= other.end_line && other.start_line <= end_line;
    }

    bool same_lines(const Span& other) const {
        return start_line == other.start_line && end_line == other.end_line;
    }
};

/// Stable node identity within one SourceUnit. Never reused inside a unit.
using NodeId = std::uint32_t;

inline constexpr NodeId kInvalidNode = 0;

}  // namespace refmirror::lang
