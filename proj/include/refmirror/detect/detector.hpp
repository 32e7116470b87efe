#pragma once

#include <vector>

#include "refmirror/detect/refactoring.hpp"
#include "refmirror/lang/source_unit.hpp"

namespace refmirror::detect {

enum class EntityKind { Class, Method, Field, Param, Local };

/// One-to-one correspondence between a declaration in the original unit and
/// one in the modified unit.
struct EntityMatch {
    lang::NodeId before_id = lang::kInvalidNode;
    lang::NodeId after_id = lang::kInvalidNode;
    EntityKind kind = EntityKind::Class;
    double similarity = 0.0;  // 1.0 for signature-identical pairs
};

struct DetectorOptions {
    /// Minimum dice similarity of bodies/declarations for pairing entities
    /// whose signatures changed. The declared name itself is excluded from
    /// the compared text, so a pure rename scores 1.0.
    double tau_body = 0.75;

    /// Drop rename candidates whose target declaration lies inside the
    /// footprint of a detected extract/inline instance: the larger
    /// refactoring subsumes them. Off emits every verified candidate.
    bool subsume_renames = true;
};

/// Pairs declarations of the two units: first identical signatures, then
/// leftovers greedily by descending dice similarity (ties broken in source
/// order), accepting pairs at or above tau_body.
std::vector<EntityMatch> match_entities(const lang::SourceUnit& before,
                                        const lang::SourceUnit& after,
                                        const DetectorOptions& options = {});

/// Refactoring instances that transform `before` toward `after`. Every
/// returned instance has been replayed through the engine and shown to move
/// the unit strictly closer to `after` without touching anything else.
/// Parameters name `before` entities and spans. Output is deterministic,
/// ordered by kind and then source position.
std::vector<RefactoringInstance> detect(const lang::SourceUnit& before,
                                        const lang::SourceUnit& after,
                                        const DetectorOptions& options = {});

}  // namespace refmirror::detect
