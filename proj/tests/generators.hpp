#pragma once

#include <random>
#include <string>

#include "refmirror/detect/refactoring.hpp"

namespace refmirror::testgen {

struct GenCase {
    std::string source;
    detect::RefactoringInstance instance;
};

/// Builds a small program tailored to `kind` together with an instance the
/// engine accepts against it. Every literal and name is drawn from the rng,
/// so statement contents stay distinct across a run; span fields carry the
/// exact lines the generator emitted, which is what detection reports back.
GenCase gen_case(std::mt19937& rng, detect::RefactoringKind kind);

}  // namespace refmirror::testgen
