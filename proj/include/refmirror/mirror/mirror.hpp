#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "refmirror/detect/detector.hpp"
#include "refmirror/lang/span.hpp"

namespace refmirror::mirror {

enum class SkipReason { PreconditionFailed, UnsupportedKind };

struct SkippedInstance {
    detect::RefactoringInstance instance;
    SkipReason reason = SkipReason::PreconditionFailed;
    std::string detail;  // first violated rule or error text
};

enum class ResidualClass { SemanticChange, SyntaxErrorSource, UnknownEdit };

/// One quarantined edit. Spans address the canonical prints: `before_span`
/// lies in c-hat, `after_span` in the reprinted modified unit (or the raw
/// modified text when it failed to parse). Zero-width spans anchor pure
/// insertions/deletions.
struct ResidualHunk {
    lang::Span before_span;
    lang::Span after_span;
    ResidualClass classification = ResidualClass::SemanticChange;
    std::string before_excerpt;
    std::string after_excerpt;
};

struct MirrorReport {
    std::vector<detect::RefactoringInstance> applied;
    std::vector<SkippedInstance> skipped;
    std::vector<ResidualHunk> residual;
    std::string c_hat;
    int detected = 0;  // |detect(c, c')|

    bool clean() const { return residual.empty(); }

    /// |applied| / |detected|; 1.0 when nothing was detected.
    double reapply_rate() const {
        return detected == 0 ? 1.0 : static_cast<double>(applied.size()) / detected;
    }
};

struct MirrorOptions {
    detect::DetectorOptions detector;
};

/// Detects which refactorings turn `c` into `c_prime` and replays exactly the
/// ones that pass their precondition checks, starting from `c`. Everything
/// else about the modification is reported as residual hunks, never adopted.
/// `c` must parse (SyntaxError otherwise); an unparseable `c_prime` is itself
/// a finding: the whole modification becomes one syntax_error_source hunk and
/// c-hat falls back to the canonical print of `c`.
MirrorReport mirror(const std::string& c, const std::string& c_prime,
                    const MirrorOptions& options = {});

std::string skip_reason_name(SkipReason reason);
std::string residual_class_name(ResidualClass classification);

nlohmann::json to_json(const MirrorReport& report);

}  // namespace refmirror::mirror
