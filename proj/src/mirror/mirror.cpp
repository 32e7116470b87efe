#include "refmirror/mirror/mirror.hpp"

#include <algorithm>
#include <optional>

#include <nlohmann/json.hpp>

#include "refmirror/engine/engine.hpp"
#include "refmirror/lang/ast_ops.hpp"
#include "refmirror/lang/parser.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/mirror/ast_diff.hpp"
#include "refmirror/support/errors.hpp"
#include "../engine/engine_util.hpp"

namespace refmirror::mirror {

using detect::RefactoringInstance;
using detect::RefactoringKind;
using lang::SourceUnit;
using lang::Span;

namespace {

int category_rank(RefactoringKind k) {
    switch (k) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable:
            return 0;
        case RefactoringKind::InlineMethod:
        case RefactoringKind::InlineVariable:
            return 1;
        default:
            return 2;
    }
}

/// Renames first, then inlines, then extracts, each in ascending source
/// position. This is the order the detector verified the sequence in, so the
/// entity paths recorded by each instance resolve against the working unit.
void replay_sort(std::vector<RefactoringInstance>& instances) {
    std::stable_sort(instances.begin(), instances.end(),
                     [](const RefactoringInstance& a, const RefactoringInstance& b) {
                         int ra = category_rank(a.kind), rb = category_rank(b.kind);
                         if (ra != rb) return ra < rb;
                         int la = a.anchor_line(), lb = b.anchor_line();
                         if (la != lb) return la < lb;
                         return to_json(a).dump() < to_json(b).dump();
                     });
}

Span whole_span(const std::string& text) {
    Span s;
    s.start_offset = 0;
    s.end_offset = static_cast<int>(text.size());
    s.start_line = 1;
    int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    s.end_line = (!text.empty() && text.back() == '\n') ? std::max(1, lines) : lines + 1;
    return s;
}

bool zero_width(const Span& s) { return s.end_offset <= s.start_offset; }

bool contained_in(const Span& s, const std::vector<Span>& anchors) {
    for (const auto& a : anchors)
        if (s.start_offset >= a.start_offset && s.end_offset <= a.end_offset) return true;
    return false;
}

std::string excerpt(const std::string& text, const Span& s) {
    int lo = std::clamp(s.start_offset, 0, static_cast<int>(text.size()));
    int hi = std::clamp(s.end_offset, lo, static_cast<int>(text.size()));
    return text.substr(lo, hi - lo);
}

/// Declaration statements of the variable an applied extract_variable
/// introduced, located in `unit` by entity path. The engine places the
/// declaration at the lowest block dominating every occurrence; the model may
/// have put it somewhere else, and that placement difference is the one
/// divergence inside an applied instance we do not quarantine.
std::vector<Span> extract_decl_anchors(const SourceUnit& unit,
                                       const detect::ExtractVariableParams& p) {
    std::vector<Span> out;
    try {
        const auto& m = engine::util::require_method(unit, p.enclosing_method);
        if (!m.body) return out;
        lang::walk_stmts(*m.body, [&](const lang::Stmt& s) {
            if (s.kind() != lang::NodeKind::LocalVarDeclStmt) return;
            const auto& d = static_cast<const lang::LocalVarDeclStmt&>(s);
            if (d.var && d.var->name == p.new_name) out.push_back(s.span);
        });
    } catch (const refmirror::Error&) {
    }
    return out;
}

std::string first_error(const engine::CheckReport& report) {
    for (const auto& v : report.violations)
        if (v.severity == engine::Severity::Error) return v.rule + ": " + v.message;
    return report.violations.empty() ? "" : report.violations.front().rule;
}

}  // namespace

MirrorReport mirror(const std::string& c, const std::string& c_prime,
                    const MirrorOptions& options) {
    SourceUnit before = lang::parse(c);

    std::optional<SourceUnit> after;
    try {
        after.emplace(lang::parse(c_prime));
    } catch (const refmirror::SyntaxError& e) {
        // The modification as a whole is the finding: nothing from it can be
        // adopted, and c-hat falls back to the canonical original.
        MirrorReport report;
        report.c_hat = lang::print_unit(before);
        ResidualHunk hunk;
        hunk.before_span = whole_span(report.c_hat);
        hunk.after_span = whole_span(c_prime);
        hunk.classification = ResidualClass::SyntaxErrorSource;
        hunk.before_excerpt = report.c_hat;
        hunk.after_excerpt = c_prime;
        report.residual.push_back(std::move(hunk));
        (void)e;
        return report;
    }

    MirrorReport report;
    auto instances = detect::detect(before, *after, options.detector);
    report.detected = static_cast<int>(instances.size());
    replay_sort(instances);

    SourceUnit cur = std::move(before);
    for (auto& inst : instances) {
        auto check = engine::check(cur, inst);
        if (!check.ok()) {
            report.skipped.push_back({inst, SkipReason::PreconditionFailed, first_error(check)});
            continue;
        }
        try {
            cur = engine::apply(cur, inst);
        } catch (const refmirror::UnsupportedKindError& e) {
            report.skipped.push_back({inst, SkipReason::UnsupportedKind, e.what()});
            continue;
        } catch (const refmirror::Error& e) {
            report.skipped.push_back({inst, SkipReason::PreconditionFailed, e.what()});
            continue;
        }
        report.applied.push_back(inst);
    }
    report.c_hat = lang::print_unit(cur);

    std::vector<Span> before_anchors, after_anchors;
    for (const auto& inst : report.applied) {
        if (inst.kind != RefactoringKind::ExtractVariable) continue;
        for (const auto& s : extract_decl_anchors(cur, inst.extract_variable()))
            before_anchors.push_back(s);
        for (const auto& s : extract_decl_anchors(*after, inst.extract_variable()))
            after_anchors.push_back(s);
    }

    for (const auto& region : diff_units(cur, *after)) {
        bool before_empty = zero_width(region.before_span);
        bool after_empty = zero_width(region.after_span);
        if (before_empty != after_empty) {
            // A pure move of an introduced declaration is expected divergence;
            // anything carrying content on both sides is a real edit.
            if (!before_empty && contained_in(region.before_span, before_anchors)) continue;
            if (!after_empty && contained_in(region.after_span, after_anchors)) continue;
        }
        ResidualHunk hunk;
        hunk.before_span = region.before_span;
        hunk.after_span = region.after_span;
        hunk.classification = ResidualClass::SemanticChange;
        hunk.before_excerpt = excerpt(report.c_hat, region.before_span);
        hunk.after_excerpt = excerpt(c_prime, region.after_span);
        report.residual.push_back(std::move(hunk));
    }
    return report;
}

std::string skip_reason_name(SkipReason reason) {
    return reason == SkipReason::UnsupportedKind ? "unsupported_kind" : "precondition_failed";
}

std::string residual_class_name(ResidualClass classification) {
    switch (classification) {
        case ResidualClass::SemanticChange:
            return "semantic_change";
        case ResidualClass::SyntaxErrorSource:
            return "syntax_error_source";
        default:
            return "unknown_edit";
    }
}

namespace {

nlohmann::json span_json(const Span& s) {
    return {{"start_line", s.start_line}, {"end_line", s.end_line}};
}

}  // namespace

nlohmann::json to_json(const MirrorReport& report) {
    nlohmann::json applied = nlohmann::json::array();
    for (const auto& inst : report.applied) applied.push_back(detect::to_json(inst));

    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& s : report.skipped) {
        skipped.push_back({{"instance", detect::to_json(s.instance)},
                           {"reason", skip_reason_name(s.reason)},
                           {"detail", s.detail}});
    }

    nlohmann::json residual = nlohmann::json::array();
    for (const auto& h : report.residual) {
        residual.push_back({{"before_span", span_json(h.before_span)},
                            {"after_span", span_json(h.after_span)},
                            {"classification", residual_class_name(h.classification)},
                            {"before_excerpt", h.before_excerpt},
                            {"after_excerpt", h.after_excerpt}});
    }

    return {{"applied", std::move(applied)},
            {"skipped", std::move(skipped)},
            {"residual", std::move(residual)},
            {"c_hat", report.c_hat},
            {"detected", report.detected},
            {"clean", report.clean()},
            {"reapply_rate", report.reapply_rate()}};
}

}  // namespace refmirror::mirror
