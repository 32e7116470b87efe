#include <algorithm>

#include "analysis.hpp"

#include "refmirror/lang/parser.hpp"

namespace refmirror::engine {

namespace {

using namespace util;
using namespace analysis;
using detect::RefactoringKind;

void add(CheckReport& r, Severity sev, std::string rule, std::string message) {
    r.violations.push_back({std::move(rule), sev, std::move(message)});
}

bool has_rule(const CheckReport& r, const std::string& rule) {
    for (const auto& v : r.violations)
        if (v.rule == rule) return true;
    return false;
}

bool is_rename(RefactoringKind k) {
    return k == RefactoringKind::RenameAttribute || k == RefactoringKind::RenameMethod ||
           k == RefactoringKind::RenameParameter || k == RefactoringKind::RenameVariable;
}

// ---- rename --------------------------------------------------------------------

void check_rename(const SourceUnit& unit, RefactoringKind kind, const detect::RenameParams& p,
                  CheckReport& r) {
    if (!is_identifier(p.new_name)) {
        add(r, Severity::Error, "rename.invalid-name",
            "'" + p.new_name + "' is not a usable identifier");
        return;
    }
    if (p.new_name == p.old_name) {
        add(r, Severity::Warning, "rename.same-name", "old and new names are identical");
        return;
    }
    std::string error;
    if (resolve_rename_target(unit, kind, p, error) == kInvalidNode) {
        add(r, Severity::Error, "target.missing", error);
        return;
    }

    // References inside unmodeled text cannot be rewritten, and text already
    // mentioning the new name may silently rebind.
    bool old_mention, new_mention;
    if (kind == RefactoringKind::RenameParameter || kind == RefactoringKind::RenameVariable) {
        const auto& m = require_method(unit, p.enclosing);
        old_mention = opaque_mentions_in(m, p.old_name);
        new_mention = opaque_mentions_in(m, p.new_name);
    } else {
        old_mention = opaque_mentions(unit, p.old_name);
        new_mention = opaque_mentions(unit, p.new_name);
    }
    if (old_mention) {
        add(r, Severity::Error, "rename.opaque-reference",
            "unmodeled text mentions '" + p.old_name + "' and would keep the stale name");
    }
    if (new_mention) {
        add(r, Severity::Error, "rename.opaque-reference",
            "unmodeled text already mentions '" + p.new_name + "'");
    }
}

// ---- extract_variable ------------------------------------------------------------

void check_extract_variable(const SourceUnit& unit, const detect::ExtractVariableParams& p,
                            CheckReport& r) {
    if (!is_identifier(p.new_name)) {
        add(r, Severity::Error, "extract_variable.invalid-name",
            "'" + p.new_name + "' is not a usable identifier");
    }
    const auto* m = dynamic_cast<const MethodDecl*>(find_decl(unit, p.enclosing_method));
    if (!m) {
        add(r, Severity::Error, "target.missing", "no method at path '" + p.enclosing_method + "'");
        return;
    }
    ExprPtr probe;
    try {
        probe = parse_expression(p.expression);
    } catch (const SyntaxError&) {
        add(r, Severity::Error, "extract_variable.no-occurrence",
            "'" + p.expression + "' is not an expression");
        return;
    }
    const std::string canonical = print_expr(*probe);

    size_t hits = 0;
    walk_exprs(*m, [&](const Expr& e) {
        if (print_expr(e) != canonical) return;
        if (!p.occurrence_spans.empty()) {
            bool listed = false;
            for (const auto& os : p.occurrence_spans)
                if (e.span.start_line >= os.start_line && e.span.start_line <= os.end_line)
                    listed = true;
            if (!listed) return;
        }
        ++hits;
    });
    if (hits == 0) {
        add(r, Severity::Error, "extract_variable.no-occurrence",
            "'" + canonical + "' does not occur in " + p.enclosing_method);
    }
    if (names_in_method(unit, *m).count(p.new_name)) {
        add(r, Severity::Error, "extract_variable.name-in-scope",
            "'" + p.new_name + "' is already visible in " + p.enclosing_method);
    }
    if (has_side_effects(*probe)) {
        add(r, Severity::Warning, "extract_variable.side-effect",
            "the expression has effects; hoisting changes when they run");
    }
}

// ---- inline_variable -------------------------------------------------------------

void check_inline_variable(const SourceUnit& unit, const detect::InlineVariableParams& p,
                           CheckReport& r) {
    const auto* m = dynamic_cast<const MethodDecl*>(find_decl(unit, p.enclosing_method));
    if (!m) {
        add(r, Severity::Error, "target.missing", "no method at path '" + p.enclosing_method + "'");
        return;
    }
    auto sites = decl_stmt_sites(const_cast<MethodDecl&>(*m), p.variable_name);
    if (sites.empty()) {
        if (!locals_named(*m, p.variable_name).empty()) {
            add(r, Severity::Error, "inline_variable.no-initializer",
                "'" + p.variable_name + "' is not declared by a plain statement");
        } else {
            add(r, Severity::Error, "target.missing",
                p.enclosing_method + " has no local '" + p.variable_name + "'");
        }
        return;
    }
    const DeclStmtSite* site = pick_decl_site(sites, p.decl_span.start_line);
    if (!site) {
        add(r, Severity::Error, "target.missing",
            "several locals named '" + p.variable_name + "'; the span does not single one out");
        return;
    }
    if (!site->stmt->init) {
        add(r, Severity::Error, "inline_variable.no-initializer",
            "'" + p.variable_name + "' has no initializer");
        return;
    }
    const Expr& init = *site->stmt->init;
    const NodeId var_id = site->stmt->var->id;

    auto bound_to = [&](NodeId ref) -> NodeId {
        auto b = unit.binding_table.find(ref);
        return b == unit.binding_table.end() ? kInvalidNode : b->second.decl;
    };

    // Writes anywhere in the method, by declaration id and position.
    std::vector<std::pair<NodeId, int>> writes;
    walk_exprs(*m, [&](const Expr& e) {
        const Expr* target = nullptr;
        if (auto* asg = dynamic_cast<const Assign*>(&e)) target = asg->lhs.get();
        else if (auto* u = dynamic_cast<const Unary*>(&e)) {
            if (u->op == "++" || u->op == "--") target = u->operand.get();
        }
        if (!target) return;
        if (target->kind() == NodeKind::NameRef || target->kind() == NodeKind::FieldAccess) {
            NodeId d = bound_to(target->id);
            if (d != kInvalidNode) writes.emplace_back(d, e.span.start_offset);
        }
    });

    size_t uses = 0;
    walk_exprs(*m, [&](const Expr& e) {
        if (e.kind() == NodeKind::NameRef && bound_to(e.id) == var_id) ++uses;
    });

    for (const auto& [decl, offset] : writes) {
        if (decl == var_id) {
            add(r, Severity::Error, "inline_variable.reassigned",
                "'" + p.variable_name + "' is written after its declaration");
            break;
        }
    }

    // The initializer must still mean the same thing at every use site.
    const int decl_end = site->stmt->span.end_offset;
    bool mutated = false;
    walk_exprs(init, [&](const Expr& e) {
        if (mutated || e.kind() != NodeKind::NameRef) return;
        NodeId d = bound_to(e.id);
        if (d == kInvalidNode) return;
        for (const auto& [decl, offset] : writes) {
            if (decl == d && offset > decl_end) mutated = true;
        }
    });
    if (mutated) {
        add(r, Severity::Error, "inline_variable.operand-mutated",
            "a value the initializer reads changes between declaration and use");
    }
    if (has_side_effects(init) && uses != 1) {
        add(r, Severity::Warning, "inline_variable.side-effect",
            "the initializer has effects and would run " + std::to_string(uses) +
                " times instead of once");
    }
    if (opaque_mentions_in(*m, p.variable_name)) {
        add(r, Severity::Error, "inline_variable.opaque-reference",
            "unmodeled text mentions '" + p.variable_name + "'");
    }
}

// ---- extract_method --------------------------------------------------------------

void check_extract_method(const SourceUnit& unit, const detect::ExtractMethodParams& p,
                          CheckReport& r) {
    if (!is_identifier(p.new_method_name)) {
        add(r, Severity::Error, "extract_method.invalid-name",
            "'" + p.new_method_name + "' is not a usable identifier");
    }
    for (const auto& name : p.parameter_names) {
        if (!name.empty() && !is_identifier(name)) {
            add(r, Severity::Error, "extract_method.invalid-name",
                "parameter name '" + name + "' is not a usable identifier");
        }
    }
    ExtractAnalysis a;
    try {
        a = analyze_extract(const_cast<SourceUnit&>(unit), p);
    } catch (const UnknownEntityError& e) {
        add(r, Severity::Error, "target.missing", e.what());
        return;
    }
    for (const auto& v : a.violations) r.violations.push_back(v);

    if (a.owner) {
        for (const auto& member : a.owner->members) {
            if (member.method && member.method->name == p.new_method_name &&
                member.method->params.size() == a.inputs.size()) {
                add(r, Severity::Error, "extract_method.name-collision",
                    class_path_of(unit, *a.owner) + " already has a method '" +
                        method_signature(*member.method) + "'");
            }
        }
    }
    std::set<std::string> seen;
    for (const auto& in : a.inputs) {
        if (!seen.insert(in.param_name).second) {
            add(r, Severity::Error, "extract_method.name-collision",
                "two parameters would be named '" + in.param_name + "'");
        }
        if (in.opaque_mention && in.param_name != in.decl->name) {
            add(r, Severity::Error, "extract_method.opaque-reference",
                "'" + in.decl->name + "' appears in unmodeled text and cannot be renamed");
        }
    }
    if (p.parameter_names.size() > a.inputs.size()) {
        add(r, Severity::Warning, "extract_method.parameter-mismatch",
            std::to_string(p.parameter_names.size()) + " names given for " +
                std::to_string(a.inputs.size()) + " derived parameters");
    }
}

// ---- inline_method ---------------------------------------------------------------

void check_inline_method(const SourceUnit& unit, const detect::InlineMethodParams& p,
                         CheckReport& r) {
    InlineAnalysis a;
    try {
        a = analyze_inline(const_cast<SourceUnit&>(unit), p);
    } catch (const UnknownEntityError& e) {
        add(r, Severity::Error, "target.missing", e.what());
        return;
    }
    for (const auto& v : a.violations) r.violations.push_back(v);
    if (!a.method->body) return;

    if (a.sites.empty()) {
        add(r, Severity::Warning, "inline_method.no-call-site",
            "nothing calls " + p.inlined_method + "; inlining only deletes it");
    }
    if (opaque_mentions(unit, a.method->name)) {
        add(r, Severity::Error, "inline_method.opaque-reference",
            "unmodeled text mentions '" + a.method->name + "'");
    }

    std::map<NodeId, size_t> param_uses;
    for (const auto& prm : a.method->params) param_uses[prm->id] = 0;
    walk_exprs(*a.method, [&](const Expr& e) {
        if (e.kind() != NodeKind::NameRef) return;
        auto b = unit.binding_table.find(e.id);
        if (b == unit.binding_table.end()) return;
        auto it = param_uses.find(b->second.decl);
        if (it != param_uses.end()) ++it->second;
    });

    using Shape = InlineAnalysis::Shape;
    using Form = CallSite::Form;
    for (const CallSite& cs : a.sites) {
        const std::string where =
            cs.caller ? cs.caller_path : "field '" + cs.field->name + "'";
        if (a.shape != Shape::Expression) {
            if (cs.form == Form::ExprForm) {
                add(r, Severity::Error, "inline_method.call-shape",
                    "call in " + where + " sits in expression position");
            } else if (a.shape == Shape::Stmts && cs.form != Form::StmtForm) {
                add(r, Severity::Error, "inline_method.call-shape",
                    "call in " + where + " consumes a value the body does not produce");
            } else if (a.shape == Shape::StmtsWithResult && cs.form == Form::StmtForm) {
                NodeKind k = a.result->kind();
                const auto* u = dynamic_cast<const Unary*>(a.result);
                bool discardable = k == NodeKind::MethodCall || k == NodeKind::ObjectCreation ||
                                   k == NodeKind::Assign || (u && (u->op == "++" || u->op == "--"));
                if (discardable) {
                    add(r, Severity::Warning, "inline_method.discarded-result",
                        "call in " + where + " ignores the result");
                } else {
                    add(r, Severity::Error, "inline_method.call-shape",
                        "call in " + where + " ignores a result that cannot stand alone");
                }
            }
        }
        const auto* call = static_cast<const MethodCall*>(cs.slot->get());
        if (cs.qualified) {
            if (a.instance_dependent) {
                add(r, Severity::Error, "inline_method.qualified-call",
                    "call in " + where + " targets another object but the body uses its own state");
            } else if (call->target && has_side_effects(*call->target)) {
                add(r, Severity::Error, "inline_method.qualified-call",
                    "call in " + where + " would drop an effectful receiver");
            } else {
                add(r, Severity::Warning, "inline_method.qualified-call",
                    "call in " + where + " drops its receiver");
            }
        }
        for (size_t i = 0; i < call->args.size() && i < a.method->params.size(); ++i) {
            if (!has_side_effects(*call->args[i])) continue;
            size_t n = param_uses[a.method->params[i]->id];
            if (n != 1) {
                add(r, Severity::Warning, "inline_method.arg-side-effect",
                    "argument " + std::to_string(i) + " in " + where + " has effects and would run " +
                        std::to_string(n) + " times");
            }
        }
    }
}

// ---- extract_class ---------------------------------------------------------------

void check_extract_class(const SourceUnit& unit, const detect::ExtractClassParams& p,
                         CheckReport& r) {
    if (!is_identifier(p.new_class_name)) {
        add(r, Severity::Error, "extract_class.invalid-name",
            "'" + p.new_class_name + "' is not a usable identifier");
    }
    if (!p.delegate_field.empty() && !is_identifier(p.delegate_field)) {
        add(r, Severity::Error, "extract_class.invalid-name",
            "'" + p.delegate_field + "' is not a usable identifier");
    }
    const auto* source = dynamic_cast<const ClassDecl*>(find_decl(unit, p.source_class));
    if (!source) {
        add(r, Severity::Error, "target.missing", "no class at path '" + p.source_class + "'");
        return;
    }
    if (p.moved_fields.empty() && p.moved_methods.empty()) {
        add(r, Severity::Error, "extract_class.no-members", "nothing is selected to move");
        return;
    }

    std::set<NodeId> moved_ids;
    std::set<std::string> moved_names;
    for (const auto& name : p.moved_fields) {
        const FieldDecl* f = field_in(*source, name);
        if (!f) {
            add(r, Severity::Error, "target.missing",
                p.source_class + " has no field '" + name + "'");
            continue;
        }
        moved_ids.insert(f->id);
        moved_names.insert(f->name);
    }
    for (const auto& sig : p.moved_methods) {
        const MethodDecl* m = method_in(*source, sig);
        if (!m) {
            add(r, Severity::Error, "target.missing",
                p.source_class + " has no method '" + sig + "'");
            continue;
        }
        if (m->is_constructor) {
            add(r, Severity::Error, "extract_class.constructor-move",
                "constructor '" + sig + "' cannot move");
        }
        moved_ids.insert(m->id);
        moved_names.insert(m->name);
    }

    std::function<void(const ClassDecl&)> scan_names = [&](const ClassDecl& c) {
        if (c.name == p.new_class_name) {
            add(r, Severity::Error, "extract_class.name-collision",
                "a class named '" + p.new_class_name + "' already exists");
        }
        for (const auto& m : c.members)
            if (m.nested) scan_names(*m.nested);
    };
    for (const auto& type : unit.types) scan_names(*type);

    if (!p.delegate_field.empty() && field_in(*source, p.delegate_field)) {
        add(r, Severity::Error, "extract_class.name-collision",
            p.source_class + " already has a field '" + p.delegate_field + "'");
    }

    // References from other classes would dangle once the members move.
    std::function<void(const ClassDecl&)> scan_external = [&](const ClassDecl& c) {
        if (&c == source) return;  // the source subtree is rewritten instead
        for (const auto& member : c.members) {
            const Node* holder = nullptr;
            if (member.field) holder = member.field.get();
            if (member.method) holder = member.method.get();
            if (holder) {
                walk_exprs(*holder, [&](const Expr& e) {
                    auto b = unit.binding_table.find(e.id);
                    if (b == unit.binding_table.end() || b->second.is_external()) return;
                    if (!moved_ids.count(b->second.decl)) return;
                    if (!has_rule(r, "extract_class.external-reference")) {
                        add(r, Severity::Error, "extract_class.external-reference",
                            class_path_of(unit, c) + " references a moved member");
                    }
                });
            }
            if (member.nested) scan_external(*member.nested);
        }
    };
    for (const auto& type : unit.types) scan_external(*type);

    for (const auto& name : moved_names) {
        if (opaque_mentions(unit, name)) {
            add(r, Severity::Warning, "extract_class.opaque-reference",
                "unmodeled text mentions moved member '" + name + "'");
        }
    }
}

}  // namespace

CheckReport check(const SourceUnit& unit, const detect::RefactoringInstance& instance) {
    require_kind_params(instance);
    CheckReport r;
    switch (instance.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable:
            check_rename(unit, instance.kind, instance.rename(), r);
            break;
        case RefactoringKind::ExtractVariable:
            check_extract_variable(unit, instance.extract_variable(), r);
            break;
        case RefactoringKind::InlineVariable:
            check_inline_variable(unit, instance.inline_variable(), r);
            break;
        case RefactoringKind::ExtractMethod:
            check_extract_method(unit, instance.extract_method(), r);
            break;
        case RefactoringKind::InlineMethod:
            check_inline_method(unit, instance.inline_method(), r);
            break;
        case RefactoringKind::ExtractClass:
            check_extract_class(unit, instance.extract_class(), r);
            break;
    }
    if (!r.ok(false)) return r;

    // Dry run. Whatever the catalog above missed — duplicate declarations,
    // shape restrictions — surfaces here, so ok() really does mean the apply
    // will go through.
    const std::string prefix = is_rename(instance.kind) ? "rename" : kind_name(instance.kind);
    try {
        SourceUnit after = apply(unit, instance, {/*strict=*/false, /*run_checks=*/false});
        if (is_rename(instance.kind)) {
            auto before_targets = reference_targets(unit);
            auto after_targets = reference_targets(after);
            if (before_targets != after_targets) {
                add(r, Severity::Error, "rename.capture",
                    "a reference would resolve to a different declaration after the rename");
            }
        }
    } catch (const SyntaxError& e) {
        add(r, Severity::Error, prefix + ".collision", e.what());
    } catch (const PreconditionError& e) {
        for (const auto& rule : e.rules()) {
            if (!has_rule(r, rule)) add(r, Severity::Error, rule, e.what());
        }
    } catch (const UnknownEntityError& e) {
        if (!has_rule(r, "target.missing")) add(r, Severity::Error, "target.missing", e.what());
    }
    return r;
}

}  // namespace refmirror::engine
