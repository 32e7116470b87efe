#include "analysis.hpp"

namespace refmirror::engine {

namespace {

using namespace util;
using namespace analysis;
using detect::RefactoringInstance;
using detect::RefactoringKind;

[[noreturn]] void not_invertible(const std::string& why) { throw NotInvertibleError(why); }

std::string decl_name(const Node& d) {
    if (auto* c = dynamic_cast<const ClassDecl*>(&d)) return c->name;
    if (auto* m = dynamic_cast<const MethodDecl*>(&d)) return m->name;
    if (auto* f = dynamic_cast<const FieldDecl*>(&d)) return f->name;
    if (auto* v = dynamic_cast<const VarDecl*>(&d)) return v->name;
    return "";
}

// ---- rename ----------------------------------------------------------------

/// Renames keep declaration walk order, so the renamed declaration sits at
/// the same decls_in_order index in `after` as the target did in `before`.
RefactoringInstance invert_rename(const SourceUnit& before, const RefactoringInstance& inst,
                                  const SourceUnit& after) {
    const auto& p = inst.rename();
    std::string error;
    NodeId target = resolve_rename_target(before, inst.kind, p, error);
    if (target == kInvalidNode) throw UnknownEntityError(error);

    auto decls = decls_in_order(before);
    size_t idx = 0;
    while (idx < decls.size() && decls[idx]->id != target) ++idx;
    auto decls_after = decls_in_order(after);
    if (idx >= decls_after.size()) not_invertible("the documents do not correspond");
    const Node& renamed = *decls_after[idx];
    if (decl_name(renamed) != p.new_name)
        not_invertible("the second document does not carry the rename");

    detect::RenameParams q;
    q.enclosing = p.enclosing;
    q.old_name = p.new_name;
    q.new_name = p.old_name;
    q.decl_span = renamed.span;
    if (inst.kind == RefactoringKind::RenameMethod)
        q.signature = method_signature(static_cast<const MethodDecl&>(renamed));

    RefactoringInstance inv;
    inv.kind = inst.kind;
    inv.params = std::move(q);
    return inv;
}

// ---- extract_variable <-> inline_variable ------------------------------------

RefactoringInstance invert_extract_variable(const RefactoringInstance& inst,
                                            const SourceUnit& after) {
    const auto& p = inst.extract_variable();
    const auto* m = dynamic_cast<const MethodDecl*>(find_decl(after, p.enclosing_method));
    if (!m) not_invertible("no method at path '" + p.enclosing_method + "'");
    auto sites = decl_stmt_sites(const_cast<MethodDecl&>(*m), p.new_name);
    if (sites.size() != 1)
        not_invertible("'" + p.new_name + "' is not declared exactly once in " +
                       p.enclosing_method);

    detect::InlineVariableParams q;
    q.enclosing_method = p.enclosing_method;
    q.variable_name = p.new_name;
    q.decl_span = sites[0].stmt->span;
    const NodeId var_id = sites[0].stmt->var->id;
    walk_exprs(*m, [&](const Expr& e) {
        if (e.kind() != NodeKind::NameRef) return;
        auto b = after.binding_table.find(e.id);
        if (b != after.binding_table.end() && b->second.decl == var_id)
            q.use_spans.push_back(e.span);
    });

    RefactoringInstance inv;
    inv.kind = RefactoringKind::InlineVariable;
    inv.params = std::move(q);
    return inv;
}

RefactoringInstance invert_inline_variable(const SourceUnit& before,
                                           const RefactoringInstance& inst,
                                           const SourceUnit& after) {
    const auto& p = inst.inline_variable();
    const auto* mb = dynamic_cast<const MethodDecl*>(find_decl(before, p.enclosing_method));
    if (!mb) throw UnknownEntityError("no method at path '" + p.enclosing_method + "'");
    auto sites = decl_stmt_sites(const_cast<MethodDecl&>(*mb), p.variable_name);
    const DeclStmtSite* site = pick_decl_site(sites, p.decl_span.start_line);
    if (!site || !site->stmt->init)
        not_invertible("'" + p.variable_name + "' has no plain initializing declaration");

    detect::ExtractVariableParams q;
    q.enclosing_method = p.enclosing_method;
    q.expression = print_expr(*site->stmt->init);
    q.new_name = p.variable_name;
    q.declared_type = site->stmt->var->type_text;

    const auto* ma = dynamic_cast<const MethodDecl*>(find_decl(after, p.enclosing_method));
    if (!ma) not_invertible("no method at path '" + p.enclosing_method + "'");
    for (const Expr* e : occurrences_of(*ma, q.expression)) q.occurrence_spans.push_back(e->span);
    if (q.occurrence_spans.empty())
        not_invertible("the initializer no longer occurs in " + p.enclosing_method);

    RefactoringInstance inv;
    inv.kind = RefactoringKind::ExtractVariable;
    inv.params = std::move(q);
    return inv;
}

// ---- extract_method <-> inline_method ------------------------------------------

RefactoringInstance invert_extract_method(const SourceUnit& before,
                                          const RefactoringInstance& inst,
                                          const SourceUnit& after) {
    const auto& p = inst.extract_method();
    ExtractAnalysis a = analyze_extract(const_cast<SourceUnit&>(before), p);

    const std::string owner_path = class_path_of(before, *a.owner);
    const auto* owner = dynamic_cast<const ClassDecl*>(find_decl(after, owner_path));
    if (!owner) not_invertible("no class at path '" + owner_path + "'");
    const MethodDecl* created = nullptr;
    for (const auto& member : owner->members) {
        if (!member.method || member.method->name != p.new_method_name) continue;
        if (member.method->params.size() != a.inputs.size()) continue;
        if (created) not_invertible("'" + p.new_method_name + "' is ambiguous in " + owner_path);
        created = member.method.get();
    }
    if (!created) not_invertible("the extracted method is not present");

    detect::InlineMethodParams q;
    q.inlined_method = owner_path + "#" + method_signature(*created);

    const auto* caller = dynamic_cast<const MethodDecl*>(find_decl(after, p.source_method));
    if (!caller) not_invertible("no method at path '" + p.source_method + "'");
    const Block* block = resolve_block_path(*caller, p.block_path);
    if (!block || static_cast<size_t>(p.first_index) >= block->stmts.size())
        not_invertible("the replacement call statement is not where the range was");
    q.call_site_spans.push_back(block->stmts[p.first_index]->span);

    RefactoringInstance inv;
    inv.kind = RefactoringKind::InlineMethod;
    inv.params = std::move(q);
    return inv;
}

RefactoringInstance invert_inline_method(const SourceUnit& before, const RefactoringInstance& inst,
                                         const SourceUnit& after) {
    const auto& p = inst.inline_method();
    InlineAnalysis a = analyze_inline(const_cast<SourceUnit&>(before), p);
    for (const auto& v : a.violations)
        if (v.severity == Severity::Error) not_invertible(v.message);
    if (a.sites.size() != 1) not_invertible("only single call-site inlines reverse cleanly");

    const CallSite& cs = a.sites[0];
    using Form = CallSite::Form;
    using Shape = InlineAnalysis::Shape;
    if (!cs.caller) not_invertible("field initializer call sites do not reverse");
    if (cs.form == Form::ExprForm)
        not_invertible("expression-position call sites do not reverse");
    if (cs.qualified) not_invertible("qualified calls drop their receiver");

    size_t count = 0;
    std::string return_variable;
    std::string return_type = "void";
    switch (a.shape) {
        case Shape::Expression:
            if (cs.form == Form::StmtForm)
                not_invertible("a bare expression statement cannot re-extract to a return");
            count = 1;
            break;
        case Shape::Stmts:
            if (cs.form != Form::StmtForm)
                not_invertible("the body produces no value for this call form");
            count = a.moved_count;
            if (count == 0) not_invertible("inlining an empty body leaves nothing to re-extract");
            break;
        case Shape::StmtsWithResult:
            if (cs.form == Form::StmtForm) not_invertible("the discarded result cannot re-extract");
            count = a.moved_count + 1;
            break;
    }
    if (cs.form == Form::DeclForm) {
        const auto* d = static_cast<const LocalVarDeclStmt*>(cs.site.stmt());
        return_variable = d->var->name;
    } else if (cs.form == Form::AssignForm) {
        const auto* es = static_cast<const ExprStmt*>(cs.site.stmt());
        const auto& asg = static_cast<const Assign&>(*es->expr);
        if (asg.lhs->kind() != NodeKind::NameRef)
            not_invertible("only simple variables reverse as live-outs");
        return_variable = static_cast<const NameRef&>(*asg.lhs).name;
    }
    if (a.shape != Shape::Stmts) return_type = a.method->return_type;

    detect::ExtractMethodParams q;
    q.source_method = cs.caller_path;
    q.new_method_name = a.method->name;
    for (const auto& prm : a.method->params) {
        q.parameter_names.push_back(prm->name);
        q.parameter_types.push_back(prm->type_text);
    }
    q.return_variable = return_variable;
    q.return_type = return_type;
    q.modifiers = a.method->modifiers;
    std::string block_path;
    if (!block_path_of(*cs.caller, *cs.site.block(), block_path))
        not_invertible("the call site block is unaddressable");
    q.block_path = block_path;
    q.first_index = static_cast<int>(cs.site.index());
    q.count = static_cast<int>(count);
    q.call_site_index = q.first_index;

    const auto* caller = dynamic_cast<const MethodDecl*>(find_decl(after, cs.caller_path));
    if (!caller) not_invertible("no method at path '" + cs.caller_path + "'");
    const Block* block = resolve_block_path(*caller, block_path);
    if (!block || cs.site.index() + count > block->stmts.size())
        not_invertible("the inlined statements are not where the call was");
    for (size_t i = 0; i < count; ++i) {
        const Stmt& s = *block->stmts[cs.site.index() + i];
        q.extracted_spans.push_back(s.span);
        q.statement_texts.push_back(print_stmt(s));
    }

    RefactoringInstance inv;
    inv.kind = RefactoringKind::ExtractMethod;
    inv.params = std::move(q);
    return inv;
}

}  // namespace

RefactoringInstance invert(const SourceUnit& before, const RefactoringInstance& instance,
                           const SourceUnit& after) {
    require_kind_params(instance);
    RefactoringInstance inv;
    switch (instance.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable:
            inv = invert_rename(before, instance, after);
            break;
        case RefactoringKind::ExtractVariable:
            inv = invert_extract_variable(instance, after);
            break;
        case RefactoringKind::InlineVariable:
            inv = invert_inline_variable(before, instance, after);
            break;
        case RefactoringKind::ExtractMethod:
            inv = invert_extract_method(before, instance, after);
            break;
        case RefactoringKind::InlineMethod:
            inv = invert_inline_method(before, instance, after);
            break;
        case RefactoringKind::ExtractClass:
            not_invertible("moved members would need individual moves back");
    }

    // The inverse earns its name by demonstration, not construction.
    SourceUnit redone;
    try {
        redone = apply(after, inv, {/*strict=*/false, /*run_checks=*/false});
    } catch (const Error& e) {
        not_invertible(std::string("the inverse does not apply: ") + e.what());
    }
    if (!same_structure(redone, before))
        not_invertible("the inverse does not reproduce the original document");
    return inv;
}

}  // namespace refmirror::engine
