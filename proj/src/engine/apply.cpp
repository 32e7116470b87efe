#include <algorithm>
#include <functional>

#include "analysis.hpp"
#include "refmirror/lang/parser.hpp"

namespace refmirror::engine {

namespace {

using namespace util;
using namespace analysis;
using detect::RefactoringKind;

// ---- node builders -----------------------------------------------------------

std::unique_ptr<NameRef> name_ref(std::string name) {
    auto e = std::make_unique<NameRef>();
    e->name = std::move(name);
    return e;
}

std::unique_ptr<Literal> this_literal() {
    auto e = std::make_unique<Literal>();
    e->text = "this";
    return e;
}

StmtPtr expr_stmt(ExprPtr e) {
    auto s = std::make_unique<ExprStmt>();
    s->expr = std::move(e);
    return s;
}

ExprPtr assign_to(ExprPtr lhs, ExprPtr value) {
    auto a = std::make_unique<Assign>();
    a->op = "=";
    a->lhs = std::move(lhs);
    a->rhs = std::move(value);
    return a;
}

StmtPtr decl_stmt(std::string type, std::string name, ExprPtr init) {
    auto s = std::make_unique<LocalVarDeclStmt>();
    s->var = std::make_unique<VarDecl>();
    s->var->role = VarRole::Local;
    s->var->type_text = std::move(type);
    s->var->name = std::move(name);
    s->init = std::move(init);
    return s;
}

std::unique_ptr<FieldAccess> field_access(ExprPtr target, std::string name) {
    auto e = std::make_unique<FieldAccess>();
    e->target = std::move(target);
    e->name = std::move(name);
    return e;
}

/// The transformed clone is reprinted and reparsed so every span, id and
/// binding in the result is parser-derived.
SourceUnit finish(const SourceUnit& work) { return parse(print_unit(work)); }

[[noreturn]] void reject(std::string message, std::string rule) {
    throw PreconditionError(std::move(message), {std::move(rule)});
}

// ---- rename --------------------------------------------------------------------

SourceUnit apply_rename(const SourceUnit& unit, RefactoringKind kind,
                        const detect::RenameParams& p) {
    std::string error;
    NodeId target = resolve_rename_target(unit, kind, p, error);
    if (target == kInvalidNode) throw UnknownEntityError(error);
    SourceUnit work = clone_unit(unit);
    rename_in_unit(work, {{target, p.new_name}});
    return finish(work);
}

// ---- extract_variable -----------------------------------------------------------

SourceUnit apply_extract_variable(const SourceUnit& unit,
                                  const detect::ExtractVariableParams& p) {
    SourceUnit work = clone_unit(unit);
    MethodDecl& m = require_method_mut(work, p.enclosing_method);

    ExprPtr probe = parse_expression(p.expression);
    const std::string canonical = print_expr(*probe);

    std::vector<SlotSite> hits;
    for (const SlotSite& site : slot_sites(m)) {
        if (print_expr(**site.slot) != canonical) continue;
        if (!p.occurrence_spans.empty()) {
            int line = (*site.slot)->span.start_line;
            bool listed = false;
            for (const auto& os : p.occurrence_spans)
                if (line >= os.start_line && line <= os.end_line) listed = true;
            if (!listed) continue;
        }
        hits.push_back(site);
    }
    if (hits.empty()) {
        reject("expression '" + canonical + "' does not occur in " + p.enclosing_method,
               "extract_variable.no-occurrence");
    }

    // Deepest block on every occurrence's spine; the declaration goes right
    // before the first statement that contains an occurrence.
    auto common = [](std::vector<std::pair<Block*, size_t>> a,
                     const std::vector<std::pair<Block*, size_t>>& b) {
        size_t lim = std::min(a.size(), b.size());
        size_t d = 0;
        while (d < lim && a[d] == b[d]) ++d;
        if (d < lim && a[d].first == b[d].first) {
            a.resize(d + 1);
            a[d].second = std::min(a[d].second, b[d].second);
        } else {
            a.resize(d);
        }
        return a;
    };
    auto spot = hits.front().chain;
    for (size_t i = 1; i < hits.size(); ++i) spot = common(std::move(spot), hits[i].chain);

    for (auto& h : hits) *h.slot = name_ref(p.new_name);
    Block* block = spot.back().first;
    block->stmts.insert(block->stmts.begin() + static_cast<long>(spot.back().second),
                        decl_stmt(p.declared_type.empty() ? "var" : p.declared_type, p.new_name,
                                  std::move(probe)));
    return finish(work);
}

// ---- inline_variable ------------------------------------------------------------

SourceUnit apply_inline_variable(const SourceUnit& unit, const detect::InlineVariableParams& p) {
    SourceUnit work = clone_unit(unit);
    MethodDecl& m = require_method_mut(work, p.enclosing_method);

    auto sites = decl_stmt_sites(m, p.variable_name);
    if (sites.empty()) {
        if (!locals_named(m, p.variable_name).empty()) {
            reject("'" + p.variable_name + "' is not declared by a plain statement",
                   "inline_variable.no-initializer");
        }
        throw UnknownEntityError(p.enclosing_method + " has no local '" + p.variable_name + "'");
    }
    const DeclStmtSite* site = pick_decl_site(sites, p.decl_span.start_line);
    if (!site) {
        throw UnknownEntityError("several locals named '" + p.variable_name +
                                 "'; the declaration span does not single one out");
    }
    if (!site->stmt->init) {
        reject("'" + p.variable_name + "' has no initializer", "inline_variable.no-initializer");
    }

    const NodeId var_id = site->stmt->var->id;
    for (const SlotSite& s : slot_sites(m)) {
        if ((*s.slot)->kind() != NodeKind::NameRef) continue;
        auto b = work.binding_table.find((*s.slot)->id);
        if (b == work.binding_table.end() || b->second.decl != var_id) continue;
        *s.slot = clone_expr(*site->stmt->init);
    }

    if (site->loop) site->loop->init = nullptr;
    else site->block->stmts.erase(site->block->stmts.begin() + static_cast<long>(site->index));
    return finish(work);
}

// ---- extract_method -------------------------------------------------------------

SourceUnit apply_extract_method(const SourceUnit& unit, const detect::ExtractMethodParams& p) {
    SourceUnit work = clone_unit(unit);
    ExtractAnalysis a = analyze_extract(work, p);
    if (a.live_out_names.size() > 1) {
        std::string names;
        for (const auto& n : a.live_out_names) names += (names.empty() ? "" : ", ") + n;
        reject("more than one value leaves the range: " + names, "extract_method.live-out");
    }
    if (!a.owner) throw UnknownEntityError(p.source_method + " has no owning class");

    Block* block = a.range.block;
    const size_t first = a.range.first, count = a.range.count;
    using LiveOut = ExtractAnalysis::LiveOut;
    const bool drop_last =
        a.live_case == LiveOut::DeclLast || a.live_case == LiveOut::AssignLast;
    const size_t moved = drop_last ? count - 1 : count;

    std::vector<StmtPtr> body;
    for (size_t i = 0; i < moved; ++i) body.push_back(clone_stmt(*block->stmts[first + i]));

    auto param_name_of = [&](const VarDecl* d) -> std::string {
        for (const auto& in : a.inputs)
            if (in.decl == d) return in.param_name;
        return d->name;
    };
    ExprPtr ret;
    const Stmt& last = *block->stmts[first + count - 1];
    switch (a.live_case) {
        case LiveOut::DeclLast:
            ret = clone_expr(*static_cast<const LocalVarDeclStmt&>(last).init);
            break;
        case LiveOut::AssignLast:
            ret = clone_expr(
                *static_cast<const Assign&>(*static_cast<const ExprStmt&>(last).expr).rhs);
            break;
        case LiveOut::DeclInRange:
            ret = name_ref(a.live_out->name);
            break;
        case LiveOut::AssignMid:
            ret = name_ref(param_name_of(a.live_out));
            break;
        case LiveOut::None:
            break;
    }

    std::map<NodeId, std::string> renames;
    for (const auto& in : a.inputs)
        if (in.param_name != in.decl->name) renames[in.decl->id] = in.param_name;
    if (!renames.empty()) {
        for (auto& s : body) rename_refs(*s, work.binding_table, renames);
        if (ret) rename_refs(*ret, work.binding_table, renames);
    }

    auto method = std::make_unique<MethodDecl>();
    method->modifiers = p.modifiers.empty() ? "private" : normalize_modifiers(p.modifiers);
    method->return_type =
        !p.return_type.empty() ? p.return_type : (a.live_out ? a.live_out->type_text : "void");
    method->name = p.new_method_name;
    for (const auto& in : a.inputs) {
        auto param = std::make_unique<VarDecl>();
        param->role = VarRole::Param;
        param->type_text = in.param_type;
        param->name = in.param_name;
        method->params.push_back(std::move(param));
    }
    method->body = std::make_unique<Block>();
    method->body->stmts = std::move(body);
    if (ret) {
        auto r = std::make_unique<ReturnStmt>();
        r->value = std::move(ret);
        method->body->stmts.push_back(std::move(r));
    }

    auto call = std::make_unique<MethodCall>();
    call->name = p.new_method_name;
    for (const auto& in : a.inputs) call->args.push_back(name_ref(in.decl->name));
    StmtPtr call_stmt;
    switch (a.live_case) {
        case LiveOut::DeclLast:
        case LiveOut::DeclInRange:
            call_stmt = decl_stmt(a.live_out->type_text, a.live_out->name, std::move(call));
            break;
        case LiveOut::AssignLast:
        case LiveOut::AssignMid:
            call_stmt = expr_stmt(assign_to(name_ref(a.live_out->name), std::move(call)));
            break;
        case LiveOut::None:
            call_stmt = expr_stmt(std::move(call));
            break;
    }

    auto where = block->stmts.begin() + static_cast<long>(first);
    block->stmts.erase(where, where + static_cast<long>(count));
    block->stmts.insert(block->stmts.begin() + static_cast<long>(first), std::move(call_stmt));

    auto& members = const_cast<ClassDecl*>(a.owner)->members;
    size_t at = members.size();
    for (size_t i = 0; i < members.size(); ++i) {
        if (members[i].method.get() == a.method) {
            at = i + 1;
            break;
        }
    }
    ClassDecl::Member member;
    member.method = std::move(method);
    members.insert(members.begin() + static_cast<long>(at), std::move(member));
    return finish(work);
}

// ---- inline_method --------------------------------------------------------------

std::map<NodeId, const Expr*> param_arguments(const InlineAnalysis& a, const MethodCall& call) {
    std::map<NodeId, const Expr*> out;
    for (size_t i = 0; i < a.method->params.size() && i < call.args.size(); ++i)
        out[a.method->params[i]->id] = call.args[i].get();
    return out;
}

void substitute_params(ExprPtr& root, const std::map<NodeId, const Expr*>& args,
                       const std::map<NodeId, Binding>& bindings) {
    walk_expr_slots(root, [&](ExprPtr& slot) {
        if (!slot || slot->kind() != NodeKind::NameRef) return;
        auto b = bindings.find(slot->id);
        if (b == bindings.end() || b->second.is_external()) return;
        auto it = args.find(b->second.decl);
        if (it != args.end()) slot = clone_expr(*it->second);
    });
}

void substitute_params(Stmt& s, const std::map<NodeId, const Expr*>& args,
                       const std::map<NodeId, Binding>& bindings) {
    walk_expr_slots(s, [&](ExprPtr& slot) {
        if (!slot || slot->kind() != NodeKind::NameRef) return;
        auto b = bindings.find(slot->id);
        if (b == bindings.end() || b->second.is_external()) return;
        auto it = args.find(b->second.decl);
        if (it != args.end()) slot = clone_expr(*it->second);
    });
}

SourceUnit apply_inline_method(const SourceUnit& unit, const detect::InlineMethodParams& p) {
    SourceUnit work = clone_unit(unit);
    InlineAnalysis a = analyze_inline(work, p);
    for (const auto& v : a.violations) {
        if (v.rule == "inline_method.no-body" || v.rule == "inline_method.control-flow" ||
            v.rule == "inline_method.recursive")
            reject(v.message, v.rule);
    }
    using Shape = InlineAnalysis::Shape;

    // Later sites first, so earlier chains stay valid while blocks change size.
    for (auto it = a.sites.rbegin(); it != a.sites.rend(); ++it) {
        const CallSite& cs = *it;
        auto* call = static_cast<MethodCall*>(cs.slot->get());
        auto args = param_arguments(a, *call);

        if (a.shape == Shape::Expression) {
            ExprPtr repl = clone_expr(*a.result);
            substitute_params(repl, args, work.binding_table);
            *cs.slot = std::move(repl);
            continue;
        }
        if (cs.form == CallSite::Form::ExprForm) {
            reject("a statement body cannot replace a call in expression position",
                   "inline_method.call-shape");
        }
        if (a.shape == Shape::Stmts && cs.form != CallSite::Form::StmtForm) {
            reject("the method produces no value for this call site", "inline_method.call-shape");
        }

        std::vector<StmtPtr> fragment;
        for (size_t i = 0; i < a.moved_count; ++i)
            fragment.push_back(clone_stmt(*a.method->body->stmts[i]));
        ExprPtr result = a.result ? clone_expr(*a.result) : nullptr;
        for (auto& s : fragment) substitute_params(*s, args, work.binding_table);
        if (result) substitute_params(result, args, work.binding_table);

        // Locals moving into the caller must not collide with names there.
        std::vector<VarDecl*> moved_decls;
        for (auto& s : fragment) {
            walk_nodes(*s, [&](const Node& n) {
                if (n.kind() == NodeKind::VarDecl)
                    moved_decls.push_back(const_cast<VarDecl*>(static_cast<const VarDecl*>(&n)));
            });
        }
        std::set<std::string> caller_names = names_in_method(work, *cs.caller);
        std::set<std::string> taken = caller_names;
        for (const VarDecl* d : moved_decls) taken.insert(d->name);
        std::map<NodeId, std::string> renames;
        for (VarDecl* d : moved_decls) {
            if (!caller_names.count(d->name)) continue;
            std::string fresh = fresh_name(d->name, taken);
            taken.insert(fresh);
            renames[d->id] = fresh;
            d->name = fresh;
        }
        if (!renames.empty()) {
            for (auto& s : fragment) rename_refs(*s, work.binding_table, renames);
            if (result) rename_refs(*result, work.binding_table, renames);
        }

        StmtPtr tail;
        Stmt* site_stmt = cs.site.stmt();
        if (a.shape == Shape::StmtsWithResult) {
            switch (cs.form) {
                case CallSite::Form::StmtForm:
                    tail = expr_stmt(std::move(result));
                    break;
                case CallSite::Form::AssignForm: {
                    auto& asg = static_cast<Assign&>(*static_cast<ExprStmt*>(site_stmt)->expr);
                    tail = expr_stmt(assign_to(clone_expr(*asg.lhs), std::move(result)));
                    break;
                }
                case CallSite::Form::DeclForm: {
                    auto& d = static_cast<LocalVarDeclStmt&>(*site_stmt);
                    auto s = std::make_unique<LocalVarDeclStmt>();
                    s->var = clone_var(*d.var);
                    s->init = std::move(result);
                    tail = std::move(s);
                    break;
                }
                case CallSite::Form::ExprForm:
                    break;  // rejected above
            }
        }

        Block* b = cs.site.block();
        const size_t idx = cs.site.index();
        b->stmts.erase(b->stmts.begin() + static_cast<long>(idx));
        size_t at = idx;
        for (auto& s : fragment)
            b->stmts.insert(b->stmts.begin() + static_cast<long>(at++), std::move(s));
        if (tail) b->stmts.insert(b->stmts.begin() + static_cast<long>(at), std::move(tail));
    }

    auto& members = const_cast<ClassDecl*>(a.owner)->members;
    for (size_t i = 0; i < members.size(); ++i) {
        if (members[i].method.get() == a.method) {
            members.erase(members.begin() + static_cast<long>(i));
            break;
        }
    }
    return finish(work);
}

// ---- extract_class --------------------------------------------------------------

SourceUnit apply_extract_class(const SourceUnit& unit, const detect::ExtractClassParams& p) {
    SourceUnit work = clone_unit(unit);
    ClassDecl& source = require_class_mut(work, p.source_class);

    std::set<NodeId> moved_ids;
    for (const auto& name : p.moved_fields) {
        const FieldDecl* f = field_in(source, name);
        if (!f) throw UnknownEntityError(p.source_class + " has no field '" + name + "'");
        moved_ids.insert(f->id);
    }
    for (const auto& sig : p.moved_methods) {
        const MethodDecl* m = method_in(source, sig);
        if (!m) throw UnknownEntityError(p.source_class + " has no method '" + sig + "'");
        if (m->is_constructor)
            reject("a constructor cannot move to the new class", "extract_class.constructor-move");
        moved_ids.insert(m->id);
    }

    std::set<NodeId> member_ids;
    for (const auto& m : source.members) {
        if (m.field) member_ids.insert(m.field->id);
        if (m.method) member_ids.insert(m.method->id);
        if (m.nested) member_ids.insert(m.nested->id);
    }

    auto stays_behind = [&](NodeId ref) -> const Node* {
        auto b = work.binding_table.find(ref);
        if (b == work.binding_table.end() || b->second.is_external()) return nullptr;
        NodeId d = b->second.decl;
        if (!member_ids.count(d) || moved_ids.count(d)) return nullptr;
        return work.find(d);
    };
    // Clones carry their source ids, so they can stand in for the originals
    // once those leave the class; filled while the new class is assembled.
    std::map<NodeId, const Node*> moved_nodes;
    auto moved_target = [&](NodeId ref) -> const Node* {
        auto b = work.binding_table.find(ref);
        if (b == work.binding_table.end() || b->second.is_external()) return nullptr;
        auto it = moved_nodes.find(b->second.decl);
        return it == moved_nodes.end() ? nullptr : it->second;
    };

    bool needs_back_ref = false;
    for (const auto& m : source.members) {
        const Node* node = nullptr;
        if (m.field && moved_ids.count(m.field->id)) node = m.field.get();
        if (m.method && moved_ids.count(m.method->id)) node = m.method.get();
        if (!node) continue;
        walk_exprs(*node, [&](const Expr& e) {
            if (stays_behind(e.id)) needs_back_ref = true;
        });
    }

    // Names already taken anywhere inside the source class.
    std::set<std::string> used_names;
    std::function<void(const ClassDecl&)> collect_names = [&](const ClassDecl& c) {
        for (const auto& m : c.members) {
            if (m.field) used_names.insert(m.field->name);
            if (m.nested) {
                used_names.insert(m.nested->name);
                collect_names(*m.nested);
            }
            if (!m.method) continue;
            used_names.insert(m.method->name);
            for (const auto& prm : m.method->params) used_names.insert(prm->name);
            if (m.method->body) {
                walk_nodes(*m.method->body, [&](const Node& n) {
                    if (n.kind() == NodeKind::VarDecl)
                        used_names.insert(static_cast<const VarDecl&>(n).name);
                });
            }
        }
    };
    collect_names(source);
    const std::string back_name = fresh_name("src", used_names);
    const std::string delegate_name =
        p.delegate_field.empty() ? fresh_name("delegate", used_names) : p.delegate_field;

    // Redirect a reference slot through `via`, e.g. `total` -> `src.total`.
    auto redirect = [&](ExprPtr& slot, const std::string& via,
                        const std::function<const Node*(NodeId)>& targets) {
        if (!slot) return;
        if (slot->kind() == NodeKind::NameRef) {
            const Node* d = targets(slot->id);
            if (dynamic_cast<const FieldDecl*>(d))
                slot = field_access(name_ref(via), static_cast<NameRef&>(*slot).name);
        } else if (slot->kind() == NodeKind::FieldAccess) {
            auto& fa = static_cast<FieldAccess&>(*slot);
            if (is_this_literal(fa.target.get()) && targets(fa.id)) fa.target = name_ref(via);
        } else if (slot->kind() == NodeKind::MethodCall) {
            auto& mc = static_cast<MethodCall&>(*slot);
            if (!targets(mc.id)) return;
            if (!mc.target || is_this_literal(mc.target.get())) mc.target = name_ref(via);
        }
    };

    auto bench = std::make_unique<ClassDecl>();
    bench->name = p.new_class_name;
    {
        // keep the source's visibility, nothing else
        std::string mods = normalize_modifiers(source.modifiers);
        bench->modifiers = mods.find("public") != std::string::npos ? "public" : "";
    }
    if (needs_back_ref) {
        auto back = std::make_unique<FieldDecl>();
        back->modifiers = "private";
        back->type_text = source.name;
        back->name = back_name;
        ClassDecl::Member fm;
        fm.field = std::move(back);
        bench->members.push_back(std::move(fm));

        auto ctor = std::make_unique<MethodDecl>();
        ctor->modifiers = "public";
        ctor->name = p.new_class_name;
        ctor->is_constructor = true;
        auto prm = std::make_unique<VarDecl>();
        prm->role = VarRole::Param;
        prm->type_text = source.name;
        prm->name = back_name;
        ctor->params.push_back(std::move(prm));
        ctor->body = std::make_unique<Block>();
        ctor->body->stmts.push_back(
            expr_stmt(assign_to(field_access(this_literal(), back_name), name_ref(back_name))));
        ClassDecl::Member cm;
        cm.method = std::move(ctor);
        bench->members.push_back(std::move(cm));
    }

    size_t first_moved = source.members.size();
    for (size_t i = 0; i < source.members.size(); ++i) {
        auto& m = source.members[i];
        const bool is_moved = (m.field && moved_ids.count(m.field->id)) ||
                              (m.method && moved_ids.count(m.method->id));
        if (!is_moved) continue;
        first_moved = std::min(first_moved, i);
        ClassDecl::Member clone;
        if (m.field) {
            clone.field = clone_field(*m.field);
            moved_nodes[m.field->id] = clone.field.get();
            if (clone.field->init) {
                walk_expr_slots(clone.field->init,
                                [&](ExprPtr& slot) { redirect(slot, back_name, stays_behind); });
            }
        } else {
            clone.method = clone_method(*m.method);
            moved_nodes[m.method->id] = clone.method.get();
            if (clone.method->body) {
                walk_expr_slots(*clone.method->body,
                                [&](ExprPtr& slot) { redirect(slot, back_name, stays_behind); });
            }
        }
        bench->members.push_back(std::move(clone));
    }

    // Drop the moved members, leave the delegate in their place.
    auto removed = std::remove_if(source.members.begin(), source.members.end(),
                                  [&](const ClassDecl::Member& m) {
                                      return (m.field && moved_ids.count(m.field->id)) ||
                                             (m.method && moved_ids.count(m.method->id));
                                  });
    source.members.erase(removed, source.members.end());

    auto delegate = std::make_unique<FieldDecl>();
    delegate->modifiers = "private";
    delegate->type_text = p.new_class_name;
    delegate->name = delegate_name;
    auto init = std::make_unique<ObjectCreation>();
    init->type_text = p.new_class_name;
    if (needs_back_ref) init->args.push_back(this_literal());
    delegate->init = std::move(init);
    ClassDecl::Member dm;
    dm.field = std::move(delegate);
    first_moved = std::min(first_moved, source.members.size());
    source.members.insert(source.members.begin() + static_cast<long>(first_moved), std::move(dm));

    for (auto& m : source.members) {
        if (m.field && m.field->init && m.field->name != delegate_name) {
            walk_expr_slots(m.field->init,
                            [&](ExprPtr& slot) { redirect(slot, delegate_name, moved_target); });
        } else if (m.method && m.method->body) {
            walk_expr_slots(*m.method->body,
                            [&](ExprPtr& slot) { redirect(slot, delegate_name, moved_target); });
        } else if (m.nested) {
            walk_expr_slots(*m.nested,
                            [&](ExprPtr& slot) { redirect(slot, delegate_name, moved_target); });
        }
    }

    // The new class sits right after its source, at the same nesting level.
    const ClassDecl* parent = owner_class_of(work, source.id);
    if (parent) {
        auto& siblings = const_cast<ClassDecl*>(parent)->members;
        for (size_t i = 0; i < siblings.size(); ++i) {
            if (siblings[i].nested.get() == &source) {
                ClassDecl::Member nm;
                nm.nested = std::move(bench);
                siblings.insert(siblings.begin() + static_cast<long>(i + 1), std::move(nm));
                break;
            }
        }
    } else {
        for (size_t i = 0; i < work.types.size(); ++i) {
            if (work.types[i].get() == &source) {
                work.types.insert(work.types.begin() + static_cast<long>(i + 1),
                                  std::move(bench));
                break;
            }
        }
    }
    return finish(work);
}

}  // namespace

CheckReport check(const lang::SourceUnit& unit, const detect::RefactoringInstance& instance);

SourceUnit apply(const SourceUnit& unit, const detect::RefactoringInstance& instance,
                 const ApplyOptions& options) {
    require_kind_params(instance);
    if (options.run_checks) {
        CheckReport report = check(unit, instance);
        if (!report.ok(options.strict)) {
            std::vector<std::string> rules;
            std::string message;
            for (const auto& v : report.violations) {
                if (v.severity == Severity::Warning && !options.strict) continue;
                rules.push_back(v.rule);
                message += (message.empty() ? "" : "; ") + v.rule + ": " + v.message;
            }
            throw PreconditionError(message, rules);
        }
    }
    switch (instance.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable:
            return apply_rename(unit, instance.kind, instance.rename());
        case RefactoringKind::ExtractVariable:
            return apply_extract_variable(unit, instance.extract_variable());
        case RefactoringKind::InlineVariable:
            return apply_inline_variable(unit, instance.inline_variable());
        case RefactoringKind::ExtractMethod:
            return apply_extract_method(unit, instance.extract_method());
        case RefactoringKind::InlineMethod:
            return apply_inline_method(unit, instance.inline_method());
        case RefactoringKind::ExtractClass:
            return apply_extract_class(unit, instance.extract_class());
    }
    throw UnsupportedKindError("unhandled refactoring kind");
}

}  // namespace refmirror::engine
