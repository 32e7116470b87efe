#include "analysis.hpp"

#include <algorithm>

#include "refmirror/lang/lexer.hpp"

namespace refmirror::engine::analysis {

namespace {

void violation(std::vector<Violation>& out, Severity sev, std::string rule, std::string msg) {
    out.push_back({std::move(rule), sev, std::move(msg)});
}

}  // namespace

// ---- rename ------------------------------------------------------------------

NodeId resolve_rename_target(const SourceUnit& unit, RefactoringKind kind,
                             const detect::RenameParams& p, std::string& error) {
    switch (kind) {
        case RefactoringKind::RenameAttribute: {
            const auto* c = dynamic_cast<const ClassDecl*>(find_decl(unit, p.enclosing));
            if (!c) {
                error = "no class at path '" + p.enclosing + "'";
                return kInvalidNode;
            }
            const FieldDecl* f = field_in(*c, p.old_name);
            if (!f) {
                error = p.enclosing + " has no field '" + p.old_name + "'";
                return kInvalidNode;
            }
            return f->id;
        }
        case RefactoringKind::RenameMethod: {
            const auto* c = dynamic_cast<const ClassDecl*>(find_decl(unit, p.enclosing));
            if (!c) {
                error = "no class at path '" + p.enclosing + "'";
                return kInvalidNode;
            }
            if (!p.signature.empty()) {
                const MethodDecl* m = method_in(*c, p.signature);
                if (!m || m->name != p.old_name) {
                    error = p.enclosing + " has no method '" + p.signature + "' named '" +
                            p.old_name + "'";
                    return kInvalidNode;
                }
                return m->id;
            }
            const MethodDecl* match = nullptr;
            for (const auto& member : c->members) {
                if (!member.method || member.method->name != p.old_name) continue;
                if (match) {
                    error = "method name '" + p.old_name + "' is ambiguous in " + p.enclosing +
                            "; a signature is required";
                    return kInvalidNode;
                }
                match = member.method.get();
            }
            if (!match) {
                error = p.enclosing + " has no method named '" + p.old_name + "'";
                return kInvalidNode;
            }
            return match->id;
        }
        case RefactoringKind::RenameParameter: {
            const auto* m = dynamic_cast<const MethodDecl*>(find_decl(unit, p.enclosing));
            if (!m) {
                error = "no method at path '" + p.enclosing + "'";
                return kInvalidNode;
            }
            const VarDecl* v = param_named(*m, p.old_name);
            if (!v) {
                error = p.enclosing + " has no parameter '" + p.old_name + "'";
                return kInvalidNode;
            }
            return v->id;
        }
        case RefactoringKind::RenameVariable: {
            const auto* m = dynamic_cast<const MethodDecl*>(find_decl(unit, p.enclosing));
            if (!m) {
                error = "no method at path '" + p.enclosing + "'";
                return kInvalidNode;
            }
            const VarDecl* v = find_local(*m, p.old_name, p.decl_span.start_line);
            if (!v) {
                error = p.enclosing + " has no resolvable local '" + p.old_name + "'";
                return kInvalidNode;
            }
            return v->id;
        }
        default:
            error = "not a rename kind";
            return kInvalidNode;
    }
}

// ---- extract_method ------------------------------------------------------------

namespace {

/// break/continue at loop depth 0 escape the range; returns escape the method.
void scan_control_flow(const Stmt& s, int loop_depth, bool& has_return, bool& has_escape) {
    switch (s.kind()) {
        case NodeKind::ReturnStmt:
            has_return = true;
            return;
        case NodeKind::BreakStmt:
        case NodeKind::ContinueStmt:
            if (loop_depth == 0) has_escape = true;
            return;
        case NodeKind::Block:
            for (const auto& child : static_cast<const Block&>(s).stmts)
                scan_control_flow(*child, loop_depth, has_return, has_escape);
            return;
        case NodeKind::IfStmt: {
            const auto& n = static_cast<const IfStmt&>(s);
            scan_control_flow(*n.then_block, loop_depth, has_return, has_escape);
            if (n.else_stmt) scan_control_flow(*n.else_stmt, loop_depth, has_return, has_escape);
            return;
        }
        case NodeKind::WhileStmt:
            scan_control_flow(*static_cast<const WhileStmt&>(s).body, loop_depth + 1, has_return,
                              has_escape);
            return;
        case NodeKind::ForStmt:
            scan_control_flow(*static_cast<const ForStmt&>(s).body, loop_depth + 1, has_return,
                              has_escape);
            return;
        case NodeKind::ForEachStmt:
            scan_control_flow(*static_cast<const ForEachStmt&>(s).body, loop_depth + 1, has_return,
                              has_escape);
            return;
        case NodeKind::TryStmt: {
            const auto& n = static_cast<const TryStmt&>(s);
            scan_control_flow(*n.body, loop_depth, has_return, has_escape);
            for (const auto& c : n.catches)
                scan_control_flow(*c->body, loop_depth, has_return, has_escape);
            if (n.finally_block)
                scan_control_flow(*n.finally_block, loop_depth, has_return, has_escape);
            return;
        }
        default:
            return;
    }
}

bool opaque_has_return(const std::string& text) {
    try {
        for (const Token& t : lex(text)) {
            if (t.is_keyword("return")) return true;
        }
    } catch (const SyntaxError&) {
        return text.find("return") != std::string::npos;
    }
    return false;
}

}  // namespace

ExtractAnalysis analyze_extract(SourceUnit& unit, const detect::ExtractMethodParams& p) {
    ExtractAnalysis a;
    a.range = resolve_range(unit, p.source_method, p.block_path, static_cast<size_t>(p.first_index),
                            static_cast<size_t>(p.count));
    a.method = &require_method(unit, p.source_method);
    a.owner = owner_class_of(unit, a.method->id);

    const MethodDecl& m = *a.method;
    auto range_stmt = [&](size_t i) -> const Stmt& { return *a.range.block->stmts[a.range.first + i]; };

    // Declarations anywhere inside the range are internal to the new method.
    std::set<NodeId> declared_in_range;
    for (size_t i = 0; i < a.range.count; ++i) {
        walk_nodes(range_stmt(i), [&](const Node& n) {
            if (n.kind() == NodeKind::VarDecl) declared_in_range.insert(n.id);
        });
    }

    auto var_target = [&](NodeId ref) -> const VarDecl* {
        auto b = unit.binding_table.find(ref);
        if (b == unit.binding_table.end() || b->second.is_external()) return nullptr;
        return dynamic_cast<const VarDecl*>(unit.find(b->second.decl));
    };

    // Write positions: plain-assignment targets never read their old value;
    // compound assignment and ++/-- both read and write.
    std::set<NodeId> write_pos, rw_pos;
    for (size_t i = 0; i < a.range.count; ++i) {
        walk_exprs(range_stmt(i), [&](const Expr& e) {
            if (auto* asg = dynamic_cast<const Assign*>(&e)) {
                if (asg->lhs->kind() == NodeKind::NameRef)
                    (asg->op == "=" ? write_pos : rw_pos).insert(asg->lhs->id);
            } else if (auto* u = dynamic_cast<const Unary*>(&e)) {
                if ((u->op == "++" || u->op == "--") && u->operand->kind() == NodeKind::NameRef)
                    rw_pos.insert(u->operand->id);
            }
        });
    }

    // Method variables an opaque fragment could plausibly mean by name.
    const int range_start = range_stmt(0).span.start_offset;
    const int range_end = range_stmt(a.range.count - 1).span.end_offset;
    std::map<std::string, const VarDecl*> outside_by_name;
    std::set<std::string> ambiguous_names;
    auto consider_outside = [&](const VarDecl& v) {
        if (declared_in_range.count(v.id) || v.span.start_offset >= range_start) return;
        if (outside_by_name.count(v.name)) ambiguous_names.insert(v.name);
        else outside_by_name[v.name] = &v;
    };
    for (const auto& param : m.params) consider_outside(*param);
    if (m.body) {
        walk_stmts(*m.body, [&](const Stmt& s) {
            if (auto* d = dynamic_cast<const LocalVarDeclStmt*>(&s)) consider_outside(*d->var);
            else if (auto* fe = dynamic_cast<const ForEachStmt*>(&s)) consider_outside(*fe->var);
            else if (auto* t = dynamic_cast<const TryStmt*>(&s)) {
                for (const auto& r : t->resources) consider_outside(*r.var);
                for (const auto& cc : t->catches) consider_outside(*cc->param);
            }
        });
    }

    // Ordered reference scan over the range.
    struct Agg {
        const VarDecl* decl = nullptr;
        size_t first_pos = 0;
        bool read = false, written = false, opaque = false;
    };
    std::map<NodeId, Agg> agg;
    size_t pos = 0;
    bool opaque_flow = false;
    for (size_t i = 0; i < a.range.count; ++i) {
        walk_exprs(range_stmt(i), [&](const Expr& e) {
            ++pos;
            if (auto* n = dynamic_cast<const NameRef*>(&e)) {
                const VarDecl* d = var_target(n->id);
                if (!d || declared_in_range.count(d->id)) return;
                Agg& entry = agg.try_emplace(d->id, Agg{d, pos}).first->second;
                bool writes = write_pos.count(n->id) || rw_pos.count(n->id);
                entry.read |= !write_pos.count(n->id);
                entry.written |= writes;
            } else if (auto* o = dynamic_cast<const OpaqueExpr*>(&e)) {
                if (opaque_has_return(o->text)) opaque_flow = true;
                for (const auto& [name, decl] : outside_by_name) {
                    if (ambiguous_names.count(name)) continue;
                    if (!mentions_identifier(o->text, name)) continue;
                    Agg& entry = agg.try_emplace(decl->id, Agg{decl, pos}).first->second;
                    entry.read = true;
                    entry.opaque = true;
                }
            }
        });
    }

    // A value is live out when something can still read it after the range
    // runs: statements past the range, or any part of an enclosing loop.
    int loop_start = range_start;
    if (m.body) {
        walk_stmts(*m.body, [&](const Stmt& s) {
            NodeKind k = s.kind();
            if (k != NodeKind::WhileStmt && k != NodeKind::ForStmt && k != NodeKind::ForEachStmt)
                return;
            if (s.span.start_offset < range_start && s.span.end_offset >= range_end)
                loop_start = std::min(loop_start, s.span.start_offset);
        });
    }
    auto used_after = [&](const VarDecl& d) {
        bool found = false;
        walk_exprs(m, [&](const Expr& e) {
            if (found || e.kind() != NodeKind::NameRef) return;
            const VarDecl* t = var_target(e.id);
            if (t != &d) return;
            if (e.span.start_offset >= range_end ||
                (e.span.start_offset >= loop_start && e.span.start_offset < range_start))
                found = true;
        });
        return found;
    };

    std::vector<const VarDecl*> live;
    for (const VarDecl* d : range_top_level_decls(a.range)) {
        if (used_after(*d)) live.push_back(d);
    }
    for (const auto& [id, entry] : agg) {
        if (entry.written && used_after(*entry.decl)) live.push_back(entry.decl);
    }
    for (const VarDecl* d : live) a.live_out_names.push_back(d->name);
    if (live.size() > 1) {
        std::string names;
        for (const auto& n : a.live_out_names) names += (names.empty() ? "" : ", ") + n;
        violation(a.violations, Severity::Error, "extract_method.live-out",
                  "more than one value leaves the range: " + names);
    } else if (live.size() == 1) {
        a.live_out = live.front();
    }

    // Shape of the hand-off for the single live-out value.
    if (a.live_out) {
        const VarDecl& L = *a.live_out;
        std::vector<NodeId> refs_to_live;
        for (size_t i = 0; i < a.range.count; ++i) {
            walk_exprs(range_stmt(i), [&](const Expr& e) {
                if (e.kind() == NodeKind::NameRef && var_target(e.id) == &L)
                    refs_to_live.push_back(e.id);
            });
        }
        const Stmt& last = range_stmt(a.range.count - 1);
        if (declared_in_range.count(L.id)) {
            const auto* ld = dynamic_cast<const LocalVarDeclStmt*>(&last);
            bool decl_last = ld && ld->var.get() == &L && ld->init && refs_to_live.empty();
            a.live_case = decl_last ? ExtractAnalysis::LiveOut::DeclLast
                                    : ExtractAnalysis::LiveOut::DeclInRange;
        } else {
            const auto* es = dynamic_cast<const ExprStmt*>(&last);
            const auto* asg = es ? dynamic_cast<const Assign*>(es->expr.get()) : nullptr;
            bool assign_last = asg && asg->op == "=" && asg->lhs->kind() == NodeKind::NameRef &&
                               var_target(asg->lhs->id) == &L && refs_to_live.size() == 1;
            a.live_case = assign_last ? ExtractAnalysis::LiveOut::AssignLast
                                      : ExtractAnalysis::LiveOut::AssignMid;
        }
    }

    // Inputs: every outside variable the range touches, ordered by first use.
    // AssignLast excludes the live-out — its only mention is the final store,
    // which the call-site assignment takes over.
    std::vector<const Agg*> selected;
    for (const auto& [id, entry] : agg) {
        if (a.live_case == ExtractAnalysis::LiveOut::AssignLast && entry.decl == a.live_out)
            continue;
        selected.push_back(&entry);
    }
    std::sort(selected.begin(), selected.end(),
              [](const Agg* x, const Agg* y) { return x->first_pos < y->first_pos; });
    for (size_t i = 0; i < selected.size(); ++i) {
        ExtractAnalysis::Input in;
        in.decl = selected[i]->decl;
        in.opaque_mention = selected[i]->opaque;
        in.param_name = in.decl->name;
        in.param_type = in.decl->type_text;
        if (i < p.parameter_names.size() && !p.parameter_names[i].empty())
            in.param_name = p.parameter_names[i];
        if (i < p.parameter_types.size() && !p.parameter_types[i].empty())
            in.param_type = p.parameter_types[i];
        a.inputs.push_back(std::move(in));
    }

    // Control flow that cannot move.
    bool has_return = false, has_escape = false;
    for (size_t i = 0; i < a.range.count; ++i)
        scan_control_flow(range_stmt(i), 0, has_return, has_escape);
    if (has_return)
        violation(a.violations, Severity::Error, "extract_method.control-flow",
                  "the range returns from the enclosing method");
    if (has_escape)
        violation(a.violations, Severity::Error, "extract_method.control-flow",
                  "the range breaks or continues a loop outside of it");
    if (opaque_flow)
        violation(a.violations, Severity::Error, "extract_method.opaque-flow",
                  "an unmodeled fragment in the range contains 'return'");

    return a;
}

// ---- inline_method -------------------------------------------------------------

namespace {

CallSite::Form classify_site(const SlotSite& site) {
    Stmt* s = site.stmt();
    if (auto* es = dynamic_cast<ExprStmt*>(s)) {
        if (&es->expr == site.slot) return CallSite::Form::StmtForm;
        if (auto* asg = dynamic_cast<Assign*>(es->expr.get())) {
            if (asg->op == "=" && &asg->rhs == site.slot) return CallSite::Form::AssignForm;
        }
    } else if (auto* d = dynamic_cast<LocalVarDeclStmt*>(s)) {
        if (&d->init == site.slot) return CallSite::Form::DeclForm;
    }
    return CallSite::Form::ExprForm;
}

void collect_sites(SourceUnit& unit, ClassDecl& c, NodeId target, InlineAnalysis& a) {
    for (auto& member : c.members) {
        if (member.method && member.method->body) {
            for (SlotSite& site : slot_sites(*member.method)) {
                auto* call = dynamic_cast<MethodCall*>(site.slot->get());
                if (!call) continue;
                auto b = unit.binding_table.find(call->id);
                if (b == unit.binding_table.end() || b->second.decl != target) continue;
                CallSite cs;
                cs.caller = member.method.get();
                cs.caller_path = path_of(unit, member.method->id);
                cs.site = site;
                cs.slot = site.slot;
                cs.qualified = call->target && !is_this_literal(call->target.get());
                cs.form = classify_site(site);
                a.sites.push_back(std::move(cs));
            }
        } else if (member.field && member.field->init) {
            walk_expr_slots(member.field->init, [&](ExprPtr& slot) {
                auto* call = dynamic_cast<MethodCall*>(slot.get());
                if (!call) return;
                auto b = unit.binding_table.find(call->id);
                if (b == unit.binding_table.end() || b->second.decl != target) return;
                CallSite cs;
                cs.field = member.field.get();
                cs.slot = &slot;
                cs.qualified = call->target && !is_this_literal(call->target.get());
                cs.form = CallSite::Form::ExprForm;
                a.sites.push_back(std::move(cs));
            });
        }
        if (member.nested) collect_sites(unit, *member.nested, target, a);
    }
}

}  // namespace

InlineAnalysis analyze_inline(SourceUnit& unit, const detect::InlineMethodParams& p) {
    InlineAnalysis a;
    a.method = &require_method(unit, p.inlined_method);
    a.owner = owner_class_of(unit, a.method->id);

    if (!a.method->body) {
        violation(a.violations, Severity::Error, "inline_method.no-body",
                  "the method has no body to inline");
        return a;
    }
    const Block& body = *a.method->body;

    size_t returns = 0;
    walk_stmts(body, [&](const Stmt& s) {
        if (s.kind() == NodeKind::ReturnStmt) ++returns;
    });
    const auto* trailing =
        body.stmts.empty() ? nullptr : dynamic_cast<const ReturnStmt*>(body.stmts.back().get());

    if (body.stmts.size() == 1 && trailing && trailing->value) {
        a.shape = InlineAnalysis::Shape::Expression;
        a.result = trailing->value.get();
    } else if (returns == 0) {
        a.shape = InlineAnalysis::Shape::Stmts;
        a.moved_count = body.stmts.size();
    } else if (trailing && returns == 1) {
        a.moved_count = body.stmts.size() - 1;
        if (trailing->value) {
            a.shape = InlineAnalysis::Shape::StmtsWithResult;
            a.result = trailing->value.get();
        } else {
            a.shape = InlineAnalysis::Shape::Stmts;
        }
    } else {
        violation(a.violations, Severity::Error, "inline_method.control-flow",
                  "the body returns before its end");
    }

    walk_exprs(*a.method, [&](const Expr& e) {
        if (e.kind() == NodeKind::MethodCall) {
            auto b = unit.binding_table.find(e.id);
            if (b != unit.binding_table.end() && b->second.decl == a.method->id) {
                if (a.violations.empty() || a.violations.back().rule != "inline_method.recursive")
                    violation(a.violations, Severity::Error, "inline_method.recursive",
                              "the method calls itself");
            }
        }
        if (a.instance_dependent) return;
        if (auto* lit = dynamic_cast<const Literal*>(&e)) {
            if (lit->text == "this" || lit->text == "super") a.instance_dependent = true;
        } else if (e.kind() == NodeKind::NameRef || e.kind() == NodeKind::MethodCall) {
            auto b = unit.binding_table.find(e.id);
            if (b == unit.binding_table.end() || b->second.is_external()) return;
            const Node* decl = unit.find(b->second.decl);
            if (dynamic_cast<const FieldDecl*>(decl)) a.instance_dependent = true;
            if (e.kind() == NodeKind::MethodCall && dynamic_cast<const MethodDecl*>(decl) &&
                b->second.decl != a.method->id)
                a.instance_dependent = true;
        }
    });

    for (auto& type : unit.types) collect_sites(unit, *type, a.method->id, a);
    return a;
}

}  // namespace refmirror::engine::analysis
