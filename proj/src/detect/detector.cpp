#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../engine/engine_util.hpp"
#include "matching.hpp"
#include "refmirror/detect/detector.hpp"
#include "refmirror/detect/dice.hpp"
#include "refmirror/engine/engine.hpp"
#include "refmirror/lang/ast_ops.hpp"
#include "refmirror/lang/paths.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/mirror/ast_diff.hpp"
#include "refmirror/support/errors.hpp"

namespace refmirror::detect {

namespace {

using namespace refmirror::lang;
using internal::ClassPair;
using internal::Correspondence;
using internal::LocalDecl;
using internal::MethodPair;

// Candidates are replayed through the engine before anything is reported, so
// the builders below only have to be *plausible*; the fold at the bottom is
// what decides. Rank orders the replay: renames first (they preserve line
// numbers, keeping later span hints valid), then inlines, then extracts.
struct Candidate {
    RefactoringInstance inst;
    std::vector<Span> footprint;  // before-document extent, for subsumption
    int rank = 0;
};

NodeId bound_decl(const SourceUnit& u, NodeId ref) {
    auto it = u.binding_table.find(ref);
    return it == u.binding_table.end() ? kInvalidNode : it->second.decl;
}

bool span_inside(const Span& s, const Span& outer) {
    return s.start_offset >= outer.start_offset && s.end_offset <= outer.end_offset;
}

// ---- renames ----------------------------------------------------------------

void rename_candidates(const SourceUnit& before, const Correspondence& corr,
                       std::vector<Candidate>& out) {
    for (const auto& cp : corr.classes) {
        std::string class_path = path_of(before, cp.before->id);
        for (const auto& fp : cp.fields) {
            if (fp.before->name == fp.after->name) continue;
            RenameParams p;
            p.enclosing = class_path;
            p.old_name = fp.before->name;
            p.new_name = fp.after->name;
            p.decl_span = fp.before->span;
            Candidate c;
            c.inst.kind = RefactoringKind::RenameAttribute;
            c.inst.params = p;
            c.inst.similarity = fp.sim;
            out.push_back(std::move(c));
        }
        for (const auto& mp : cp.methods) {
            std::string method_path = path_of(before, mp.before->id);
            if (mp.before->name != mp.after->name && !mp.before->is_constructor &&
                !mp.after->is_constructor) {
                RenameParams p;
                p.enclosing = class_path;
                p.old_name = mp.before->name;
                p.new_name = mp.after->name;
                p.decl_span = mp.before->span;
                p.signature = method_signature(*mp.before);
                Candidate c;
                c.inst.kind = RefactoringKind::RenameMethod;
                c.inst.params = p;
                c.inst.similarity = mp.sim;
                out.push_back(std::move(c));
            }
            for (const auto& pp : mp.params) {
                if (pp.before->name == pp.after->name) continue;
                RenameParams p;
                p.enclosing = method_path;
                p.old_name = pp.before->name;
                p.new_name = pp.after->name;
                p.decl_span = pp.before->span;
                Candidate c;
                c.inst.kind = RefactoringKind::RenameParameter;
                c.inst.params = p;
                c.inst.similarity = pp.sim;
                out.push_back(std::move(c));
            }
            for (const auto& lp : mp.locals) {
                if (lp.before.var->name == lp.after.var->name) continue;
                RenameParams p;
                p.enclosing = method_path;
                p.old_name = lp.before.var->name;
                p.new_name = lp.after.var->name;
                p.decl_span = lp.before.var->span;
                Candidate c;
                c.inst.kind = RefactoringKind::RenameVariable;
                c.inst.params = p;
                c.inst.similarity = lp.sim;
                out.push_back(std::move(c));
            }
        }
    }
}

// ---- inline variable ---------------------------------------------------------

void inline_variable_candidates(const SourceUnit& before, const Correspondence& corr,
                                std::vector<Candidate>& out) {
    for (const auto& cp : corr.classes) {
        for (const auto& mp : cp.methods) {
            for (const auto& gone : mp.gone_locals) {
                if (!gone.stmt || !gone.stmt->init) continue;
                InlineVariableParams q;
                q.enclosing_method = path_of(before, mp.before->id);
                q.variable_name = gone.var->name;
                q.decl_span = gone.var->span;
                walk_exprs(static_cast<const Node&>(*mp.before), [&](const Expr& e) {
                    if (e.kind() == NodeKind::NameRef && bound_decl(before, e.id) == gone.var->id)
                        q.use_spans.push_back(e.span);
                });
                // A vanished variable nobody read is a deletion, not an inline.
                if (q.use_spans.empty()) continue;
                Candidate c;
                c.inst.kind = RefactoringKind::InlineVariable;
                c.inst.params = q;
                c.rank = 1;
                out.push_back(std::move(c));
            }
        }
    }
}

// ---- inline method -----------------------------------------------------------

void inline_method_candidates(const SourceUnit& before, const Correspondence& corr,
                              std::vector<Candidate>& out) {
    for (const auto& cp : corr.classes) {
        for (const auto* gone : cp.gone_methods) {
            if (gone->is_constructor || !gone->body) continue;
            InlineMethodParams q;
            q.inlined_method = path_of(before, gone->id);
            for (const auto& type : before.types) {
                walk_exprs(static_cast<const Node&>(*type), [&](const Expr& e) {
                    if (e.kind() == NodeKind::MethodCall && bound_decl(before, e.id) == gone->id)
                        q.call_site_spans.push_back(e.span);
                });
            }
            // A vanished method nobody called is a deletion, not an inline.
            if (q.call_site_spans.empty()) continue;
            Candidate c;
            c.inst.kind = RefactoringKind::InlineMethod;
            c.inst.params = q;
            c.footprint.push_back(gone->span);
            c.rank = 1;
            out.push_back(std::move(c));
        }
    }
}

// ---- extract variable --------------------------------------------------------

void direct_exprs(const Stmt& s, std::vector<const Expr*>& out) {
    switch (s.kind()) {
        case NodeKind::ExprStmt:
            out.push_back(static_cast<const ExprStmt&>(s).expr.get());
            break;
        case NodeKind::ReturnStmt:
            if (auto* v = static_cast<const ReturnStmt&>(s).value.get()) out.push_back(v);
            break;
        case NodeKind::ThrowStmt:
            out.push_back(static_cast<const ThrowStmt&>(s).value.get());
            break;
        case NodeKind::LocalVarDeclStmt:
            if (auto* v = static_cast<const LocalVarDeclStmt&>(s).init.get()) out.push_back(v);
            break;
        case NodeKind::IfStmt:
            out.push_back(static_cast<const IfStmt&>(s).cond.get());
            break;
        case NodeKind::WhileStmt:
            out.push_back(static_cast<const WhileStmt&>(s).cond.get());
            break;
        case NodeKind::ForStmt: {
            const auto& f = static_cast<const ForStmt&>(s);
            if (f.init) direct_exprs(*f.init, out);
            if (f.cond) out.push_back(f.cond.get());
            for (const auto& u : f.update) out.push_back(u.get());
            break;
        }
        case NodeKind::ForEachStmt:
            out.push_back(static_cast<const ForEachStmt&>(s).iterable.get());
            break;
        case NodeKind::TryStmt:
            for (const auto& r : static_cast<const TryStmt&>(s).resources)
                out.push_back(r.init.get());
            break;
        default:
            break;
    }
}

void child_blocks(const Stmt& s, std::vector<const Block*>& out) {
    switch (s.kind()) {
        case NodeKind::Block:
            out.push_back(static_cast<const Block*>(&s));
            break;
        case NodeKind::IfStmt: {
            const auto& n = static_cast<const IfStmt&>(s);
            out.push_back(n.then_block.get());
            if (n.else_stmt) child_blocks(*n.else_stmt, out);
            break;
        }
        case NodeKind::WhileStmt:
            out.push_back(static_cast<const WhileStmt&>(s).body.get());
            break;
        case NodeKind::ForStmt:
            out.push_back(static_cast<const ForStmt&>(s).body.get());
            break;
        case NodeKind::ForEachStmt:
            out.push_back(static_cast<const ForEachStmt&>(s).body.get());
            break;
        case NodeKind::TryStmt: {
            const auto& n = static_cast<const TryStmt&>(s);
            out.push_back(n.body.get());
            for (const auto& c : n.catches) out.push_back(c->body.get());
            if (n.finally_block) out.push_back(n.finally_block.get());
            break;
        }
        default:
            break;
    }
}

bool mentions_var(const Stmt& s, const SourceUnit& u, NodeId var) {
    bool found = false;
    walk_exprs(static_cast<const Node&>(s), [&](const Expr& e) {
        if (e.kind() == NodeKind::NameRef && bound_decl(u, e.id) == var) found = true;
    });
    return found;
}

/// Outermost statements of `b` whose *own* expressions read the variable.
/// Statements that only carry references in nested blocks are descended into,
/// so each returned unit maps onto exactly one statement of the original.
void fold_units(const Block& b, const SourceUnit& u, NodeId var, std::vector<const Stmt*>& out) {
    for (const auto& sp : b.stmts) {
        const Stmt& s = *sp;
        if (!mentions_var(s, u, var)) continue;
        std::vector<const Expr*> direct;
        direct_exprs(s, direct);
        bool direct_hit = false;
        for (const Expr* e : direct) {
            walk_exprs(static_cast<const Node&>(*e), [&](const Expr& x) {
                if (x.kind() == NodeKind::NameRef && bound_decl(u, x.id) == var) direct_hit = true;
            });
            if (direct_hit) break;
        }
        if (direct_hit) {
            out.push_back(&s);
            continue;
        }
        std::vector<const Block*> kids;
        child_blocks(s, kids);
        for (const Block* k : kids) fold_units(*k, u, var, out);
    }
}

void stmts_with_prints(const Block& b, std::vector<std::pair<const Stmt*, std::string>>& out) {
    for (const auto& sp : b.stmts) {
        out.emplace_back(sp.get(), print_stmt(*sp));
        std::vector<const Block*> kids;
        child_blocks(*sp, kids);
        for (const Block* k : kids) stmts_with_prints(*k, out);
    }
}

void extract_variable_candidates(const SourceUnit& before, const SourceUnit& after,
                                 const Correspondence& corr, std::vector<Candidate>& out) {
    for (const auto& cp : corr.classes) {
        for (const auto& mp : cp.methods) {
            if (!mp.before->body || !mp.after->body) continue;
            std::vector<std::pair<const Stmt*, std::string>> pool;
            stmts_with_prints(*mp.before->body, pool);
            for (const auto& L : mp.new_locals) {
                if (!L.stmt || !L.stmt->init) continue;
                std::string expr_text = print_expr(*L.stmt->init);

                std::vector<const Stmt*> units;
                fold_units(*mp.after->body, after, L.var->id, units);
                if (units.empty()) continue;

                // Undo each fold in a clone; a statement of `before` that
                // prints identically marks where the occurrences were.
                std::vector<Span> spans;
                std::vector<bool> used(pool.size(), false);
                for (const Stmt* sa : units) {
                    StmtPtr undone = clone_stmt(*sa);
                    walk_expr_slots(*undone, [&](ExprPtr& slot) {
                        if (slot && slot->kind() == NodeKind::NameRef &&
                            bound_decl(after, slot->id) == L.var->id)
                            slot = clone_expr(*L.stmt->init);
                    });
                    std::string text = print_stmt(*undone);
                    for (size_t k = 0; k < pool.size(); ++k) {
                        if (used[k] || pool[k].second != text) continue;
                        used[k] = true;
                        walk_exprs(static_cast<const Node&>(*pool[k].first), [&](const Expr& e) {
                            if (print_expr(e) == expr_text) spans.push_back(e.span);
                        });
                        break;
                    }
                }
                if (spans.empty()) continue;

                ExtractVariableParams q;
                q.enclosing_method = path_of(before, mp.before->id);
                q.expression = expr_text;
                q.occurrence_spans = spans;
                q.new_name = L.var->name;
                q.declared_type = L.var->type_text;
                Candidate c;
                c.inst.kind = RefactoringKind::ExtractVariable;
                c.inst.params = q;
                c.rank = 2;
                out.push_back(std::move(c));
            }
        }
    }
}

// ---- extract method ----------------------------------------------------------

/// The call a replacement statement makes to the new method: a bare call
/// statement, an assignment of one, or a declaration initialized by one.
const MethodCall* stmt_call_to(const Stmt& s, const SourceUnit& u, NodeId target,
                               std::string& ret_var) {
    const Expr* e = nullptr;
    ret_var.clear();
    if (s.kind() == NodeKind::ExprStmt) {
        e = static_cast<const ExprStmt&>(s).expr.get();
    } else if (s.kind() == NodeKind::LocalVarDeclStmt) {
        const auto& d = static_cast<const LocalVarDeclStmt&>(s);
        if (!d.init) return nullptr;
        ret_var = d.var->name;
        e = d.init.get();
    }
    if (!e) return nullptr;
    if (e->kind() == NodeKind::Assign) {
        const auto& a = static_cast<const Assign&>(*e);
        if (a.op != "=" || a.lhs->kind() != NodeKind::NameRef) return nullptr;
        ret_var = static_cast<const NameRef&>(*a.lhs).name;
        e = a.rhs.get();
    }
    if (e->kind() != NodeKind::MethodCall) return nullptr;
    const auto& call = static_cast<const MethodCall&>(*e);
    if (call.target) return nullptr;  // extraction produces unqualified calls
    return bound_decl(u, call.id) == target ? &call : nullptr;
}

struct RangeHit {
    const Block* block = nullptr;
    size_t first = 0;
    size_t count = 0;
    std::string ret_var;
};

void scan_ranges(const Block& bb, const Block& ba, const SourceUnit& after, NodeId target,
                 std::vector<RangeHit>& hits) {
    const auto& xs = bb.stmts;
    const auto& ys = ba.stmts;
    const size_t n = xs.size(), m = ys.size();
    std::vector<std::string> px(n), py(m);
    for (size_t i = 0; i < n; ++i) px[i] = print_stmt(*xs[i]);
    for (size_t j = 0; j < m; ++j) py[j] = print_stmt(*ys[j]);
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (size_t i = n; i-- > 0;)
        for (size_t j = m; j-- > 0;)
            lcs[i][j] = px[i] == py[j] ? lcs[i + 1][j + 1] + 1
                                       : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && px[i] == py[j]) {
            ++i;
            ++j;
            continue;
        }
        const size_t i0 = i, j0 = j;
        while (i < n || j < m) {
            if (i < n && j < m && px[i] == py[j]) break;
            if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1]))
                ++i;
            else
                ++j;
        }
        const size_t dn = i - i0, in = j - j0;
        if (in == 1 && dn >= 1) {
            std::string ret_var;
            if (stmt_call_to(*ys[j0], after, target, ret_var))
                hits.push_back({&bb, i0, dn, ret_var});
        }
        if (dn == in) {
            for (size_t k = 0; k < dn; ++k) {
                const Stmt& sb = *xs[i0 + k];
                const Stmt& sa = *ys[j0 + k];
                if (sb.kind() != sa.kind()) continue;
                std::vector<const Block*> kb, ka;
                child_blocks(sb, kb);
                child_blocks(sa, ka);
                for (size_t c = 0; c < kb.size() && c < ka.size(); ++c)
                    scan_ranges(*kb[c], *ka[c], after, target, hits);
            }
        }
    }
}

void extract_method_candidates(const SourceUnit& before, const SourceUnit& after,
                               const Correspondence& corr, std::vector<Candidate>& out) {
    for (const auto& cp : corr.classes) {
        for (const auto* created : cp.new_methods) {
            if (created->is_constructor || !created->body) continue;
            for (const auto& mp : cp.methods) {
                if (!mp.before->body || !mp.after->body) continue;
                std::vector<RangeHit> hits;
                scan_ranges(*mp.before->body, *mp.after->body, after, created->id, hits);
                for (const auto& hit : hits) {
                    ExtractMethodParams q;
                    q.source_method = path_of(before, mp.before->id);
                    if (!block_path_of(*mp.before, *hit.block, q.block_path)) continue;
                    q.first_index = static_cast<int>(hit.first);
                    q.count = static_cast<int>(hit.count);
                    q.call_site_index = q.first_index;
                    q.new_method_name = created->name;
                    for (const auto& p : created->params) {
                        q.parameter_names.push_back(p->name);
                        q.parameter_types.push_back(p->type_text);
                    }
                    q.return_variable = hit.ret_var;
                    q.return_type = created->return_type;
                    q.modifiers = created->modifiers;
                    Candidate c;
                    for (size_t k = 0; k < hit.count; ++k) {
                        const Stmt& s = *hit.block->stmts[hit.first + k];
                        q.extracted_spans.push_back(s.span);
                        q.statement_texts.push_back(print_stmt(s));
                        c.footprint.push_back(s.span);
                    }
                    c.inst.kind = RefactoringKind::ExtractMethod;
                    c.inst.params = q;
                    c.inst.similarity = mp.sim;
                    c.rank = 2;
                    out.push_back(std::move(c));
                }
            }
        }
    }
}

// ---- extract class -----------------------------------------------------------

void extract_class_candidates(const SourceUnit& before, const Correspondence& corr,
                              std::vector<Candidate>& out) {
    for (const auto* created : corr.new_classes) {
        for (const auto& cp : corr.classes) {
            ExtractClassParams q;
            q.source_class = path_of(before, cp.before->id);
            q.new_class_name = created->name;
            Candidate c;
            for (const auto* f : cp.gone_fields) {
                for (const auto& m : created->members) {
                    if (m.field && m.field->name == f->name) {
                        q.moved_fields.push_back(f->name);
                        c.footprint.push_back(f->span);
                        break;
                    }
                }
            }
            for (const auto* meth : cp.gone_methods) {
                if (meth->is_constructor) continue;
                auto sig = method_signature(*meth);
                for (const auto& m : created->members) {
                    if (m.method && method_signature(*m.method) == sig) {
                        q.moved_methods.push_back(sig);
                        c.footprint.push_back(meth->span);
                        break;
                    }
                }
            }
            if (q.moved_fields.empty() && q.moved_methods.empty()) continue;
            for (const auto* f : cp.new_fields) {
                if (normalize_type(f->type_text) == created->name) {
                    q.delegate_field = f->name;
                    break;
                }
            }
            c.inst.kind = RefactoringKind::ExtractClass;
            c.inst.params = q;
            c.rank = 2;
            out.push_back(std::move(c));
        }
    }
}

// ---- precedence & path remapping ----------------------------------------------

void subsume_renames(std::vector<Candidate>& cands) {
    std::vector<Span> covered;
    for (const auto& c : cands)
        for (const auto& s : c.footprint) covered.push_back(s);
    if (covered.empty()) return;
    cands.erase(std::remove_if(cands.begin(), cands.end(),
                               [&](const Candidate& c) {
                                   if (c.rank != 0) return false;
                                   const Span& d = c.inst.rename().decl_span;
                                   for (const auto& s : covered)
                                       if (span_inside(d, s)) return true;
                                   return false;
                               }),
                cands.end());
}

/// An accepted rename changes the paths later candidates must use.
struct PathRemap {
    std::string class_path;
    std::string method_from, method_to;  // full method paths
    std::string sig_from, sig_to;        // method signatures within class_path
    std::string field_from, field_to;    // field names within class_path
};

void apply_remaps(RefactoringInstance& inst, const std::vector<PathRemap>& remaps) {
    auto fix_method = [&](std::string& path) {
        for (const auto& r : remaps)
            if (!r.method_from.empty() && path == r.method_from) path = r.method_to;
    };
    if (auto* p = std::get_if<RenameParams>(&inst.params)) {
        fix_method(p->enclosing);
    } else if (auto* p = std::get_if<ExtractMethodParams>(&inst.params)) {
        fix_method(p->source_method);
    } else if (auto* p = std::get_if<ExtractVariableParams>(&inst.params)) {
        fix_method(p->enclosing_method);
    } else if (auto* p = std::get_if<InlineMethodParams>(&inst.params)) {
        fix_method(p->inlined_method);
    } else if (auto* p = std::get_if<InlineVariableParams>(&inst.params)) {
        fix_method(p->enclosing_method);
    } else if (auto* p = std::get_if<ExtractClassParams>(&inst.params)) {
        for (const auto& r : remaps) {
            if (p->source_class != r.class_path) continue;
            for (auto& sig : p->moved_methods)
                if (!r.sig_from.empty() && sig == r.sig_from) sig = r.sig_to;
            for (auto& f : p->moved_fields)
                if (!r.field_from.empty() && f == r.field_from) f = r.field_to;
        }
    }
}

std::optional<PathRemap> remap_of(const RefactoringInstance& inst) {
    if (inst.kind == RefactoringKind::RenameMethod) {
        const auto& p = inst.rename();
        PathRemap r;
        r.class_path = p.enclosing;
        r.sig_from = p.signature;
        auto paren = p.signature.find('(');
        r.sig_to = p.new_name + p.signature.substr(paren);
        r.method_from = p.enclosing + "#" + r.sig_from;
        r.method_to = p.enclosing + "#" + r.sig_to;
        return r;
    }
    if (inst.kind == RefactoringKind::RenameAttribute) {
        const auto& p = inst.rename();
        PathRemap r;
        r.class_path = p.enclosing;
        r.field_from = p.old_name;
        r.field_to = p.new_name;
        return r;
    }
    return std::nullopt;
}

}  // namespace

std::vector<RefactoringInstance> detect(const lang::SourceUnit& before,
                                        const lang::SourceUnit& after,
                                        const DetectorOptions& options) {
    std::vector<RefactoringInstance> accepted;
    if (same_structure(before, after)) return accepted;

    auto corr = internal::correspond(before, after, options);
    std::vector<Candidate> cands;
    rename_candidates(before, corr, cands);
    inline_variable_candidates(before, corr, cands);
    inline_method_candidates(before, corr, cands);
    extract_variable_candidates(before, after, corr, cands);
    extract_method_candidates(before, after, corr, cands);
    extract_class_candidates(before, corr, cands);
    if (options.subsume_renames) subsume_renames(cands);

    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        if (x.rank != y.rank) return x.rank < y.rank;
        int ax = x.inst.anchor_line(), ay = y.inst.anchor_line();
        if (ax != ay) return ax < ay;
        return to_json(x.inst).dump() < to_json(y.inst).dump();
    });

    // Greedy fold: replay each candidate on the working copy and keep it only
    // if the unit moves strictly closer to `after` without diverging anywhere
    // new. Candidates invalidated by earlier accepts simply fail their replay.
    std::optional<SourceUnit> held;
    const SourceUnit* cur = &before;
    auto base = mirror::diff_units(*cur, after);
    long base_measure = mirror::diff_measure(base);
    std::vector<PathRemap> remaps;

    for (auto& cand : cands) {
        apply_remaps(cand.inst, remaps);
        std::optional<SourceUnit> trial;
        try {
            trial.emplace(engine::apply(*cur, cand.inst, engine::ApplyOptions{false, false}));
        } catch (const refmirror::Error&) {
            continue;
        }
        if (same_structure(*trial, after)) {
            base.clear();
            base_measure = 0;
        } else {
            auto d2 = mirror::diff_units(*trial, after);
            long m2 = mirror::diff_measure(d2);
            if (!mirror::after_side_within(d2, base) || m2 >= base_measure) continue;
            // Inlines must leave every site they rewrote strictly closer to
            // the target than it was. Removing a method that was really moved
            // (or a variable whose range was extracted) shrinks the diff
            // while its call sites drift away from the target text; a genuine
            // inline whose sites were then edited further still moves toward
            // it. The removed declaration is excised from the "before" side
            // so an adjacent decl+use diff region doesn't tilt the scale.
            if (cand.rank == 1) {
                lang::Span gone{};
                bool have_gone = false;
                std::vector<std::string> init_tokens;
                try {
                    if (cand.inst.kind == RefactoringKind::InlineVariable) {
                        const auto& q = std::get<InlineVariableParams>(cand.inst.params);
                        const auto& m = engine::util::require_method(*cur, q.enclosing_method);
                        if (m.body) {
                            walk_stmts(*m.body, [&](const Stmt& s) {
                                if (have_gone || s.kind() != NodeKind::LocalVarDeclStmt) return;
                                const auto& d = static_cast<const LocalVarDeclStmt&>(s);
                                if (d.var && d.var->name == q.variable_name) {
                                    gone = s.span;
                                    have_gone = true;
                                    if (d.init) {
                                        for (const auto& tk : lex(print_expr(*d.init)))
                                            if (tk.kind != TokenKind::EndOfFile)
                                                init_tokens.push_back(tk.text);
                                    }
                                }
                            });
                        }
                    } else if (cand.inst.kind == RefactoringKind::InlineMethod) {
                        const auto& q = std::get<InlineMethodParams>(cand.inst.params);
                        gone = engine::util::require_method(*cur, q.inlined_method).span;
                        have_gone = true;
                    }
                } catch (const refmirror::Error&) {
                }
                auto slice = [](const SourceUnit& u, const lang::Span& s) {
                    int lo = std::clamp(s.start_offset, 0, static_cast<int>(u.raw_text.size()));
                    int hi = std::clamp(s.end_offset, lo, static_cast<int>(u.raw_text.size()));
                    return u.raw_text.substr(lo, hi - lo);
                };
                auto site_before = [&](const lang::Span& s) {
                    if (!have_gone) return slice(*cur, s);
                    int clo = std::max(s.start_offset, gone.start_offset);
                    int chi = std::min(s.end_offset, gone.end_offset);
                    if (chi <= clo) return slice(*cur, s);
                    lang::Span head{s.start_offset, clo};
                    lang::Span tail{chi, s.end_offset};
                    return slice(*cur, head) + " " + slice(*cur, tail);
                };
                auto touched = mirror::diff_units(*cur, *trial);
                bool strayed = false;
                for (const auto& t : touched) {
                    if (t.after_span.end_offset <= t.after_span.start_offset) continue;
                    const mirror::DiffRegion* rem = nullptr;
                    int best = 0;
                    for (const auto& r : d2) {
                        if (r.before_span.end_offset <= r.before_span.start_offset) continue;
                        int lo = std::max(t.after_span.start_offset, r.before_span.start_offset);
                        int hi = std::min(t.after_span.end_offset, r.before_span.end_offset);
                        if (hi - lo > best) {
                            best = hi - lo;
                            rem = &r;
                        }
                    }
                    if (!rem) continue;  // rewritten site already agrees with the target
                    std::string goal = slice(after, rem->after_span);
                    // An inlined expression stays visible where it landed; if
                    // the target text never shows it, the declaration moved
                    // somewhere else rather than into this site.
                    if (!init_tokens.empty()) {
                        std::vector<std::string> gt;
                        for (const auto& tk : lex(goal))
                            if (tk.kind != TokenKind::EndOfFile) gt.push_back(tk.text);
                        bool present = false;
                        for (size_t i = 0; i + init_tokens.size() <= gt.size() && !present; ++i) {
                            bool all = true;
                            for (size_t j = 0; j < init_tokens.size(); ++j) {
                                if (gt[i + j] != init_tokens[j]) {
                                    all = false;
                                    break;
                                }
                            }
                            present = all;
                        }
                        if (!present) {
                            strayed = true;
                            break;
                        }
                    }
                    double now = token_dice(slice(*trial, t.after_span), goal);
                    double was = token_dice(site_before(t.before_span), goal);
                    if (now <= was) {
                        strayed = true;
                        break;
                    }
                }
                if (strayed) continue;
            }
            base = std::move(d2);
            base_measure = m2;
        }
        if (auto r = remap_of(cand.inst)) remaps.push_back(*r);
        accepted.push_back(cand.inst);
        held = std::move(trial);
        cur = &*held;
    }

    sort_instances(accepted);
    return accepted;
}

}  // namespace refmirror::detect
