#include "refmirror/mirror/ast_diff.hpp"

#include <algorithm>
#include <string>

#include "refmirror/lang/ast.hpp"
#include "refmirror/lang/paths.hpp"
#include "refmirror/lang/printer.hpp"

namespace refmirror::mirror {

namespace {

using namespace refmirror::lang;

Span zero_at(int offset, int line) { return Span{offset, offset, line, line}; }
Span anchor_before(const Span& s) { return zero_at(s.start_offset, s.start_line); }
Span anchor_after(const Span& s) { return zero_at(s.end_offset, s.end_line); }

Span cover(const Span& a, const Span& b) {
    Span s;
    s.start_offset = std::min(a.start_offset, b.start_offset);
    s.end_offset = std::max(a.end_offset, b.end_offset);
    s.start_line = std::min(a.start_line, b.start_line);
    s.end_line = std::max(a.end_line, b.end_line);
    return s;
}

void emit(std::vector<DiffRegion>& out, const Span& b, const Span& a) {
    out.push_back({b, a});
}

/// Declaration head: everything before the body (or the whole span when
/// there is none). Keeps header-level differences from swallowing the body.
Span head_span(const MethodDecl& m) {
    Span s = m.span;
    if (m.body) {
        s.end_offset = m.body->span.start_offset;
        s.end_line = m.body->span.start_line;
    }
    return s;
}

Span head_span(const ClassDecl& c) {
    Span s = c.span;
    if (!c.members.empty()) {
        const auto& first = c.members.front();
        const Span& fs = first.field    ? first.field->span
                         : first.method ? first.method->span
                                        : first.nested->span;
        s.end_offset = fs.start_offset;
        s.end_line = fs.start_line;
    }
    return s;
}

std::string field_text(const FieldDecl& f) {
    std::string t = f.modifiers + ' ' + f.type_text + ' ' + f.name;
    if (f.init) t += " = " + print_expr(*f.init);
    return t;
}

std::string var_text(const VarDecl& v) { return v.type_text + ' ' + v.name; }

void block_diff(const Block& bb, const Block& ba, std::vector<DiffRegion>& out);

/// Same-kind statements whose prints differ: descend to the differing parts.
void stmt_diff(const Stmt& sb, const Stmt& sa, std::vector<DiffRegion>& out) {
    switch (sb.kind()) {
        case NodeKind::IfStmt: {
            const auto& b = static_cast<const IfStmt&>(sb);
            const auto& a = static_cast<const IfStmt&>(sa);
            if (print_expr(*b.cond) != print_expr(*a.cond))
                emit(out, b.cond->span, a.cond->span);
            block_diff(*b.then_block, *a.then_block, out);
            const Stmt* eb = b.else_stmt.get();
            const Stmt* ea = a.else_stmt.get();
            if (!eb && !ea) break;
            if (eb && ea) {
                if (print_stmt(*eb) == print_stmt(*ea)) break;
                if (eb->kind() == ea->kind())
                    stmt_diff(*eb, *ea, out);
                else
                    emit(out, eb->span, ea->span);
            } else if (eb) {
                emit(out, eb->span, anchor_after(a.span));
            } else {
                emit(out, anchor_after(b.span), ea->span);
            }
            break;
        }
        case NodeKind::WhileStmt: {
            const auto& b = static_cast<const WhileStmt&>(sb);
            const auto& a = static_cast<const WhileStmt&>(sa);
            if (print_expr(*b.cond) != print_expr(*a.cond))
                emit(out, b.cond->span, a.cond->span);
            block_diff(*b.body, *a.body, out);
            break;
        }
        case NodeKind::ForStmt: {
            const auto& b = static_cast<const ForStmt&>(sb);
            const auto& a = static_cast<const ForStmt&>(sa);
            auto header = [](const ForStmt& f) {
                std::string t = f.init ? print_stmt(*f.init) : ";";
                if (f.cond) t += print_expr(*f.cond);
                t += ';';
                for (const auto& u : f.update) t += print_expr(*u);
                return t;
            };
            if (header(b) != header(a)) {
                Span hb = b.span, ha = a.span;
                hb.end_offset = b.body->span.start_offset;
                hb.end_line = b.body->span.start_line;
                ha.end_offset = a.body->span.start_offset;
                ha.end_line = a.body->span.start_line;
                emit(out, hb, ha);
            }
            block_diff(*b.body, *a.body, out);
            break;
        }
        case NodeKind::ForEachStmt: {
            const auto& b = static_cast<const ForEachStmt&>(sb);
            const auto& a = static_cast<const ForEachStmt&>(sa);
            if (var_text(*b.var) != var_text(*a.var) ||
                print_expr(*b.iterable) != print_expr(*a.iterable)) {
                Span hb = b.span, ha = a.span;
                hb.end_offset = b.body->span.start_offset;
                hb.end_line = b.body->span.start_line;
                ha.end_offset = a.body->span.start_offset;
                ha.end_line = a.body->span.start_line;
                emit(out, hb, ha);
            }
            block_diff(*b.body, *a.body, out);
            break;
        }
        case NodeKind::TryStmt: {
            const auto& b = static_cast<const TryStmt&>(sb);
            const auto& a = static_cast<const TryStmt&>(sa);
            auto resources = [](const TryStmt& t) {
                std::string s;
                for (const auto& r : t.resources)
                    s += var_text(*r.var) + '=' + print_expr(*r.init) + ';';
                return s;
            };
            if (resources(b) != resources(a) || b.catches.size() != a.catches.size()) {
                emit(out, b.span, a.span);
                break;
            }
            block_diff(*b.body, *a.body, out);
            for (size_t i = 0; i < b.catches.size(); ++i) {
                const auto& kb = *b.catches[i];
                const auto& ka = *a.catches[i];
                if (var_text(*kb.param) != var_text(*ka.param))
                    emit(out, kb.param->span, ka.param->span);
                block_diff(*kb.body, *ka.body, out);
            }
            if (b.finally_block && a.finally_block)
                block_diff(*b.finally_block, *a.finally_block, out);
            else if (b.finally_block)
                emit(out, b.finally_block->span, anchor_after(a.span));
            else if (a.finally_block)
                emit(out, anchor_after(b.span), a.finally_block->span);
            break;
        }
        case NodeKind::Block:
            block_diff(static_cast<const Block&>(sb), static_cast<const Block&>(sa), out);
            break;
        default:
            // Leaf statements: return, throw, expression, declaration, opaque.
            emit(out, sb.span, sa.span);
            break;
    }
}

void block_diff(const Block& bb, const Block& ba, std::vector<DiffRegion>& out) {
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
        if (dn == in) {
            for (size_t k = 0; k < dn; ++k) {
                const Stmt& sb = *xs[i0 + k];
                const Stmt& sa = *ys[j0 + k];
                if (sb.kind() == sa.kind())
                    stmt_diff(sb, sa, out);
                else
                    emit(out, sb.span, sa.span);
            }
            continue;
        }
        Span b, a;
        if (dn) {
            b = xs[i0]->span;
            for (size_t k = 1; k < dn; ++k) b = cover(b, xs[i0 + k]->span);
        } else {
            b = i0 < n ? anchor_before(xs[i0]->span) : anchor_after(bb.span);
        }
        if (in) {
            a = ys[j0]->span;
            for (size_t k = 1; k < in; ++k) a = cover(a, ys[j0 + k]->span);
        } else {
            a = j0 < m ? anchor_before(ys[j0]->span) : anchor_after(ba.span);
        }
        emit(out, b, a);
    }
}

void method_diff(const MethodDecl& mb, const MethodDecl& ma, std::vector<DiffRegion>& out) {
    if (mb.modifiers != ma.modifiers || mb.return_type != ma.return_type ||
        mb.name != ma.name || mb.throws_text != ma.throws_text ||
        mb.params.size() != ma.params.size() || !mb.body != !ma.body)
        emit(out, head_span(mb), head_span(ma));
    if (mb.params.size() == ma.params.size())
        for (size_t i = 0; i < mb.params.size(); ++i)
            if (var_text(*mb.params[i]) != var_text(*ma.params[i]))
                emit(out, mb.params[i]->span, ma.params[i]->span);
    if (mb.body && ma.body) block_diff(*mb.body, *ma.body, out);
}

void class_diff(const ClassDecl& cb, const ClassDecl& ca, std::vector<DiffRegion>& out) {
    if (cb.modifiers != ca.modifiers || cb.is_interface != ca.is_interface ||
        cb.name != ca.name || cb.heritage != ca.heritage)
        emit(out, head_span(cb), head_span(ca));

    std::vector<bool> used(ca.members.size(), false);
    auto claim = [&](auto pred) -> const ClassDecl::Member* {
        for (size_t k = 0; k < ca.members.size(); ++k) {
            if (used[k] || !pred(ca.members[k])) continue;
            used[k] = true;
            return &ca.members[k];
        }
        return nullptr;
    };

    for (const auto& mb : cb.members) {
        const ClassDecl::Member* pair = nullptr;
        if (mb.field) {
            pair = claim([&](const ClassDecl::Member& m) {
                return m.field && m.field->name == mb.field->name;
            });
            if (pair) {
                if (field_text(*mb.field) != field_text(*pair->field))
                    emit(out, mb.field->span, pair->field->span);
                continue;
            }
            emit(out, mb.field->span, anchor_after(head_span(ca)));
        } else if (mb.method) {
            auto sig = method_signature(*mb.method);
            pair = claim([&](const ClassDecl::Member& m) {
                return m.method && m.method->name == mb.method->name &&
                       method_signature(*m.method) == sig;
            });
            if (pair) {
                method_diff(*mb.method, *pair->method, out);
                continue;
            }
            emit(out, mb.method->span, anchor_after(head_span(ca)));
        } else {
            pair = claim([&](const ClassDecl::Member& m) {
                return m.nested && m.nested->name == mb.nested->name;
            });
            if (pair) {
                class_diff(*mb.nested, *pair->nested, out);
                continue;
            }
            emit(out, mb.nested->span, anchor_after(head_span(ca)));
        }
    }
    for (size_t k = 0; k < ca.members.size(); ++k) {
        if (used[k]) continue;
        const auto& m = ca.members[k];
        const Span& s = m.field ? m.field->span : m.method ? m.method->span : m.nested->span;
        emit(out, anchor_after(head_span(cb)), s);
    }
}

}  // namespace

std::vector<DiffRegion> diff_units(const lang::SourceUnit& before,
                                   const lang::SourceUnit& after) {
    std::vector<DiffRegion> out;
    std::vector<bool> used(after.types.size(), false);
    for (const auto& cb : before.types) {
        const ClassDecl* pair = nullptr;
        for (size_t k = 0; k < after.types.size(); ++k) {
            if (used[k] || after.types[k]->name != cb->name) continue;
            used[k] = true;
            pair = after.types[k].get();
            break;
        }
        if (pair) {
            class_diff(*cb, *pair, out);
        } else {
            Span anchor = after.types.empty() ? Span{}
                                              : anchor_after(after.types.back()->span);
            emit(out, cb->span, anchor);
        }
    }
    for (size_t k = 0; k < after.types.size(); ++k) {
        if (used[k]) continue;
        Span anchor = before.types.empty() ? Span{}
                                           : anchor_after(before.types.back()->span);
        emit(out, anchor, after.types[k]->span);
    }
    return out;
}

long diff_measure(const std::vector<DiffRegion>& regions) {
    long total = 0;
    for (const auto& r : regions) {
        total += r.before_span.end_offset - r.before_span.start_offset;
        total += r.after_span.end_offset - r.after_span.start_offset;
    }
    return total;
}

bool after_side_within(const std::vector<DiffRegion>& narrow,
                       const std::vector<DiffRegion>& broad) {
    for (const auto& r : narrow) {
        if (r.after_span.end_offset <= r.after_span.start_offset) continue;
        bool inside = false;
        for (const auto& b : broad) {
            if (r.after_span.start_offset >= b.after_span.start_offset &&
                r.after_span.end_offset <= b.after_span.end_offset) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

}  // namespace refmirror::mirror
