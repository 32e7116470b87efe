#include <algorithm>
#include <functional>

#include "matching.hpp"
#include "refmirror/detect/dice.hpp"
#include "refmirror/lang/ast_ops.hpp"
#include "refmirror/lang/paths.hpp"
#include "refmirror/lang/printer.hpp"

namespace refmirror::detect::internal {

namespace {

// Compared texts exclude the declared name, so a pure rename scores 1.0 and
// the tau_body gate measures how much of the *content* survived.

std::string content_text(const ClassDecl& c) {
    std::string p = print_class(c);
    auto nl = p.find('\n');
    return nl == std::string::npos ? std::string() : p.substr(nl + 1);
}

std::string content_text(const MethodDecl& m) {
    return m.body ? print_stmt(*m.body) : std::string();
}

std::string content_text(const FieldDecl& f) {
    std::string t = f.type_text;
    if (f.init) t += " = " + print_expr(*f.init);
    return t;
}

std::string content_text(const LocalDecl& l) {
    std::string t = l.var->type_text;
    if (l.stmt && l.stmt->init) t += " = " + print_expr(*l.stmt->init);
    return t;
}

struct GreedyPair {
    size_t b = 0, a = 0;
    double sim = 0.0;
};

/// Greedy maximal matching by descending similarity; ties resolved in source
/// order on the before side, then the after side.
std::vector<GreedyPair> greedy_pairs(size_t nb, size_t na,
                                     const std::function<double(size_t, size_t)>& sim,
                                     double tau) {
    std::vector<GreedyPair> cands;
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < na; ++j) {
            double s = sim(i, j);
            if (s >= tau) cands.push_back({i, j, s});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const GreedyPair& x, const GreedyPair& y) {
        if (x.sim != y.sim) return x.sim > y.sim;
        if (x.b != y.b) return x.b < y.b;
        return x.a < y.a;
    });
    std::vector<bool> ub(nb, false), ua(na, false);
    std::vector<GreedyPair> out;
    for (const auto& c : cands) {
        if (ub[c.b] || ua[c.a]) continue;
        ub[c.b] = ua[c.a] = true;
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(),
              [](const GreedyPair& x, const GreedyPair& y) { return x.b < y.b; });
    return out;
}

void match_params(MethodPair& mp, double tau) {
    const auto& pb = mp.before->params;
    const auto& pa = mp.after->params;
    std::vector<bool> ub(pb.size(), false), ua(pa.size(), false);
    for (size_t i = 0; i < pb.size(); ++i)
        for (size_t j = 0; j < pa.size(); ++j) {
            if (ua[j] || pb[i]->name != pa[j]->name) continue;
            mp.params.push_back({pb[i].get(), pa[j].get(), 1.0});
            ub[i] = ua[j] = true;
            break;
        }
    // Leftovers pair positionally: the k-th unmatched parameter on each side,
    // gated on type similarity. Catches renames without licensing type swaps.
    std::vector<size_t> lb, la;
    for (size_t i = 0; i < pb.size(); ++i)
        if (!ub[i]) lb.push_back(i);
    for (size_t j = 0; j < pa.size(); ++j)
        if (!ua[j]) la.push_back(j);
    for (size_t k = 0; k < lb.size() && k < la.size(); ++k) {
        double s = token_dice(pb[lb[k]]->type_text, pa[la[k]]->type_text);
        if (s >= tau) mp.params.push_back({pb[lb[k]].get(), pa[la[k]].get(), s});
    }
}

void match_locals(MethodPair& mp, double tau) {
    auto lb = locals_of(*mp.before);
    auto la = locals_of(*mp.after);
    std::vector<bool> ub(lb.size(), false), ua(la.size(), false);
    for (size_t i = 0; i < lb.size(); ++i)
        for (size_t j = 0; j < la.size(); ++j) {
            if (ua[j] || lb[i].var->name != la[j].var->name) continue;
            mp.locals.push_back({lb[i], la[j], 1.0});
            ub[i] = ua[j] = true;
            break;
        }
    std::vector<size_t> ib, ia;
    for (size_t i = 0; i < lb.size(); ++i)
        if (!ub[i]) ib.push_back(i);
    for (size_t j = 0; j < la.size(); ++j)
        if (!ua[j]) ia.push_back(j);
    auto pairs = greedy_pairs(
        ib.size(), ia.size(),
        [&](size_t i, size_t j) {
            return token_dice(content_text(lb[ib[i]]), content_text(la[ia[j]]));
        },
        tau);
    std::vector<bool> pb(ib.size(), false), pa(ia.size(), false);
    for (const auto& g : pairs) {
        mp.locals.push_back({lb[ib[g.b]], la[ia[g.a]], g.sim});
        pb[g.b] = pa[g.a] = true;
    }
    for (size_t i = 0; i < ib.size(); ++i)
        if (!pb[i]) mp.gone_locals.push_back(lb[ib[i]]);
    for (size_t j = 0; j < ia.size(); ++j)
        if (!pa[j]) mp.new_locals.push_back(la[ia[j]]);
}

void match_class_lists(const std::vector<const ClassDecl*>& bs,
                       const std::vector<const ClassDecl*>& as,
                       const DetectorOptions& options, Correspondence& out);

void match_class_pair(ClassPair& cp, const DetectorOptions& options, Correspondence& out) {
    std::vector<const FieldDecl*> fb, fa;
    std::vector<const MethodDecl*> mb, ma;
    std::vector<const ClassDecl*> nb, na;
    for (const auto& m : cp.before->members) {
        if (m.field) fb.push_back(m.field.get());
        if (m.method) mb.push_back(m.method.get());
        if (m.nested) nb.push_back(m.nested.get());
    }
    for (const auto& m : cp.after->members) {
        if (m.field) fa.push_back(m.field.get());
        if (m.method) ma.push_back(m.method.get());
        if (m.nested) na.push_back(m.nested.get());
    }

    std::vector<bool> ufb(fb.size(), false), ufa(fa.size(), false);
    for (size_t i = 0; i < fb.size(); ++i)
        for (size_t j = 0; j < fa.size(); ++j) {
            if (ufa[j] || fb[i]->name != fa[j]->name) continue;
            cp.fields.push_back({fb[i], fa[j], 1.0});
            ufb[i] = ufa[j] = true;
            break;
        }
    {
        std::vector<size_t> ib, ia;
        for (size_t i = 0; i < fb.size(); ++i)
            if (!ufb[i]) ib.push_back(i);
        for (size_t j = 0; j < fa.size(); ++j)
            if (!ufa[j]) ia.push_back(j);
        auto pairs = greedy_pairs(
            ib.size(), ia.size(),
            [&](size_t i, size_t j) {
                return token_dice(content_text(*fb[ib[i]]), content_text(*fa[ia[j]]));
            },
            options.tau_body);
        std::vector<bool> pb(ib.size(), false), pa(ia.size(), false);
        for (const auto& g : pairs) {
            cp.fields.push_back({fb[ib[g.b]], fa[ia[g.a]], g.sim});
            pb[g.b] = pa[g.a] = true;
        }
        for (size_t i = 0; i < ib.size(); ++i)
            if (!pb[i]) cp.gone_fields.push_back(fb[ib[i]]);
        for (size_t j = 0; j < ia.size(); ++j)
            if (!pa[j]) cp.new_fields.push_back(fa[ia[j]]);
    }

    std::vector<bool> umb(mb.size(), false), uma(ma.size(), false);
    for (size_t i = 0; i < mb.size(); ++i)
        for (size_t j = 0; j < ma.size(); ++j) {
            if (uma[j] || method_signature(*mb[i]) != method_signature(*ma[j])) continue;
            cp.methods.push_back({mb[i], ma[j], 1.0});
            umb[i] = uma[j] = true;
            break;
        }
    {
        std::vector<size_t> ib, ia;
        for (size_t i = 0; i < mb.size(); ++i)
            if (!umb[i]) ib.push_back(i);
        for (size_t j = 0; j < ma.size(); ++j)
            if (!uma[j]) ia.push_back(j);
        auto pairs = greedy_pairs(
            ib.size(), ia.size(),
            [&](size_t i, size_t j) {
                const auto& x = *mb[ib[i]];
                const auto& y = *ma[ia[j]];
                if (x.is_constructor != y.is_constructor) return -1.0;
                return token_dice(content_text(x), content_text(y));
            },
            options.tau_body);
        std::vector<bool> pb(ib.size(), false), pa(ia.size(), false);
        for (const auto& g : pairs) {
            cp.methods.push_back({mb[ib[g.b]], ma[ia[g.a]], g.sim});
            pb[g.b] = pa[g.a] = true;
        }
        for (size_t i = 0; i < ib.size(); ++i)
            if (!pb[i]) cp.gone_methods.push_back(mb[ib[i]]);
        for (size_t j = 0; j < ia.size(); ++j)
            if (!pa[j]) cp.new_methods.push_back(ma[ia[j]]);
    }

    for (auto& mp : cp.methods) {
        match_params(mp, options.tau_body);
        match_locals(mp, options.tau_body);
    }

    match_class_lists(nb, na, options, out);
}

void match_class_lists(const std::vector<const ClassDecl*>& bs,
                       const std::vector<const ClassDecl*>& as,
                       const DetectorOptions& options, Correspondence& out) {
    std::vector<bool> ub(bs.size(), false), ua(as.size(), false);
    std::vector<GreedyPair> pairs;
    for (size_t i = 0; i < bs.size(); ++i)
        for (size_t j = 0; j < as.size(); ++j) {
            if (ua[j] || bs[i]->name != as[j]->name) continue;
            pairs.push_back({i, j, 1.0});
            ub[i] = ua[j] = true;
            break;
        }
    {
        std::vector<size_t> ib, ia;
        for (size_t i = 0; i < bs.size(); ++i)
            if (!ub[i]) ib.push_back(i);
        for (size_t j = 0; j < as.size(); ++j)
            if (!ua[j]) ia.push_back(j);
        auto extra = greedy_pairs(
            ib.size(), ia.size(),
            [&](size_t i, size_t j) {
                return token_dice(content_text(*bs[ib[i]]), content_text(*as[ia[j]]));
            },
            options.tau_body);
        std::vector<bool> pb(ib.size(), false), pa(ia.size(), false);
        for (const auto& g : extra) {
            pairs.push_back({ib[g.b], ia[g.a], g.sim});
            pb[g.b] = pa[g.a] = true;
        }
        for (size_t i = 0; i < ib.size(); ++i)
            if (!pb[i]) out.gone_classes.push_back(bs[ib[i]]);
        for (size_t j = 0; j < ia.size(); ++j)
            if (!pa[j]) out.new_classes.push_back(as[ia[j]]);
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const GreedyPair& x, const GreedyPair& y) { return x.b < y.b; });
    for (const auto& g : pairs) {
        ClassPair cp;
        cp.before = bs[g.b];
        cp.after = as[g.a];
        cp.sim = g.sim;
        size_t slot = out.classes.size();
        out.classes.emplace_back();
        match_class_pair(cp, options, out);
        out.classes[slot] = std::move(cp);
    }
}

}  // namespace

std::vector<LocalDecl> locals_of(const MethodDecl& m) {
    std::vector<LocalDecl> out;
    if (!m.body) return out;
    walk_stmts(*m.body, [&](const Stmt& s) {
        switch (s.kind()) {
            case NodeKind::LocalVarDeclStmt: {
                const auto& d = static_cast<const LocalVarDeclStmt&>(s);
                out.push_back({d.var.get(), &d});
                break;
            }
            case NodeKind::ForEachStmt:
                out.push_back({static_cast<const ForEachStmt&>(s).var.get(), nullptr});
                break;
            case NodeKind::TryStmt: {
                const auto& t = static_cast<const TryStmt&>(s);
                for (const auto& r : t.resources) out.push_back({r.var.get(), nullptr});
                for (const auto& c : t.catches) out.push_back({c->param.get(), nullptr});
                break;
            }
            default:
                break;
        }
    });
    return out;
}

Correspondence correspond(const SourceUnit& before, const SourceUnit& after,
                          const DetectorOptions& options) {
    Correspondence out;
    std::vector<const ClassDecl*> bs, as;
    for (const auto& c : before.types) bs.push_back(c.get());
    for (const auto& c : after.types) as.push_back(c.get());
    match_class_lists(bs, as, options, out);
    return out;
}

}  // namespace refmirror::detect::internal

namespace refmirror::detect {

std::vector<EntityMatch> match_entities(const lang::SourceUnit& before,
                                        const lang::SourceUnit& after,
                                        const DetectorOptions& options) {
    auto c = internal::correspond(before, after, options);
    std::vector<EntityMatch> out;
    for (const auto& cp : c.classes) {
        out.push_back({cp.before->id, cp.after->id, EntityKind::Class, cp.sim});
        for (const auto& fp : cp.fields)
            out.push_back({fp.before->id, fp.after->id, EntityKind::Field, fp.sim});
        for (const auto& mp : cp.methods) {
            out.push_back({mp.before->id, mp.after->id, EntityKind::Method, mp.sim});
            for (const auto& pp : mp.params)
                out.push_back({pp.before->id, pp.after->id, EntityKind::Param, pp.sim});
            for (const auto& lp : mp.locals)
                out.push_back({lp.before.var->id, lp.after.var->id, EntityKind::Local, lp.sim});
        }
    }
    return out;
}

}  // namespace refmirror::detect
