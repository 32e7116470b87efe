#include "engine_util.hpp"

#include <functional>

#include "refmirror/lang/lexer.hpp"

namespace refmirror::engine::util {

// ---- entity resolution -----------------------------------------------------

const ClassDecl& require_class(const SourceUnit& unit, const std::string& path) {
    const Node* n = find_decl(unit, path);
    if (const auto* c = dynamic_cast<const ClassDecl*>(n)) return *c;
    throw UnknownEntityError("no class at path '" + path + "'");
}

const MethodDecl& require_method(const SourceUnit& unit, const std::string& path) {
    const Node* n = find_decl(unit, path);
    if (const auto* m = dynamic_cast<const MethodDecl*>(n)) return *m;
    throw UnknownEntityError("no method at path '" + path + "'");
}

ClassDecl& require_class_mut(SourceUnit& unit, const std::string& path) {
    return const_cast<ClassDecl&>(require_class(unit, path));
}

MethodDecl& require_method_mut(SourceUnit& unit, const std::string& path) {
    return const_cast<MethodDecl&>(require_method(unit, path));
}

namespace {

bool class_owns(const ClassDecl& c, NodeId member) {
    for (const auto& m : c.members) {
        if (m.field && m.field->id == member) return true;
        if (m.method && m.method->id == member) return true;
        if (m.nested && m.nested->id == member) return true;
    }
    return false;
}

const ClassDecl* owner_in(const ClassDecl& c, NodeId member) {
    if (class_owns(c, member)) return &c;
    for (const auto& m : c.members) {
        if (!m.nested) continue;
        if (const ClassDecl* found = owner_in(*m.nested, member)) return found;
    }
    return nullptr;
}

}  // namespace

const ClassDecl* owner_class_of(const SourceUnit& unit, NodeId member) {
    for (const auto& type : unit.types) {
        if (const ClassDecl* found = owner_in(*type, member)) return found;
    }
    return nullptr;
}

std::string class_path_of(const SourceUnit& unit, const ClassDecl& c) {
    return path_of(unit, c.id);
}

const FieldDecl* field_in(const ClassDecl& c, const std::string& name) {
    for (const auto& m : c.members) {
        if (m.field && m.field->name == name) return m.field.get();
    }
    return nullptr;
}

const MethodDecl* method_in(const ClassDecl& c, const std::string& signature) {
    for (const auto& m : c.members) {
        if (m.method && method_signature(*m.method) == signature) return m.method.get();
    }
    return nullptr;
}

const VarDecl* param_named(const MethodDecl& m, const std::string& name) {
    for (const auto& p : m.params) {
        if (p->name == name) return p.get();
    }
    return nullptr;
}

std::vector<const VarDecl*> locals_named(const MethodDecl& m, const std::string& name) {
    std::vector<const VarDecl*> out;
    if (!m.body) return out;
    walk_stmts(*m.body, [&](const Stmt& s) {
        auto consider = [&](const VarDecl& v) {
            if (v.name == name) out.push_back(&v);
        };
        if (auto* d = dynamic_cast<const LocalVarDeclStmt*>(&s)) consider(*d->var);
        else if (auto* fe = dynamic_cast<const ForEachStmt*>(&s)) consider(*fe->var);
        else if (auto* t = dynamic_cast<const TryStmt*>(&s)) {
            for (const auto& r : t->resources) consider(*r.var);
            for (const auto& cc : t->catches) consider(*cc->param);
        }
    });
    return out;
}

const VarDecl* find_local(const MethodDecl& m, const std::string& name, int hint_line) {
    auto candidates = locals_named(m, name);
    if (candidates.empty()) return nullptr;
    if (candidates.size() == 1) return candidates.front();
    for (const VarDecl* v : candidates) {
        if (v->span.start_line == hint_line) return v;
    }
    return hint_line > 0 ? nullptr : candidates.front();
}

// ---- renaming --------------------------------------------------------------

void rename_refs(Node& root, const std::map<NodeId, Binding>& bindings,
                 const std::map<NodeId, std::string>& renames) {
    auto new_name_for = [&](NodeId ref) -> const std::string* {
        auto b = bindings.find(ref);
        if (b == bindings.end() || b->second.is_external()) return nullptr;
        auto r = renames.find(b->second.decl);
        return r == renames.end() ? nullptr : &r->second;
    };
    walk_exprs(root, [&](Expr& e) {
        if (auto* n = dynamic_cast<NameRef*>(&e)) {
            if (const std::string* name = new_name_for(n->id)) n->name = *name;
        } else if (auto* f = dynamic_cast<FieldAccess*>(&e)) {
            if (const std::string* name = new_name_for(f->id)) f->name = *name;
        } else if (auto* c = dynamic_cast<MethodCall*>(&e)) {
            if (const std::string* name = new_name_for(c->id)) c->name = *name;
        } else if (auto* o = dynamic_cast<ObjectCreation*>(&e)) {
            if (const std::string* name = new_name_for(o->id)) o->type_text = *name;
        }
    });
}

void rename_in_unit(SourceUnit& unit, const std::map<NodeId, std::string>& renames) {
    std::function<void(ClassDecl&)> rename_decls = [&](ClassDecl& c) {
        if (auto it = renames.find(c.id); it != renames.end()) c.name = it->second;
        for (auto& m : c.members) {
            if (m.field) {
                if (auto it = renames.find(m.field->id); it != renames.end())
                    m.field->name = it->second;
            } else if (m.method) {
                if (auto it = renames.find(m.method->id); it != renames.end())
                    m.method->name = it->second;
                for (auto& p : m.method->params) {
                    if (auto it = renames.find(p->id); it != renames.end()) p->name = it->second;
                }
                if (m.method->body) {
                    walk_stmts(*m.method->body, [&](Stmt& s) {
                        auto rename_var = [&](VarDecl& v) {
                            if (auto it = renames.find(v.id); it != renames.end())
                                v.name = it->second;
                        };
                        if (auto* d = dynamic_cast<LocalVarDeclStmt*>(&s)) rename_var(*d->var);
                        else if (auto* fe = dynamic_cast<ForEachStmt*>(&s)) rename_var(*fe->var);
                        else if (auto* t = dynamic_cast<TryStmt*>(&s)) {
                            for (auto& r : t->resources) rename_var(*r.var);
                            for (auto& cc : t->catches) rename_var(*cc->param);
                        }
                    });
                }
            } else if (m.nested) {
                rename_decls(*m.nested);
            }
        }
    };
    for (auto& type : unit.types) {
        rename_decls(*type);
        rename_refs(*type, unit.binding_table, renames);
    }
}

// ---- expression analysis ---------------------------------------------------

bool has_side_effects(const Expr& e) {
    bool found = false;
    walk_exprs(e, [&](const Expr& sub) {
        switch (sub.kind()) {
            case NodeKind::MethodCall:
            case NodeKind::ObjectCreation:
            case NodeKind::Assign:
            case NodeKind::OpaqueExpr:
                found = true;
                break;
            case NodeKind::Unary: {
                const auto& u = static_cast<const Unary&>(sub);
                if (u.op == "++" || u.op == "--") found = true;
                break;
            }
            default:
                break;
        }
    });
    return found;
}

std::vector<const Expr*> occurrences_of(const MethodDecl& m, const std::string& text) {
    std::vector<const Expr*> out;
    walk_exprs(m, [&](const Expr& e) {
        if (print_expr(e) == text) out.push_back(&e);
    });
    return out;
}

bool is_this_literal(const Expr* e) {
    const auto* lit = dynamic_cast<const Literal*>(e);
    return lit && lit->text == "this";
}

bool mentions_identifier(const std::string& text, const std::string& name) {
    try {
        for (const Token& t : lex(text)) {
            if (t.kind == TokenKind::Identifier && t.text == name) return true;
        }
        return false;
    } catch (const SyntaxError&) {
        return text.find(name) != std::string::npos;
    }
}

bool opaque_mentions_in(const MethodDecl& m, const std::string& name) {
    bool found = false;
    walk_exprs(m, [&](const Expr& e) {
        if (e.kind() != NodeKind::OpaqueExpr) return;
        if (mentions_identifier(static_cast<const OpaqueExpr&>(e).text, name)) found = true;
    });
    return found;
}

bool opaque_mentions(const SourceUnit& unit, const std::string& name) {
    bool found = false;
    for (const auto& type : unit.types) {
        walk_exprs(*type, [&](const Expr& e) {
            if (e.kind() != NodeKind::OpaqueExpr) return;
            if (mentions_identifier(static_cast<const OpaqueExpr&>(e).text, name)) found = true;
        });
    }
    return found;
}

// ---- scopes & names --------------------------------------------------------

std::set<std::string> names_in_method(const SourceUnit& unit, const MethodDecl& m) {
    std::set<std::string> names;
    for (const auto& p : m.params) names.insert(p->name);
    if (m.body) {
        walk_stmts(*m.body, [&](const Stmt& s) {
            if (auto* d = dynamic_cast<const LocalVarDeclStmt*>(&s)) names.insert(d->var->name);
            else if (auto* fe = dynamic_cast<const ForEachStmt*>(&s)) names.insert(fe->var->name);
            else if (auto* t = dynamic_cast<const TryStmt*>(&s)) {
                for (const auto& r : t->resources) names.insert(r.var->name);
                for (const auto& cc : t->catches) names.insert(cc->param->name);
            }
        });
    }
    for (const ClassDecl* c = owner_class_of(unit, m.id); c != nullptr;
         c = owner_class_of(unit, c->id)) {
        for (const auto& member : c->members) {
            if (member.field) names.insert(member.field->name);
        }
    }
    return names;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string candidate = base + "_" + std::to_string(i);
        if (!taken.count(candidate)) return candidate;
    }
}

// ---- statement ranges ------------------------------------------------------

StmtRange resolve_range(SourceUnit& unit, const std::string& method_path,
                        const std::string& block_path, size_t first, size_t count) {
    MethodDecl& m = require_method_mut(unit, method_path);
    const Block* block = resolve_block_path(m, block_path);
    if (!block) {
        throw UnknownEntityError("no block at path '" + block_path + "' in " + method_path);
    }
    if (count == 0 || first + count > block->stmts.size()) {
        throw UnknownEntityError("statement range [" + std::to_string(first) + ", +" +
                                 std::to_string(count) + ") out of bounds in " + method_path);
    }
    return {const_cast<Block*>(block), first, count};
}

std::vector<const VarDecl*> range_top_level_decls(const StmtRange& r) {
    std::vector<const VarDecl*> out;
    for (size_t i = r.first; i < r.first + r.count; ++i) {
        if (auto* d = dynamic_cast<const LocalVarDeclStmt*>(r.block->stmts[i].get()))
            out.push_back(d->var.get());
    }
    return out;
}

// ---- expression slot sites ---------------------------------------------------

namespace {

using Chain = std::vector<std::pair<Block*, size_t>>;

void scan_block(Block& b, Chain& chain, std::vector<SlotSite>& out);

void slot_tree(ExprPtr& slot, const Chain& chain, std::vector<SlotSite>& out) {
    walk_expr_slots(slot, [&](ExprPtr& s) { out.push_back({chain, &s}); });
}

void scan_stmt(Stmt& s, Chain& chain, std::vector<SlotSite>& out) {
    switch (s.kind()) {
        case NodeKind::Block:
            scan_block(static_cast<Block&>(s), chain, out);
            break;
        case NodeKind::LocalVarDeclStmt: {
            auto& n = static_cast<LocalVarDeclStmt&>(s);
            if (n.init) slot_tree(n.init, chain, out);
            break;
        }
        case NodeKind::ExprStmt:
            slot_tree(static_cast<ExprStmt&>(s).expr, chain, out);
            break;
        case NodeKind::IfStmt: {
            auto& n = static_cast<IfStmt&>(s);
            slot_tree(n.cond, chain, out);
            scan_block(*n.then_block, chain, out);
            if (n.else_stmt) scan_stmt(*n.else_stmt, chain, out);
            break;
        }
        case NodeKind::WhileStmt: {
            auto& n = static_cast<WhileStmt&>(s);
            slot_tree(n.cond, chain, out);
            scan_block(*n.body, chain, out);
            break;
        }
        case NodeKind::ForStmt: {
            auto& n = static_cast<ForStmt&>(s);
            if (n.init) {
                if (auto* d = dynamic_cast<LocalVarDeclStmt*>(n.init.get())) {
                    if (d->init) slot_tree(d->init, chain, out);
                } else if (auto* e = dynamic_cast<ExprStmt*>(n.init.get())) {
                    slot_tree(e->expr, chain, out);
                }
            }
            if (n.cond) slot_tree(n.cond, chain, out);
            for (auto& u : n.update) slot_tree(u, chain, out);
            scan_block(*n.body, chain, out);
            break;
        }
        case NodeKind::ForEachStmt: {
            auto& n = static_cast<ForEachStmt&>(s);
            slot_tree(n.iterable, chain, out);
            scan_block(*n.body, chain, out);
            break;
        }
        case NodeKind::ReturnStmt: {
            auto& n = static_cast<ReturnStmt&>(s);
            if (n.value) slot_tree(n.value, chain, out);
            break;
        }
        case NodeKind::ThrowStmt:
            slot_tree(static_cast<ThrowStmt&>(s).value, chain, out);
            break;
        case NodeKind::TryStmt: {
            auto& n = static_cast<TryStmt&>(s);
            for (auto& r : n.resources) slot_tree(r.init, chain, out);
            scan_block(*n.body, chain, out);
            for (auto& c : n.catches) scan_block(*c->body, chain, out);
            if (n.finally_block) scan_block(*n.finally_block, chain, out);
            break;
        }
        default:
            break;
    }
}

void scan_block(Block& b, Chain& chain, std::vector<SlotSite>& out) {
    for (size_t i = 0; i < b.stmts.size(); ++i) {
        chain.push_back({&b, i});
        scan_stmt(*b.stmts[i], chain, out);
        chain.pop_back();
    }
}

}  // namespace

std::vector<SlotSite> slot_sites(MethodDecl& m) {
    std::vector<SlotSite> out;
    if (!m.body) return out;
    Chain chain;
    scan_block(*m.body, chain, out);
    return out;
}

namespace {

void blocks_in_stmt(Stmt& s, const std::function<void(Block&)>& fn) {
    switch (s.kind()) {
        case NodeKind::Block:
            walk_blocks(static_cast<Block&>(s), fn);
            break;
        case NodeKind::IfStmt: {
            auto& n = static_cast<IfStmt&>(s);
            walk_blocks(*n.then_block, fn);
            if (n.else_stmt) blocks_in_stmt(*n.else_stmt, fn);
            break;
        }
        case NodeKind::WhileStmt:
            walk_blocks(*static_cast<WhileStmt&>(s).body, fn);
            break;
        case NodeKind::ForStmt:
            walk_blocks(*static_cast<ForStmt&>(s).body, fn);
            break;
        case NodeKind::ForEachStmt:
            walk_blocks(*static_cast<ForEachStmt&>(s).body, fn);
            break;
        case NodeKind::TryStmt: {
            auto& n = static_cast<TryStmt&>(s);
            walk_blocks(*n.body, fn);
            for (auto& c : n.catches) walk_blocks(*c->body, fn);
            if (n.finally_block) walk_blocks(*n.finally_block, fn);
            break;
        }
        default:
            break;
    }
}

}  // namespace

void walk_blocks(Block& root, const std::function<void(Block&)>& fn) {
    fn(root);
    for (auto& s : root.stmts) blocks_in_stmt(*s, fn);
}

std::vector<DeclStmtSite> decl_stmt_sites(MethodDecl& m, const std::string& name) {
    std::vector<DeclStmtSite> found;
    if (!m.body) return found;
    walk_blocks(*m.body, [&](Block& b) {
        for (size_t i = 0; i < b.stmts.size(); ++i) {
            if (auto* d = dynamic_cast<LocalVarDeclStmt*>(b.stmts[i].get())) {
                if (d->var->name == name) found.push_back({&b, i, d, nullptr});
            } else if (auto* f = dynamic_cast<ForStmt*>(b.stmts[i].get())) {
                auto* fd = dynamic_cast<LocalVarDeclStmt*>(f->init.get());
                if (fd && fd->var->name == name) found.push_back({&b, i, fd, f});
            }
        }
    });
    return found;
}

const DeclStmtSite* pick_decl_site(const std::vector<DeclStmtSite>& sites, int hint_line) {
    if (sites.empty()) return nullptr;
    if (sites.size() == 1) return &sites.front();
    for (const auto& s : sites) {
        if (s.stmt->var->span.start_line == hint_line) return &s;
    }
    return nullptr;
}

// ---- structural walk correspondence ----------------------------------------

std::vector<const Node*> decls_in_order(const SourceUnit& unit) {
    std::vector<const Node*> out;
    for (const auto& type : unit.types) {
        walk_nodes(*type, [&](const Node& n) {
            switch (n.kind()) {
                case NodeKind::ClassDecl:
                case NodeKind::MethodDecl:
                case NodeKind::FieldDecl:
                case NodeKind::VarDecl:
                    out.push_back(&n);
                    break;
                default:
                    break;
            }
        });
    }
    return out;
}

std::vector<int> reference_targets(const SourceUnit& unit) {
    std::map<NodeId, int> decl_index;
    auto decls = decls_in_order(unit);
    for (size_t i = 0; i < decls.size(); ++i) decl_index[decls[i]->id] = static_cast<int>(i);

    std::vector<int> out;
    for (const auto& type : unit.types) {
        walk_nodes(*type, [&](const Node& n) {
            auto b = unit.binding_table.find(n.id);
            if (b == unit.binding_table.end()) return;
            if (b->second.is_external()) {
                out.push_back(-1);
                return;
            }
            auto d = decl_index.find(b->second.decl);
            out.push_back(d == decl_index.end() ? -1 : d->second);
        });
    }
    return out;
}

// ---- misc ------------------------------------------------------------------

bool is_identifier(const std::string& s) { return lang::is_valid_identifier(s); }

void require_kind_params(const RefactoringInstance& instance) {
    using detect::RefactoringKind;
    bool ok = false;
    switch (instance.kind) {
        case RefactoringKind::RenameAttribute:
        case RefactoringKind::RenameMethod:
        case RefactoringKind::RenameParameter:
        case RefactoringKind::RenameVariable:
            ok = std::holds_alternative<detect::RenameParams>(instance.params);
            break;
        case RefactoringKind::ExtractMethod:
            ok = std::holds_alternative<detect::ExtractMethodParams>(instance.params);
            break;
        case RefactoringKind::ExtractVariable:
            ok = std::holds_alternative<detect::ExtractVariableParams>(instance.params);
            break;
        case RefactoringKind::InlineMethod:
            ok = std::holds_alternative<detect::InlineMethodParams>(instance.params);
            break;
        case RefactoringKind::InlineVariable:
            ok = std::holds_alternative<detect::InlineVariableParams>(instance.params);
            break;
        case RefactoringKind::ExtractClass:
            ok = std::holds_alternative<detect::ExtractClassParams>(instance.params);
            break;
    }
    if (!ok) {
        throw KindMismatchError("instance parameters do not match kind '" +
                                detect::kind_name(instance.kind) + "'");
    }
}

}  // namespace refmirror::engine::util
