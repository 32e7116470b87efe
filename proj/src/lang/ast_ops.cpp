#include "refmirror/lang/ast_ops.hpp"

#include <type_traits>

namespace refmirror::lang {

namespace {

template <typename T>
std::unique_ptr<T> copy_base(const T& src) {
    auto out = std::make_unique<T>();
    out->id = src.id;
    out->span = src.span;
    return out;
}

}  // namespace

ExprPtr clone_expr(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Literal: {
            auto& src = static_cast<const Literal&>(e);
            auto out = copy_base(src);
            out->text = src.text;
            return out;
        }
        case NodeKind::NameRef: {
            auto& src = static_cast<const NameRef&>(e);
            auto out = copy_base(src);
            out->name = src.name;
            return out;
        }
        case NodeKind::FieldAccess: {
            auto& src = static_cast<const FieldAccess&>(e);
            auto out = copy_base(src);
            out->target = clone_expr(*src.target);
            out->name = src.name;
            return out;
        }
        case NodeKind::MethodCall: {
            auto& src = static_cast<const MethodCall&>(e);
            auto out = copy_base(src);
            if (src.target) out->target = clone_expr(*src.target);
            out->name = src.name;
            for (auto& a : src.args) out->args.push_back(clone_expr(*a));
            return out;
        }
        case NodeKind::Unary: {
            auto& src = static_cast<const Unary&>(e);
            auto out = copy_base(src);
            out->op = src.op;
            out->postfix = src.postfix;
            out->operand = clone_expr(*src.operand);
            return out;
        }
        case NodeKind::Binary: {
            auto& src = static_cast<const Binary&>(e);
            auto out = copy_base(src);
            out->op = src.op;
            out->lhs = clone_expr(*src.lhs);
            out->rhs = clone_expr(*src.rhs);
            return out;
        }
        case NodeKind::Assign: {
            auto& src = static_cast<const Assign&>(e);
            auto out = copy_base(src);
            out->op = src.op;
            out->lhs = clone_expr(*src.lhs);
            out->rhs = clone_expr(*src.rhs);
            return out;
        }
        case NodeKind::Ternary: {
            auto& src = static_cast<const Ternary&>(e);
            auto out = copy_base(src);
            out->cond = clone_expr(*src.cond);
            out->then_expr = clone_expr(*src.then_expr);
            out->else_expr = clone_expr(*src.else_expr);
            return out;
        }
        case NodeKind::ObjectCreation: {
            auto& src = static_cast<const ObjectCreation&>(e);
            auto out = copy_base(src);
            out->type_text = src.type_text;
            for (auto& a : src.args) out->args.push_back(clone_expr(*a));
            return out;
        }
        case NodeKind::Cast: {
            auto& src = static_cast<const Cast&>(e);
            auto out = copy_base(src);
            out->type_text = src.type_text;
            out->operand = clone_expr(*src.operand);
            return out;
        }
        case NodeKind::OpaqueExpr: {
            auto& src = static_cast<const OpaqueExpr&>(e);
            auto out = copy_base(src);
            out->text = src.text;
            return out;
        }
        default:
            break;
    }
    return nullptr;
}

VarDeclPtr clone_var(const VarDecl& v) {
    auto out = copy_base(v);
    out->role = v.role;
    out->modifiers = v.modifiers;
    out->type_text = v.type_text;
    out->name = v.name;
    return out;
}

BlockPtr clone_block(const Block& b) {
    auto out = copy_base(b);
    for (auto& s : b.stmts) out->stmts.push_back(clone_stmt(*s));
    return out;
}

StmtPtr clone_stmt(const Stmt& s) {
    switch (s.kind()) {
        case NodeKind::Block:
            return clone_block(static_cast<const Block&>(s));
        case NodeKind::LocalVarDeclStmt: {
            auto& src = static_cast<const LocalVarDeclStmt&>(s);
            auto out = copy_base(src);
            out->var = clone_var(*src.var);
            if (src.init) out->init = clone_expr(*src.init);
            return out;
        }
        case NodeKind::ExprStmt: {
            auto& src = static_cast<const ExprStmt&>(s);
            auto out = copy_base(src);
            out->expr = clone_expr(*src.expr);
            return out;
        }
        case NodeKind::IfStmt: {
            auto& src = static_cast<const IfStmt&>(s);
            auto out = copy_base(src);
            out->cond = clone_expr(*src.cond);
            out->then_block = clone_block(*src.then_block);
            if (src.else_stmt) out->else_stmt = clone_stmt(*src.else_stmt);
            return out;
        }
        case NodeKind::WhileStmt: {
            auto& src = static_cast<const WhileStmt&>(s);
            auto out = copy_base(src);
            out->cond = clone_expr(*src.cond);
            out->body = clone_block(*src.body);
            return out;
        }
        case NodeKind::ForStmt: {
            auto& src = static_cast<const ForStmt&>(s);
            auto out = copy_base(src);
            if (src.init) out->init = clone_stmt(*src.init);
            if (src.cond) out->cond = clone_expr(*src.cond);
            for (auto& u : src.update) out->update.push_back(clone_expr(*u));
            out->body = clone_block(*src.body);
            return out;
        }
        case NodeKind::ForEachStmt: {
            auto& src = static_cast<const ForEachStmt&>(s);
            auto out = copy_base(src);
            out->var = clone_var(*src.var);
            out->iterable = clone_expr(*src.iterable);
            out->body = clone_block(*src.body);
            return out;
        }
        case NodeKind::ReturnStmt: {
            auto& src = static_cast<const ReturnStmt&>(s);
            auto out = copy_base(src);
            if (src.value) out->value = clone_expr(*src.value);
            return out;
        }
        case NodeKind::ThrowStmt: {
            auto& src = static_cast<const ThrowStmt&>(s);
            auto out = copy_base(src);
            out->value = clone_expr(*src.value);
            return out;
        }
        case NodeKind::TryStmt: {
            auto& src = static_cast<const TryStmt&>(s);
            auto out = copy_base(src);
            for (auto& r : src.resources) {
                TryResource copy;
                copy.var = clone_var(*r.var);
                copy.init = clone_expr(*r.init);
                out->resources.push_back(std::move(copy));
            }
            out->body = clone_block(*src.body);
            for (auto& c : src.catches) {
                auto cc = copy_base(*c);
                cc->param = clone_var(*c->param);
                cc->body = clone_block(*c->body);
                out->catches.push_back(std::move(cc));
            }
            if (src.finally_block) out->finally_block = clone_block(*src.finally_block);
            return out;
        }
        case NodeKind::BreakStmt:
            return copy_base(static_cast<const BreakStmt&>(s));
        case NodeKind::ContinueStmt:
            return copy_base(static_cast<const ContinueStmt&>(s));
        default:
            break;
    }
    return nullptr;
}

std::unique_ptr<FieldDecl> clone_field(const FieldDecl& f) {
    auto out = copy_base(f);
    out->modifiers = f.modifiers;
    out->type_text = f.type_text;
    out->name = f.name;
    if (f.init) out->init = clone_expr(*f.init);
    return out;
}

std::unique_ptr<MethodDecl> clone_method(const MethodDecl& m) {
    auto out = copy_base(m);
    out->modifiers = m.modifiers;
    out->return_type = m.return_type;
    out->name = m.name;
    out->is_constructor = m.is_constructor;
    for (auto& p : m.params) out->params.push_back(clone_var(*p));
    out->throws_text = m.throws_text;
    if (m.body) out->body = clone_block(*m.body);
    return out;
}

std::unique_ptr<ClassDecl> clone_class(const ClassDecl& c) {
    auto out = copy_base(c);
    out->modifiers = c.modifiers;
    out->is_interface = c.is_interface;
    out->name = c.name;
    out->heritage = c.heritage;
    for (auto& m : c.members) {
        ClassDecl::Member member;
        if (m.field) member.field = clone_field(*m.field);
        if (m.method) member.method = clone_method(*m.method);
        if (m.nested) member.nested = clone_class(*m.nested);
        out->members.push_back(std::move(member));
    }
    return out;
}

namespace detail {

template <typename E, typename Fn>
void exprs_in_expr(E& e, const Fn& fn) {
    fn(e);
    switch (e.kind()) {
        case NodeKind::FieldAccess: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const FieldAccess, FieldAccess>&>(e);
            exprs_in_expr(*n.target, fn);
            break;
        }
        case NodeKind::MethodCall: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const MethodCall, MethodCall>&>(e);
            if (n.target) exprs_in_expr(*n.target, fn);
            for (auto& a : n.args) exprs_in_expr(*a, fn);
            break;
        }
        case NodeKind::Unary: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const Unary, Unary>&>(e);
            exprs_in_expr(*n.operand, fn);
            break;
        }
        case NodeKind::Binary: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const Binary, Binary>&>(e);
            exprs_in_expr(*n.lhs, fn);
            exprs_in_expr(*n.rhs, fn);
            break;
        }
        case NodeKind::Assign: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const Assign, Assign>&>(e);
            exprs_in_expr(*n.lhs, fn);
            exprs_in_expr(*n.rhs, fn);
            break;
        }
        case NodeKind::Ternary: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const Ternary, Ternary>&>(e);
            exprs_in_expr(*n.cond, fn);
            exprs_in_expr(*n.then_expr, fn);
            exprs_in_expr(*n.else_expr, fn);
            break;
        }
        case NodeKind::ObjectCreation: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const ObjectCreation, ObjectCreation>&>(e);
            for (auto& a : n.args) exprs_in_expr(*a, fn);
            break;
        }
        case NodeKind::Cast: {
            auto& n = static_cast<std::conditional_t<std::is_const_v<E>, const Cast, Cast>&>(e);
            exprs_in_expr(*n.operand, fn);
            break;
        }
        default:
            break;
    }
}

template <typename S, typename Fn>
void exprs_in_stmt(S& s, const Fn& fn);

template <typename B, typename Fn>
void exprs_in_block(B& b, const Fn& fn) {
    for (auto& s : b.stmts) exprs_in_stmt(*s, fn);
}

template <typename S, typename Fn>
void exprs_in_stmt(S& s, const Fn& fn) {
    using namespace std;
    switch (s.kind()) {
        case NodeKind::Block:
            exprs_in_block(static_cast<conditional_t<is_const_v<S>, const Block, Block>&>(s), fn);
            break;
        case NodeKind::LocalVarDeclStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const LocalVarDeclStmt, LocalVarDeclStmt>&>(s);
            if (n.init) exprs_in_expr(*n.init, fn);
            break;
        }
        case NodeKind::ExprStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const ExprStmt, ExprStmt>&>(s);
            exprs_in_expr(*n.expr, fn);
            break;
        }
        case NodeKind::IfStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const IfStmt, IfStmt>&>(s);
            exprs_in_expr(*n.cond, fn);
            exprs_in_block(*n.then_block, fn);
            if (n.else_stmt) exprs_in_stmt(*n.else_stmt, fn);
            break;
        }
        case NodeKind::WhileStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const WhileStmt, WhileStmt>&>(s);
            exprs_in_expr(*n.cond, fn);
            exprs_in_block(*n.body, fn);
            break;
        }
        case NodeKind::ForStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const ForStmt, ForStmt>&>(s);
            if (n.init) exprs_in_stmt(*n.init, fn);
            if (n.cond) exprs_in_expr(*n.cond, fn);
            for (auto& u : n.update) exprs_in_expr(*u, fn);
            exprs_in_block(*n.body, fn);
            break;
        }
        case NodeKind::ForEachStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const ForEachStmt, ForEachStmt>&>(s);
            exprs_in_expr(*n.iterable, fn);
            exprs_in_block(*n.body, fn);
            break;
        }
        case NodeKind::ReturnStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const ReturnStmt, ReturnStmt>&>(s);
            if (n.value) exprs_in_expr(*n.value, fn);
            break;
        }
        case NodeKind::ThrowStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const ThrowStmt, ThrowStmt>&>(s);
            exprs_in_expr(*n.value, fn);
            break;
        }
        case NodeKind::TryStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const TryStmt, TryStmt>&>(s);
            for (auto& r : n.resources) exprs_in_expr(*r.init, fn);
            exprs_in_block(*n.body, fn);
            for (auto& c : n.catches) exprs_in_block(*c->body, fn);
            if (n.finally_block) exprs_in_block(*n.finally_block, fn);
            break;
        }
        default:
            break;
    }
}

template <typename S, typename Fn>
void stmts_in_stmt(S& s, const Fn& fn);

template <typename B, typename Fn>
void stmts_in_block(B& b, const Fn& fn) {
    for (auto& s : b.stmts) {
        fn(*s);
        stmts_in_stmt(*s, fn);
    }
}

template <typename S, typename Fn>
void stmts_in_stmt(S& s, const Fn& fn) {
    using namespace std;
    switch (s.kind()) {
        case NodeKind::Block:
            stmts_in_block(static_cast<conditional_t<is_const_v<S>, const Block, Block>&>(s), fn);
            break;
        case NodeKind::IfStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const IfStmt, IfStmt>&>(s);
            stmts_in_block(*n.then_block, fn);
            if (n.else_stmt) {
                fn(*n.else_stmt);
                stmts_in_stmt(*n.else_stmt, fn);
            }
            break;
        }
        case NodeKind::WhileStmt:
            stmts_in_block(*static_cast<conditional_t<is_const_v<S>, const WhileStmt, WhileStmt>&>(s).body, fn);
            break;
        case NodeKind::ForStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const ForStmt, ForStmt>&>(s);
            if (n.init) {
                fn(*n.init);
                stmts_in_stmt(*n.init, fn);
            }
            stmts_in_block(*n.body, fn);
            break;
        }
        case NodeKind::ForEachStmt:
            stmts_in_block(*static_cast<conditional_t<is_const_v<S>, const ForEachStmt, ForEachStmt>&>(s).body, fn);
            break;
        case NodeKind::TryStmt: {
            auto& n = static_cast<conditional_t<is_const_v<S>, const TryStmt, TryStmt>&>(s);
            stmts_in_block(*n.body, fn);
            for (auto& c : n.catches) stmts_in_block(*c->body, fn);
            if (n.finally_block) stmts_in_block(*n.finally_block, fn);
            break;
        }
        default:
            break;
    }
}

}  // namespace detail

void walk_exprs(Node& root, const std::function<void(Expr&)>& fn) {
    if (auto* e = dynamic_cast<Expr*>(&root)) {
        detail::exprs_in_expr(*e, fn);
    } else if (auto* b = dynamic_cast<Block*>(&root)) {
        detail::exprs_in_block(*b, fn);
    } else if (auto* s = dynamic_cast<Stmt*>(&root)) {
        detail::exprs_in_stmt(*s, fn);
    } else if (auto* m = dynamic_cast<MethodDecl*>(&root)) {
        if (m->body) detail::exprs_in_block(*m->body, fn);
    } else if (auto* f = dynamic_cast<FieldDecl*>(&root)) {
        if (f->init) detail::exprs_in_expr(*f->init, fn);
    } else if (auto* c = dynamic_cast<ClassDecl*>(&root)) {
        for (auto& mem : c->members) {
            if (mem.field) walk_exprs(*mem.field, fn);
            if (mem.method) walk_exprs(*mem.method, fn);
            if (mem.nested) walk_exprs(*mem.nested, fn);
        }
    }
}

void walk_exprs(const Node& root, const std::function<void(const Expr&)>& fn) {
    if (auto* e = dynamic_cast<const Expr*>(&root)) {
        detail::exprs_in_expr(*e, fn);
    } else if (auto* b = dynamic_cast<const Block*>(&root)) {
        detail::exprs_in_block(*b, fn);
    } else if (auto* s = dynamic_cast<const Stmt*>(&root)) {
        detail::exprs_in_stmt(*s, fn);
    } else if (auto* m = dynamic_cast<const MethodDecl*>(&root)) {
        if (m->body) detail::exprs_in_block(*m->body, fn);
    } else if (auto* f = dynamic_cast<const FieldDecl*>(&root)) {
        if (f->init) detail::exprs_in_expr(*f->init, fn);
    } else if (auto* c = dynamic_cast<const ClassDecl*>(&root)) {
        for (auto& mem : c->members) {
            if (mem.field) walk_exprs(static_cast<const Node&>(*mem.field), fn);
            if (mem.method) walk_exprs(static_cast<const Node&>(*mem.method), fn);
            if (mem.nested) walk_exprs(static_cast<const Node&>(*mem.nested), fn);
        }
    }
}

void walk_stmts(Block& block, const std::function<void(Stmt&)>& fn) {
    detail::stmts_in_block(block, fn);
}

void walk_stmts(const Block& block, const std::function<void(const Stmt&)>& fn) {
    detail::stmts_in_block(block, fn);
}

void walk_expr_slots(ExprPtr& slot, const std::function<void(ExprPtr&)>& fn) {
    fn(slot);
    if (!slot) return;
    switch (slot->kind()) {
        case NodeKind::FieldAccess:
            walk_expr_slots(static_cast<FieldAccess&>(*slot).target, fn);
            break;
        case NodeKind::MethodCall: {
            auto& n = static_cast<MethodCall&>(*slot);
            if (n.target) walk_expr_slots(n.target, fn);
            for (auto& a : n.args) walk_expr_slots(a, fn);
            break;
        }
        case NodeKind::Unary:
            walk_expr_slots(static_cast<Unary&>(*slot).operand, fn);
            break;
        case NodeKind::Binary: {
            auto& n = static_cast<Binary&>(*slot);
            walk_expr_slots(n.lhs, fn);
            walk_expr_slots(n.rhs, fn);
            break;
        }
        case NodeKind::Assign: {
            auto& n = static_cast<Assign&>(*slot);
            walk_expr_slots(n.lhs, fn);
            walk_expr_slots(n.rhs, fn);
            break;
        }
        case NodeKind::Ternary: {
            auto& n = static_cast<Ternary&>(*slot);
            walk_expr_slots(n.cond, fn);
            walk_expr_slots(n.then_expr, fn);
            walk_expr_slots(n.else_expr, fn);
            break;
        }
        case NodeKind::ObjectCreation:
            for (auto& a : static_cast<ObjectCreation&>(*slot).args) walk_expr_slots(a, fn);
            break;
        case NodeKind::Cast:
            walk_expr_slots(static_cast<Cast&>(*slot).operand, fn);
            break;
        default:
            break;
    }
}

void walk_expr_slots(Stmt& s, const std::function<void(ExprPtr&)>& fn) {
    switch (s.kind()) {
        case NodeKind::Block:
            walk_expr_slots(static_cast<Block&>(s), fn);
            break;
        case NodeKind::LocalVarDeclStmt: {
            auto& n = static_cast<LocalVarDeclStmt&>(s);
            if (n.init) walk_expr_slots(n.init, fn);
            break;
        }
        case NodeKind::ExprStmt:
            walk_expr_slots(static_cast<ExprStmt&>(s).expr, fn);
            break;
        case NodeKind::IfStmt: {
            auto& n = static_cast<IfStmt&>(s);
            walk_expr_slots(n.cond, fn);
            walk_expr_slots(*n.then_block, fn);
            if (n.else_stmt) walk_expr_slots(*n.else_stmt, fn);
            break;
        }
        case NodeKind::WhileStmt: {
            auto& n = static_cast<WhileStmt&>(s);
            walk_expr_slots(n.cond, fn);
            walk_expr_slots(*n.body, fn);
            break;
        }
        case NodeKind::ForStmt: {
            auto& n = static_cast<ForStmt&>(s);
            if (n.init) walk_expr_slots(*n.init, fn);
            if (n.cond) walk_expr_slots(n.cond, fn);
            for (auto& u : n.update) walk_expr_slots(u, fn);
            walk_expr_slots(*n.body, fn);
            break;
        }
        case NodeKind::ForEachStmt: {
            auto& n = static_cast<ForEachStmt&>(s);
            walk_expr_slots(n.iterable, fn);
            walk_expr_slots(*n.body, fn);
            break;
        }
        case NodeKind::ReturnStmt: {
            auto& n = static_cast<ReturnStmt&>(s);
            if (n.value) walk_expr_slots(n.value, fn);
            break;
        }
        case NodeKind::ThrowStmt:
            walk_expr_slots(static_cast<ThrowStmt&>(s).value, fn);
            break;
        case NodeKind::TryStmt: {
            auto& n = static_cast<TryStmt&>(s);
            for (auto& r : n.resources) walk_expr_slots(r.init, fn);
            walk_expr_slots(*n.body, fn);
            for (auto& c : n.catches) walk_expr_slots(*c->body, fn);
            if (n.finally_block) walk_expr_slots(*n.finally_block, fn);
            break;
        }
        default:
            break;
    }
}

void walk_expr_slots(Block& b, const std::function<void(ExprPtr&)>& fn) {
    for (auto& s : b.stmts) walk_expr_slots(*s, fn);
}

void walk_expr_slots(ClassDecl& c, const std::function<void(ExprPtr&)>& fn) {
    for (auto& m : c.members) {
        if (m.field && m.field->init) walk_expr_slots(m.field->init, fn);
        if (m.method && m.method->body) walk_expr_slots(*m.method->body, fn);
        if (m.nested) walk_expr_slots(*m.nested, fn);
    }
}

void walk_nodes(const Node& root, const std::function<void(const Node&)>& fn) {
    fn(root);
    if (auto* c = dynamic_cast<const ClassDecl*>(&root)) {
        for (auto& mem : c->members) {
            if (mem.field) walk_nodes(*mem.field, fn);
            if (mem.method) walk_nodes(*mem.method, fn);
            if (mem.nested) walk_nodes(*mem.nested, fn);
        }
        return;
    }
    if (auto* m = dynamic_cast<const MethodDecl*>(&root)) {
        for (auto& p : m->params) fn(*p);
        if (m->body) walk_nodes(*m->body, fn);
        return;
    }
    if (auto* f = dynamic_cast<const FieldDecl*>(&root)) {
        if (f->init) walk_nodes(*f->init, fn);
        return;
    }
    if (auto* b = dynamic_cast<const Block*>(&root)) {
        for (auto& s : b->stmts) walk_nodes(*s, fn);
        return;
    }
    if (auto* s = dynamic_cast<const Stmt*>(&root)) {
        // visit child declarations, blocks and expressions of one statement
        switch (s->kind()) {
            case NodeKind::LocalVarDeclStmt: {
                auto& n = static_cast<const LocalVarDeclStmt&>(*s);
                fn(*n.var);
                if (n.init) walk_nodes(*n.init, fn);
                break;
            }
            case NodeKind::ExprStmt:
                walk_nodes(*static_cast<const ExprStmt&>(*s).expr, fn);
                break;
            case NodeKind::IfStmt: {
                auto& n = static_cast<const IfStmt&>(*s);
                walk_nodes(*n.cond, fn);
                walk_nodes(*n.then_block, fn);
                if (n.else_stmt) walk_nodes(*n.else_stmt, fn);
                break;
            }
            case NodeKind::WhileStmt: {
                auto& n = static_cast<const WhileStmt&>(*s);
                walk_nodes(*n.cond, fn);
                walk_nodes(*n.body, fn);
                break;
            }
            case NodeKind::ForStmt: {
                auto& n = static_cast<const ForStmt&>(*s);
                if (n.init) walk_nodes(*n.init, fn);
                if (n.cond) walk_nodes(*n.cond, fn);
                for (auto& u : n.update) walk_nodes(*u, fn);
                walk_nodes(*n.body, fn);
                break;
            }
            case NodeKind::ForEachStmt: {
                auto& n = static_cast<const ForEachStmt&>(*s);
                fn(*n.var);
                walk_nodes(*n.iterable, fn);
                walk_nodes(*n.body, fn);
                break;
            }
            case NodeKind::ReturnStmt: {
                auto& n = static_cast<const ReturnStmt&>(*s);
                if (n.value) walk_nodes(*n.value, fn);
                break;
            }
            case NodeKind::ThrowStmt:
                walk_nodes(*static_cast<const ThrowStmt&>(*s).value, fn);
                break;
            case NodeKind::TryStmt: {
                auto& n = static_cast<const TryStmt&>(*s);
                for (auto& r : n.resources) {
                    fn(*r.var);
                    walk_nodes(*r.init, fn);
                }
                walk_nodes(*n.body, fn);
                for (auto& c : n.catches) {
                    fn(*c);
                    fn(*c->param);
                    walk_nodes(*c->body, fn);
                }
                if (n.finally_block) walk_nodes(*n.finally_block, fn);
                break;
            }
            default:
                break;
        }
        return;
    }
    if (auto* e = dynamic_cast<const Expr*>(&root)) {
        detail::exprs_in_expr(*e, [&](const Expr& sub) {
            if (&sub != e) fn(sub);
        });
    }
}

}  // namespace refmirror::lang
