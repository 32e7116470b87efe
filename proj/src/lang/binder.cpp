#include "refmirror/lang/binder.hpp"

#include <map>
#include <string>
#include <vector>

#include "refmirror/support/errors.hpp"

namespace refmirror::lang {

namespace {

struct ClassInfo {
    const ClassDecl* decl = nullptr;
    ClassInfo* enclosing = nullptr;
    std::map<std::string, const FieldDecl*> fields;
    // name -> overloads
    std::map<std::string, std::vector<const MethodDecl*>> methods;
};

std::string signature_key(const MethodDecl& m) {
    std::string key = m.name + "/" + std::to_string(m.params.size());
    for (auto& p : m.params) {
        key += ":";
        key += p->type_text;
    }
    return key;
}

class Binder {
public:
    explicit Binder(SourceUnit& unit) : unit_(unit) {}

    void run() {
        for (auto& type : unit_.types) collect(*type, nullptr);
        for (auto& type : unit_.types) bind_class(*infos_of_.at(type.get()));
    }

private:
    SourceUnit& unit_;
    std::vector<std::unique_ptr<ClassInfo>> infos_;
    std::map<const ClassDecl*, ClassInfo*> infos_of_;
    std::map<std::string, std::vector<const FieldDecl*>> fields_by_name_;
    std::map<std::string, std::vector<const MethodDecl*>> methods_by_name_;
    std::map<std::string, std::vector<const ClassDecl*>> classes_by_name_;

    // innermost scopes last; each maps name -> VarDecl id
    std::vector<std::map<std::string, NodeId>> locals_;
    ClassInfo* current_ = nullptr;

    void collect(const ClassDecl& decl, ClassInfo* enclosing) {
        auto info = std::make_unique<ClassInfo>();
        info->decl = &decl;
        info->enclosing = enclosing;
        classes_by_name_[decl.name].push_back(&decl);
        std::map<std::string, const MethodDecl*> signatures;
        for (auto& m : decl.members) {
            if (m.field) {
                auto [it, inserted] = info->fields.emplace(m.field->name, m.field.get());
                if (!inserted) {
                    throw SyntaxError(m.field->span, "duplicate field '" + m.field->name + "'");
                }
                fields_by_name_[m.field->name].push_back(m.field.get());
            }
            if (m.method) {
                auto [it, inserted] = signatures.emplace(signature_key(*m.method), m.method.get());
                if (!inserted) {
                    throw SyntaxError(m.method->span,
                                      "duplicate method signature '" + m.method->name + "'");
                }
                info->methods[m.method->name].push_back(m.method.get());
                methods_by_name_[m.method->name].push_back(m.method.get());
            }
        }
        infos_of_[&decl] = info.get();
        infos_.push_back(std::move(info));
        for (auto& m : decl.members) {
            if (m.nested) collect(*m.nested, infos_of_.at(&decl));
        }
    }

    void bind_class(ClassInfo& info) {
        ClassInfo* saved = current_;
        current_ = &info;
        for (auto& m : info.decl->members) {
            if (m.field && m.field->init) bind_expr(*m.field->init);
            if (m.method) bind_method(*m.method);
            if (m.nested) bind_class(*infos_of_.at(m.nested.get()));
        }
        current_ = saved;
    }

    void bind_method(const MethodDecl& method) {
        locals_.clear();
        locals_.emplace_back();
        for (auto& p : method.params) declare(*p);
        if (method.body) bind_block(*method.body);
        locals_.clear();
    }

    void declare(const VarDecl& var) {
        for (auto& scope : locals_) {
            if (scope.count(var.name)) {
                throw SyntaxError(var.span, "variable '" + var.name + "' already in scope");
            }
        }
        locals_.back()[var.name] = var.id;
    }

    void bind_block(const Block& block) {
        locals_.emplace_back();
        for (auto& s : block.stmts) bind_stmt(*s);
        locals_.pop_back();
    }

    void bind_stmt(const Stmt& s) {
        switch (s.kind()) {
            case NodeKind::Block:
                bind_block(static_cast<const Block&>(s));
                break;
            case NodeKind::LocalVarDeclStmt: {
                auto& n = static_cast<const LocalVarDeclStmt&>(s);
                if (n.init) bind_expr(*n.init);  // before the name is visible
                declare(*n.var);
                break;
            }
            case NodeKind::ExprStmt:
                bind_expr(*static_cast<const ExprStmt&>(s).expr);
                break;
            case NodeKind::IfStmt: {
                auto& n = static_cast<const IfStmt&>(s);
                bind_expr(*n.cond);
                bind_block(*n.then_block);
                if (n.else_stmt) bind_stmt(*n.else_stmt);
                break;
            }
            case NodeKind::WhileStmt: {
                auto& n = static_cast<const WhileStmt&>(s);
                bind_expr(*n.cond);
                bind_block(*n.body);
                break;
            }
            case NodeKind::ForStmt: {
                auto& n = static_cast<const ForStmt&>(s);
                locals_.emplace_back();
                if (n.init) bind_stmt(*n.init);
                if (n.cond) bind_expr(*n.cond);
                for (auto& u : n.update) bind_expr(*u);
                bind_block(*n.body);
                locals_.pop_back();
                break;
            }
            case NodeKind::ForEachStmt: {
                auto& n = static_cast<const ForEachStmt&>(s);
                bind_expr(*n.iterable);
                locals_.emplace_back();
                declare(*n.var);
                bind_block(*n.body);
                locals_.pop_back();
                break;
            }
            case NodeKind::ReturnStmt: {
                auto& n = static_cast<const ReturnStmt&>(s);
                if (n.value) bind_expr(*n.value);
                break;
            }
            case NodeKind::ThrowStmt:
                bind_expr(*static_cast<const ThrowStmt&>(s).value);
                break;
            case NodeKind::TryStmt: {
                auto& n = static_cast<const TryStmt&>(s);
                locals_.emplace_back();
                for (auto& r : n.resources) {
                    bind_expr(*r.init);
                    declare(*r.var);
                }
                bind_block(*n.body);
                locals_.pop_back();
                for (auto& c : n.catches) {
                    locals_.emplace_back();
                    declare(*c->param);
                    bind_block(*c->body);
                    locals_.pop_back();
                }
                if (n.finally_block) bind_block(*n.finally_block);
                break;
            }
            default:
                break;
        }
    }

    void record(NodeId ref, NodeId decl) { unit_.binding_table[ref] = Binding{decl}; }

    const FieldDecl* find_field_in_chain(const std::string& name) const {
        for (ClassInfo* info = current_; info; info = info->enclosing) {
            auto it = info->fields.find(name);
            if (it != info->fields.end()) return it->second;
        }
        return nullptr;
    }

    const MethodDecl* find_method_in_chain(const std::string& name, size_t arity) const {
        for (ClassInfo* info = current_; info; info = info->enclosing) {
            auto it = info->methods.find(name);
            if (it == info->methods.end()) continue;
            for (auto* m : it->second) {
                if (m->params.size() == arity) return m;
            }
        }
        return nullptr;
    }

    const MethodDecl* find_method_unit_wide(const std::string& name, size_t arity) const {
        auto it = methods_by_name_.find(name);
        if (it == methods_by_name_.end()) return nullptr;
        const MethodDecl* found = nullptr;
        for (auto* m : it->second) {
            if (m->params.size() != arity) continue;
            if (found) return nullptr;  // ambiguous
            found = m;
        }
        return found;
    }

    const FieldDecl* find_field_unit_wide(const std::string& name) const {
        auto it = fields_by_name_.find(name);
        if (it == fields_by_name_.end() || it->second.size() != 1) return nullptr;
        return it->second.front();
    }

    void bind_expr(const Expr& e) {
        switch (e.kind()) {
            case NodeKind::NameRef: {
                auto& n = static_cast<const NameRef&>(e);
                for (auto scope = locals_.rbegin(); scope != locals_.rend(); ++scope) {
                    auto it = scope->find(n.name);
                    if (it != scope->end()) {
                        record(n.id, it->second);
                        return;
                    }
                }
                if (const FieldDecl* f = find_field_in_chain(n.name)) {
                    record(n.id, f->id);
                    return;
                }
                record(n.id, kInvalidNode);
                break;
            }
            case NodeKind::FieldAccess: {
                auto& n = static_cast<const FieldAccess&>(e);
                bind_expr(*n.target);
                bool via_this = n.target->kind() == NodeKind::Literal &&
                                static_cast<const Literal&>(*n.target).text == "this";
                const FieldDecl* f =
                    via_this ? find_field_in_chain(n.name) : find_field_unit_wide(n.name);
                record(n.id, f ? f->id : kInvalidNode);
                break;
            }
            case NodeKind::MethodCall: {
                auto& n = static_cast<const MethodCall&>(e);
                if (n.target) bind_expr(*n.target);
                for (auto& a : n.args) bind_expr(*a);
                bool via_this = !n.target || (n.target->kind() == NodeKind::Literal &&
                                              static_cast<const Literal&>(*n.target).text == "this");
                const MethodDecl* m = nullptr;
                if (via_this) m = find_method_in_chain(n.name, n.args.size());
                if (!m) m = find_method_unit_wide(n.name, n.args.size());
                record(n.id, m ? m->id : kInvalidNode);
                break;
            }
            case NodeKind::ObjectCreation: {
                auto& n = static_cast<const ObjectCreation&>(e);
                for (auto& a : n.args) bind_expr(*a);
                std::string base = n.type_text.substr(0, n.type_text.find('<'));
                auto it = classes_by_name_.find(base);
                if (it != classes_by_name_.end() && it->second.size() == 1) {
                    record(n.id, it->second.front()->id);
                } else {
                    record(n.id, kInvalidNode);
                }
                break;
            }
            case NodeKind::Unary:
                bind_expr(*static_cast<const Unary&>(e).operand);
                break;
            case NodeKind::Binary: {
                auto& n = static_cast<const Binary&>(e);
                bind_expr(*n.lhs);
                bind_expr(*n.rhs);
                break;
            }
            case NodeKind::Assign: {
                auto& n = static_cast<const Assign&>(e);
                bind_expr(*n.lhs);
                bind_expr(*n.rhs);
                break;
            }
            case NodeKind::Ternary: {
                auto& n = static_cast<const Ternary&>(e);
                bind_expr(*n.cond);
                bind_expr(*n.then_expr);
                bind_expr(*n.else_expr);
                break;
            }
            case NodeKind::Cast:
                bind_expr(*static_cast<const Cast&>(e).operand);
                break;
            default:
                break;  // literals and opaque text carry no bindings
        }
    }
};

}  // namespace

void bind(SourceUnit& unit) {
    unit.binding_table.clear();
    Binder binder(unit);
    binder.run();
}

}  // namespace refmirror::lang
