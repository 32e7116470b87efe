#include "refmirror/lang/paths.hpp"

#include <cctype>
#include <functional>
#include <vector>

#include "refmirror/lang/printer.hpp"

namespace refmirror::lang {

std::string method_signature(const MethodDecl& m) {
    std::string out = m.name + "(";
    for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ",";
        out += m.params[i]->type_text;
    }
    out += ")";
    return out;
}

namespace {

struct Located {
    std::vector<const ClassDecl*> class_chain;  // outermost first
    const MethodDecl* method = nullptr;
    const FieldDecl* field = nullptr;
    const VarDecl* var = nullptr;
};

bool locate_in_method(const MethodDecl& m, NodeId id, Located& out) {
    for (auto& p : m.params) {
        if (p->id == id) {
            out.method = &m;
            out.var = p.get();
            return true;
        }
    }
    bool found = false;
    std::function<void(const Block&)> scan_block;
    auto scan_var = [&](const VarDecl& v) {
        if (v.id == id) {
            out.method = &m;
            out.var = &v;
            found = true;
        }
    };
    std::function<void(const Stmt&)> scan_stmt = [&](const Stmt& s) {
        if (found) return;
        switch (s.kind()) {
            case NodeKind::Block:
                scan_block(static_cast<const Block&>(s));
                break;
            case NodeKind::LocalVarDeclStmt:
                scan_var(*static_cast<const LocalVarDeclStmt&>(s).var);
                break;
            case NodeKind::IfStmt: {
                auto& n = static_cast<const IfStmt&>(s);
                scan_block(*n.then_block);
                if (n.else_stmt) scan_stmt(*n.else_stmt);
                break;
            }
            case NodeKind::WhileStmt:
                scan_block(*static_cast<const WhileStmt&>(s).body);
                break;
            case NodeKind::ForStmt: {
                auto& n = static_cast<const ForStmt&>(s);
                if (n.init) scan_stmt(*n.init);
                scan_block(*n.body);
                break;
            }
            case NodeKind::ForEachStmt: {
                auto& n = static_cast<const ForEachStmt&>(s);
                scan_var(*n.var);
                scan_block(*n.body);
                break;
            }
            case NodeKind::TryStmt: {
                auto& n = static_cast<const TryStmt&>(s);
                for (auto& r : n.resources) scan_var(*r.var);
                scan_block(*n.body);
                for (auto& c : n.catches) {
                    scan_var(*c->param);
                    scan_block(*c->body);
                }
                if (n.finally_block) scan_block(*n.finally_block);
                break;
            }
            default:
                break;
        }
    };
    scan_block = [&](const Block& b) {
        for (auto& s : b.stmts) {
            if (found) return;
            scan_stmt(*s);
        }
    };
    if (m.body) scan_block(*m.body);
    if (found && !out.method) out.method = &m;
    return found;
}

bool locate(const ClassDecl& c, NodeId id, Located& out) {
    out.class_chain.push_back(&c);
    if (c.id == id) return true;
    for (auto& m : c.members) {
        if (m.field) {
            if (m.field->id == id) {
                out.field = m.field.get();
                return true;
            }
        }
        if (m.method) {
            if (m.method->id == id) {
                out.method = m.method.get();
                return true;
            }
            if (locate_in_method(*m.method, id, out)) return true;
        }
        if (m.nested) {
            if (locate(*m.nested, id, out)) return true;
        }
    }
    out.class_chain.pop_back();
    return false;
}

std::string chain_path(const std::vector<const ClassDecl*>& chain) {
    std::string out;
    for (auto* c : chain) {
        if (!out.empty()) out += '.';
        out += c->name;
    }
    return out;
}

/// Ordinal of a local-like declaration among same-named ones in document
/// order within the method.
int local_ordinal(const MethodDecl& m, const VarDecl& target) {
    int ordinal = -1;
    int seen = 0;
    std::function<void(const Block&)> scan_block;
    auto scan_var = [&](const VarDecl& v) {
        if (v.name != target.name) return;
        if (&v == &target) ordinal = seen;
        ++seen;
    };
    std::function<void(const Stmt&)> scan_stmt = [&](const Stmt& s) {
        switch (s.kind()) {
            case NodeKind::Block:
                scan_block(static_cast<const Block&>(s));
                break;
            case NodeKind::LocalVarDeclStmt:
                scan_var(*static_cast<const LocalVarDeclStmt&>(s).var);
                break;
            case NodeKind::IfStmt: {
                auto& n = static_cast<const IfStmt&>(s);
                scan_block(*n.then_block);
                if (n.else_stmt) scan_stmt(*n.else_stmt);
                break;
            }
            case NodeKind::WhileStmt:
                scan_block(*static_cast<const WhileStmt&>(s).body);
                break;
            case NodeKind::ForStmt: {
                auto& n = static_cast<const ForStmt&>(s);
                if (n.init) scan_stmt(*n.init);
                scan_block(*n.body);
                break;
            }
            case NodeKind::ForEachStmt: {
                auto& n = static_cast<const ForEachStmt&>(s);
                scan_var(*n.var);
                scan_block(*n.body);
                break;
            }
            case NodeKind::TryStmt: {
                auto& n = static_cast<const TryStmt&>(s);
                for (auto& r : n.resources) scan_var(*r.var);
                scan_block(*n.body);
                for (auto& c : n.catches) {
                    scan_var(*c->param);
                    scan_block(*c->body);
                }
                if (n.finally_block) scan_block(*n.finally_block);
                break;
            }
            default:
                break;
        }
    };
    scan_block = [&](const Block& b) {
        for (auto& s : b.stmts) scan_stmt(*s);
    };
    if (m.body) scan_block(*m.body);
    return ordinal;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

const ClassDecl* find_class(const SourceUnit& unit, const std::string& dotted) {
    auto names = split(dotted, '.');
    const ClassDecl* cur = nullptr;
    for (size_t i = 0; i < names.size(); ++i) {
        const ClassDecl* next = nullptr;
        if (i == 0) {
            for (auto& c : unit.types) {
                if (c->name == names[i]) {
                    next = c.get();
                    break;
                }
            }
        } else {
            for (auto& m : cur->members) {
                if (m.nested && m.nested->name == names[i]) {
                    next = m.nested.get();
                    break;
                }
            }
        }
        if (!next) return nullptr;
        cur = next;
    }
    return cur;
}

/// Splits "method(T1,T2)/p0" into signature and trailing var selector.
void split_member(const std::string& text, std::string& member, std::string& selector) {
    int depth = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '/' && depth == 0) {
            member = text.substr(0, i);
            selector = text.substr(i + 1);
            return;
        }
    }
    member = text;
    selector.clear();
}

const MethodDecl* find_method(const ClassDecl& c, const std::string& signature) {
    for (auto& m : c.members) {
        if (m.method && method_signature(*m.method) == signature) return m.method.get();
    }
    return nullptr;
}

const VarDecl* find_local(const MethodDecl& m, const std::string& name, int wanted) {
    const VarDecl* found = nullptr;
    int seen = 0;
    std::function<void(const Block&)> scan_block;
    auto scan_var = [&](const VarDecl& v) {
        if (v.name != name) return;
        if (seen == wanted) found = &v;
        ++seen;
    };
    std::function<void(const Stmt&)> scan_stmt = [&](const Stmt& s) {
        switch (s.kind()) {
            case NodeKind::Block:
                scan_block(static_cast<const Block&>(s));
                break;
            case NodeKind::LocalVarDeclStmt:
                scan_var(*static_cast<const LocalVarDeclStmt&>(s).var);
                break;
            case NodeKind::IfStmt: {
                auto& n = static_cast<const IfStmt&>(s);
                scan_block(*n.then_block);
                if (n.else_stmt) scan_stmt(*n.else_stmt);
                break;
            }
            case NodeKind::WhileStmt:
                scan_block(*static_cast<const WhileStmt&>(s).body);
                break;
            case NodeKind::ForStmt: {
                auto& n = static_cast<const ForStmt&>(s);
                if (n.init) scan_stmt(*n.init);
                scan_block(*n.body);
                break;
            }
            case NodeKind::ForEachStmt: {
                auto& n = static_cast<const ForEachStmt&>(s);
                scan_var(*n.var);
                scan_block(*n.body);
                break;
            }
            case NodeKind::TryStmt: {
                auto& n = static_cast<const TryStmt&>(s);
                for (auto& r : n.resources) scan_var(*r.var);
                scan_block(*n.body);
                for (auto& c : n.catches) {
                    scan_var(*c->param);
                    scan_block(*c->body);
                }
                if (n.finally_block) scan_block(*n.finally_block);
                break;
            }
            default:
                break;
        }
    };
    scan_block = [&](const Block& b) {
        for (auto& s : b.stmts) scan_stmt(*s);
    };
    if (m.body) scan_block(*m.body);
    return found;
}

}  // namespace

std::string path_of(const SourceUnit& unit, NodeId decl) {
    Located loc;
    bool hit = false;
    for (auto& type : unit.types) {
        loc = Located{};
        if (locate(*type, decl, loc)) {
            hit = true;
            break;
        }
    }
    if (!hit) return "";
    std::string base = chain_path(loc.class_chain);
    if (loc.var) {
        std::string path = base + "#" + method_signature(*loc.method);
        if (loc.var->role == VarRole::Param) {
            for (size_t i = 0; i < loc.method->params.size(); ++i) {
                if (loc.method->params[i].get() == loc.var) {
                    return path + "/p" + std::to_string(i);
                }
            }
            return "";
        }
        int ordinal = local_ordinal(*loc.method, *loc.var);
        if (ordinal < 0) return "";
        return path + "/local:" + loc.var->name + ":" + std::to_string(ordinal);
    }
    if (loc.method) return base + "#" + method_signature(*loc.method);
    if (loc.field) return base + "#" + loc.field->name;
    return base;
}

const Node* find_decl(const SourceUnit& unit, const std::string& path) {
    auto hash = path.find('#');
    if (hash == std::string::npos) {
        return find_class(unit, path);
    }
    const ClassDecl* owner = find_class(unit, path.substr(0, hash));
    if (!owner) return nullptr;
    std::string member, selector;
    split_member(path.substr(hash + 1), member, selector);
    if (member.find('(') == std::string::npos) {
        for (auto& m : owner->members) {
            if (m.field && m.field->name == member) return m.field.get();
        }
        return nullptr;
    }
    const MethodDecl* method = find_method(*owner, member);
    if (!method || selector.empty()) return method;
    if (selector.size() > 1 && selector[0] == 'p') {
        size_t index = std::stoul(selector.substr(1));
        if (index >= method->params.size()) return nullptr;
        return method->params[index].get();
    }
    if (selector.rfind("local:", 0) == 0) {
        auto parts = split(selector.substr(6), ':');
        if (parts.size() != 2) return nullptr;
        return find_local(*method, parts[0], std::stoi(parts[1]));
    }
    return nullptr;
}

const Block* resolve_block_path(const MethodDecl& method, const std::string& path) {
    const Block* block = method.body.get();
    if (!block) return nullptr;
    if (path.empty()) return block;
    for (auto& step : split(path, '/')) {
        size_t i = 0;
        while (i < step.size() && std::isdigit(static_cast<unsigned char>(step[i]))) ++i;
        if (i == 0) return nullptr;
        size_t index = std::stoul(step.substr(0, i));
        if (index >= block->stmts.size()) return nullptr;
        const Node* node = block->stmts[index].get();
        while (i < step.size()) {
            char sel = step[i++];
            switch (sel) {
                case 't': {
                    if (node->kind() != NodeKind::IfStmt) return nullptr;
                    node = static_cast<const IfStmt*>(node)->then_block.get();
                    break;
                }
                case 'e': {
                    if (node->kind() != NodeKind::IfStmt) return nullptr;
                    node = static_cast<const IfStmt*>(node)->else_stmt.get();
                    if (!node) return nullptr;
                    break;
                }
                case 'd': {
                    if (node->kind() == NodeKind::WhileStmt) {
                        node = static_cast<const WhileStmt*>(node)->body.get();
                    } else if (node->kind() == NodeKind::ForStmt) {
                        node = static_cast<const ForStmt*>(node)->body.get();
                    } else if (node->kind() == NodeKind::ForEachStmt) {
                        node = static_cast<const ForEachStmt*>(node)->body.get();
                    } else {
                        return nullptr;
                    }
                    break;
                }
                case 'y': {
                    if (node->kind() != NodeKind::TryStmt) return nullptr;
                    node = static_cast<const TryStmt*>(node)->body.get();
                    break;
                }
                case 'c': {
                    if (node->kind() != NodeKind::TryStmt) return nullptr;
                    size_t k = 0;
                    size_t j = i;
                    while (j < step.size() && std::isdigit(static_cast<unsigned char>(step[j]))) ++j;
                    if (j == i) return nullptr;
                    k = std::stoul(step.substr(i, j - i));
                    i = j;
                    auto& catches = static_cast<const TryStmt*>(node)->catches;
                    if (k >= catches.size()) return nullptr;
                    node = catches[k]->body.get();
                    break;
                }
                case 'f': {
                    if (node->kind() != NodeKind::TryStmt) return nullptr;
                    node = static_cast<const TryStmt*>(node)->finally_block.get();
                    if (!node) return nullptr;
                    break;
                }
                default:
                    return nullptr;
            }
        }
        if (node->kind() != NodeKind::Block) return nullptr;
        block = static_cast<const Block*>(node);
    }
    return block;
}

namespace {

bool block_path_search(const Block& cur, const Block& target, std::string& out,
                       const std::string& prefix) {
    if (&cur == &target) {
        out = prefix;
        if (!out.empty() && out.back() == '/') out.pop_back();
        return true;
    }
    for (size_t i = 0; i < cur.stmts.size(); ++i) {
        const Stmt& s = *cur.stmts[i];
        std::string base = prefix + std::to_string(i);
        switch (s.kind()) {
            case NodeKind::Block:
                // bare nested block: selector-free, treat as "<i>" step
                if (block_path_search(static_cast<const Block&>(s), target, out, base + "/"))
                    return true;
                break;
            case NodeKind::IfStmt: {
                auto& n = static_cast<const IfStmt&>(s);
                if (block_path_search(*n.then_block, target, out, base + "t/")) return true;
                const Stmt* e = n.else_stmt.get();
                std::string sel = base + "e";
                while (e) {
                    if (e->kind() == NodeKind::Block) {
                        if (block_path_search(static_cast<const Block&>(*e), target, out, sel + "/"))
                            return true;
                        break;
                    }
                    auto& nested = static_cast<const IfStmt&>(*e);
                    if (block_path_search(*nested.then_block, target, out, sel + "t/")) return true;
                    e = nested.else_stmt.get();
                    sel += "e";
                }
                break;
            }
            case NodeKind::WhileStmt:
                if (block_path_search(*static_cast<const WhileStmt&>(s).body, target, out,
                                      base + "d/"))
                    return true;
                break;
            case NodeKind::ForStmt:
                if (block_path_search(*static_cast<const ForStmt&>(s).body, target, out, base + "d/"))
                    return true;
                break;
            case NodeKind::ForEachStmt:
                if (block_path_search(*static_cast<const ForEachStmt&>(s).body, target, out,
                                      base + "d/"))
                    return true;
                break;
            case NodeKind::TryStmt: {
                auto& n = static_cast<const TryStmt&>(s);
                if (block_path_search(*n.body, target, out, base + "y/")) return true;
                for (size_t k = 0; k < n.catches.size(); ++k) {
                    if (block_path_search(*n.catches[k]->body, target, out,
                                          base + "c" + std::to_string(k) + "/"))
                        return true;
                }
                if (n.finally_block &&
                    block_path_search(*n.finally_block, target, out, base + "f/"))
                    return true;
                break;
            }
            default:
                break;
        }
    }
    return false;
}

}  // namespace

bool block_path_of(const MethodDecl& method, const Block& target, std::string& out) {
    if (!method.body) return false;
    if (method.body.get() == &target) {
        out.clear();
        return true;
    }
    return block_path_search(*method.body, target, out, "");
}

}  // namespace refmirror::lang
