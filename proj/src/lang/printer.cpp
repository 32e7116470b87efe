#include "refmirror/lang/printer.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "refmirror/lang/lexer.hpp"
#include "refmirror/support/errors.hpp"

namespace refmirror::lang {

namespace {

const std::string kIndentUnit = "    ";

void write_indent(std::string& out, int depth) {
    for (int i = 0; i < depth; ++i) out += kIndentUnit;
}

int binary_precedence(const std::string& op) {
    if (op == "||") return 3;
    if (op == "&&") return 4;
    if (op == "|") return 5;
    if (op == "^") return 6;
    if (op == "&") return 7;
    if (op == "==" || op == "!=") return 8;
    if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof") return 9;
    if (op == "<<" || op == ">>" || op == ">>>") return 10;
    if (op == "+" || op == "-") return 11;
    return 12;  // * / %
}

void write_expr(std::string& out, const Expr& e, int min_prec);

void write_args(std::string& out, const std::vector<ExprPtr>& args) {
    out += '(';
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        write_expr(out, *args[i], 1);
    }
    out += ')';
}

void write_expr(std::string& out, const Expr& e, int min_prec) {
    int prec = expr_precedence(e);
    bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e.kind()) {
        case NodeKind::Literal:
            out += static_cast<const Literal&>(e).text;
            break;
        case NodeKind::NameRef:
            out += static_cast<const NameRef&>(e).name;
            break;
        case NodeKind::OpaqueExpr:
            out += static_cast<const OpaqueExpr&>(e).text;
            break;
        case NodeKind::FieldAccess: {
            auto& n = static_cast<const FieldAccess&>(e);
            write_expr(out, *n.target, 14);
            out += '.';
            out += n.name;
            break;
        }
        case NodeKind::MethodCall: {
            auto& n = static_cast<const MethodCall&>(e);
            if (n.target) {
                write_expr(out, *n.target, 14);
                out += '.';
            }
            out += n.name;
            write_args(out, n.args);
            break;
        }
        case NodeKind::ObjectCreation: {
            auto& n = static_cast<const ObjectCreation&>(e);
            out += "new ";
            out += n.type_text;
            write_args(out, n.args);
            break;
        }
        case NodeKind::Cast: {
            auto& n = static_cast<const Cast&>(e);
            out += '(';
            out += n.type_text;
            out += ") ";
            write_expr(out, *n.operand, 13);
            break;
        }
        case NodeKind::Unary: {
            auto& n = static_cast<const Unary&>(e);
            if (n.postfix) {
                write_expr(out, *n.operand, 14);
                out += n.op;
            } else {
                out += n.op;
                std::string inner;
                write_expr(inner, *n.operand, 13);
                // keep "-(-x)" from fusing into a decrement token
                bool fuses = !inner.empty() && !n.op.empty() &&
                             (n.op.back() == '-' || n.op.back() == '+') &&
                             inner.front() == n.op.back();
                if (fuses) {
                    out += '(';
                    out += inner;
                    out += ')';
                } else {
                    out += inner;
                }
            }
            break;
        }
        case NodeKind::Binary: {
            auto& n = static_cast<const Binary&>(e);
            int p = binary_precedence(n.op);
            write_expr(out, *n.lhs, p);
            out += ' ';
            out += n.op;
            out += ' ';
            write_expr(out, *n.rhs, p + 1);
            break;
        }
        case NodeKind::Assign: {
            auto& n = static_cast<const Assign&>(e);
            write_expr(out, *n.lhs, 13);
            out += ' ';
            out += n.op;
            out += ' ';
            write_expr(out, *n.rhs, 1);
            break;
        }
        case NodeKind::Ternary: {
            auto& n = static_cast<const Ternary&>(e);
            write_expr(out, *n.cond, 3);
            out += " ? ";
            write_expr(out, *n.then_expr, 1);
            out += " : ";
            write_expr(out, *n.else_expr, 2);
            break;
        }
        default:
            break;
    }
    if (parens) out += ')';
}

void write_var(std::string& out, const VarDecl& v) {
    if (!v.modifiers.empty()) {
        out += v.modifiers;
        out += ' ';
    }
    out += v.type_text;
    out += ' ';
    out += v.name;
}

void write_stmt(std::string& out, const Stmt& s, int depth);

void write_block_body(std::string& out, const Block& b, int depth) {
    for (auto& s : b.stmts) write_stmt(out, *s, depth);
}

void write_braced(std::string& out, const Block& b, int depth) {
    out += "{\n";
    write_block_body(out, b, depth + 1);
    write_indent(out, depth);
    out += '}';
}

void write_local_decl_core(std::string& out, const LocalVarDeclStmt& d) {
    write_var(out, *d.var);
    if (d.init) {
        out += " = ";
        write_expr(out, *d.init, 1);
    }
}

void write_if_chain(std::string& out, const IfStmt& n, int depth) {
    out += "if (";
    write_expr(out, *n.cond, 1);
    out += ") ";
    write_braced(out, *n.then_block, depth);
    if (n.else_stmt) {
        out += " else ";
        if (n.else_stmt->kind() == NodeKind::IfStmt) {
            write_if_chain(out, static_cast<const IfStmt&>(*n.else_stmt), depth);
        } else {
            write_braced(out, static_cast<const Block&>(*n.else_stmt), depth);
        }
    }
}

void write_stmt(std::string& out, const Stmt& s, int depth) {
    write_indent(out, depth);
    switch (s.kind()) {
        case NodeKind::Block:
            write_braced(out, static_cast<const Block&>(s), depth);
            break;
        case NodeKind::LocalVarDeclStmt:
            write_local_decl_core(out, static_cast<const LocalVarDeclStmt&>(s));
            out += ';';
            break;
        case NodeKind::ExprStmt: {
            auto& n = static_cast<const ExprStmt&>(s);
            write_expr(out, *n.expr, 1);
            // a captured brace-delimited construct carries no semicolon
            bool braced = n.expr->kind() == NodeKind::OpaqueExpr &&
                          !static_cast<const OpaqueExpr&>(*n.expr).text.empty() &&
                          static_cast<const OpaqueExpr&>(*n.expr).text.back() == '}';
            if (!braced) out += ';';
            break;
        }
        case NodeKind::IfStmt:
            write_if_chain(out, static_cast<const IfStmt&>(s), depth);
            break;
        case NodeKind::WhileStmt: {
            auto& n = static_cast<const WhileStmt&>(s);
            out += "while (";
            write_expr(out, *n.cond, 1);
            out += ") ";
            write_braced(out, *n.body, depth);
            break;
        }
        case NodeKind::ForStmt: {
            auto& n = static_cast<const ForStmt&>(s);
            out += "for (";
            if (n.init) {
                if (n.init->kind() == NodeKind::LocalVarDeclStmt) {
                    write_local_decl_core(out, static_cast<const LocalVarDeclStmt&>(*n.init));
                } else {
                    write_expr(out, *static_cast<const ExprStmt&>(*n.init).expr, 1);
                }
            }
            out += ';';
            if (n.cond) {
                out += ' ';
                write_expr(out, *n.cond, 1);
            }
            out += ';';
            if (!n.update.empty()) {
                out += ' ';
                for (size_t i = 0; i < n.update.size(); ++i) {
                    if (i) out += ", ";
                    write_expr(out, *n.update[i], 1);
                }
            }
            out += ") ";
            write_braced(out, *n.body, depth);
            break;
        }
        case NodeKind::ForEachStmt: {
            auto& n = static_cast<const ForEachStmt&>(s);
            out += "for (";
            write_var(out, *n.var);
            out += " : ";
            write_expr(out, *n.iterable, 1);
            out += ") ";
            write_braced(out, *n.body, depth);
            break;
        }
        case NodeKind::ReturnStmt: {
            auto& n = static_cast<const ReturnStmt&>(s);
            out += "return";
            if (n.value) {
                out += ' ';
                write_expr(out, *n.value, 1);
            }
            out += ';';
            break;
        }
        case NodeKind::ThrowStmt: {
            auto& n = static_cast<const ThrowStmt&>(s);
            out += "throw ";
            write_expr(out, *n.value, 1);
            out += ';';
            break;
        }
        case NodeKind::TryStmt: {
            auto& n = static_cast<const TryStmt&>(s);
            out += "try ";
            if (!n.resources.empty()) {
                out += '(';
                for (size_t i = 0; i < n.resources.size(); ++i) {
                    if (i) out += "; ";
                    write_var(out, *n.resources[i].var);
                    out += " = ";
                    write_expr(out, *n.resources[i].init, 1);
                }
                out += ") ";
            }
            write_braced(out, *n.body, depth);
            for (auto& c : n.catches) {
                out += " catch (";
                write_var(out, *c->param);
                out += ") ";
                write_braced(out, *c->body, depth);
            }
            if (n.finally_block) {
                out += " finally ";
                write_braced(out, *n.finally_block, depth);
            }
            break;
        }
        case NodeKind::BreakStmt:
            out += "break;";
            break;
        case NodeKind::ContinueStmt:
            out += "continue;";
            break;
        default:
            break;
    }
    out += '\n';
}

void write_method(std::string& out, const MethodDecl& m, int depth) {
    write_indent(out, depth);
    if (!m.modifiers.empty()) {
        out += m.modifiers;
        out += ' ';
    }
    if (!m.is_constructor && !m.return_type.empty()) {
        out += m.return_type;
        out += ' ';
    }
    out += m.name;
    out += '(';
    for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ", ";
        write_var(out, *m.params[i]);
    }
    out += ')';
    if (!m.throws_text.empty()) {
        out += " throws ";
        out += m.throws_text;
    }
    if (m.body) {
        out += ' ';
        write_braced(out, *m.body, depth);
    } else {
        out += ';';
    }
    out += '\n';
}

void write_field(std::string& out, const FieldDecl& f, int depth) {
    write_indent(out, depth);
    if (!f.modifiers.empty()) {
        out += f.modifiers;
        out += ' ';
    }
    out += f.type_text;
    out += ' ';
    out += f.name;
    if (f.init) {
        out += " = ";
        write_expr(out, *f.init, 1);
    }
    out += ";\n";
}

void write_class(std::string& out, const ClassDecl& c, int depth) {
    write_indent(out, depth);
    if (!c.modifiers.empty()) {
        out += c.modifiers;
        out += ' ';
    }
    out += c.is_interface ? "interface " : "class ";
    out += c.name;
    if (!c.heritage.empty()) {
        out += ' ';
        out += c.heritage;
    }
    out += " {\n";
    bool prev_field = false;
    for (size_t i = 0; i < c.members.size(); ++i) {
        auto& m = c.members[i];
        bool is_field = m.field != nullptr;
        if (i > 0 && !(prev_field && is_field)) out += '\n';
        if (m.field) write_field(out, *m.field, depth + 1);
        if (m.method) write_method(out, *m.method, depth + 1);
        if (m.nested) write_class(out, *m.nested, depth + 1);
        prev_field = is_field;
    }
    write_indent(out, depth);
    out += "}\n";
}

}  // namespace

int expr_precedence(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Assign:
            return 1;
        case NodeKind::Ternary:
            return 2;
        case NodeKind::Binary:
            return binary_precedence(static_cast<const Binary&>(e).op);
        case NodeKind::Cast:
            return 13;
        case NodeKind::Unary:
            return static_cast<const Unary&>(e).postfix ? 14 : 13;
        case NodeKind::FieldAccess:
        case NodeKind::MethodCall:
        case NodeKind::ObjectCreation:
            return 14;
        default:
            return 15;  // literals, names, opaque text
    }
}

std::string print_unit(const SourceUnit& unit) {
    std::string out;
    if (!unit.package_header.empty()) {
        out += "package ";
        out += unit.package_header;
        out += ";\n\n";
    }
    if (!unit.imports.empty()) {
        for (auto& imp : unit.imports) {
            out += "import ";
            out += imp;
            out += ";\n";
        }
        out += '\n';
    }
    for (size_t i = 0; i < unit.types.size(); ++i) {
        if (i) out += '\n';
        write_class(out, *unit.types[i], 0);
    }
    return out;
}

std::string print_class(const ClassDecl& c) {
    std::string out;
    write_class(out, c, 0);
    return out;
}

std::string print_method(const MethodDecl& m) {
    std::string out;
    write_method(out, m, 0);
    return out;
}

std::string print_stmt(const Stmt& s) {
    std::string out;
    write_stmt(out, s, 0);
    return out;
}

std::string print_expr(const Expr& e) {
    std::string out;
    write_expr(out, e, 1);
    return out;
}

std::string normalize_type(std::string_view text) {
    std::vector<Token> tokens;
    try {
        tokens = lex(text);
    } catch (const SyntaxError&) {
        return std::string(text);
    }
    std::string out;
    std::string prev;
    for (auto& t : tokens) {
        if (t.kind == TokenKind::EndOfFile) break;
        std::string cur(t.text);
        if (!out.empty()) {
            bool no_space_after_prev = prev == "<" || prev == "(" || prev == "[" ||
                                       prev == "." || prev == "::" || prev == "@";
            bool no_space_before_cur = cur == ">" || cur == ">>" || cur == ">>>" ||
                                       cur == ")" || cur == "]" || cur == "," ||
                                       cur == "." || cur == "::" || cur == "<" ||
                                       cur == "[" || cur == "...";
            if (!no_space_after_prev && !no_space_before_cur) out += ' ';
        }
        out += cur;
        prev = cur;
    }
    return out;
}

std::string normalize_modifiers(std::string_view text) {
    static const std::array<std::string_view, 12> kOrder = {
        "public",   "protected", "private",      "abstract", "static", "final",
        "transient", "volatile",  "synchronized", "native",   "strictfp", "default"};
    std::vector<Token> tokens;
    try {
        tokens = lex(text);
    } catch (const SyntaxError&) {
        return std::string(text);
    }
    std::vector<std::string> annotations;
    std::vector<std::string> words;
    size_t i = 0;
    while (i < tokens.size() && tokens[i].kind != TokenKind::EndOfFile) {
        if (tokens[i].text == "@") {
            std::string ann = "@";
            ++i;
            if (i < tokens.size() && tokens[i].kind != TokenKind::EndOfFile) {
                ann += tokens[i].text;
                ++i;
            }
            while (i < tokens.size() && tokens[i].text == ".") {
                ann += '.';
                ++i;
                ann += tokens[i].text;
                ++i;
            }
            if (i < tokens.size() && tokens[i].text == "(") {
                int depth = 0;
                std::string prev;
                do {
                    std::string cur(tokens[i].text);
                    if (cur == "(") ++depth;
                    if (cur == ")") --depth;
                    if (!prev.empty() && prev != "(" && cur != ")" && cur != ",") ann += ' ';
                    ann += cur;
                    prev = cur;
                    ++i;
                } while (i < tokens.size() && depth > 0);
            }
            annotations.push_back(ann);
        } else {
            words.emplace_back(tokens[i].text);
            ++i;
        }
    }
    auto rank = [&](const std::string& w) -> size_t {
        for (size_t k = 0; k < kOrder.size(); ++k)
            if (w == kOrder[k]) return k;
        return kOrder.size();
    };
    std::stable_sort(words.begin(), words.end(),
                     [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
    std::string out;
    for (auto& a : annotations) {
        if (!out.empty()) out += ' ';
        out += a;
    }
    for (auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

bool same_structure(const SourceUnit& a, const SourceUnit& b) {
    return print_unit(a) == print_unit(b);
}

}  // namespace refmirror::lang
