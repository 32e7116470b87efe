#include "refmirror/lang/parser.hpp"

#include <optional>
#include <unordered_set>

#include "refmirror/lang/binder.hpp"
#include "refmirror/lang/lexer.hpp"
#include "refmirror/lang/printer.hpp"
#include "refmirror/support/errors.hpp"

namespace refmirror::lang {

namespace {

/// Internal signal: the construct at hand is outside the dialect and the
/// caller should fall back to opaque capture.
struct ParseBacktrack {};

const std::unordered_set<std::string_view> kPrimitives = {
    "int", "long", "short", "byte", "char", "boolean", "float", "double",
};

const std::unordered_set<std::string_view> kModifierWords = {
    "public", "protected", "private",     "abstract", "static",   "final",
    "transient", "volatile", "synchronized", "native",   "strictfp", "default",
};

const std::unordered_set<std::string_view> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
};

int binary_op_precedence(const Token& t) {
    if (t.kind == TokenKind::Keyword) return t.text == "instanceof" ? 9 : 0;
    const std::string& op = t.text;
    if (op == "||") return 3;
    if (op == "&&") return 4;
    if (op == "|") return 5;
    if (op == "^") return 6;
    if (op == "&") return 7;
    if (op == "==" || op == "!=") return 8;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 9;
    if (op == "<<" || op == ">>" || op == ">>>") return 10;
    if (op == "+" || op == "-") return 11;
    if (op == "*" || op == "/" || op == "%") return 12;
    return 0;
}

class Parser {
public:
    explicit Parser(std::string_view source) : src_(source), tokens_(lex(source)) {}

    SourceUnit run() {
        SourceUnit unit;
        unit.raw_text = std::string(src_);
        unit.loc = count_loc(unit.raw_text);
        if (cur().is_keyword("package")) {
            size_t start = pos_ + 1;
            eat();
            while (!cur().is(";") && !at_eof()) eat();
            unit.package_header = slice_normalized(start, pos_ - 1);
            expect(";", "package directive");
        }
        while (cur().is_keyword("import")) {
            size_t start = pos_ + 1;
            eat();
            while (!cur().is(";") && !at_eof()) eat();
            unit.imports.push_back(slice_normalized(start, pos_ - 1));
            expect(";", "import directive");
        }
        while (!at_eof()) {
            if (cur().is(";")) {
                eat();
                continue;
            }
            unit.types.push_back(parse_class());
        }
        bind(unit);
        return unit;
    }

    ExprPtr parse_snippet() {
        if (cur().kind == TokenKind::EndOfFile) {
            throw SyntaxError(cur().span, "expected expression");
        }
        size_t start = pos_;
        try {
            auto e = parse_expr();
            if (at_eof()) return e;
        } catch (const ParseBacktrack&) {
        }
        pos_ = start;
        auto opaque = make_node<OpaqueExpr>(start);
        while (!at_eof()) eat();
        opaque->text = slice_raw(start, pos_ - 1);
        finish(*opaque, start);
        return opaque;
    }

private:
    std::string_view src_;
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    NodeId next_id_ = 1;

    // --- token plumbing ---------------------------------------------------

    const Token& peek(size_t k = 0) const {
        size_t i = pos_ + k;
        if (i >= tokens_.size()) i = tokens_.size() - 1;
        return tokens_[i];
    }

    const Token& cur() const { return peek(0); }

    bool at_eof() const { return cur().kind == TokenKind::EndOfFile; }

    const Token& eat() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }

    void expect(std::string_view text, const char* context) {
        if (!cur().is(text)) {
            throw SyntaxError(cur().span, "expected '" + std::string(text) + "' in " + context +
                                              ", found '" + cur().text + "'");
        }
        eat();
    }

    std::string expect_identifier(const char* context) {
        if (cur().kind != TokenKind::Identifier) {
            throw SyntaxError(cur().span, std::string("expected identifier in ") + context +
                                              ", found '" + cur().text + "'");
        }
        return eat().text;
    }

    std::string slice_raw(size_t first, size_t last) const {
        if (last >= tokens_.size()) last = tokens_.size() - 1;
        if (last < first) return "";
        int a = tokens_[first].span.start_offset;
        int b = tokens_[last].span.end_offset;
        return std::string(src_.substr(a, b - a));
    }

    std::string slice_normalized(size_t first, size_t last) const {
        return normalize_type(slice_raw(first, last));
    }

    template <typename T>
    std::unique_ptr<T> make_node(size_t start_index) {
        auto node = std::make_unique<T>();
        node->id = next_id_++;
        node->span = tokens_[start_index].span;
        return node;
    }

    void finish(Node& node, size_t start_index) {
        size_t end_index = pos_ == 0 ? 0 : pos_ - 1;
        if (end_index < start_index) end_index = start_index;
        const Span& a = tokens_[start_index].span;
        const Span& b = tokens_[end_index].span;
        node.span.start_offset = a.start_offset;
        node.span.start_line = a.start_line;
        node.span.end_offset = b.end_offset;
        node.span.end_line = b.end_line;
    }

    // --- speculative type scan ---------------------------------------------

    bool is_type_start(const Token& t) const {
        if (t.kind == TokenKind::Identifier) return true;
        if (t.kind == TokenKind::Keyword) {
            return t.text == "void" || kPrimitives.count(t.text) > 0;
        }
        return false;
    }

    /// Returns the index one past the last token of a type starting at i,
    /// or nullopt when no type can be read there.
    std::optional<size_t> scan_type(size_t i) const {
        if (i >= tokens_.size() || !is_type_start(tokens_[i])) return std::nullopt;
        bool primitive = tokens_[i].kind == TokenKind::Keyword;
        ++i;
        if (!primitive) {
            while (tokens_[i].is(".") && i + 1 < tokens_.size() &&
                   tokens_[i + 1].kind == TokenKind::Identifier) {
                i += 2;
            }
            if (tokens_[i].is("<")) {
                int depth = 0;
                while (i < tokens_.size()) {
                    const Token& t = tokens_[i];
                    if (t.kind == TokenKind::EndOfFile) return std::nullopt;
                    if (t.is("<")) {
                        ++depth;
                    } else if (t.is(">")) {
                        depth -= 1;
                    } else if (t.is(">>")) {
                        depth -= 2;
                    } else if (t.is(">>>")) {
                        depth -= 3;
                    } else if (t.kind == TokenKind::Identifier || t.is("?") || t.is(",") ||
                               t.is(".") || t.is("[") || t.is("]") || t.is("&") ||
                               t.is_keyword("extends") || t.is_keyword("super") ||
                               (t.kind == TokenKind::Keyword && kPrimitives.count(t.text))) {
                        // fine
                    } else {
                        return std::nullopt;
                    }
                    ++i;
                    if (depth < 0) return std::nullopt;
                    if (depth == 0) break;
                }
                if (depth_unbalanced(i)) return std::nullopt;
            }
        }
        while (tokens_[i].is("[") && tokens_[i + 1 < tokens_.size() ? i + 1 : i].is("]")) {
            i += 2;
        }
        return i;
    }

    bool depth_unbalanced(size_t i) const { return i >= tokens_.size(); }

    /// Consumes a type at the current position; SyntaxError when absent.
    std::string parse_type(const char* context) {
        auto end = scan_type(pos_);
        if (!end) {
            throw SyntaxError(cur().span,
                              std::string("expected type in ") + context + ", found '" + cur().text + "'");
        }
        size_t first = pos_;
        pos_ = *end;
        return slice_normalized(first, *end - 1);
    }

    // --- modifiers ----------------------------------------------------------

    bool at_modifier() const {
        if (cur().is("@") && peek(1).kind == TokenKind::Identifier) {
            // "default" methods aside, an annotation cannot be followed by
            // "interface" in the dialect (no annotation declarations)
            return !peek(1).is_keyword("interface");
        }
        if (cur().kind != TokenKind::Keyword) return false;
        if (!kModifierWords.count(cur().text)) return false;
        // "default" only acts as a modifier right before a member signature
        if (cur().text == "default") return is_type_start(peek(1));
        return true;
    }

    std::string parse_modifiers() {
        size_t first = pos_;
        bool any = false;
        while (at_modifier()) {
            any = true;
            if (cur().is("@")) {
                eat();  // '@'
                eat();  // name
                while (cur().is(".")) {
                    eat();
                    eat();
                }
                if (cur().is("(")) {
                    int depth = 0;
                    do {
                        if (cur().is("(")) ++depth;
                        if (cur().is(")")) --depth;
                        eat();
                    } while (depth > 0 && !at_eof());
                }
            } else {
                eat();
            }
        }
        if (!any) return "";
        return normalize_modifiers(slice_raw(first, pos_ - 1));
    }

    // --- declarations -------------------------------------------------------

    std::unique_ptr<ClassDecl> parse_class() {
        size_t start = pos_;
        std::string modifiers = parse_modifiers();
        bool is_interface = false;
        if (cur().is_keyword("interface")) {
            is_interface = true;
        } else if (!cur().is_keyword("class")) {
            throw SyntaxError(cur().span, "expected type declaration, found '" + cur().text + "'");
        }
        auto decl = make_node<ClassDecl>(start);
        decl->modifiers = std::move(modifiers);
        decl->is_interface = is_interface;
        eat();
        decl->name = expect_identifier("type declaration");
        if (!cur().is("{")) {
            size_t h = pos_;
            while (!cur().is("{") && !at_eof()) eat();
            decl->heritage = slice_normalized(h, pos_ - 1);
        }
        expect("{", "type body");
        while (!cur().is("}")) {
            if (at_eof()) {
                throw SyntaxError(cur().span, "unexpected end of input in type body");
            }
            if (cur().is(";")) {
                eat();
                continue;
            }
            parse_member(*decl);
        }
        expect("}", "type body");
        finish(*decl, start);
        return decl;
    }

    void parse_member(ClassDecl& owner) {
        size_t start = pos_;
        std::string modifiers = parse_modifiers();
        if (cur().is_keyword("class") || cur().is_keyword("interface")) {
            pos_ = start;
            ClassDecl::Member member;
            member.nested = parse_class();
            owner.members.push_back(std::move(member));
            return;
        }
        // constructor: bare class name directly followed by a parameter list
        if (cur().kind == TokenKind::Identifier && cur().text == owner.name && peek(1).is("(")) {
            auto method = make_node<MethodDecl>(start);
            method->modifiers = std::move(modifiers);
            method->name = eat().text;
            method->is_constructor = true;
            parse_method_rest(*method, start);
            ClassDecl::Member member;
            member.method = std::move(method);
            owner.members.push_back(std::move(member));
            return;
        }
        std::string type = parse_type("member declaration");
        std::string name = expect_identifier("member declaration");
        if (cur().is("(")) {
            auto method = make_node<MethodDecl>(start);
            method->modifiers = std::move(modifiers);
            method->return_type = std::move(type);
            method->name = std::move(name);
            parse_method_rest(*method, start);
            ClassDecl::Member member;
            member.method = std::move(method);
            owner.members.push_back(std::move(member));
            return;
        }
        // field declarators; "int a, b = 2;" splits into singles
        while (true) {
            auto field = make_node<FieldDecl>(start);
            field->modifiers = modifiers;
            field->type_text = type;
            field->name = name;
            while (cur().is("[") && peek(1).is("]")) {
                eat();
                eat();
                field->type_text += "[]";
            }
            if (cur().is("=")) {
                eat();
                field->init = parse_expr_or_opaque({",", ";"});
            }
            finish(*field, start);
            ClassDecl::Member member;
            member.field = std::move(field);
            owner.members.push_back(std::move(member));
            if (cur().is(",")) {
                eat();
                start = pos_;
                name = expect_identifier("field declarator");
                continue;
            }
            break;
        }
        expect(";", "field declaration");
    }

    void parse_method_rest(MethodDecl& method, size_t start) {
        expect("(", "parameter list");
        while (!cur().is(")")) {
            if (at_eof()) throw SyntaxError(cur().span, "unexpected end of input in parameter list");
            size_t pstart = pos_;
            auto param = make_node<VarDecl>(pstart);
            param->role = VarRole::Param;
            param->modifiers = parse_modifiers();
            param->type_text = parse_type("parameter");
            if (cur().is("...")) {
                eat();
                param->type_text += "...";
            }
            param->name = expect_identifier("parameter");
            while (cur().is("[") && peek(1).is("]")) {
                eat();
                eat();
                param->type_text += "[]";
            }
            finish(*param, pstart);
            method.params.push_back(std::move(param));
            if (cur().is(",")) {
                eat();
                continue;
            }
            break;
        }
        expect(")", "parameter list");
        if (cur().is_keyword("throws")) {
            eat();
            size_t t = pos_;
            while (!cur().is("{") && !cur().is(";") && !at_eof()) eat();
            method.throws_text = slice_normalized(t, pos_ - 1);
        }
        if (cur().is(";")) {
            eat();
        } else {
            method.body = parse_block();
        }
        finish(method, start);
    }

    // --- statements ----------------------------------------------------------

    BlockPtr parse_block() {
        size_t start = pos_;
        expect("{", "block");
        auto block = make_node<Block>(start);
        while (!cur().is("}")) {
            if (at_eof()) throw SyntaxError(cur().span, "unexpected end of input in block");
            parse_statement_into(block->stmts);
        }
        expect("}", "block");
        finish(*block, start);
        return block;
    }

    /// Wraps a single-statement control body in a block; "";"" gives an
    /// empty block.
    BlockPtr parse_stmt_as_block() {
        if (cur().is("{")) return parse_block();
        size_t start = pos_;
        auto block = make_node<Block>(start);
        if (cur().is(";")) {
            eat();
        } else {
            parse_statement_into(block->stmts);
        }
        finish(*block, start);
        return block;
    }

    void parse_statement_into(std::vector<StmtPtr>& out) {
        if (cur().is(";")) {
            eat();
            return;
        }
        if (cur().is("{")) {
            out.push_back(parse_block());
            return;
        }
        const Token& t = cur();
        if (t.kind == TokenKind::Keyword) {
            if (t.text == "if") {
                out.push_back(parse_if());
                return;
            }
            if (t.text == "while") {
                out.push_back(parse_while());
                return;
            }
            if (t.text == "for") {
                parse_for_into(out);
                return;
            }
            if (t.text == "return") {
                out.push_back(parse_return());
                return;
            }
            if (t.text == "throw") {
                out.push_back(parse_throw());
                return;
            }
            if (t.text == "try") {
                out.push_back(parse_try());
                return;
            }
            if (t.text == "break") {
                size_t start = pos_;
                eat();
                auto s = make_node<BreakStmt>(start);
                expect(";", "break statement");
                finish(*s, start);
                out.push_back(std::move(s));
                return;
            }
            if (t.text == "continue") {
                size_t start = pos_;
                eat();
                auto s = make_node<ContinueStmt>(start);
                expect(";", "continue statement");
                finish(*s, start);
                out.push_back(std::move(s));
                return;
            }
        }
        if (try_parse_local_decl(out)) return;
        out.push_back(parse_expr_statement());
    }

    bool looks_like_local_decl() const {
        size_t i = pos_;
        auto at_annotation = [&](size_t k) {
            return k + 1 < tokens_.size() && tokens_[k].is("@") &&
                   tokens_[k + 1].kind == TokenKind::Identifier;
        };
        while (i < tokens_.size() && (tokens_[i].is_keyword("final") || at_annotation(i))) {
            i += tokens_[i].is("@") ? 2 : 1;
        }
        auto end = scan_type(i);
        if (!end) return false;
        size_t j = *end;
        if (j >= tokens_.size() || tokens_[j].kind != TokenKind::Identifier) return false;
        size_t k = j + 1;
        while (k + 1 < tokens_.size() && tokens_[k].is("[") && tokens_[k + 1].is("]")) k += 2;
        if (k >= tokens_.size()) return false;
        return tokens_[k].is("=") || tokens_[k].is(";") || tokens_[k].is(",");
    }

    bool try_parse_local_decl(std::vector<StmtPtr>& out) {
        if (!looks_like_local_decl()) return false;
        size_t start = pos_;
        std::string modifiers = parse_modifiers();
        std::string type = parse_type("local declaration");
        std::string name = expect_identifier("local declaration");
        while (true) {
            auto stmt = make_node<LocalVarDeclStmt>(start);
            auto var = make_node<VarDecl>(start);
            var->role = VarRole::Local;
            var->modifiers = modifiers;
            var->type_text = type;
            var->name = name;
            while (cur().is("[") && peek(1).is("]")) {
                eat();
                eat();
                var->type_text += "[]";
            }
            if (cur().is("=")) {
                eat();
                stmt->init = parse_expr_or_opaque({",", ";"});
            }
            finish(*var, start);
            stmt->var = std::move(var);
            finish(*stmt, start);
            out.push_back(std::move(stmt));
            if (cur().is(",")) {
                eat();
                start = pos_;
                name = expect_identifier("local declarator");
                continue;
            }
            break;
        }
        expect(";", "local declaration");
        // widen the span of the last declarator to cover the semicolon
        finish(*out.back(), start);
        return true;
    }

    StmtPtr parse_expr_statement() {
        size_t start = pos_;
        try {
            auto expr = parse_expr();
            if (cur().is(";")) {
                auto stmt = make_node<ExprStmt>(start);
                eat();
                stmt->expr = std::move(expr);
                finish(*stmt, start);
                return stmt;
            }
        } catch (const ParseBacktrack&) {
        }
        pos_ = start;
        return opaque_statement();
    }

    /// Captures a statement outside the dialect verbatim. Ends at a
    /// depth-zero ';' (consumed, excluded from the text) or, for
    /// construct-shaped braces, right after the matching '}'.
    StmtPtr opaque_statement() {
        size_t start = pos_;
        int paren = 0, bracket = 0, brace = 0;
        bool construct_brace = false;
        bool leading_do = cur().is_keyword("do");
        std::string prev;
        while (true) {
            const Token& t = cur();
            if (t.kind == TokenKind::EndOfFile) {
                throw SyntaxError(t.span, "unterminated statement");
            }
            if (t.is(";") && paren == 0 && bracket == 0 && brace == 0) {
                break;
            }
            if (t.is("(")) ++paren;
            if (t.is(")")) --paren;
            if (t.is("[")) ++bracket;
            if (t.is("]")) --bracket;
            if (t.is("{")) {
                if (brace == 0) {
                    construct_brace = prev == ")" || prev == ":" || prev == "do" ||
                                      prev == "else" || prev == "try" || prev == "finally";
                }
                ++brace;
            }
            if (t.is("}")) {
                if (brace == 0) {
                    throw SyntaxError(t.span, "unexpected '}' in statement");
                }
                --brace;
                if (brace == 0 && construct_brace && !leading_do) {
                    eat();
                    auto stmt = make_node<ExprStmt>(start);
                    auto opaque = make_node<OpaqueExpr>(start);
                    opaque->text = slice_raw(start, pos_ - 1);
                    finish(*opaque, start);
                    stmt->expr = std::move(opaque);
                    finish(*stmt, start);
                    return stmt;
                }
            }
            if (paren < 0 || bracket < 0) {
                throw SyntaxError(t.span, "unbalanced '" + t.text + "' in statement");
            }
            prev = t.text;
            eat();
        }
        auto stmt = make_node<ExprStmt>(start);
        auto opaque = make_node<OpaqueExpr>(start);
        opaque->text = slice_raw(start, pos_ - 1);
        finish(*opaque, start);
        expect(";", "statement");
        stmt->expr = std::move(opaque);
        finish(*stmt, start);
        return stmt;
    }

    StmtPtr parse_if() {
        size_t start = pos_;
        auto stmt = make_node<IfStmt>(start);
        eat();  // if
        expect("(", "if condition");
        stmt->cond = parse_expr_or_opaque({")"});
        expect(")", "if condition");
        stmt->then_block = parse_stmt_as_block();
        if (cur().is_keyword("else")) {
            eat();
            if (cur().is_keyword("if")) {
                stmt->else_stmt = parse_if();
            } else {
                stmt->else_stmt = parse_stmt_as_block();
            }
        }
        finish(*stmt, start);
        return stmt;
    }

    StmtPtr parse_while() {
        size_t start = pos_;
        auto stmt = make_node<WhileStmt>(start);
        eat();  // while
        expect("(", "while condition");
        stmt->cond = parse_expr_or_opaque({")"});
        expect(")", "while condition");
        stmt->body = parse_stmt_as_block();
        finish(*stmt, start);
        return stmt;
    }

    void parse_for_into(std::vector<StmtPtr>& out) {
        size_t start = pos_;
        eat();  // for
        expect("(", "for header");

        // for-each: "type name : iterable"
        if (auto end = scan_type(pos_)) {
            size_t j = *end;
            if (j + 1 < tokens_.size() && tokens_[j].kind == TokenKind::Identifier &&
                tokens_[j + 1].is(":")) {
                auto stmt = make_node<ForEachStmt>(start);
                size_t vstart = pos_;
                auto var = make_node<VarDecl>(vstart);
                var->role = VarRole::ForEachVar;
                var->type_text = parse_type("for-each header");
                var->name = expect_identifier("for-each header");
                finish(*var, vstart);
                stmt->var = std::move(var);
                expect(":", "for-each header");
                stmt->iterable = parse_expr_or_opaque({")"});
                expect(")", "for-each header");
                stmt->body = parse_stmt_as_block();
                finish(*stmt, start);
                out.push_back(std::move(stmt));
                return;
            }
        }
        // leading "final" also indicates for-each in practice
        if (cur().is_keyword("final")) {
            auto stmt = make_node<ForEachStmt>(start);
            size_t vstart = pos_;
            auto var = make_node<VarDecl>(vstart);
            var->role = VarRole::ForEachVar;
            var->modifiers = "final";
            eat();
            var->type_text = parse_type("for-each header");
            var->name = expect_identifier("for-each header");
            finish(*var, vstart);
            stmt->var = std::move(var);
            expect(":", "for-each header");
            stmt->iterable = parse_expr_or_opaque({")"});
            expect(")", "for-each header");
            stmt->body = parse_stmt_as_block();
            finish(*stmt, start);
            out.push_back(std::move(stmt));
            return;
        }

        auto stmt = make_node<ForStmt>(start);
        if (!cur().is(";")) {
            std::vector<StmtPtr> init;
            if (try_parse_for_init(init)) {
                stmt->init = std::move(init.front());
            } else {
                // not a plain counted loop; capture the whole statement
                pos_ = start;
                out.push_back(opaque_statement());
                return;
            }
        } else {
            eat();
        }
        if (!cur().is(";")) {
            stmt->cond = parse_expr_or_opaque({";"});
        }
        expect(";", "for header");
        while (!cur().is(")")) {
            stmt->update.push_back(parse_expr_or_opaque({",", ")"}));
            if (cur().is(",")) {
                eat();
                continue;
            }
            break;
        }
        expect(")", "for header");
        stmt->body = parse_stmt_as_block();
        finish(*stmt, start);
        out.push_back(std::move(stmt));
    }

    /// Parses the init clause of a counted for loop, consuming the ';'.
    /// Multi-declarator inits are outside the dialect (returns false with
    /// the position reset).
    bool try_parse_for_init(std::vector<StmtPtr>& out) {
        size_t start = pos_;
        if (looks_like_local_decl()) {
            std::string modifiers = parse_modifiers();
            std::string type = parse_type("for init");
            std::string name = expect_identifier("for init");
            auto stmt = make_node<LocalVarDeclStmt>(start);
            auto var = make_node<VarDecl>(start);
            var->role = VarRole::Local;
            var->modifiers = std::move(modifiers);
            var->type_text = std::move(type);
            var->name = std::move(name);
            while (cur().is("[") && peek(1).is("]")) {
                eat();
                eat();
                var->type_text += "[]";
            }
            if (cur().is("=")) {
                eat();
                stmt->init = parse_expr_or_opaque({",", ";"});
            }
            if (cur().is(",")) {
                pos_ = start;
                return false;
            }
            finish(*var, start);
            stmt->var = std::move(var);
            finish(*stmt, start);
            expect(";", "for init");
            out.push_back(std::move(stmt));
            return true;
        }
        try {
            auto expr = parse_expr();
            if (cur().is(";")) {
                auto stmt = make_node<ExprStmt>(start);
                stmt->expr = std::move(expr);
                finish(*stmt, start);
                eat();
                out.push_back(std::move(stmt));
                return true;
            }
        } catch (const ParseBacktrack&) {
        }
        pos_ = start;
        return false;
    }

    StmtPtr parse_return() {
        size_t start = pos_;
        auto stmt = make_node<ReturnStmt>(start);
        eat();
        if (!cur().is(";")) {
            stmt->value = parse_expr_or_opaque({";"});
        }
        expect(";", "return statement");
        finish(*stmt, start);
        return stmt;
    }

    StmtPtr parse_throw() {
        size_t start = pos_;
        auto stmt = make_node<ThrowStmt>(start);
        eat();
        stmt->value = parse_expr_or_opaque({";"});
        expect(";", "throw statement");
        finish(*stmt, start);
        return stmt;
    }

    StmtPtr parse_try() {
        size_t start = pos_;
        auto stmt = make_node<TryStmt>(start);
        eat();
        if (cur().is("(")) {
            eat();
            while (!cur().is(")")) {
                if (at_eof()) throw SyntaxError(cur().span, "unexpected end of input in resources");
                TryResource res;
                size_t vstart = pos_;
                auto var = make_node<VarDecl>(vstart);
                var->role = VarRole::Resource;
                var->modifiers = parse_modifiers();
                var->type_text = parse_type("try resource");
                var->name = expect_identifier("try resource");
                finish(*var, vstart);
                expect("=", "try resource");
                res.var = std::move(var);
                res.init = parse_expr_or_opaque({";", ")"});
                stmt->resources.push_back(std::move(res));
                if (cur().is(";")) {
                    eat();
                    continue;
                }
                break;
            }
            expect(")", "resources");
        }
        stmt->body = parse_block();
        while (cur().is_keyword("catch")) {
            size_t cstart = pos_;
            auto clause = make_node<CatchClause>(cstart);
            eat();
            expect("(", "catch clause");
            size_t vstart = pos_;
            auto param = make_node<VarDecl>(vstart);
            param->role = VarRole::CatchParam;
            param->modifiers = parse_modifiers();
            // exception type, possibly a union "A | B"
            std::string type = parse_type("catch parameter");
            while (cur().is("|")) {
                eat();
                type += " | " + parse_type("catch parameter");
            }
            param->type_text = std::move(type);
            param->name = expect_identifier("catch parameter");
            finish(*param, vstart);
            clause->param = std::move(param);
            expect(")", "catch clause");
            clause->body = parse_block();
            finish(*clause, cstart);
            stmt->catches.push_back(std::move(clause));
        }
        if (cur().is_keyword("finally")) {
            eat();
            stmt->finally_block = parse_block();
        }
        if (stmt->catches.empty() && !stmt->finally_block && stmt->resources.empty()) {
            throw SyntaxError(cur().span, "try requires catch, finally or resources");
        }
        finish(*stmt, start);
        return stmt;
    }

    // --- expressions -----------------------------------------------------------

    /// Parses an expression, falling back to verbatim opaque capture that
    /// ends at one of the terminator tokens at bracket depth zero.
    ExprPtr parse_expr_or_opaque(std::initializer_list<std::string_view> terminators) {
        auto is_terminator = [&](const Token& t) {
            for (auto term : terminators) {
                if (t.is(term)) return true;
            }
            return false;
        };
        size_t start = pos_;
        try {
            auto expr = parse_expr();
            if (is_terminator(cur())) return expr;
        } catch (const ParseBacktrack&) {
        }
        pos_ = start;
        int paren = 0, bracket = 0, brace = 0;
        while (true) {
            const Token& t = cur();
            if (t.kind == TokenKind::EndOfFile) {
                throw SyntaxError(t.span, "unterminated expression");
            }
            if (paren == 0 && bracket == 0 && brace == 0 && is_terminator(t)) break;
            if (t.is("(")) ++paren;
            if (t.is(")")) --paren;
            if (t.is("[")) ++bracket;
            if (t.is("]")) --bracket;
            if (t.is("{")) ++brace;
            if (t.is("}")) --brace;
            if (paren < 0 || bracket < 0 || brace < 0) {
                throw SyntaxError(t.span, "unbalanced '" + t.text + "' in expression");
            }
            eat();
        }
        if (pos_ == start) {
            throw SyntaxError(cur().span, "expected expression");
        }
        auto opaque = make_node<OpaqueExpr>(start);
        opaque->text = slice_raw(start, pos_ - 1);
        finish(*opaque, start);
        return opaque;
    }

    ExprPtr parse_expr() { return parse_assign(); }

    ExprPtr parse_assign() {
        size_t start = pos_;
        auto lhs = parse_ternary();
        if (cur().kind == TokenKind::Punct && kAssignOps.count(cur().text)) {
            auto node = make_node<Assign>(start);
            node->op = eat().text;
            node->lhs = std::move(lhs);
            node->rhs = parse_assign();
            finish(*node, start);
            return node;
        }
        return lhs;
    }

    ExprPtr parse_ternary() {
        size_t start = pos_;
        auto cond = parse_binary(3);
        if (!cur().is("?")) return cond;
        auto node = make_node<Ternary>(start);
        eat();
        node->cond = std::move(cond);
        node->then_expr = parse_expr();
        expect(":", "conditional expression");
        node->else_expr = parse_ternary();
        finish(*node, start);
        return node;
    }

    ExprPtr parse_binary(int min_prec) {
        size_t start = pos_;
        auto lhs = parse_unary();
        while (true) {
            int prec = binary_op_precedence(cur());
            if (prec < min_prec || prec == 0) break;
            auto node = make_node<Binary>(start);
            if (cur().is_keyword("instanceof")) {
                eat();
                node->op = "instanceof";
                size_t tstart = pos_;
                auto end = scan_type(pos_);
                if (!end) throw ParseBacktrack{};
                pos_ = *end;
                auto rhs = make_node<OpaqueExpr>(tstart);
                rhs->text = slice_normalized(tstart, *end - 1);
                finish(*rhs, tstart);
                node->lhs = std::move(lhs);
                node->rhs = std::move(rhs);
            } else {
                node->op = eat().text;
                node->lhs = std::move(lhs);
                node->rhs = parse_binary(prec + 1);
            }
            finish(*node, start);
            lhs = std::move(node);
        }
        return lhs;
    }

    bool castable_operand_follows(size_t i, bool primitive) const {
        if (i >= tokens_.size()) return false;
        const Token& t = tokens_[i];
        switch (t.kind) {
            case TokenKind::Identifier:
            case TokenKind::Number:
            case TokenKind::String:
            case TokenKind::Char:
                return true;
            case TokenKind::Keyword:
                return t.text == "this" || t.text == "super" || t.text == "new" ||
                       t.text == "true" || t.text == "false" || t.text == "null";
            case TokenKind::Punct:
                if (t.text == "(" || t.text == "!" || t.text == "~") return true;
                if (primitive && (t.text == "-" || t.text == "+" || t.text == "--" || t.text == "++"))
                    return true;
                return false;
            default:
                return false;
        }
    }

    ExprPtr parse_unary() {
        const Token& t = cur();
        if (t.is("+") || t.is("-") || t.is("!") || t.is("~") || t.is("++") || t.is("--")) {
            size_t start = pos_;
            auto node = make_node<Unary>(start);
            node->op = eat().text;
            node->operand = parse_unary();
            finish(*node, start);
            return node;
        }
        if (t.is("(")) {
            if (auto end = scan_type(pos_ + 1)) {
                size_t close = *end;
                if (close < tokens_.size() && tokens_[close].is(")")) {
                    bool primitive = tokens_[pos_ + 1].kind == TokenKind::Keyword;
                    if (castable_operand_follows(close + 1, primitive)) {
                        size_t start = pos_;
                        auto node = make_node<Cast>(start);
                        eat();  // (
                        node->type_text = slice_normalized(pos_, close - 1);
                        pos_ = close;
                        eat();  // )
                        node->operand = parse_unary();
                        finish(*node, start);
                        return node;
                    }
                }
            }
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        size_t start = pos_;
        auto expr = parse_primary();
        while (true) {
            if (cur().is(".")) {
                if (peek(1).kind != TokenKind::Identifier) throw ParseBacktrack{};
                if (peek(2).is("(")) {
                    auto call = make_node<MethodCall>(start);
                    eat();
                    call->name = eat().text;
                    call->target = std::move(expr);
                    parse_args(call->args);
                    finish(*call, start);
                    expr = std::move(call);
                } else {
                    auto access = make_node<FieldAccess>(start);
                    eat();
                    access->name = eat().text;
                    access->target = std::move(expr);
                    finish(*access, start);
                    expr = std::move(access);
                }
                continue;
            }
            if (cur().is("(")) {
                if (expr->kind() == NodeKind::NameRef) {
                    auto call = make_node<MethodCall>(start);
                    call->name = static_cast<NameRef&>(*expr).name;
                    parse_args(call->args);
                    finish(*call, start);
                    expr = std::move(call);
                    continue;
                }
                if (expr->kind() == NodeKind::Literal) {
                    const std::string& text = static_cast<Literal&>(*expr).text;
                    if (text == "this" || text == "super") {
                        auto call = make_node<MethodCall>(start);
                        call->name = text;
                        parse_args(call->args);
                        finish(*call, start);
                        expr = std::move(call);
                        continue;
                    }
                }
                throw ParseBacktrack{};
            }
            if (cur().is("++") || cur().is("--")) {
                auto node = make_node<Unary>(start);
                node->op = eat().text;
                node->postfix = true;
                node->operand = std::move(expr);
                finish(*node, start);
                expr = std::move(node);
                continue;
            }
            if (cur().is("[") || cur().is("::") || cur().is("->")) throw ParseBacktrack{};
            break;
        }
        return expr;
    }

    void parse_args(std::vector<ExprPtr>& out) {
        expect("(", "argument list");
        while (!cur().is(")")) {
            if (at_eof()) throw SyntaxError(cur().span, "unexpected end of input in arguments");
            out.push_back(parse_expr_or_opaque({",", ")"}));
            if (cur().is(",")) {
                eat();
                continue;
            }
            break;
        }
        expect(")", "argument list");
    }

    ExprPtr parse_primary() {
        const Token& t = cur();
        size_t start = pos_;
        switch (t.kind) {
            case TokenKind::Number:
            case TokenKind::String:
            case TokenKind::Char: {
                auto node = make_node<Literal>(start);
                node->text = eat().text;
                finish(*node, start);
                return node;
            }
            case TokenKind::Keyword: {
                if (t.text == "true" || t.text == "false" || t.text == "null" ||
                    t.text == "this" || t.text == "super") {
                    auto node = make_node<Literal>(start);
                    node->text = eat().text;
                    finish(*node, start);
                    return node;
                }
                if (t.text == "new") {
                    eat();
                    auto end = scan_type(pos_);
                    if (!end || !tokens_[*end].is("(")) throw ParseBacktrack{};
                    auto node = make_node<ObjectCreation>(start);
                    node->type_text = slice_normalized(pos_, *end - 1);
                    pos_ = *end;
                    parse_args(node->args);
                    finish(*node, start);
                    return node;
                }
                throw ParseBacktrack{};
            }
            case TokenKind::Identifier: {
                auto node = make_node<NameRef>(start);
                node->name = eat().text;
                finish(*node, start);
                return node;
            }
            case TokenKind::Punct: {
                if (t.text == "(") {
                    eat();
                    auto inner = parse_expr_or_opaque({")"});
                    expect(")", "parenthesized expression");
                    return inner;
                }
                throw ParseBacktrack{};
            }
            default:
                throw ParseBacktrack{};
        }
    }
};

}  // namespace

SourceUnit parse(std::string_view source) {
    Parser parser(source);
    return parser.run();
}

ExprPtr parse_expression(std::string_view text) {
    Parser parser(text);
    return parser.parse_snippet();
}

}  // namespace refmirror::lang
