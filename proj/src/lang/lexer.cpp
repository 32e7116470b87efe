#include "refmirror/lang/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

#include "refmirror/support/errors.hpp"

namespace refmirror::lang {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert",     "boolean",  "break",      "byte",      "case",    "catch",
    "char",     "class",      "const",    "continue",   "default",   "do",      "double",
    "else",     "enum",       "extends",  "final",      "finally",   "float",   "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",    "interface",
    "long",     "native",     "new",      "package",    "private",   "protected", "public",
    "return",   "short",      "static",   "strictfp",   "super",     "switch",  "synchronized",
    "this",     "throw",      "throws",   "transient",  "try",       "void",    "volatile",
    "while",    "true",       "false",    "null",
};

// Longest-first so that ">>=" wins over ">>" and ">".
const std::array<std::string_view, 36> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",  ">=",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+",
    "-",   "*",   "/",   "%",   "=",  "<",  ">",  "!",  "&",  "|",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_part(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

}  // namespace

bool is_keyword(std::string_view word) { return kKeywords.count(word) > 0; }

// "true"/"false"/"null" are literals, everything else in the keyword table
// is unusable as an identifier.
bool is_reserved_word(std::string_view word) { return kKeywords.count(word) > 0; }

bool is_valid_identifier(std::string_view word) {
    if (word.empty() || is_reserved_word(word)) return false;
    if (!ident_start(word[0])) return false;
    for (char c : word) {
        if (!ident_part(c)) return false;
    }
    return true;
}

std::vector<Token> lex(std::string_view source) {
    std::vector<Token> out;
    const int n = static_cast<int>(source.size());
    int pos = 0;
    int line = 1;

    auto make_span = [&](int start, int start_line, int end, int end_line) {
        Span s;
        s.start_offset = start;
        s.end_offset = end;
        s.start_line = start_line;
        s.end_line = end_line;
        return s;
    };

    while (pos < n) {
        char c = source[pos];
        if (c == '\n') {
            ++line;
            ++pos;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
            continue;
        }
        if (c == '/' && pos + 1 < n && source[pos + 1] == '/') {
            while (pos < n && source[pos] != '\n') ++pos;
            continue;
        }
        if (c == '/' && pos + 1 < n && source[pos + 1] == '*') {
            int start = pos;
            int start_line = line;
            pos += 2;
            bool closed = false;
            while (pos < n) {
                if (source[pos] == '\n') ++line;
                if (source[pos] == '*' && pos + 1 < n && source[pos + 1] == '/') {
                    pos += 2;
                    closed = true;
                    break;
                }
                ++pos;
            }
            if (!closed) {
                throw SyntaxError(make_span(start, start_line, pos, line), "unterminated block comment");
            }
            continue;
        }

        int start = pos;
        int start_line = line;

        if (ident_start(c)) {
            ++pos;
            while (pos < n && ident_part(source[pos])) ++pos;
            std::string text(source.substr(start, pos - start));
            Token t;
            t.kind = is_keyword(text) ? TokenKind::Keyword : TokenKind::Identifier;
            t.text = std::move(text);
            t.span = make_span(start, start_line, pos, line);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos + 1 < n && std::isdigit(static_cast<unsigned char>(source[pos + 1])))) {
            ++pos;
            while (pos < n) {
                char d = source[pos];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '_') {
                    ++pos;
                } else if ((d == '+' || d == '-') && (source[pos - 1] == 'e' || source[pos - 1] == 'E')) {
                    ++pos;  // exponent sign
                } else {
                    break;
                }
            }
            Token t;
            t.kind = TokenKind::Number;
            t.text = std::string(source.substr(start, pos - start));
            t.span = make_span(start, start_line, pos, line);
            out.push_back(std::move(t));
            continue;
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            ++pos;
            bool closed = false;
            while (pos < n) {
                char d = source[pos];
                if (d == '\\' && pos + 1 < n) {
                    pos += 2;
                    continue;
                }
                if (d == '\n') break;  // strings do not span lines in the dialect
                ++pos;
                if (d == quote) {
                    closed = true;
                    break;
                }
            }
            if (!closed) {
                throw SyntaxError(make_span(start, start_line, pos, line), "unterminated literal");
            }
            Token t;
            t.kind = quote == '"' ? TokenKind::String : TokenKind::Char;
            t.text = std::string(source.substr(start, pos - start));
            t.span = make_span(start, start_line, pos, line);
            out.push_back(std::move(t));
            continue;
        }

        bool matched = false;
        for (std::string_view op : kOperators) {
            if (source.substr(pos, op.size()) == op) {
                Token t;
                t.kind = TokenKind::Punct;
                t.text = std::string(op);
                pos += static_cast<int>(op.size());
                t.span = make_span(start, start_line, pos, line);
                out.push_back(std::move(t));
                matched = true;
                break;
            }
        }
        if (matched) continue;

        static const std::string_view punct = "(){}[];,.?:~^@";
        if (punct.find(c) != std::string_view::npos) {
            Token t;
            t.kind = TokenKind::Punct;
            t.text = std::string(1, c);
            ++pos;
            t.span = make_span(start, start_line, pos, line);
            out.push_back(std::move(t));
            continue;
        }

        throw SyntaxError(make_span(start, start_line, pos + 1, line),
                          std::string("unexpected character '") + c + "'");
    }

    Token eof;
    eof.kind = TokenKind::EndOfFile;
    eof.span = make_span(n, line, n, line);
    out.push_back(std::move(eof));
    return out;
}

}  // namespace refmirror::lang
