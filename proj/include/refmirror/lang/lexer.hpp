#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "refmirror/lang/span.hpp"

namespace refmirror::lang {

enum class TokenKind {
    Identifier,
    Keyword,
    Number,
    String,
    Char,
    Punct,
    EndOfFile,
};

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text;
    Span span;

    bool is(std::string_view t) const { return text == t; }
    bool is_keyword(std::string_view t) const { return kind == TokenKind::Keyword && text == t; }
};

bool is_keyword(std::string_view word);
bool is_reserved_word(std::string_view word);
bool is_valid_identifier(std::string_view word);

/// Tokenizes the Java-subset dialect. Comments and whitespace are skipped;
/// token spans index into the original text.
std::vector<Token> lex(std::string_view source);

}  // namespace refmirror::lang
