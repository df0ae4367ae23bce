#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace csb {

// Concrete-syntax token stream for C/C++. Spans are byte offsets into the
// original text, so downstream passes (identifier renaming, span accounting)
// can splice the source without re-deriving positions.

enum class TokKind : uint8_t {
    Identifier,
    Keyword,
    Number,
    String,   // includes raw strings and prefixed literals
    CharLit,
    Punct,
    Comment,    // line or block, text includes the delimiters
    Directive,  // whole preprocessor directive incl. continuation lines
    Unknown,
};

struct Token {
    TokKind kind;
    uint32_t begin;  // byte offset, inclusive
    uint32_t end;    // byte offset, exclusive
    std::string_view text;

    bool is(TokKind k) const { return kind == k; }
    bool is_punct(std::string_view p) const { return kind == TokKind::Punct && text == p; }
};

/// Tokenize `src`. Offsets are relative to `src` plus `base_offset`
/// (nonzero when sub-lexing a directive body in place).
/// When `split_directives` is false, preprocessor directives come back as
/// single Directive tokens; pass true to lex their interiors too.
std::vector<Token> lex(std::string_view src, uint32_t base_offset = 0);

/// Tokenize the body of a Directive token (text after '#'), preserving
/// absolute offsets. `directive_begin` is the token's begin offset.
std::vector<Token> lex_directive_body(std::string_view directive_text, uint32_t directive_begin);

bool is_keyword(std::string_view word);

/// Keywords that can begin or compose a type: int, unsigned, struct, auto, ...
bool is_type_keyword(std::string_view word);

/// Declaration specifiers that may precede a type: static, const, inline, ...
bool is_decl_specifier(std::string_view word);

/// Replace comments with whitespace (newlines inside block comments are
/// kept so line structure survives). Returns new text.
std::string strip_comments(std::string_view src);

/// True if `text` is a well-formed identifier and not a keyword.
bool is_valid_identifier(std::string_view text);

}  // namespace csb
