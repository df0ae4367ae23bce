#include "csb/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace csb {

namespace {

const std::unordered_set<std::string_view>& keyword_set() {
    // C++20 keywords plus C-only ones; `string` etc. are identifiers.
    static const std::unordered_set<std::string_view> kw = {
        "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool",
        "break", "case", "catch", "char", "char8_t", "char16_t", "char32_t", "class",
        "compl", "concept", "const", "consteval", "constexpr", "constinit", "const_cast",
        "continue", "co_await", "co_return", "co_yield", "decltype", "default", "delete",
        "do", "double", "dynamic_cast", "else", "enum", "explicit", "export", "extern",
        "false", "float", "for", "friend", "goto", "if", "inline", "int", "long",
        "mutable", "namespace", "new", "noexcept", "not", "not_eq", "nullptr", "operator",
        "or", "or_eq", "private", "protected", "public", "register", "reinterpret_cast",
        "requires", "return", "short", "signed", "sizeof", "static", "static_assert",
        "static_cast", "struct", "switch", "template", "this", "thread_local", "throw",
        "true", "try", "typedef", "typeid", "typename", "union", "unsigned", "using",
        "virtual", "void", "volatile", "wchar_t", "while", "xor", "xor_eq",
        // C-only
        "restrict", "_Bool", "_Complex", "_Imaginary", "_Atomic", "_Noreturn",
        "_Static_assert", "_Alignas", "_Alignof", "_Thread_local", "_Generic",
    };
    return kw;
}

const std::unordered_set<std::string_view>& type_keyword_set() {
    static const std::unordered_set<std::string_view> kw = {
        "void", "bool", "char", "char8_t", "char16_t", "char32_t", "wchar_t", "short",
        "int", "long", "float", "double", "signed", "unsigned", "auto", "struct",
        "class", "union", "enum", "decltype", "_Bool", "_Complex",
    };
    return kw;
}

const std::unordered_set<std::string_view>& decl_specifier_set() {
    static const std::unordered_set<std::string_view> kw = {
        "static", "extern", "inline", "const", "constexpr", "consteval", "constinit",
        "volatile", "mutable", "register", "thread_local", "typename", "restrict",
        "_Atomic", "_Noreturn", "_Thread_local", "virtual", "explicit", "friend",
    };
    return kw;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Multi-char punctuation, longest first within each leading char.
constexpr std::array<std::string_view, 37> multi_punct = {
    "<<=", ">>=", "<=>", "...", "->*", "::", "->", "++", "--", "<<", ">>", "<=", ">=",
    "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "^=", "&=", "|=", "##", ".*",
    "<:", ":>", "<%", "%>", "%:", "+", "-", "*", "/", "%",
};

struct Cursor {
    std::string_view src;
    size_t pos = 0;

    bool done() const { return pos >= src.size(); }
    char peek(size_t ahead = 0) const { return pos + ahead < src.size() ? src[pos + ahead] : '\0'; }
};

size_t scan_string(const Cursor& c, char quote) {
    // c.pos is at the opening quote; returns length including quotes.
    size_t i = c.pos + 1;
    while (i < c.src.size()) {
        char ch = c.src[i];
        if (ch == '\\' && i + 1 < c.src.size()) {
            i += 2;
            continue;
        }
        if (ch == quote || ch == '\n') return i - c.pos + (ch == quote ? 1 : 0);
        ++i;
    }
    return i - c.pos;
}

size_t scan_raw_string(const Cursor& c) {
    // c.pos at 'R', next is '"'. Form: R"delim( ... )delim"
    size_t i = c.pos + 2;
    std::string delim;
    while (i < c.src.size() && c.src[i] != '(' && delim.size() <= 16) delim += c.src[i++];
    if (i >= c.src.size() || c.src[i] != '(') return 2;  // malformed, treat as R + quote
    std::string close = ")" + delim + "\"";
    size_t end = c.src.find(close, i + 1);
    if (end == std::string_view::npos) return c.src.size() - c.pos;
    return end + close.size() - c.pos;
}

size_t scan_number(const Cursor& c) {
    // pp-number: digits, idents, '.', digit separators, exponent signs.
    size_t i = c.pos;
    while (i < c.src.size()) {
        char ch = c.src[i];
        if (ident_cont(ch) || ch == '.' || ch == '\'') {
            if ((ch == 'e' || ch == 'E' || ch == 'p' || ch == 'P') && i + 1 < c.src.size()
                && (c.src[i + 1] == '+' || c.src[i + 1] == '-')) {
                i += 2;
                continue;
            }
            ++i;
            continue;
        }
        break;
    }
    return i - c.pos;
}

size_t scan_directive(const Cursor& c) {
    // c.pos at '#'. Directive spans to end of line, honoring '\'-continuations
    // and not terminating inside comments or strings.
    size_t i = c.pos;
    while (i < c.src.size()) {
        char ch = c.src[i];
        if (ch == '\\') {
            size_t j = i + 1;
            if (j < c.src.size() && c.src[j] == '\r') ++j;
            if (j < c.src.size() && c.src[j] == '\n') {
                i = j + 1;
                continue;
            }
            ++i;
            continue;
        }
        if (ch == '\n') return i - c.pos;
        if (ch == '/' && i + 1 < c.src.size() && c.src[i + 1] == '*') {
            size_t end = c.src.find("*/", i + 2);
            i = end == std::string_view::npos ? c.src.size() : end + 2;
            continue;
        }
        if (ch == '/' && i + 1 < c.src.size() && c.src[i + 1] == '/') {
            size_t end = c.src.find('\n', i);
            return (end == std::string_view::npos ? c.src.size() : end) - c.pos;
        }
        if (ch == '"' || ch == '\'') {
            Cursor sub{c.src, i};
            i += scan_string(sub, ch);
            continue;
        }
        ++i;
    }
    return i - c.pos;
}

bool string_prefix_at(std::string_view src, size_t pos, size_t& prefix_len, bool& raw) {
    // Recognize L"", u"", U"", u8"", R"", LR"", u8R"", etc.
    raw = false;
    size_t i = pos;
    if (i < src.size() && (src[i] == 'L' || src[i] == 'u' || src[i] == 'U')) {
        ++i;
        if (i < src.size() && src[i] == '8') ++i;
    }
    if (i < src.size() && src[i] == 'R') {
        if (i + 1 < src.size() && src[i + 1] == '"') {
            raw = true;
            prefix_len = i - pos;
            return true;
        }
        return false;
    }
    if (i > pos && i < src.size() && (src[i] == '"' || src[i] == '\'')) {
        prefix_len = i - pos;
        return true;
    }
    return false;
}

}  // namespace

bool is_keyword(std::string_view word) { return keyword_set().count(word) > 0; }
bool is_type_keyword(std::string_view word) { return type_keyword_set().count(word) > 0; }
bool is_decl_specifier(std::string_view word) { return decl_specifier_set().count(word) > 0; }

bool is_valid_identifier(std::string_view text) {
    if (text.empty() || !ident_start(text[0])) return false;
    for (char c : text) {
        if (!ident_cont(c)) return false;
    }
    return !is_keyword(text);
}

std::vector<Token> lex(std::string_view src, uint32_t base_offset) {
    std::vector<Token> tokens;
    Cursor c{src, 0};
    bool line_start = true;  // only whitespace seen so far on this line

    auto push = [&](TokKind kind, size_t len) {
        Token t;
        t.kind = kind;
        t.begin = base_offset + static_cast<uint32_t>(c.pos);
        t.end = t.begin + static_cast<uint32_t>(len);
        t.text = src.substr(c.pos, len);
        tokens.push_back(t);
        c.pos += len;
    };

    while (!c.done()) {
        char ch = c.peek();
        if (ch == '\n') {
            line_start = true;
            ++c.pos;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++c.pos;
            continue;
        }
        if (ch == '/' && c.peek(1) == '/') {
            size_t end = src.find('\n', c.pos);
            push(TokKind::Comment, (end == std::string_view::npos ? src.size() : end) - c.pos);
            continue;
        }
        if (ch == '/' && c.peek(1) == '*') {
            size_t end = src.find("*/", c.pos + 2);
            push(TokKind::Comment, (end == std::string_view::npos ? src.size() : end + 2) - c.pos);
            continue;
        }
        if (ch == '#' && line_start) {
            push(TokKind::Directive, scan_directive(c));
            line_start = false;
            continue;
        }
        line_start = false;
        if (ch == '"' || ch == '\'') {
            size_t len = scan_string(c, ch);
            push(ch == '"' ? TokKind::String : TokKind::CharLit, len);
            continue;
        }
        if (ident_start(ch)) {
            size_t prefix_len = 0;
            bool raw = false;
            if (string_prefix_at(src, c.pos, prefix_len, raw)) {
                if (raw) {
                    Cursor at_r{src, c.pos + prefix_len};
                    push(TokKind::String, prefix_len + scan_raw_string(at_r));
                } else {
                    char quote = src[c.pos + prefix_len];
                    Cursor at_q{src, c.pos + prefix_len};
                    size_t len = prefix_len + scan_string(at_q, quote);
                    push(quote == '"' ? TokKind::String : TokKind::CharLit, len);
                }
                continue;
            }
            size_t i = c.pos;
            while (i < src.size() && ident_cont(src[i])) ++i;
            std::string_view word = src.substr(c.pos, i - c.pos);
            push(is_keyword(word) ? TokKind::Keyword : TokKind::Identifier, word.size());
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))
            || (ch == '.' && std::isdigit(static_cast<unsigned char>(c.peek(1))))) {
            push(TokKind::Number, scan_number(c));
            continue;
        }
        // punctuation, longest match first
        size_t matched = 0;
        for (std::string_view p : multi_punct) {
            if (p.size() > matched && src.compare(c.pos, p.size(), p) == 0) matched = p.size();
        }
        if (matched == 0) matched = 1;
        push(std::ispunct(static_cast<unsigned char>(ch)) ? TokKind::Punct : TokKind::Unknown, matched);
    }
    return tokens;
}

std::vector<Token> lex_directive_body(std::string_view directive_text, uint32_t directive_begin) {
    // Skip the leading '#' so the body is lexed as ordinary tokens.
    if (!directive_text.empty() && directive_text[0] == '#') {
        return lex(directive_text.substr(1), directive_begin + 1);
    }
    return lex(directive_text, directive_begin);
}

std::string strip_comments(std::string_view src) {
    std::string out;
    out.reserve(src.size());
    size_t prev_end = 0;
    for (const Token& t : lex(src)) {
        if (t.kind != TokKind::Comment) continue;
        out.append(src.substr(prev_end, t.begin - prev_end));
        bool emitted = false;
        for (char ch : t.text) {
            if (ch == '\n') {
                out += '\n';
                emitted = true;
            }
        }
        if (!emitted) out += ' ';
        prev_end = t.end;
    }
    out.append(src.substr(prev_end));
    return out;
}

}  // namespace csb
