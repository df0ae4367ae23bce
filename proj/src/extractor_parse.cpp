// Concrete-syntax scan of C/C++ sources: top-level declarations, function
// bodies, member lists, and identifier references. Resolution is name-based;
// the compiler gate is the semantic authority afterwards.

#include <algorithm>
#include <cctype>

#include "csb/extractor.hpp"

namespace csb {

namespace {

// Identifiers that look like callables but never name a function we extract.
bool reserved_callable(std::string_view name) {
    return name == "__attribute__" || name == "__declspec" || name == "__asm__"
        || name == "__asm" || name == "__builtin_va_arg" || name == "defined";
}

struct TokenStream {
    const std::vector<Token>& toks;
    size_t pos = 0;

    bool done() const { return pos >= toks.size(); }
    const Token& cur() const { return toks[pos]; }
    const Token* peek(size_t ahead = 1) const {
        return pos + ahead < toks.size() ? &toks[pos + ahead] : nullptr;
    }
};

uint32_t line_of(std::string_view text, uint32_t offset) {
    uint32_t line = 1;
    for (uint32_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

// Find the index of the token matching an opening bracket at `open_idx`.
// Returns toks.size() when unbalanced.
size_t match_bracket(const std::vector<Token>& toks, size_t open_idx) {
    std::string_view open = toks[open_idx].text;
    std::string_view close = open == "(" ? ")" : open == "{" ? "}" : "]";
    int depth = 0;
    for (size_t i = open_idx; i < toks.size(); ++i) {
        if (toks[i].kind != TokKind::Punct) continue;
        if (toks[i].text == open) ++depth;
        else if (toks[i].text == close && --depth == 0) return i;
    }
    return toks.size();
}

bool is_open(const Token& t) { return t.is_punct("(") || t.is_punct("{") || t.is_punct("["); }
bool is_close(const Token& t) { return t.is_punct(")") || t.is_punct("}") || t.is_punct("]"); }

// Last depth-0 identifier in [begin, end) that sits outside brackets and
// before any '='. This is the declarator-name heuristic for parameters and
// member declarations.
std::optional<std::string> declarator_name(const std::vector<Token>& toks, size_t begin, size_t end) {
    int depth = 0;
    std::optional<std::string> name;
    for (size_t i = begin; i < end; ++i) {
        const Token& t = toks[i];
        if (is_open(t)) { ++depth; continue; }
        if (is_close(t)) { --depth; continue; }
        if (depth != 0) continue;
        if (t.is_punct("=")) break;
        if (t.kind == TokKind::Identifier) name = std::string(t.text);
    }
    return name;
}

std::vector<std::string> parse_param_names(const std::vector<Token>& toks, size_t lparen,
                                           size_t rparen) {
    std::vector<std::string> names;
    size_t chunk_begin = lparen + 1;
    int depth = 0;
    for (size_t i = lparen + 1; i <= rparen; ++i) {
        const Token& t = toks[i];
        if (is_open(t)) ++depth;
        else if (is_close(t) && i != rparen) --depth;
        bool at_sep = (i == rparen) || (depth == 0 && t.is_punct(","));
        if (!at_sep) continue;
        if (auto n = declarator_name(toks, chunk_begin, i)) names.push_back(*n);
        chunk_begin = i + 1;
    }
    return names;
}

// --- reference collection --------------------------------------------------

// Collect identifier references in [begin, end): identifier tokens that are
// not member accesses (after '.', '->') and not the member of a qualified id
// (after '::'). Order preserved, duplicates dropped.
void collect_refs(const std::vector<Token>& toks, size_t begin, size_t end,
                  std::vector<std::string>& out, std::set<std::string>& seen) {
    for (size_t i = begin; i < end && i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.kind != TokKind::Identifier) continue;
        if (i > begin) {
            const Token& p = toks[i - 1];
            if (p.is_punct(".") || p.is_punct("->") || p.is_punct("::") || p.is_punct(".*")
                || p.is_punct("->*")) {
                continue;
            }
        }
        // goto labels: `name :` at a statement boundary
        if (i + 1 < end && toks[i + 1].is_punct(":")
            && (i == begin || toks[i - 1].is_punct(";") || toks[i - 1].is_punct("{")
                || toks[i - 1].is_punct("}"))) {
            continue;
        }
        if (seen.insert(std::string(t.text)).second) out.emplace_back(t.text);
    }
}

// --- declaration scanning inside blocks -------------------------------------

// One declarator after the type part: [*&]* identifier, accepted when the
// following token closes a declarator. Returns the identifier and the index
// one past it, or nullopt.
struct DeclMatch {
    std::string name;
    size_t next;
};

std::optional<DeclMatch> match_declarator(const std::vector<Token>& toks, size_t i, size_t end) {
    while (i < end
           && (toks[i].is_punct("*") || toks[i].is_punct("&") || toks[i].is_punct("&&")
               || (toks[i].kind == TokKind::Keyword
                   && (toks[i].text == "const" || toks[i].text == "volatile"
                       || toks[i].text == "restrict")))) {
        ++i;
    }
    if (i >= end || toks[i].kind != TokKind::Identifier) return std::nullopt;
    std::string name(toks[i].text);
    size_t j = i + 1;
    // array suffixes
    while (j < end && toks[j].is_punct("[")) {
        size_t close = j;
        int depth = 0;
        for (; close < end; ++close) {
            if (toks[close].is_punct("[")) ++depth;
            else if (toks[close].is_punct("]") && --depth == 0) break;
        }
        j = close + 1;
    }
    if (j >= end) return DeclMatch{name, j};
    const Token& f = toks[j];
    if (f.is_punct("=") || f.is_punct(";") || f.is_punct(",") || f.is_punct(")")
        || f.is_punct(":") || f.is_punct("{")) {
        return DeclMatch{name, j};
    }
    return std::nullopt;
}

// Try to read a type at [i, end): declaration specifiers and type keywords,
// an optionally ::-qualified identifier, optional template arguments.
// Returns the index after the type, or nullopt when [i..] cannot start one.
std::optional<size_t> match_type_prefix(const std::vector<Token>& toks, size_t i, size_t end) {
    bool saw_type = false;
    while (i < end) {
        const Token& t = toks[i];
        if (t.kind == TokKind::Keyword && (is_type_keyword(t.text) || is_decl_specifier(t.text))) {
            if (t.text == "struct" || t.text == "class" || t.text == "union" || t.text == "enum") {
                ++i;  // elaborated tag: struct Foo
                if (i < end && toks[i].kind == TokKind::Identifier) ++i;
                saw_type = true;
                continue;
            }
            saw_type = saw_type || is_type_keyword(t.text);
            ++i;
            continue;
        }
        break;
    }
    if (saw_type) return i;
    // user-named type: qualified identifier, maybe template arguments
    if (i >= end || toks[i].kind != TokKind::Identifier) return std::nullopt;
    ++i;
    while (i + 1 < end && toks[i].is_punct("::") && toks[i + 1].kind == TokKind::Identifier) {
        i += 2;
    }
    if (i < end && toks[i].is_punct("<")) {
        int depth = 0;
        size_t j = i;
        for (; j < end; ++j) {
            if (toks[j].is_punct("<")) ++depth;
            else if (toks[j].is_punct(">") && --depth == 0) { ++j; break; }
            else if (toks[j].is_punct(">>")) { depth -= 2; if (depth <= 0) { ++j; break; } }
            else if (toks[j].is_punct(";") || toks[j].is_punct("{")) return std::nullopt;
        }
        i = j;
    }
    return i;
}

// Declarations found at a statement start inside a block. Appends declared
// names; returns true if a declaration was parsed.
bool scan_declaration_statement(const std::vector<Token>& toks, size_t stmt_begin, size_t end,
                                std::set<std::string>& declared) {
    auto after_type = match_type_prefix(toks, stmt_begin, end);
    if (!after_type) return false;
    if (*after_type == stmt_begin) return false;
    size_t i = *after_type;
    bool any = false;
    while (i < end) {
        auto m = match_declarator(toks, i, end);
        if (!m) break;
        declared.insert(m->name);
        any = true;
        i = m->next;
        // skip initializer up to ',' or ';' at depth 0
        int depth = 0;
        while (i < end) {
            const Token& t = toks[i];
            if (is_open(t)) ++depth;
            else if (is_close(t)) --depth;
            else if (depth == 0 && t.is_punct(",")) { ++i; break; }
            else if (depth == 0 && (t.is_punct(";") || t.is_punct(":"))) return any;
            ++i;
        }
        if (i >= end) break;
    }
    return any;
}

// Walk a token range (function body or for-init) collecting declared names.
void scan_block(const std::vector<Token>& toks, size_t begin, size_t end,
                std::set<std::string>& declared) {
    bool at_stmt_start = true;
    for (size_t i = begin; i < end; ++i) {
        const Token& t = toks[i];
        if (t.kind == TokKind::Comment || t.kind == TokKind::Directive) continue;
        if (t.is_punct(";") || t.is_punct("{") || t.is_punct("}")) {
            at_stmt_start = true;
            continue;
        }
        if (t.kind == TokKind::Keyword && t.text == "for" && i + 1 < end
            && toks[i + 1].is_punct("(")) {
            // for-init region is a statement of its own
            size_t close = match_bracket(toks, i + 1);
            scan_block(toks, i + 2, std::min(close, end), declared);
            i = std::min(close, end - 1);
            at_stmt_start = true;
            continue;
        }
        if (t.kind == TokKind::Keyword
            && (t.text == "return" || t.text == "goto" || t.text == "case" || t.text == "sizeof"
                || t.text == "if" || t.text == "while" || t.text == "switch" || t.text == "do"
                || t.text == "else" || t.text == "break" || t.text == "continue"
                || t.text == "default" || t.text == "new" || t.text == "delete"
                || t.text == "throw")) {
            at_stmt_start = false;
            continue;
        }
        if (at_stmt_start
            && (t.kind == TokKind::Identifier
                || (t.kind == TokKind::Keyword
                    && (is_type_keyword(t.text) || is_decl_specifier(t.text))))) {
            scan_declaration_statement(toks, i, end, declared);
        }
        // goto labels bind a name
        if (at_stmt_start && t.kind == TokKind::Identifier && i + 1 < end
            && toks[i + 1].is_punct(":")) {
            declared.insert(std::string(t.text));
        }
        at_stmt_start = false;
    }
}

// --- member extraction -------------------------------------------------------

void scan_struct_members(const std::vector<Token>& toks, size_t body_open, size_t body_close,
                         std::vector<std::string>& members) {
    std::set<std::string> declared;
    scan_block(toks, body_open + 1, body_close, declared);
    members.assign(declared.begin(), declared.end());
}

void scan_enum_members(const std::vector<Token>& toks, size_t body_open, size_t body_close,
                       std::vector<std::string>& members) {
    bool at_item_start = true;
    int depth = 0;
    for (size_t i = body_open + 1; i < body_close; ++i) {
        const Token& t = toks[i];
        if (is_open(t)) ++depth;
        else if (is_close(t)) --depth;
        if (depth == 0 && t.is_punct(",")) {
            at_item_start = true;
            continue;
        }
        if (at_item_start && t.kind == TokKind::Identifier) {
            members.emplace_back(t.text);
            at_item_start = false;
        } else if (t.kind != TokKind::Comment) {
            at_item_start = false;
        }
    }
}

// --- top-level parser ---------------------------------------------------------

class FileParser {
  public:
    FileParser(const SourceFile& file, ParsedFile& out)
        : file_(file), out_(out), toks_(lex(file.text)) {
        // drop comments up front; spans in toks_ still index the original text
        toks_.erase(std::remove_if(toks_.begin(), toks_.end(),
                                   [](const Token& t) { return t.kind == TokKind::Comment; }),
                    toks_.end());
    }

    void run() { parse_scope(0, toks_.size()); }

  private:
    const SourceFile& file_;
    ParsedFile& out_;
    std::vector<Token> toks_;

    void warn(size_t tok_idx, const std::string& message) {
        uint32_t line = tok_idx < toks_.size() ? line_of(file_.text, toks_[tok_idx].begin) : 0;
        out_.warnings.push_back({file_.path, line, message});
    }

    std::string text_between(size_t first_tok, size_t last_tok) {
        if (first_tok >= toks_.size() || last_tok >= toks_.size() || last_tok < first_tok) return "";
        return std::string(
            file_.text.substr(toks_[first_tok].begin, toks_[last_tok].end - toks_[first_tok].begin));
    }

    void add_def(Definition def, size_t first_tok, size_t last_tok) {
        def.line_begin = line_of(file_.text, toks_[first_tok].begin);
        def.line_end = line_of(file_.text, toks_[last_tok].end > 0 ? toks_[last_tok].end - 1 : 0);
        out_.defs.push_back(std::move(def));
    }

    // Skip to the token after the next ';' at bracket depth 0 (balanced
    // braces/parens/brackets are skipped whole). Returns index of the ';'.
    size_t skip_to_semicolon(size_t i, size_t end) {
        int depth = 0;
        for (; i < end; ++i) {
            const Token& t = toks_[i];
            if (is_open(t)) ++depth;
            else if (is_close(t)) depth = std::max(0, depth - 1);
            else if (depth == 0 && t.is_punct(";")) return i;
        }
        return end;
    }

    void parse_scope(size_t begin, size_t end) {
        size_t i = begin;
        while (i < end) {
            const Token& t = toks_[i];
            if (t.kind == TokKind::Directive) {
                parse_directive(i);
                ++i;
                continue;
            }
            if (t.is_punct(";") || t.is_punct("}")) {
                ++i;
                continue;
            }
            if (t.kind == TokKind::Keyword && t.text == "namespace") {
                size_t j = i + 1;
                while (j < end && !toks_[j].is_punct("{") && !toks_[j].is_punct(";")) ++j;
                if (j < end && toks_[j].is_punct("{")) {
                    size_t close = match_bracket(toks_, j);
                    parse_scope(j + 1, std::min(close, end));
                    i = std::min(close, end - 1) + 1;
                } else {
                    i = j + 1;
                }
                continue;
            }
            if (t.kind == TokKind::Keyword && t.text == "extern" && i + 1 < end
                && toks_[i + 1].kind == TokKind::String) {
                if (i + 2 < end && toks_[i + 2].is_punct("{")) {
                    size_t close = match_bracket(toks_, i + 2);
                    parse_scope(i + 3, std::min(close, end));
                    i = std::min(close, end - 1) + 1;
                } else {
                    i += 2;  // extern "C" <declaration>
                }
                continue;
            }
            if (t.kind == TokKind::Keyword && t.text == "template") {
                i = parse_templated(i, end);
                continue;
            }
            if (t.kind == TokKind::Keyword && t.text == "using") {
                i = parse_using(i, end);
                continue;
            }
            if (t.kind == TokKind::Keyword && t.text == "typedef") {
                i = parse_typedef(i, end);
                continue;
            }
            if (t.kind == TokKind::Keyword
                && (t.text == "static_assert" || t.text == "_Static_assert" || t.text == "asm"
                    || t.text == "__asm__")) {
                i = skip_to_semicolon(i, end) + 1;
                continue;
            }
            i = parse_declaration(i, end, {});
        }
    }

    void parse_directive(size_t idx) {
        const Token& d = toks_[idx];
        auto body = lex_directive_body(d.text, d.begin);
        if (body.empty() || body[0].kind != TokKind::Identifier) return;
        std::string_view head = body[0].text;
        if (head == "include") {
            if (body.size() >= 2 && body[1].kind == TokKind::String) {
                std::string h(body[1].text.substr(1, body[1].text.size() - 2));
                out_.includes.push_back({h, false});
            } else if (body.size() >= 2 && body[1].is_punct("<")) {
                std::string h;
                for (size_t k = 2; k < body.size() && !body[k].is_punct(">"); ++k) {
                    h += std::string(body[k].text);
                }
                out_.includes.push_back({h, true});
            }
            return;
        }
        if (head == "define" && body.size() >= 2 && body[1].kind == TokKind::Identifier) {
            Definition def;
            def.kind = DefKind::Macro;
            def.name = std::string(body[1].text);
            def.text = std::string(d.text);
            size_t body_start = 2;
            std::set<std::string> params;
            // function-like only when '(' touches the macro name
            if (body.size() > 2 && body[2].is_punct("(") && body[2].begin == body[1].end) {
                size_t k = 2;
                int depth = 0;
                for (; k < body.size(); ++k) {
                    if (body[k].is_punct("(")) ++depth;
                    else if (body[k].is_punct(")") && --depth == 0) break;
                    else if (body[k].kind == TokKind::Identifier && depth == 1) {
                        def.param_names.emplace_back(body[k].text);
                        params.insert(std::string(body[k].text));
                    }
                }
                body_start = k + 1;
            }
            std::set<std::string> seen = params;
            seen.insert(def.name);
            collect_refs(body, body_start, body.size(), def.referenced, seen);
            def.line_begin = def.line_end = line_of(file_.text, d.begin);
            out_.defs.push_back(std::move(def));
        }
    }

    size_t parse_templated(size_t i, size_t end) {
        // capture template parameter names, then parse the following
        // declaration with those names pre-bound
        size_t lt = i + 1;
        if (lt >= end || !toks_[lt].is_punct("<")) return i + 1;
        int depth = 0;
        size_t gt = lt;
        for (; gt < end; ++gt) {
            if (toks_[gt].is_punct("<")) ++depth;
            else if (toks_[gt].is_punct(">") && --depth == 0) break;
            else if (toks_[gt].is_punct(">>")) { depth -= 2; if (depth <= 0) break; }
        }
        if (gt >= end) return end;
        std::set<std::string> tparams;
        for (size_t k = lt + 1; k < gt; ++k) {
            if (toks_[k].kind == TokKind::Identifier && k + 1 <= gt
                && (toks_[k + 1].is_punct(",") || toks_[k + 1].is_punct(">")
                    || toks_[k + 1].is_punct("=") || toks_[k + 1].is_punct(">>"))) {
                tparams.insert(std::string(toks_[k].text));
            }
        }
        return parse_declaration(gt + 1, end, tparams, i);
    }

    size_t parse_using(size_t i, size_t end) {
        // `using name = ...;` is an alias definition; other forms are skipped
        size_t semi = skip_to_semicolon(i, end);
        if (i + 2 < end && toks_[i + 1].kind == TokKind::Identifier && toks_[i + 2].is_punct("=")) {
            Definition def;
            def.kind = DefKind::Typedef;
            def.name = std::string(toks_[i + 1].text);
            def.text = text_between(i, std::min(semi, end - 1));
            std::set<std::string> seen{def.name};
            collect_refs(toks_, i + 3, semi, def.referenced, seen);
            add_def(std::move(def), i, std::min(semi, end - 1));
        }
        return semi + 1;
    }

    size_t parse_typedef(size_t i, size_t end) {
        size_t semi = skip_to_semicolon(i, end);
        if (semi >= end) return end;
        Definition def;
        def.kind = DefKind::Typedef;
        // name: last depth-0 identifier before ';' handles `typedef ... name;`
        // and `typedef int (*name)(args);` via the bracket-aware declarator rule
        std::optional<std::string> name;
        {
            int depth = 0;
            for (size_t k = i + 1; k < semi; ++k) {
                const Token& t = toks_[k];
                if (is_open(t)) ++depth;
                else if (is_close(t)) --depth;
                else if (t.kind == TokKind::Identifier) {
                    if (depth == 0) name = std::string(t.text);
                    // function-pointer form: identifier right after (*
                    else if (depth == 1 && k >= 2 && toks_[k - 1].is_punct("*")
                             && toks_[k - 2].is_punct("(")) {
                        name = std::string(t.text);
                    }
                }
            }
        }
        if (!name) {
            warn(i, "typedef without a name, skipped");
            return semi + 1;
        }
        def.name = *name;
        def.text = text_between(i, semi);
        std::set<std::string> seen{def.name};
        // tag of `typedef struct Tag {...} name;` is defined here, not a ref
        for (size_t k = i + 1; k + 1 < semi; ++k) {
            if (toks_[k].kind == TokKind::Keyword
                && (toks_[k].text == "struct" || toks_[k].text == "class"
                    || toks_[k].text == "union" || toks_[k].text == "enum")
                && toks_[k + 1].kind == TokKind::Identifier) {
                bool has_body = false;
                for (size_t b = k + 2; b < semi; ++b) {
                    if (toks_[b].is_punct("{")) { has_body = true; break; }
                    if (toks_[b].is_punct(";")) break;
                }
                if (has_body) seen.insert(std::string(toks_[k + 1].text));
            }
        }
        // typedef struct { ... } name; — collect members for field roles
        for (size_t k = i + 1; k < semi; ++k) {
            if (toks_[k].is_punct("{")) {
                size_t close = match_bracket(toks_, k);
                bool is_enum = false;
                for (size_t b = i; b < k; ++b) {
                    if (toks_[b].kind == TokKind::Keyword && toks_[b].text == "enum") is_enum = true;
                }
                if (is_enum) scan_enum_members(toks_, k, close, def.member_names);
                else scan_struct_members(toks_, k, close, def.member_names);
                break;
            }
        }
        for (const auto& m : def.member_names) seen.insert(m);
        collect_refs(toks_, i + 1, semi, def.referenced, seen);
        def.referenced.erase(std::remove(def.referenced.begin(), def.referenced.end(), def.name),
                             def.referenced.end());
        add_def(std::move(def), i, semi);
        return semi + 1;
    }

    // Parse one top-level declaration starting at i (specifiers may precede a
    // record definition or a function). `pre_bound` are template parameters.
    size_t parse_declaration(size_t i, size_t end, std::set<std::string> pre_bound,
                             size_t text_from = SIZE_MAX) {
        size_t start = text_from == SIZE_MAX ? i : text_from;
        size_t j = i;
        // skip leading specifiers
        while (j < end && toks_[j].kind == TokKind::Keyword && is_decl_specifier(toks_[j].text)) ++j;
        if (j < end && toks_[j].kind == TokKind::Keyword
            && (toks_[j].text == "struct" || toks_[j].text == "class" || toks_[j].text == "union"
                || toks_[j].text == "enum")) {
            return parse_record_or_fall_through(start, j, end, pre_bound);
        }
        return parse_function_or_global(start, i, end, pre_bound);
    }

    // struct/class/union/enum: a type definition when '{' appears before any
    // '(' or ';'; otherwise an elaborated type in a function/global.
    size_t parse_record_or_fall_through(size_t start, size_t kw, size_t end,
                                        std::set<std::string>& pre_bound) {
        std::string_view tag = toks_[kw].text;
        size_t j = kw + 1;
        if (j < end && toks_[j].kind == TokKind::Keyword
            && (toks_[j].text == "class" || toks_[j].text == "struct")) {
            ++j;  // enum class
        }
        std::string name;
        if (j < end && toks_[j].kind == TokKind::Identifier) {
            name = std::string(toks_[j].text);
            ++j;
        }
        // base clause or enum underlying type
        if (j < end && toks_[j].is_punct(":")) {
            while (j < end && !toks_[j].is_punct("{") && !toks_[j].is_punct(";")) ++j;
        }
        if (j < end && toks_[j].is_punct("{")) {
            size_t close = match_bracket(toks_, j);
            if (close >= end) {
                warn(kw, "unbalanced braces in type definition");
                return end;
            }
            size_t semi = skip_to_semicolon(close, end);
            Definition def;
            def.kind = tag == "class"  ? DefKind::Class
                     : tag == "union"  ? DefKind::Union
                     : tag == "enum"   ? DefKind::Enum
                                       : DefKind::Struct;
            if (tag == "enum") scan_enum_members(toks_, j, close, def.member_names);
            else scan_struct_members(toks_, j, close, def.member_names);
            // `struct {...} g_var;` — anonymous type defining a global
            std::optional<std::string> trailing;
            if (close + 1 < end && !toks_[close + 1].is_punct(";")) {
                trailing = declarator_name(toks_, close + 1, std::min(semi, end));
            }
            if (name.empty() && trailing) {
                def.kind = DefKind::Global;
                def.name = *trailing;
            } else if (!name.empty()) {
                def.name = name;
            } else {
                warn(kw, "anonymous type without declarator, skipped");
                return semi + 1;
            }
            def.text = text_between(start, std::min(semi, end - 1));
            std::set<std::string> seen{def.name};
            for (const auto& m : def.member_names) seen.insert(m);
            for (const auto& p : pre_bound) seen.insert(p);
            collect_refs(toks_, j + 1, close, def.referenced, seen);
            add_def(std::move(def), start, std::min(semi, end - 1));
            return semi + 1;
        }
        if (j < end && toks_[j].is_punct(";")) {
            return j + 1;  // forward declaration
        }
        // elaborated type in a longer declaration: struct X f(...) {...}
        return parse_function_or_global(start, start, end, pre_bound);
    }

    size_t parse_function_or_global(size_t start, size_t i, size_t end,
                                    std::set<std::string>& pre_bound) {
        // Scan to the first ';', '{' or '=' at bracket depth 0.
        int depth = 0;
        size_t stop = end;
        char stop_kind = 0;
        for (size_t k = i; k < end; ++k) {
            const Token& t = toks_[k];
            if (depth == 0 && t.kind == TokKind::Punct
                && (t.text == ";" || t.text == "{" || t.text == "=")) {
                stop = k;
                stop_kind = t.text[0];
                break;
            }
            if (is_open(t)) ++depth;
            else if (is_close(t)) depth = std::max(0, depth - 1);
        }
        if (stop >= end) return end;

        if (stop_kind == '=') {
            // global with initializer
            size_t semi = skip_to_semicolon(stop, end);
            Definition def;
            def.kind = DefKind::Global;
            auto nm = declarator_name(toks_, i, stop);
            if (!nm) return semi + 1;
            def.name = *nm;
            def.text = text_between(start, std::min(semi, end - 1));
            std::set<std::string> seen{def.name};
            collect_refs(toks_, i, semi, def.referenced, seen);
            def.referenced.erase(std::remove(def.referenced.begin(), def.referenced.end(), def.name),
                                 def.referenced.end());
            add_def(std::move(def), start, std::min(semi, end - 1));
            return semi + 1;
        }

        // function shape: first depth-0 `(`-group preceded by a plain identifier
        size_t lparen = end, name_idx = end;
        {
            int d = 0;
            for (size_t k = i; k < stop; ++k) {
                const Token& t = toks_[k];
                if (t.is_punct("(")) {
                    if (d == 0 && k > i && toks_[k - 1].kind == TokKind::Identifier
                        && !reserved_callable(toks_[k - 1].text)) {
                        bool qualified = k >= 2
                            && (toks_[k - 2].is_punct("::") || toks_[k - 2].is_punct(".")
                                || toks_[k - 2].is_punct("->"));
                        bool op = k >= 2 && toks_[k - 2].kind == TokKind::Keyword
                            && toks_[k - 2].text == "operator";
                        if (!qualified && !op) {
                            lparen = k;
                            name_idx = k - 1;
                            break;
                        }
                    }
                    ++d;
                } else if (t.is_punct(")")) {
                    --d;
                }
            }
        }

        if (stop_kind == ';') {
            if (lparen != end) {
                // prototype — recorded for cycle breaking, not a definition
                Definition def;
                def.kind = DefKind::Function;
                def.is_definition = false;
                def.name = std::string(toks_[name_idx].text);
                def.text = text_between(start, stop);
                def.signature = def.text;
                add_def(std::move(def), start, stop);
            } else {
                // plain global declaration: `static int counter;`
                auto nm = declarator_name(toks_, i, stop);
                if (nm) {
                    Definition def;
                    def.kind = DefKind::Global;
                    def.name = *nm;
                    def.text = text_between(start, stop);
                    std::set<std::string> seen{def.name};
                    collect_refs(toks_, i, stop, def.referenced, seen);
                    def.referenced.erase(
                        std::remove(def.referenced.begin(), def.referenced.end(), def.name),
                        def.referenced.end());
                    add_def(std::move(def), start, stop);
                }
            }
            return stop + 1;
        }

        // stop_kind == '{'
        if (lparen == end) {
            // block without a recognizable function header (e.g. stray scope)
            size_t close = match_bracket(toks_, stop);
            warn(i, "unrecognized block, skipped");
            return std::min(close, end - 1) + 1;
        }
        size_t rparen = match_bracket(toks_, lparen);
        if (rparen >= end) {
            warn(lparen, "unbalanced parentheses, skipped");
            return end;
        }
        size_t body_close = match_bracket(toks_, stop);
        if (body_close >= end) {
            warn(stop, "unbalanced braces in function body, skipped");
            return end;
        }

        Definition def;
        def.kind = DefKind::Function;
        def.name = std::string(toks_[name_idx].text);
        def.signature = text_between(start, stop - 1);
        def.body = text_between(stop, body_close);
        def.text = text_between(start, body_close);
        def.param_names = parse_param_names(toks_, lparen, rparen);

        std::set<std::string> bound = pre_bound;
        bound.insert(def.name);
        for (const auto& p : def.param_names) bound.insert(p);
        std::set<std::string> locals;
        scan_block(toks_, stop + 1, body_close, locals);
        for (const auto& l : locals) bound.insert(l);
        // K&R parameter declarations between ')' and '{' bind names too
        scan_block(toks_, rparen + 1, stop, bound);

        std::set<std::string> seen = bound;
        collect_refs(toks_, i, stop, def.referenced, seen);          // return type + params
        collect_refs(toks_, stop + 1, body_close, def.referenced, seen);  // body
        add_def(std::move(def), start, body_close);
        return body_close + 1;
    }
};

}  // namespace

std::string to_string(Language lang) { return lang == Language::C ? "c" : "cpp"; }

std::optional<Language> language_from_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    if (ext == ".c") return Language::C;
    if (ext == ".h") return Language::C;  // ambiguous; C is the safer read
    if (ext == ".cc" || ext == ".cpp" || ext == ".hpp") return Language::Cpp;
    return std::nullopt;
}

std::string to_string(DefKind kind) {
    switch (kind) {
        case DefKind::Function: return "function";
        case DefKind::Struct: return "struct";
        case DefKind::Class: return "class";
        case DefKind::Union: return "union";
        case DefKind::Enum: return "enum";
        case DefKind::Typedef: return "typedef";
        case DefKind::Macro: return "macro";
        case DefKind::Global: return "global";
    }
    return "?";
}

ParsedFile parse_source(const SourceFile& file) {
    ParsedFile out;
    FileParser(file, out).run();
    return out;
}

std::set<std::string> scan_local_bindings(const Definition& fn) {
    std::set<std::string> bound(fn.param_names.begin(), fn.param_names.end());
    auto toks = lex(fn.body);
    toks.erase(std::remove_if(toks.begin(), toks.end(),
                              [](const Token& t) { return t.kind == TokKind::Comment; }),
               toks.end());
    scan_block(toks, 0, toks.size(), bound);
    return bound;
}

std::set<std::string> scan_declared_names(const std::vector<Token>& toks) {
    std::set<std::string> declared;
    scan_block(toks, 0, toks.size(), declared);
    return declared;
}

}  // namespace csb
