#include "csb/anonymizer.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "csb/compiler.hpp"
#include "csb/errors.hpp"
#include "csb/hash.hpp"

namespace csb {

std::string to_string(Role role) {
    switch (role) {
        case Role::Function: return "function";
        case Role::Variable: return "variable";
        case Role::Macro: return "macro";
        default: return "type";
    }
}

std::optional<Role> role_from_string(const std::string& s) {
    if (s == "function") return Role::Function;
    if (s == "variable") return Role::Variable;
    if (s == "macro") return Role::Macro;
    if (s == "type") return Role::TypeOrClass;
    return std::nullopt;
}

UnitContext UnitContext::from_unit(const FunctionUnit& unit) {
    UnitContext ctx;
    ctx.function_names.insert(unit.primary_fn.name);
    for (const auto& h : unit.closure.helper_fns) ctx.function_names.insert(h.name);
    for (const auto& t : unit.closure.type_defs) {
        if (t.kind == "macro") {
            ctx.macro_names.insert(t.name);
        } else {
            ctx.type_names.insert(t.name);
        }
        for (const auto& m : t.member_names) ctx.field_names.insert(m);
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Occurrence collection

namespace {

struct SnippetInfo {
    std::set<std::string> functions;
    std::set<std::string> types;
    std::set<std::string> macros;
    std::set<std::string> variables;  // params, locals, fields, globals, labels
};

SnippetInfo scan_snippet(const std::string& code) {
    SnippetInfo info;
    SourceFile sf;
    sf.path = "snippet";
    sf.text = code;
    ParsedFile parsed = parse_source(sf);
    for (const auto& def : parsed.defs) {
        switch (def.kind) {
            case DefKind::Function:
                info.functions.insert(def.name);
                for (const auto& p : def.param_names) info.variables.insert(p);
                if (def.is_definition) {
                    for (const auto& l : scan_local_bindings(def)) info.variables.insert(l);
                }
                break;
            case DefKind::Macro:
                info.macros.insert(def.name);
                for (const auto& p : def.param_names) info.variables.insert(p);
                break;
            case DefKind::Global:
                info.variables.insert(def.name);
                break;
            default:
                info.types.insert(def.name);
                for (const auto& m : def.member_names) info.variables.insert(m);
                break;
        }
    }
    return info;
}

bool skip_directive(std::string_view text) {
    // #include carries header names that must survive verbatim
    size_t i = 1;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    return text.compare(i, 7, "include") == 0;
}

}  // namespace

std::vector<IdentifierOccurrence> collect_identifiers(const std::string& code,
                                                      const UnitContext& context) {
    SnippetInfo local = scan_snippet(code);

    auto classify = [&](const std::string& name) -> std::pair<Role, bool> {
        if (context.extra_protected.count(name)) return {Role::Variable, true};
        if (context.function_names.count(name) || local.functions.count(name))
            return {Role::Function, false};
        if (context.type_names.count(name) || local.types.count(name))
            return {Role::TypeOrClass, false};
        if (context.macro_names.count(name) || local.macros.count(name))
            return {Role::Macro, false};
        if (context.field_names.count(name) || local.variables.count(name))
            return {Role::Variable, false};
        return {Role::Variable, true};  // resolves outside the unit
    };

    std::vector<IdentifierOccurrence> occurrences;
    std::map<std::string, size_t> index_of;

    auto add = [&](const Token& t) {
        std::string name(t.text);
        auto it = index_of.find(name);
        if (it == index_of.end()) {
            auto [role, is_protected] = classify(name);
            IdentifierOccurrence occ;
            occ.name = name;
            occ.role = role;
            occ.is_protected = is_protected;
            index_of[name] = occurrences.size();
            occurrences.push_back(std::move(occ));
            it = index_of.find(name);
        }
        occurrences[it->second].spans.emplace_back(t.begin, t.end);
    };

    for (const Token& t : lex(code)) {
        if (t.kind == TokKind::Identifier) {
            add(t);
        } else if (t.kind == TokKind::Directive && !skip_directive(t.text)) {
            auto body = lex_directive_body(t.text, t.begin);
            for (size_t k = 0; k < body.size(); ++k) {
                if (k == 0) continue;  // the directive keyword itself
                if (body[k].kind == TokKind::Identifier) add(body[k]);
            }
        }
    }
    return occurrences;
}

// ---------------------------------------------------------------------------
// Renaming

namespace {

std::string neutral_suffix(size_t n) {
    // bijective base-26: 0 -> a, 25 -> z, 26 -> aa
    std::string s;
    size_t v = n + 1;
    while (v > 0) {
        v -= 1;
        s += static_cast<char>('a' + v % 26);
        v /= 26;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

const char* role_prefix(Role role) {
    switch (role) {
        case Role::Function: return "func_";
        case Role::Variable: return "var_";
        case Role::Macro: return "MACRO_";
        default: return "class_";
    }
}

struct RenamePlan {
    std::vector<std::pair<std::pair<uint32_t, uint32_t>, const std::string*>> splices;
    AnonymizationMapping mapping;
    double fraction = 0.0;
};

std::string apply_plan(const std::string& code, RenamePlan& plan) {
    std::sort(plan.splices.begin(), plan.splices.end(),
              [](const auto& a, const auto& b) { return a.first.first < b.first.first; });
    std::string out;
    out.reserve(code.size());
    size_t prev = 0;
    for (const auto& [span, repl] : plan.splices) {
        if (span.first < prev || span.second > code.size()) {
            throw DataError("identifier span out of bounds");
        }
        out.append(code, prev, span.first - prev);
        out.append(*repl);
        prev = span.second;
    }
    out.append(code, prev, code.size() - prev);
    return out;
}

// Names that must not be produced as replacements: anything still visible in
// the snippet or context, plus all originals (so an unrelated name never
// captures an occurrence of a renamed one).
std::set<std::string> collect_forbidden(const std::string& code,
                                        const std::vector<IdentifierOccurrence>& occurrences) {
    std::set<std::string> forbidden;
    for (const Token& t : lex(code)) {
        if (t.kind == TokKind::Identifier) forbidden.insert(std::string(t.text));
        if (t.kind == TokKind::Directive) {
            for (const Token& s : lex_directive_body(t.text, t.begin)) {
                if (s.kind == TokKind::Identifier) forbidden.insert(std::string(s.text));
            }
        }
    }
    for (const auto& occ : occurrences) forbidden.insert(occ.name);
    return forbidden;
}

AnonymizationResult rename_with(
    const std::string& code, const std::vector<IdentifierOccurrence>& occurrences,
    const std::function<std::string(const IdentifierOccurrence&, const std::set<std::string>&)>&
        next_name) {
    std::set<std::string> taken = collect_forbidden(code, occurrences);
    RenamePlan plan;
    size_t renamed_chars = 0;
    std::vector<std::string> replacements;
    replacements.reserve(occurrences.size());

    // first pass: fix replacement strings in first-occurrence order
    for (const auto& occ : occurrences) {
        if (occ.is_protected || occ.spans.empty()) {
            replacements.emplace_back();
            continue;
        }
        std::string repl = next_name(occ, taken);
        taken.insert(repl);
        plan.mapping.pairs.push_back({occ.name, repl, occ.role});
        replacements.push_back(std::move(repl));
    }
    // second pass: splices
    for (size_t i = 0; i < occurrences.size(); ++i) {
        if (replacements[i].empty()) continue;
        for (const auto& span : occurrences[i].spans) {
            plan.splices.push_back({span, &replacements[i]});
            renamed_chars += span.second - span.first;
        }
    }

    AnonymizationResult result;
    result.code = apply_plan(code, plan);
    result.mapping = std::move(plan.mapping);
    result.perturbation_fraction =
        code.empty() ? 0.0 : static_cast<double>(renamed_chars) / code.size();
    return result;
}

}  // namespace

AnonymizationResult neutralize(const std::string& code,
                               const std::vector<IdentifierOccurrence>& occurrences) {
    size_t counters[4] = {0, 0, 0, 0};
    auto next_name = [&](const IdentifierOccurrence& occ, const std::set<std::string>& taken) {
        size_t& counter = counters[static_cast<int>(occ.role)];
        for (;;) {
            std::string candidate = role_prefix(occ.role) + neutral_suffix(counter++);
            if (taken.count(candidate) == 0 && !is_keyword(candidate)) return candidate;
        }
    };
    return rename_with(code, occurrences, next_name);
}

AnonymizationResult randomize(const std::string& code,
                              const std::vector<IdentifierOccurrence>& occurrences,
                              uint64_t seed, int trial_index, const std::string& entry_id) {
    std::string key = std::to_string(seed) + "|" + std::to_string(trial_index) + "|" + entry_id;
    std::mt19937_64 rng(hash64(key));
    std::uniform_int_distribution<int> first('a', 'z');
    static const char* alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::uniform_int_distribution<int> rest(0, 35);

    auto next_name = [&](const IdentifierOccurrence&, const std::set<std::string>& taken) {
        for (;;) {
            std::string candidate;
            candidate += static_cast<char>(first(rng));
            for (int i = 0; i < 7; ++i) candidate += alphabet[rest(rng)];
            if (taken.count(candidate) == 0 && !is_keyword(candidate)) return candidate;
        }
    };
    auto result = rename_with(code, occurrences, next_name);
    result.mapping.seed = seed;
    result.mapping.trial_index = trial_index;
    return result;
}

// ---------------------------------------------------------------------------
// Perturbation fraction

double perturbation_fraction(const std::string& original_code,
                             const std::vector<IdentifierOccurrence>& occurrences) {
    if (original_code.empty()) return 0.0;
    size_t renamed = 0;
    for (const auto& occ : occurrences) {
        if (occ.is_protected) continue;
        for (const auto& [begin, end] : occ.spans) {
            if (end > original_code.size() || begin > end) {
                throw DataError("occurrence span outside snippet bounds");
            }
            renamed += end - begin;
        }
    }
    return static_cast<double>(renamed) / original_code.size();
}

double perturbation_fraction(const std::string& original_code,
                             const AnonymizationMapping& mapping) {
    if (original_code.empty()) return 0.0;
    std::set<std::string> originals;
    for (const auto& pair : mapping.pairs) originals.insert(pair.original);
    size_t renamed = 0;
    auto count_token = [&](const Token& t) {
        if (t.kind == TokKind::Identifier && originals.count(std::string(t.text))) {
            renamed += t.end - t.begin;
        }
    };
    for (const Token& t : lex(original_code)) {
        if (t.kind == TokKind::Directive && !skip_directive(t.text)) {
            for (const Token& s : lex_directive_body(t.text, t.begin)) count_token(s);
        } else {
            count_token(t);
        }
    }
    return static_cast<double>(renamed) / original_code.size();
}

// ---------------------------------------------------------------------------
// Pipeline helpers

AnonymizationResult neutralize_snippet(const std::string& code, const UnitContext& context) {
    std::string stripped = strip_comments(code);
    return neutralize(stripped, collect_identifiers(stripped, context));
}

AnonymizationResult randomize_snippet(const std::string& code, const UnitContext& context,
                                      uint64_t seed, int trial_index,
                                      const std::string& entry_id) {
    std::string stripped = strip_comments(code);
    return randomize(stripped, collect_identifiers(stripped, context), seed, trial_index,
                     entry_id);
}

AnonymizationResult anonymize_unit_tu(const FunctionUnit& unit, bool neutral, uint64_t seed,
                                      int trial_index) {
    std::string tu = emit_translation_unit(unit);
    UnitContext ctx = UnitContext::from_unit(unit);
    if (neutral) return neutralize_snippet(tu, ctx);
    return randomize_snippet(tu, ctx, seed, trial_index, unit.unit_id);
}

}  // namespace csb
