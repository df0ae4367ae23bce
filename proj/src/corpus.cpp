#include "csb/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "csb/errors.hpp"
#include "csb/jsonl.hpp"

namespace csb {

std::string to_string(Group g) {
    switch (g) {
        case Group::G1: return "G1";
        case Group::G2: return "G2";
        default: return "G3";
    }
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Standard: return "standard";
        case Variant::G3Short: return "g3_short";
        default: return "g3_long";
    }
}

std::string to_string(Split s) { return s == Split::Eval ? "eval" : "train"; }

Group categorize(const FunctionUnit& unit) {
    if (!unit.closure.helper_fns.empty()) return Group::G3;
    if (!unit.closure.type_defs.empty()) return Group::G2;
    return Group::G1;
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

int count_loc_source(const std::string& code) {
    std::string stripped = strip_comments(code);
    int loc = 0;
    bool blank = true;
    for (char c : stripped) {
        if (c == '\n') {
            if (!blank) ++loc;
            blank = true;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            blank = false;
        }
    }
    if (!blank) ++loc;
    return loc;
}

int count_loc_lowered(const std::string& code, CodeLang lang) {
    int loc = 0;
    std::istringstream in(code);
    std::string line;
    while (std::getline(in, line)) {
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (lang == CodeLang::Asm && (line[first] == '#' || line[first] == ';')) continue;
        if (lang == CodeLang::Wat && line.compare(first, 2, ";;") == 0) continue;
        ++loc;
    }
    return loc;
}

// Flatten a source token stream with directive interiors expanded.
std::vector<Token> source_tokens(const std::string& code) {
    std::vector<Token> out;
    for (const Token& t : lex(code)) {
        if (t.kind == TokKind::Comment) continue;
        if (t.kind == TokKind::Directive) {
            for (const Token& s : lex_directive_body(t.text, t.begin)) {
                if (s.kind != TokKind::Comment) out.push_back(s);
            }
            continue;
        }
        out.push_back(t);
    }
    return out;
}

CodeStats stats_for_source(const std::string& code) {
    CodeStats stats;
    stats.loc = count_loc_source(code);
    auto toks = source_tokens(code);
    stats.tokens = static_cast<int>(toks.size());
    int decisions = 0;
    std::set<std::string> keywords;
    for (const Token& t : toks) {
        if (t.kind == TokKind::Keyword) {
            keywords.insert(std::string(t.text));
            if (t.text == "if" || t.text == "for" || t.text == "while" || t.text == "case")
                ++decisions;
        } else if (t.kind == TokKind::Punct) {
            if (t.text == "&&" || t.text == "||" || t.text == "?") ++decisions;
        }
    }
    stats.cyclomatic_complexity = 1 + decisions;
    stats.unique_keywords = static_cast<int>(keywords.size());
    return stats;
}

bool wat_atom(const std::string& w) {
    if (w.empty() || !std::islower(static_cast<unsigned char>(w[0]))) return false;
    for (char c : w) {
        if (!std::islower(static_cast<unsigned char>(c))
            && !std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '_') {
            return false;
        }
    }
    return true;
}

CodeStats stats_for_lowered(const std::string& code, CodeLang lang) {
    CodeStats stats;
    stats.loc = count_loc_lowered(code, lang);
    stats.cyclomatic_complexity = 1;  // not defined on lowered text

    int tokens = 0;
    std::set<std::string> mnemonics;
    std::istringstream in(code);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> words;
        std::string cur;
        for (char c : line) {
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '$'
                || c == '%' || c == '@') {
                cur += c;
            } else {
                if (!cur.empty()) words.push_back(cur);
                cur.clear();
                if (!std::isspace(static_cast<unsigned char>(c))) ++tokens;
            }
        }
        if (!cur.empty()) words.push_back(cur);
        tokens += static_cast<int>(words.size());

        if (lang == CodeLang::Asm) {
            // mnemonic = first word of an instruction line (skip labels/directives)
            for (size_t w = 0; w < words.size(); ++w) {
                const std::string& word = words[w];
                if (w == 0 && line.find(word + ":") != std::string::npos) continue;
                if (word[0] == '.' || word[0] == '$' || word[0] == '%') break;
                if (std::isalpha(static_cast<unsigned char>(word[0]))) mnemonics.insert(word);
                break;
            }
        } else {
            for (const std::string& word : words) {
                if (wat_atom(word)) mnemonics.insert(word);
            }
        }
    }
    stats.tokens = tokens;
    stats.unique_keywords = static_cast<int>(mnemonics.size());
    return stats;
}

}  // namespace

CodeStats compute_stats(const std::string& code, CodeLang lang, const TokenizerConfig& tokenizer) {
    if (tokenizer.name != "lexical") {
        throw ConfigError("unknown tokenizer: " + tokenizer.name);
    }
    if (code.empty()) throw DataError("compute_stats: empty code");
    switch (lang) {
        case CodeLang::Source: return stats_for_source(code);
        case CodeLang::Asm:
        case CodeLang::Wat: return stats_for_lowered(code, lang);
    }
    throw DataError("compute_stats: unknown language tag");
}

// ---------------------------------------------------------------------------
// Entries and variants

namespace {

std::string merged_long_snippet(const FunctionUnit& unit) {
    std::string text;
    for (const auto& t : unit.closure.type_defs) {
        text += t.text;
        text += "\n\n";
    }
    for (const auto& h : unit.closure.helper_fns) {
        text += h.signature + " " + h.body;
        text += "\n\n";
    }
    text += unit.primary_fn.signature + " " + unit.primary_fn.body;
    text += "\n";
    return text;
}

BenchmarkEntry base_entry(const FunctionUnit& unit, Group group) {
    BenchmarkEntry e;
    e.unit_id = unit.unit_id;
    e.group = group;
    e.license = unit.license;
    return e;
}

}  // namespace

G3Variants make_variants(const FunctionUnit& unit) {
    if (categorize(unit) != Group::G3) {
        throw DataError("make_variants: unit " + unit.unit_id + " is not in group G3");
    }
    G3Variants out;

    BenchmarkEntry primary = base_entry(unit, Group::G3);
    primary.variant = Variant::G3Short;
    primary.entry_id = unit.unit_id + "-s0";
    primary.standard = unit.primary_fn.signature + " " + unit.primary_fn.body + "\n";
    primary.labels[primary.entry_id] = 2;

    std::vector<BenchmarkEntry> helpers;
    for (size_t i = 0; i < unit.closure.helper_fns.size(); ++i) {
        const auto& h = unit.closure.helper_fns[i];
        BenchmarkEntry he = base_entry(unit, Group::G3);
        he.variant = Variant::G3Short;
        he.entry_id = unit.unit_id + "-s" + std::to_string(i + 1);
        he.standard = h.signature + " " + h.body + "\n";
        primary.labels[he.entry_id] = 1;
        helpers.push_back(std::move(he));
    }
    out.short_entries.push_back(std::move(primary));
    for (auto& he : helpers) out.short_entries.push_back(std::move(he));

    out.long_entry = base_entry(unit, Group::G3);
    out.long_entry.variant = Variant::G3Long;
    out.long_entry.entry_id = unit.unit_id + "-long";
    out.long_entry.standard = merged_long_snippet(unit);
    out.long_entry.labels[out.long_entry.entry_id] = 1;
    return out;
}

std::vector<BenchmarkEntry> build_entries(const std::vector<FunctionUnit>& units,
                                          const std::map<std::string, Split>& repo_splits) {
    std::vector<BenchmarkEntry> entries;
    for (const auto& unit : units) {
        if (unit.compile_status.state != CompileState::Compilable) continue;
        Split split = Split::Eval;
        if (auto it = repo_splits.find(unit.repo_id); it != repo_splits.end()) split = it->second;
        Group group = categorize(unit);
        if (group == Group::G3) {
            G3Variants variants = make_variants(unit);
            for (auto& e : variants.short_entries) {
                e.split = split;
                entries.push_back(std::move(e));
            }
            variants.long_entry.split = split;
            entries.push_back(std::move(variants.long_entry));
        } else {
            BenchmarkEntry e = base_entry(unit, group);
            e.entry_id = unit.unit_id;
            e.split = split;
            e.standard = unit.primary_fn.signature + " " + unit.primary_fn.body + "\n";
            e.labels[e.entry_id] = 1;
            entries.push_back(std::move(e));
        }
    }
    for (auto& e : entries) {
        e.stats["standard"] = compute_stats(e.standard, CodeLang::Source);
    }
    return entries;
}

// ---------------------------------------------------------------------------
// Setting access

std::optional<std::string> setting_code(const BenchmarkEntry& entry, const std::string& key) {
    if (key == "standard") return entry.standard;
    if (key == "neutralized") return entry.neutralized;
    if (key == "assembly") return entry.assembly;
    if (key == "wasm") return entry.wasm;
    if (key.rfind("randomized:", 0) == 0) {
        size_t k = std::stoul(key.substr(11));
        if (k < entry.randomized.size() && !entry.randomized[k].empty()) {
            return entry.randomized[k];
        }
        return std::nullopt;
    }
    throw ConfigError("unknown setting key: " + key);
}

void set_setting_code(BenchmarkEntry& entry, const std::string& key, const std::string& code) {
    if (code.empty()) throw DataError("setting code must not be empty (omit instead)");
    if (key == "standard") entry.standard = code;
    else if (key == "neutralized") entry.neutralized = code;
    else if (key == "assembly") entry.assembly = code;
    else if (key == "wasm") entry.wasm = code;
    else if (key.rfind("randomized:", 0) == 0) {
        size_t k = std::stoul(key.substr(11));
        if (entry.randomized.size() <= k) entry.randomized.resize(k + 1);
        entry.randomized[k] = code;
    } else {
        throw ConfigError("unknown setting key: " + key);
    }
}

// ---------------------------------------------------------------------------
// Corpus assembly and serialization

const BenchmarkEntry* Corpus::find(const std::string& entry_id) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), entry_id,
                               [](const BenchmarkEntry& e, const std::string& id) {
                                   return e.entry_id < id;
                               });
    if (it != entries.end() && it->entry_id == entry_id) return &*it;
    return nullptr;
}

Corpus assemble_corpus(std::vector<BenchmarkEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const BenchmarkEntry& a, const BenchmarkEntry& b) {
                  return a.entry_id < b.entry_id;
              });
    for (size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].entry_id == entries[i - 1].entry_id) {
            throw DataError("duplicate entry_id: " + entries[i].entry_id);
        }
    }
    Corpus corpus;
    corpus.entries = std::move(entries);
    return corpus;
}

CorpusManifest corpus_manifest(const Corpus& corpus) {
    nlohmann::json by_group{{"G1", 0}, {"G2", 0}, {"G3", 0}};
    nlohmann::json by_variant{{"standard", 0}, {"g3_short", 0}, {"g3_long", 0}};
    nlohmann::json by_setting{{"standard", 0}, {"neutralized", 0}, {"assembly", 0}, {"wasm", 0}};
    nlohmann::json licenses = nlohmann::json::object();
    nlohmann::json splits{{"eval", 0}, {"train", 0}};
    std::set<std::string> pair_units[3];
    int excl_asm = 0, excl_wasm = 0;
    int randomized_trials = 0;

    for (const auto& e : corpus.entries) {
        by_variant[to_string(e.variant)] = by_variant[to_string(e.variant)].get<int>() + 1;
        by_setting["standard"] = by_setting["standard"].get<int>() + 1;
        if (e.neutralized) by_setting["neutralized"] = by_setting["neutralized"].get<int>() + 1;
        if (e.assembly) by_setting["assembly"] = by_setting["assembly"].get<int>() + 1;
        if (e.wasm) by_setting["wasm"] = by_setting["wasm"].get<int>() + 1;
        randomized_trials = std::max(randomized_trials, static_cast<int>(e.randomized.size()));
        if (e.is_query()) pair_units[static_cast<int>(e.group)].insert(e.unit_id);
        if (e.expects_lowering()) {
            if (!e.assembly) ++excl_asm;
            if (!e.wasm) ++excl_wasm;
        }
        std::string lic = e.license.empty() ? "unknown" : e.license;
        licenses[lic] = (licenses.contains(lic) ? licenses[lic].get<int>() : 0) + 1;
        splits[to_string(e.split)] = splits[to_string(e.split)].get<int>() + 1;
    }
    by_group["G1"] = static_cast<int>(pair_units[0].size());
    by_group["G2"] = static_cast<int>(pair_units[1].size());
    by_group["G3"] = static_cast<int>(pair_units[2].size());

    CorpusManifest manifest;
    manifest.counts = {{"entries", corpus.entries.size()},
                       {"pairs_by_group", by_group},
                       {"by_variant", by_variant},
                       {"by_setting", by_setting},
                       {"randomized_trials", randomized_trials},
                       {"exclusions", {{"assembly", excl_asm}, {"wasm", excl_wasm}}},
                       {"licenses", licenses},
                       {"splits", splits}};
    return manifest;
}

static nlohmann::json stats_to_json(const CodeStats& s) {
    return {{"loc", s.loc},
            {"tokens", s.tokens},
            {"cc", s.cyclomatic_complexity},
            {"unique_keywords", s.unique_keywords}};
}

static CodeStats stats_from_json(const nlohmann::json& j) {
    CodeStats s;
    s.loc = j.value("loc", 0);
    s.tokens = j.value("tokens", 0);
    s.cyclomatic_complexity = j.value("cc", 1);
    s.unique_keywords = j.value("unique_keywords", 0);
    return s;
}

nlohmann::json entry_to_json(const BenchmarkEntry& e) {
    nlohmann::json code{{"standard", e.standard}};
    if (e.neutralized) code["neutralized"] = *e.neutralized;
    if (!e.randomized.empty()) code["randomized"] = e.randomized;
    if (e.assembly) code["assembly"] = *e.assembly;
    if (e.wasm) code["wasm"] = *e.wasm;

    nlohmann::json stats = nlohmann::json::object();
    for (const auto& [key, s] : e.stats) stats[key] = stats_to_json(s);

    nlohmann::json j{{"entry_id", e.entry_id}, {"unit_id", e.unit_id},
                     {"group", to_string(e.group)}, {"variant", to_string(e.variant)},
                     {"split", to_string(e.split)}, {"license", e.license},
                     {"query", e.query}, {"code", code},
                     {"labels", e.labels}, {"stats", stats}};
    if (!e.query_provenance.is_null()) j["query_provenance"] = e.query_provenance;
    return j;
}

BenchmarkEntry entry_from_json(const nlohmann::json& j) {
    BenchmarkEntry e;
    e.entry_id = j.at("entry_id").get<std::string>();
    e.unit_id = j.value("unit_id", "");
    std::string group = j.value("group", "G1");
    e.group = group == "G3" ? Group::G3 : group == "G2" ? Group::G2 : Group::G1;
    std::string variant = j.value("variant", "standard");
    e.variant = variant == "g3_short" ? Variant::G3Short
              : variant == "g3_long"  ? Variant::G3Long
                                      : Variant::Standard;
    e.split = j.value("split", "eval") == "train" ? Split::Train : Split::Eval;
    e.license = j.value("license", "unknown");
    e.query = j.value("query", "");
    if (j.contains("query_provenance")) e.query_provenance = j["query_provenance"];
    const auto& code = j.at("code");
    e.standard = code.value("standard", "");
    if (code.contains("neutralized")) e.neutralized = code["neutralized"].get<std::string>();
    if (code.contains("randomized")) e.randomized = code["randomized"].get<std::vector<std::string>>();
    if (code.contains("assembly")) e.assembly = code["assembly"].get<std::string>();
    if (code.contains("wasm")) e.wasm = code["wasm"].get<std::string>();
    if (j.contains("labels")) {
        for (auto it = j["labels"].begin(); it != j["labels"].end(); ++it) {
            e.labels[it.key()] = it.value().get<int>();
        }
    }
    if (j.contains("stats")) {
        for (auto it = j["stats"].begin(); it != j["stats"].end(); ++it) {
            e.stats[it.key()] = stats_from_json(it.value());
        }
    }
    return e;
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    std::vector<Json> rows;
    rows.reserve(corpus.entries.size());
    for (const auto& e : corpus.entries) rows.push_back(entry_to_json(e));
    write_jsonl(path, rows);
}

Corpus load_corpus(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& field_map) {
    std::vector<BenchmarkEntry> entries;
    for_each_jsonl(path, [&](const Json& raw) {
        Json row = raw;
        for (const auto& [external, internal] : field_map) {
            if (row.contains(external)) {
                row[internal] = row[external];
                row.erase(external);
            }
        }
        entries.push_back(entry_from_json(row));
    });
    return assemble_corpus(std::move(entries));
}

}  // namespace csb
