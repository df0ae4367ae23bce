#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "csb/lexer.hpp"

namespace csb {

enum class Language { C, Cpp };

std::string to_string(Language lang);
std::optional<Language> language_from_extension(const std::filesystem::path& path);

struct SourceFile {
    std::string repo_id;
    std::string path;  // relative to the repo root
    std::string text;
    Language language = Language::Cpp;
};

struct HeaderWhitelist {
    std::set<std::string> entries;

    bool contains(const std::string& header) const { return entries.count(header) > 0; }

    /// C and C++ standard headers. Extensible via config.
    static HeaderWhitelist standard();
};

// ---------------------------------------------------------------------------
// Per-file parse results

enum class DefKind { Function, Struct, Class, Union, Enum, Typedef, Macro, Global };

std::string to_string(DefKind kind);

struct Definition {
    DefKind kind = DefKind::Function;
    std::string name;
    std::string text;       // full definition text (functions: signature + body)
    std::string signature;  // functions only
    std::string body;       // functions only, braces included
    uint32_t line_begin = 0;
    uint32_t line_end = 0;
    bool is_definition = true;  // false for prototypes / extern declarations
    std::vector<std::string> param_names;   // function or macro parameters
    std::vector<std::string> member_names;  // struct fields / enumerators
    std::vector<std::string> referenced;    // unresolved-at-parse identifier refs, first-occurrence order
    std::string path;  // defining file, filled by the index
};

struct IncludeDirective {
    std::string header;
    bool angled = false;
};

struct ParseWarning {
    std::string path;
    uint32_t line = 0;
    std::string message;
};

struct ParsedFile {
    std::vector<IncludeDirective> includes;
    std::vector<Definition> defs;
    std::vector<ParseWarning> warnings;
};

/// Concrete-syntax scan of one file: includes, macro/type/function/global
/// definitions with their referenced identifiers. Never throws on odd input;
/// unrecognized regions are skipped with a warning.
ParsedFile parse_source(const SourceFile& file);

/// Identifiers bound locally inside a function: parameters, locals declared in
/// the body (including for-init and nested blocks), and goto labels.
std::set<std::string> scan_local_bindings(const Definition& fn);

/// Names bound by declarations anywhere in a token range. Used by the
/// anonymizer to classify locals/parameters/fields in snippet text.
std::set<std::string> scan_declared_names(const std::vector<Token>& toks);

// ---------------------------------------------------------------------------
// Symbol index and dependency closure

class SymbolIndex {
  public:
    void add_file(const std::string& path, const ParsedFile& parsed, bool all_includes_whitelisted);

    /// Within-file first, then first-definition-wins across files.
    const Definition* resolve(const std::string& name, const std::string& from_path) const;

    bool file_is_clean(const std::string& path) const;
    const std::set<std::string>& collisions() const { return collisions_; }
    const std::vector<Definition>& definitions() const { return defs_; }
    const std::vector<IncludeDirective>& includes_of(const std::string& path) const;

  private:
    std::vector<Definition> defs_;
    std::map<std::pair<std::string, std::string>, size_t> by_file_and_name_;
    std::map<std::string, size_t> by_name_;  // first definition wins
    std::set<std::string> collisions_;
    std::map<std::string, bool> clean_files_;
    std::map<std::string, std::vector<IncludeDirective>> file_includes_;
};

struct ClosureTypeDef {
    std::string kind;  // struct | typedef | enum | macro | class
    std::string name;
    std::string text;
    std::vector<std::string> member_names;
};

struct ClosureHelper {
    std::string name;
    std::string signature;
    std::string body;
    std::vector<std::string> param_names;
};

struct DependencyClosure {
    std::vector<ClosureTypeDef> type_defs;   // dependency order
    std::vector<ClosureHelper> helper_fns;   // dependency order, excludes the primary
    std::map<std::string, std::vector<std::string>> call_graph;  // fn -> user fns it calls
    std::vector<std::string> forward_decls;  // synthesized when cycles were broken
    bool has_cycle = false;

    bool empty() const { return type_defs.empty() && helper_fns.empty(); }
};

struct ClosureResult {
    bool ok = false;
    DependencyClosure closure;
    std::vector<std::string> unresolved;  // symbols with no definition and no std presumption
};

ClosureResult build_dependency_closure(const Definition& fn, const SymbolIndex& index,
                                       const HeaderWhitelist& whitelist);

// ---------------------------------------------------------------------------
// Units

enum class CompileState { Unchecked, Compilable, Failed };

struct CompileStatus {
    CompileState state = CompileState::Unchecked;
    std::string reason;  // diagnostic summary for Failed
};

struct PrimaryFn {
    std::string name;
    std::string signature;
    std::string body;
    uint32_t line_begin = 0;
    uint32_t line_end = 0;
};

struct FunctionUnit {
    std::string unit_id;
    std::string repo_id;
    std::string path;
    std::string license = "unknown";
    Language language = Language::Cpp;
    PrimaryFn primary_fn;
    DependencyClosure closure;
    std::vector<std::string> includes;  // whitelisted headers, first-seen order
    CompileStatus compile_status;
    bool name_collision = false;
};

struct ScanReport {
    size_t files_scanned = 0;
    size_t files_skipped = 0;
    size_t functions_seen = 0;
    size_t units_extracted = 0;
    size_t units_rejected_unresolved = 0;
    std::map<std::string, size_t> unresolved_symbols;  // symbol -> reject count
    std::vector<ParseWarning> warnings;
};

struct ScanResult {
    std::vector<FunctionUnit> units;
    ScanReport report;
};

/// Walk a checkout, parse every C/C++ file, and emit one unit per function
/// definition whose dependency closure fully resolves.
ScanResult scan_repository(const std::filesystem::path& root, const HeaderWhitelist& whitelist,
                           const std::string& repo_id = "");

/// Deterministic id over (repo_id, path, function name, body hash).
std::string compute_unit_id(const std::string& repo_id, const std::string& path,
                            const std::string& fn_name, const std::string& body);

/// SPDX-style license guess from LICENSE/COPYING at the repo root.
std::string detect_repo_license(const std::filesystem::path& root);

// JSONL round-trip for units (schema: units.jsonl).
void write_units(const std::filesystem::path& path, const std::vector<FunctionUnit>& units);
std::vector<FunctionUnit> load_units(const std::filesystem::path& path);

nlohmann::json unit_to_json(const FunctionUnit& u);
FunctionUnit unit_from_json(const nlohmann::json& j);

}  // namespace csb
