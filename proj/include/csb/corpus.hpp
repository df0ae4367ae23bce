#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csb/extractor.hpp"

namespace csb {

enum class Group { G1, G2, G3 };
enum class Variant { Standard, G3Short, G3Long };
enum class Split { Eval, Train };

std::string to_string(Group g);
std::string to_string(Variant v);
std::string to_string(Split s);

/// Dependency-complexity category:
///   G1 — whitelisted standard library only (empty closure)
///   G2 — custom types/macros, no helper functions
///   G3 — at least one user-defined helper function
Group categorize(const FunctionUnit& unit);

// ---------------------------------------------------------------------------
// Code statistics

enum class CodeLang { Source, Asm, Wat };

struct TokenizerConfig {
    std::string name = "lexical";
};

struct CodeStats {
    int loc = 0;
    int tokens = 0;
    int cyclomatic_complexity = 1;
    int unique_keywords = 0;
};

/// loc = non-blank non-comment lines; cc = 1 + decision points (if/for/
/// while/case/&&/||/?) for source, 1 for lowered text; unique_keywords =
/// distinct language keywords (source) or instruction mnemonics (asm/wat).
CodeStats compute_stats(const std::string& code, CodeLang lang,
                        const TokenizerConfig& tokenizer = {});

// ---------------------------------------------------------------------------
// Benchmark entries

struct BenchmarkEntry {
    std::string entry_id;
    std::string unit_id;
    Group group = Group::G1;
    Variant variant = Variant::Standard;
    Split split = Split::Eval;
    std::string license = "unknown";
    std::string query;  // empty until query generation
    nlohmann::json query_provenance;  // model, prompt hash, timestamps

    std::string standard;  // always present
    std::optional<std::string> neutralized;
    std::vector<std::string> randomized;  // trial k at index k
    std::optional<std::string> assembly;  // absent = excluded
    std::optional<std::string> wasm;

    std::map<std::string, int> labels;       // candidate_id -> relevance; empty on pool-only rows
    std::map<std::string, CodeStats> stats;  // per setting key

    bool is_query() const { return !labels.empty(); }
    /// Lowered settings attach to standard-variant and G3Long entries only.
    bool expects_lowering() const { return variant != Variant::G3Short; }
};

/// Setting keys: "standard", "neutralized", "randomized:<k>", "assembly", "wasm".
std::optional<std::string> setting_code(const BenchmarkEntry& entry, const std::string& key);
void set_setting_code(BenchmarkEntry& entry, const std::string& key, const std::string& code);

/// Group-3 variants. Short: the primary and each helper become separate
/// candidate snippets (labels 2 / 1 on the primary's entry). Long: closure and
/// primary merged into one snippet in dependency order (label 1).
struct G3Variants {
    std::vector<BenchmarkEntry> short_entries;  // [0] is the primary's query entry
    BenchmarkEntry long_entry;
};
G3Variants make_variants(const FunctionUnit& unit);

/// One query entry per G1/G2 unit plus the G3 variant entries; standard-
/// setting stats are filled. Units that are not Compilable are skipped.
std::vector<BenchmarkEntry> build_entries(const std::vector<FunctionUnit>& units,
                                          const std::map<std::string, Split>& repo_splits = {});

// ---------------------------------------------------------------------------
// Corpus file

struct CorpusManifest {
    nlohmann::json counts;  // totals, per group/variant/setting, exclusions, licenses
};

struct Corpus {
    std::vector<BenchmarkEntry> entries;  // ordered by entry_id

    const BenchmarkEntry* find(const std::string& entry_id) const;
};

/// Sort by entry_id, reject duplicate ids, and compute the manifest.
Corpus assemble_corpus(std::vector<BenchmarkEntry> entries);
CorpusManifest corpus_manifest(const Corpus& corpus);

nlohmann::json entry_to_json(const BenchmarkEntry& entry);
BenchmarkEntry entry_from_json(const nlohmann::json& j);

void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

/// `field_map` renames top-level JSON fields on load (external name -> ours),
/// so third-party corpora with the same information load without rewriting.
Corpus load_corpus(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& field_map = {});

}  // namespace csb
