#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csb/extractor.hpp"

namespace csb {

// Role-aware, consistency-preserving identifier renaming. Only names defined
// by the unit itself (functions, types, macros, fields, locals, parameters)
// are renamed; everything that resolves outside the unit is protected, so the
// transformed code still compiles against the whitelisted headers.

enum class Role { Function, Variable, Macro, TypeOrClass };

std::string to_string(Role role);
std::optional<Role> role_from_string(const std::string& s);

struct IdentifierOccurrence {
    std::string name;
    Role role = Role::Variable;
    std::vector<std::pair<uint32_t, uint32_t>> spans;  // byte ranges, non-overlapping
    bool is_protected = false;
};

struct MappingPair {
    std::string original;
    std::string replacement;
    Role role = Role::Variable;
};

struct AnonymizationMapping {
    std::vector<MappingPair> pairs;  // first-occurrence order
    std::optional<uint64_t> seed;    // none for the neutralized scheme
    int trial_index = 0;
};

/// What the unit defines, gathered from its closure; snippet-local
/// definitions are discovered by parsing the snippet itself.
struct UnitContext {
    std::set<std::string> function_names;
    std::set<std::string> type_names;
    std::set<std::string> macro_names;
    std::set<std::string> field_names;  // struct members and enumerators
    std::set<std::string> extra_protected;

    static UnitContext from_unit(const FunctionUnit& unit);
};

/// Every identifier token in `code` with role and spans; names that resolve
/// to nothing in the unit are marked protected. Identifiers inside comments,
/// string literals and #include directives are out of scope.
std::vector<IdentifierOccurrence> collect_identifiers(const std::string& code,
                                                      const UnitContext& context);

struct AnonymizationResult {
    std::string code;
    AnonymizationMapping mapping;
    double perturbation_fraction = 0.0;
};

/// Role-prefixed placeholders assigned in first-occurrence order:
/// func_a, var_b, MACRO_c, class_d; suffixes continue ...z, aa, ab, ...
AnonymizationResult neutralize(const std::string& code,
                               const std::vector<IdentifierOccurrence>& occurrences);

/// Random 8-char lowercase alphanumeric names from a generator keyed by
/// (seed, trial_index, entry_id). Injective; keywords and surviving names
/// are avoided by rejection sampling.
AnonymizationResult randomize(const std::string& code,
                              const std::vector<IdentifierOccurrence>& occurrences,
                              uint64_t seed, int trial_index, const std::string& entry_id);

/// Cumulative length of renamed identifier occurrences over snippet length.
double perturbation_fraction(const std::string& original_code,
                             const std::vector<IdentifierOccurrence>& occurrences);
double perturbation_fraction(const std::string& original_code,
                             const AnonymizationMapping& mapping);

// Pipeline helpers -----------------------------------------------------------

/// Comments are stripped before renaming in all anonymized settings.
AnonymizationResult neutralize_snippet(const std::string& code, const UnitContext& context);
AnonymizationResult randomize_snippet(const std::string& code, const UnitContext& context,
                                      uint64_t seed, int trial_index,
                                      const std::string& entry_id);

/// Anonymize the unit's whole translation unit (closure + primary) with one
/// mapping; used to verify that anonymized units still compile.
AnonymizationResult anonymize_unit_tu(const FunctionUnit& unit, bool neutral, uint64_t seed,
                                      int trial_index);

}  // namespace csb
