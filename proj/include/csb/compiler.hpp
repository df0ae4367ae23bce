#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "csb/extractor.hpp"

namespace csb {

struct ToolchainConfig {
    std::vector<std::string> compile_cmd = {"g++", "-std=c++17", "-c"};
    std::chrono::milliseconds timeout = std::chrono::seconds(30);
    std::filesystem::path workspace = "";  // empty: a fresh temp dir per call
    size_t diagnostic_limit = 2048;        // bytes kept from compiler output
};

/// Self-contained translation unit: includes, forward decls, closure in
/// dependency order, then the primary function.
std::string emit_translation_unit(const FunctionUnit& unit);

/// Compile the unit's translation unit and record the outcome. The emitted
/// file is persisted under the toolchain workspace (named by unit id) so the
/// lowering stage can reuse it.
CompileStatus check_compilable(const FunctionUnit& unit, const ToolchainConfig& toolchain);

/// Compile arbitrary TU text the same way (used to re-verify anonymized
/// variants of a unit).
CompileStatus compile_text(const std::string& tu_text, const std::string& label,
                           const ToolchainConfig& toolchain);

/// Run the gate over a batch in parallel; statuses are written into the units.
void check_batch(std::vector<FunctionUnit>& units, const ToolchainConfig& toolchain,
                 size_t workers = 0);

}  // namespace csb
