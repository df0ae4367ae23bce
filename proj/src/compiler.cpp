#include "csb/compiler.hpp"

#include <atomic>
#include <thread>

#include "csb/errors.hpp"
#include "csb/jsonl.hpp"
#include "csb/subprocess.hpp"

namespace csb {

namespace fs = std::filesystem;

std::string emit_translation_unit(const FunctionUnit& unit) {
    std::string tu;
    for (const auto& header : unit.includes) {
        tu += "#include <" + header + ">\n";
    }
    if (!unit.includes.empty()) tu += "\n";
    for (const auto& fwd : unit.closure.forward_decls) {
        tu += fwd + "\n";
    }
    if (!unit.closure.forward_decls.empty()) tu += "\n";
    for (const auto& t : unit.closure.type_defs) {
        tu += t.text;
        tu += "\n\n";
    }
    for (const auto& h : unit.closure.helper_fns) {
        tu += h.signature + " " + h.body + "\n\n";
    }
    tu += unit.primary_fn.signature + " " + unit.primary_fn.body + "\n";
    return tu;
}

static fs::path ensure_workspace(const ToolchainConfig& toolchain) {
    fs::path dir = toolchain.workspace;
    if (dir.empty()) dir = fs::temp_directory_path() / "csb-compile";
    fs::create_directories(dir);
    return dir;
}

CompileStatus compile_text(const std::string& tu_text, const std::string& label,
                           const ToolchainConfig& toolchain) {
    if (toolchain.compile_cmd.empty() || !command_exists(toolchain.compile_cmd[0])) {
        throw EnvironmentError("compiler not found: "
                               + (toolchain.compile_cmd.empty() ? std::string("<unset>")
                                                                : toolchain.compile_cmd[0]));
    }
    fs::path dir = ensure_workspace(toolchain);
    fs::path src = dir / (label + ".cpp");
    fs::path obj = dir / (label + ".o");
    atomic_write_file(src, tu_text);

    std::vector<std::string> cmd = toolchain.compile_cmd;
    cmd.push_back(src.string());
    cmd.push_back("-o");
    cmd.push_back(obj.string());
    CommandResult run = run_command(cmd, toolchain.timeout);

    CompileStatus status;
    if (run.timed_out) {
        status.state = CompileState::Failed;
        status.reason = "timeout";
    } else if (run.spawn_failed) {
        throw EnvironmentError("cannot run compiler: " + toolchain.compile_cmd[0]);
    } else if (run.exit_code == 0) {
        status.state = CompileState::Compilable;
    } else {
        status.state = CompileState::Failed;
        status.reason = run.output.substr(0, toolchain.diagnostic_limit);
    }
    return status;
}

CompileStatus check_compilable(const FunctionUnit& unit, const ToolchainConfig& toolchain) {
    return compile_text(emit_translation_unit(unit), "tu_" + unit.unit_id, toolchain);
}

void check_batch(std::vector<FunctionUnit>& units, const ToolchainConfig& toolchain,
                 size_t workers) {
    if (workers == 0) workers = std::max<size_t>(1, std::thread::hardware_concurrency());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= units.size()) return;
            units[i].compile_status = check_compilable(units[i], toolchain);
        }
    };
    std::vector<std::thread> pool;
    for (size_t i = 0; i < std::min(workers, units.size()); ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace csb
