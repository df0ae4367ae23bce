#include <algorithm>
#include <fstream>

#include "csb/errors.hpp"
#include "csb/extractor.hpp"
#include "csb/hash.hpp"
#include "csb/jsonl.hpp"
#include "csb/log.hpp"

namespace csb {

namespace fs = std::filesystem;

HeaderWhitelist HeaderWhitelist::standard() {
    HeaderWhitelist wl;
    static const char* c_headers[] = {
        "assert.h", "complex.h", "ctype.h", "errno.h", "fenv.h", "float.h", "inttypes.h",
        "iso646.h", "limits.h", "locale.h", "math.h", "setjmp.h", "signal.h", "stdalign.h",
        "stdarg.h", "stdatomic.h", "stdbool.h", "stddef.h", "stdint.h", "stdio.h", "stdlib.h",
        "stdnoreturn.h", "string.h", "tgmath.h", "threads.h", "time.h", "uchar.h", "wchar.h",
        "wctype.h",
    };
    static const char* cpp_headers[] = {
        "algorithm", "any", "array", "atomic", "barrier", "bit", "bitset", "cassert", "ccomplex",
        "cctype", "cerrno", "cfenv", "cfloat", "charconv", "chrono", "cinttypes", "climits",
        "clocale", "cmath", "compare", "complex", "concepts", "condition_variable", "coroutine",
        "csetjmp", "csignal", "cstdarg", "cstddef", "cstdint", "cstdio", "cstdlib", "cstring",
        "ctime", "cuchar", "cwchar", "cwctype", "deque", "exception", "execution", "filesystem",
        "format", "forward_list", "fstream", "functional", "future", "initializer_list", "iomanip",
        "ios", "iosfwd", "iostream", "istream", "iterator", "latch", "limits", "list", "locale",
        "map", "memory", "memory_resource", "mutex", "new", "numbers", "numeric", "optional",
        "ostream", "queue", "random", "ranges", "ratio", "regex", "scoped_allocator", "semaphore",
        "set", "shared_mutex", "source_location", "span", "sstream", "stack", "stdexcept",
        "stop_token", "streambuf", "string", "string_view", "system_error", "thread", "tuple",
        "type_traits", "typeindex", "typeinfo", "unordered_map", "unordered_set", "utility",
        "valarray", "variant", "vector", "version",
    };
    for (const char* h : c_headers) wl.entries.insert(h);
    for (const char* h : cpp_headers) wl.entries.insert(h);
    return wl;
}

// ---------------------------------------------------------------------------
// SymbolIndex

void SymbolIndex::add_file(const std::string& path, const ParsedFile& parsed,
                           bool all_includes_whitelisted) {
    clean_files_[path] = all_includes_whitelisted;
    file_includes_[path] = parsed.includes;
    for (Definition def : parsed.defs) {
        def.path = path;
        size_t idx = defs_.size();
        defs_.push_back(std::move(def));
        const Definition& d = defs_.back();

        auto file_key = std::make_pair(path, d.name);
        auto fit = by_file_and_name_.find(file_key);
        if (fit == by_file_and_name_.end()) {
            by_file_and_name_[file_key] = idx;
        } else {
            const Definition& prev = defs_[fit->second];
            if (!prev.is_definition && d.is_definition) {
                by_file_and_name_[file_key] = idx;  // definition beats prototype
            } else if (prev.is_definition && d.is_definition) {
                collisions_.insert(d.name);
            }
        }

        auto git = by_name_.find(d.name);
        if (git == by_name_.end()) {
            by_name_[d.name] = idx;
        } else {
            const Definition& prev = defs_[git->second];
            if (!prev.is_definition && d.is_definition) {
                by_name_[d.name] = idx;
            } else if (prev.is_definition && d.is_definition && prev.path != path) {
                collisions_.insert(d.name);  // first definition wins
            }
        }
    }
}

const Definition* SymbolIndex::resolve(const std::string& name, const std::string& from_path) const {
    auto fit = by_file_and_name_.find({from_path, name});
    if (fit != by_file_and_name_.end()) return &defs_[fit->second];
    auto git = by_name_.find(name);
    if (git != by_name_.end()) return &defs_[git->second];
    return nullptr;
}

bool SymbolIndex::file_is_clean(const std::string& path) const {
    auto it = clean_files_.find(path);
    return it != clean_files_.end() && it->second;
}

const std::vector<IncludeDirective>& SymbolIndex::includes_of(const std::string& path) const {
    static const std::vector<IncludeDirective> none;
    auto it = file_includes_.find(path);
    return it != file_includes_.end() ? it->second : none;
}

// ---------------------------------------------------------------------------
// Dependency closure

namespace {

enum class Color { White, Gray, Black };

struct ClosureBuilder {
    const SymbolIndex* index = nullptr;
    const Definition* root;

    std::map<const Definition*, Color> color;
    std::vector<const Definition*> order;       // post-order: dependencies first
    std::vector<std::string> unresolved;
    std::set<std::string> unresolved_seen;
    std::vector<std::string> forward_decls;
    std::set<std::string> forward_seen;
    bool has_cycle = false;

    void note_unresolved(const std::string& name) {
        if (unresolved_seen.insert(name).second) unresolved.push_back(name);
    }

    void forward_declare(const Definition* def) {
        if (!forward_seen.insert(def->name).second) return;
        has_cycle = true;
        switch (def->kind) {
            case DefKind::Function:
                forward_decls.push_back(def->signature + ";");
                break;
            case DefKind::Struct:
            case DefKind::Union:
                forward_decls.push_back("struct " + def->name + ";");
                break;
            case DefKind::Class:
                forward_decls.push_back("class " + def->name + ";");
                break;
            default:
                break;  // typedef/macro cycles cannot be forward-declared
        }
    }

    void visit(const Definition* def) {
        color[def] = Color::Gray;
        for (const std::string& ref : def->referenced) {
            const Definition* target = index->resolve(ref, def->path);
            if (target == root) continue;  // recursion back into the primary
            if (target != nullptr && target->kind == DefKind::Function && !target->is_definition) {
                target = nullptr;  // prototype only: body is not in the repo
            }
            if (target == nullptr) {
                if (!index->file_is_clean(def->path)) note_unresolved(ref);
                continue;  // presumed to come from a whitelisted header
            }
            if (target->kind == DefKind::Global) {
                // no closure slot for file-scope globals; reject the unit
                note_unresolved(ref);
                continue;
            }
            auto it = color.find(target);
            if (it == color.end() || it->second == Color::White) {
                visit(target);
            } else if (it->second == Color::Gray) {
                forward_declare(target);
            }
        }
        color[def] = Color::Black;
        if (def != root) order.push_back(def);
    }
};

std::string closure_kind(DefKind kind) {
    switch (kind) {
        case DefKind::Struct: return "struct";
        case DefKind::Union: return "struct";
        case DefKind::Class: return "class";
        case DefKind::Enum: return "enum";
        case DefKind::Typedef: return "typedef";
        case DefKind::Macro: return "macro";
        default: return "?";
    }
}

}  // namespace

ClosureResult build_dependency_closure(const Definition& fn, const SymbolIndex& index,
                                       const HeaderWhitelist& whitelist) {
    (void)whitelist;  // header cleanliness is precomputed per file in the index
    ClosureBuilder builder;
    builder.index = &index;
    builder.root = &fn;
    builder.visit(&fn);

    ClosureResult result;
    result.unresolved = std::move(builder.unresolved);
    if (!result.unresolved.empty()) return result;

    DependencyClosure& closure = result.closure;
    closure.has_cycle = builder.has_cycle;
    closure.forward_decls = std::move(builder.forward_decls);
    for (const Definition* def : builder.order) {
        if (def->kind == DefKind::Function) {
            closure.helper_fns.push_back({def->name, def->signature, def->body, def->param_names});
        } else {
            closure.type_defs.push_back(
                {closure_kind(def->kind), def->name, def->text, def->member_names});
        }
    }

    // call graph over the primary and its helpers
    auto edges_of = [&](const Definition* def) {
        std::vector<std::string> callees;
        for (const std::string& ref : def->referenced) {
            const Definition* target = index.resolve(ref, def->path);
            if (target == &fn
                || (target != nullptr && target->kind == DefKind::Function
                    && target->is_definition)) {
                callees.push_back(ref);
            }
        }
        return callees;
    };
    closure.call_graph[fn.name] = edges_of(&fn);
    for (const Definition* def : builder.order) {
        if (def->kind == DefKind::Function) closure.call_graph[def->name] = edges_of(def);
    }

    result.ok = true;
    return result;
}

// ---------------------------------------------------------------------------
// Repository scan

std::string compute_unit_id(const std::string& repo_id, const std::string& path,
                            const std::string& fn_name, const std::string& body) {
    return short_hash(repo_id + "\x1f" + path + "\x1f" + fn_name + "\x1f" + sha256_hex(body));
}

std::string detect_repo_license(const fs::path& root) {
    for (const char* name : {"LICENSE", "LICENSE.txt", "LICENSE.md", "COPYING", "COPYING.txt"}) {
        fs::path p = root / name;
        if (!fs::exists(p)) continue;
        std::string text;
        try {
            text = read_file(p);
        } catch (const DataError&) {
            continue;
        }
        std::string head = text.substr(0, 2048);
        auto has = [&](const char* needle) { return head.find(needle) != std::string::npos; };
        if (has("Apache License") && has("2.0")) return "Apache-2.0";
        if (has("MIT License") || has("Permission is hereby granted, free of charge")) return "MIT";
        if (has("GNU LESSER GENERAL PUBLIC LICENSE") || has("GNU Lesser General Public License"))
            return has("3") ? "LGPL-3.0" : "LGPL-2.1";
        if (has("GNU GENERAL PUBLIC LICENSE") || has("GNU General Public License"))
            return has("Version 3") ? "GPL-3.0" : "GPL-2.0";
        if (has("Mozilla Public License")) return "MPL-2.0";
        if (has("BSD 3-Clause") || (has("Redistribution and use") && has("neither the name")))
            return "BSD-3-Clause";
        if (has("BSD 2-Clause") || has("Redistribution and use")) return "BSD-2-Clause";
        if (has("ISC License")) return "ISC";
        if (has("This is free and unencumbered software")) return "Unlicense";
        if (has("Boost Software License")) return "BSL-1.0";
        if (has("zlib License") || has("zlib license")) return "Zlib";
        return "unknown";
    }
    return "unknown";
}

ScanResult scan_repository(const fs::path& root, const HeaderWhitelist& whitelist,
                           const std::string& repo_id_arg) {
    if (!fs::exists(root) || !fs::is_directory(root)) {
        throw DataError("not a directory: " + root.string());
    }
    std::string repo_id = repo_id_arg.empty() ? root.filename().string() : repo_id_arg;

    ScanResult result;
    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(root, ec), end; it != end; it.increment(ec)) {
        if (ec) throw DataError("cannot walk " + root.string() + ": " + ec.message());
        if (it->is_directory()) {
            if (it->path().filename() == ".git") it.disable_recursion_pending();
            continue;
        }
        auto ext = it->path().extension().string();
        if (ext == ".c" || ext == ".h" || ext == ".cc" || ext == ".cpp" || ext == ".hpp") {
            files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());

    SymbolIndex index;
    std::vector<std::pair<std::string, SourceFile>> sources;  // rel path -> file
    for (const fs::path& p : files) {
        std::string rel = fs::relative(p, root).generic_string();
        SourceFile sf;
        sf.repo_id = repo_id;
        sf.path = rel;
        try {
            sf.text = read_file(p);
        } catch (const DataError& e) {
            result.report.files_skipped++;
            result.report.warnings.push_back({rel, 0, e.what()});
            continue;
        }
        if (sf.text.empty()) {
            result.report.files_skipped++;
            continue;
        }
        sf.language = language_from_extension(p).value_or(Language::Cpp);
        ParsedFile parsed = parse_source(sf);
        for (const auto& w : parsed.warnings) result.report.warnings.push_back(w);
        bool clean = true;
        for (const auto& inc : parsed.includes) {
            if (inc.angled && !whitelist.contains(inc.header)) clean = false;
        }
        index.add_file(rel, parsed, clean);
        sources.emplace_back(rel, std::move(sf));
        result.report.files_scanned++;
    }

    std::string license = detect_repo_license(root);

    for (const auto& [rel, sf] : sources) {
        for (const Definition& def : index.definitions()) {
            if (def.path != rel || def.kind != DefKind::Function || !def.is_definition) continue;
            result.report.functions_seen++;
            ClosureResult closure = build_dependency_closure(def, index, whitelist);
            if (!closure.ok) {
                result.report.units_rejected_unresolved++;
                for (const auto& sym : closure.unresolved) result.report.unresolved_symbols[sym]++;
                continue;
            }

            FunctionUnit unit;
            unit.repo_id = repo_id;
            unit.path = rel;
            unit.license = license;
            unit.language = sf.language;
            unit.primary_fn = {def.name, def.signature, def.body, def.line_begin, def.line_end};
            unit.closure = std::move(closure.closure);

            // whitelisted headers, first-seen order: primary file, then helper files
            std::set<std::string> seen_headers;
            auto add_includes = [&](const std::string& path) {
                for (const auto& inc : index.includes_of(path)) {
                    if (inc.angled && whitelist.contains(inc.header)
                        && seen_headers.insert(inc.header).second) {
                        unit.includes.push_back(inc.header);
                    }
                }
            };
            add_includes(rel);
            for (const Definition& other : index.definitions()) {
                if (other.path == rel) continue;
                bool in_closure = false;
                for (const auto& h : unit.closure.helper_fns) {
                    if (h.name == other.name && other.kind == DefKind::Function) in_closure = true;
                }
                for (const auto& t : unit.closure.type_defs) {
                    if (t.name == other.name && other.kind != DefKind::Function) in_closure = true;
                }
                if (in_closure) add_includes(other.path);
            }

            unit.name_collision = index.collisions().count(def.name) > 0;
            for (const auto& h : unit.closure.helper_fns) {
                if (index.collisions().count(h.name) > 0) unit.name_collision = true;
            }
            unit.unit_id = compute_unit_id(repo_id, rel, def.name, def.body);
            result.units.push_back(std::move(unit));
        }
    }
    result.report.units_extracted = result.units.size();
    return result;
}

// ---------------------------------------------------------------------------
// JSONL round-trip

static Json closure_to_json(const DependencyClosure& c) {
    Json type_defs = Json::array();
    for (const auto& t : c.type_defs) {
        type_defs.push_back(
            {{"kind", t.kind}, {"name", t.name}, {"text", t.text}, {"members", t.member_names}});
    }
    Json helpers = Json::array();
    for (const auto& h : c.helper_fns) {
        helpers.push_back({{"name", h.name},
                           {"signature", h.signature},
                           {"body", h.body},
                           {"params", h.param_names}});
    }
    Json graph = Json::object();
    for (const auto& [k, v] : c.call_graph) graph[k] = v;
    Json out{{"type_defs", type_defs}, {"helper_fns", helpers}, {"call_graph", graph}};
    if (!c.forward_decls.empty()) out["forward_decls"] = c.forward_decls;
    if (c.has_cycle) out["has_cycle"] = true;
    return out;
}

static DependencyClosure closure_from_json(const Json& j) {
    DependencyClosure c;
    for (const auto& t : j.value("type_defs", Json::array())) {
        c.type_defs.push_back({t.value("kind", ""), t.value("name", ""), t.value("text", ""),
                               t.value("members", std::vector<std::string>{})});
    }
    for (const auto& h : j.value("helper_fns", Json::array())) {
        c.helper_fns.push_back({h.value("name", ""), h.value("signature", ""), h.value("body", ""),
                                h.value("params", std::vector<std::string>{})});
    }
    if (j.contains("call_graph")) {
        for (auto it = j["call_graph"].begin(); it != j["call_graph"].end(); ++it) {
            c.call_graph[it.key()] = it.value().get<std::vector<std::string>>();
        }
    }
    c.forward_decls = j.value("forward_decls", std::vector<std::string>{});
    c.has_cycle = j.value("has_cycle", false);
    return c;
}

Json unit_to_json(const FunctionUnit& u) {
    Json status{{"state", u.compile_status.state == CompileState::Unchecked ? "unchecked"
                          : u.compile_status.state == CompileState::Compilable ? "compilable"
                                                                               : "failed"}};
    if (!u.compile_status.reason.empty()) status["reason"] = u.compile_status.reason;
    Json j{{"unit_id", u.unit_id},
           {"repo_id", u.repo_id},
           {"path", u.path},
           {"license", u.license},
           {"language", to_string(u.language)},
           {"primary_fn",
            {{"name", u.primary_fn.name},
             {"signature", u.primary_fn.signature},
             {"body", u.primary_fn.body},
             {"line_span", {u.primary_fn.line_begin, u.primary_fn.line_end}}}},
           {"closure", closure_to_json(u.closure)},
           {"includes", u.includes},
           {"compile_status", status}};
    if (u.name_collision) j["name_collision"] = true;
    return j;
}

FunctionUnit unit_from_json(const Json& j) {
    FunctionUnit u;
    u.unit_id = j.value("unit_id", "");
    u.repo_id = j.value("repo_id", "");
    u.path = j.value("path", "");
    u.license = j.value("license", "unknown");
    u.language = j.value("language", "cpp") == "c" ? Language::C : Language::Cpp;
    const Json& p = j.at("primary_fn");
    u.primary_fn.name = p.value("name", "");
    u.primary_fn.signature = p.value("signature", "");
    u.primary_fn.body = p.value("body", "");
    if (p.contains("line_span") && p["line_span"].size() == 2) {
        u.primary_fn.line_begin = p["line_span"][0].get<uint32_t>();
        u.primary_fn.line_end = p["line_span"][1].get<uint32_t>();
    }
    u.closure = closure_from_json(j.value("closure", Json::object()));
    u.includes = j.value("includes", std::vector<std::string>{});
    if (j.contains("compile_status")) {
        std::string state = j["compile_status"].value("state", "unchecked");
        u.compile_status.state = state == "compilable" ? CompileState::Compilable
                               : state == "failed"     ? CompileState::Failed
                                                       : CompileState::Unchecked;
        u.compile_status.reason = j["compile_status"].value("reason", "");
    }
    u.name_collision = j.value("name_collision", false);
    return u;
}

void write_units(const fs::path& path, const std::vector<FunctionUnit>& units) {
    std::vector<Json> rows;
    rows.reserve(units.size());
    for (const auto& u : units) rows.push_back(unit_to_json(u));
    write_jsonl(path, rows);
}

std::vector<FunctionUnit> load_units(const fs::path& path) {
    std::vector<FunctionUnit> units;
    for_each_jsonl(path, [&](const Json& row) { units.push_back(unit_from_json(row)); });
    return units;
}

}  // namespace csb
