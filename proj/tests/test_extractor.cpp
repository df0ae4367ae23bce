#include <doctest.h>

#include "csb/errors.hpp"
#include "csb/extractor.hpp"
#include "fixtures.hpp"

using namespace csb;
using namespace csbtest;

static SourceFile make_source(const char* text, const std::string& path = "a.cpp") {
    SourceFile sf;
    sf.repo_id = "fixture";
    sf.path = path;
    sf.text = text;
    sf.language = Language::Cpp;
    return sf;
}

TEST_CASE("parse a single free function") {
    auto parsed = parse_source(make_source(kIsDigitSource));
    REQUIRE(parsed.defs.size() == 1);
    const auto& def = parsed.defs[0];
    CHECK(def.kind == DefKind::Function);
    CHECK(def.name == "IsDigit");
    CHECK(def.signature == "bool IsDigit(const char d)");
    CHECK(def.body.front() == '{');
    CHECK(def.body.back() == '}');
    CHECK(def.param_names == std::vector<std::string>{"d"});
    CHECK(def.referenced.empty());  // d is a parameter, literals are not refs
}

TEST_CASE("parse struct + function with member access") {
    auto parsed = parse_source(make_source(kOptAncSource));
    REQUIRE(parsed.defs.size() == 2);
    CHECK(parsed.defs[0].kind == DefKind::Typedef);
    CHECK(parsed.defs[0].name == "OptAnc");
    std::vector<std::string> members = parsed.defs[0].member_names;
    CHECK(members == std::vector<std::string>{"left", "right"});

    const auto& fn = parsed.defs[1];
    CHECK(fn.name == "is_set_opt_anc_info");
    CHECK(fn.param_names == std::vector<std::string>{"to", "anc"});
    // OptAnc referenced; members after -> are not global refs
    CHECK(fn.referenced == std::vector<std::string>{"OptAnc"});
}

TEST_CASE("parse typedef + helper + primary") {
    auto parsed = parse_source(make_source(kSimplesortSource));
    REQUIRE(parsed.defs.size() == 3);
    CHECK(parsed.defs[0].name == "string");
    CHECK(parsed.defs[0].kind == DefKind::Typedef);
    CHECK(parsed.defs[1].name == "scmp");
    CHECK(parsed.defs[2].name == "simplesort");
    // locals i,j,tmp and params a,n,b are bound; string + scmp remain
    CHECK(parsed.defs[2].referenced == std::vector<std::string>{"string", "scmp"});
}

TEST_CASE("macros: object-like and function-like") {
    auto parsed = parse_source(make_source(
        "#define LIMIT 64\n"
        "#define CLAMP(v) ((v) > LIMIT ? LIMIT : (v))\n"
        "int clamp_it(int x) { return CLAMP(x); }\n"));
    REQUIRE(parsed.defs.size() == 3);
    CHECK(parsed.defs[0].kind == DefKind::Macro);
    CHECK(parsed.defs[0].name == "LIMIT");
    CHECK(parsed.defs[0].referenced.empty());
    CHECK(parsed.defs[1].name == "CLAMP");
    CHECK(parsed.defs[1].param_names == std::vector<std::string>{"v"});
    CHECK(parsed.defs[1].referenced == std::vector<std::string>{"LIMIT"});
    CHECK(parsed.defs[2].referenced == std::vector<std::string>{"CLAMP"});
}

TEST_CASE("includes are recorded with angle/quote distinction") {
    auto parsed = parse_source(make_source(
        "#include <stdio.h>\n#include \"local.h\"\nint f(void) { return 0; }\n"));
    REQUIRE(parsed.includes.size() == 2);
    CHECK(parsed.includes[0].header == "stdio.h");
    CHECK(parsed.includes[0].angled);
    CHECK(parsed.includes[1].header == "local.h");
    CHECK_FALSE(parsed.includes[1].angled);
}

TEST_CASE("prototypes are not definitions") {
    auto parsed = parse_source(make_source("int fwd(int);\nint fwd(int x) { return x; }\n"));
    REQUIRE(parsed.defs.size() == 2);
    CHECK_FALSE(parsed.defs[0].is_definition);
    CHECK(parsed.defs[1].is_definition);
}

TEST_CASE("methods and out-of-line definitions are skipped") {
    auto parsed = parse_source(make_source(
        "struct W { int v; int get() { return v; } };\n"
        "int W::helper() { return 1; }\n"
        "int standalone() { return 2; }\n"));
    int functions = 0;
    for (const auto& d : parsed.defs) {
        if (d.kind == DefKind::Function && d.is_definition) ++functions;
    }
    CHECK(functions == 1);
}

TEST_CASE("namespaces and templates") {
    auto parsed = parse_source(make_source(
        "namespace outer {\n"
        "namespace {\n"
        "template <typename T> T twice(T v) { return v + v; }\n"
        "}\n"
        "int plain() { return 3; }\n"
        "}\n"));
    REQUIRE(parsed.defs.size() == 2);
    CHECK(parsed.defs[0].name == "twice");
    CHECK(parsed.defs[0].referenced.empty());  // T is a template parameter
    CHECK(parsed.defs[1].name == "plain");
}

TEST_CASE("enums and globals") {
    auto parsed = parse_source(make_source(
        "enum Mode { MODE_OFF, MODE_ON = 2 };\n"
        "static const int kTable[2] = {1, 2};\n"));
    REQUIRE(parsed.defs.size() == 2);
    CHECK(parsed.defs[0].kind == DefKind::Enum);
    CHECK(parsed.defs[0].member_names == std::vector<std::string>{"MODE_OFF", "MODE_ON"});
    CHECK(parsed.defs[1].kind == DefKind::Global);
    CHECK(parsed.defs[1].name == "kTable");
}

TEST_CASE("garbage input never throws") {
    auto parsed = parse_source(make_source("\x01\x02 ] } ) int ??? \"unterminated"));
    CHECK(parsed.defs.size() <= 1);  // nothing meaningful extracted
}

// --- scan_repository ---------------------------------------------------------

TEST_CASE("empty directory scans to an empty list") {
    TempDir dir;
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    CHECK(result.units.empty());
    CHECK(result.report.files_scanned == 0);
}

TEST_CASE("IsDigit repo: one unit, empty closure, empty includes") {
    TempDir dir;
    write_file(dir.path(), "digit.cpp", kIsDigitSource);
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    REQUIRE(result.units.size() == 1);
    const auto& unit = result.units[0];
    CHECK(unit.primary_fn.name == "IsDigit");
    CHECK(unit.closure.empty());
    CHECK(unit.includes.empty());
    CHECK(unit.unit_id.size() == 16);
}

TEST_CASE("simplesort repo: closure holds one typedef and one helper") {
    TempDir dir;
    write_file(dir.path(), "sort.cpp", kSimplesortSource);
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    // scmp itself is also extractable: 2 units
    REQUIRE(result.units.size() == 2);
    const FunctionUnit* simplesort = nullptr;
    for (const auto& u : result.units) {
        if (u.primary_fn.name == "simplesort") simplesort = &u;
    }
    REQUIRE(simplesort != nullptr);
    // hand-built expected closure
    REQUIRE(simplesort->closure.type_defs.size() == 1);
    CHECK(simplesort->closure.type_defs[0].name == "string");
    CHECK(simplesort->closure.type_defs[0].kind == "typedef");
    REQUIRE(simplesort->closure.helper_fns.size() == 1);
    CHECK(simplesort->closure.helper_fns[0].name == "scmp");
    auto calls = simplesort->closure.call_graph.at("simplesort");
    CHECK(calls == std::vector<std::string>{"scmp"});
}

TEST_CASE("whitelist-only dependencies give an empty closure") {
    TempDir dir;
    write_file(dir.path(), "p.cpp",
               "#include <stdio.h>\nvoid shout(const char* m) { printf(\"%s\\n\", m); }\n");
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    REQUIRE(result.units.size() == 1);
    CHECK(result.units[0].closure.empty());
    CHECK(result.units[0].includes == std::vector<std::string>{"stdio.h"});
}

TEST_CASE("OptAnc closure contains exactly the OptAnc definition") {
    TempDir dir;
    write_file(dir.path(), "anc.cpp", kOptAncSource);
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    REQUIRE(result.units.size() == 1);
    const auto& closure = result.units[0].closure;
    REQUIRE(closure.type_defs.size() == 1);
    CHECK(closure.type_defs[0].name == "OptAnc");
    CHECK(closure.helper_fns.empty());
}

TEST_CASE("chain f->g->h closes over [h, g] in that order") {
    TempDir dir;
    write_file(dir.path(), "chain.cpp", kChainSource);
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    const FunctionUnit* f = nullptr;
    for (const auto& u : result.units) {
        if (u.primary_fn.name == "f") f = &u;
    }
    REQUIRE(f != nullptr);
    REQUIRE(f->closure.helper_fns.size() == 2);
    CHECK(f->closure.helper_fns[0].name == "h");
    CHECK(f->closure.helper_fns[1].name == "g");

    // oracle: transitive closure over the hand-declared graph f->g->h
    CHECK(f->closure.call_graph.at("f") == std::vector<std::string>{"g"});
    CHECK(f->closure.call_graph.at("g") == std::vector<std::string>{"h"});
    CHECK(f->closure.call_graph.at("h").empty());
}

TEST_CASE("unresolved external dependencies reject the unit and are counted") {
    TempDir dir;
    write_file(dir.path(), "bad.cpp",
               "#include <weird_external_lib.h>\nint uses_ext(int x) { return ext_call(x); }\n");
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    CHECK(result.units.empty());
    CHECK(result.report.units_rejected_unresolved == 1);
    CHECK(result.report.unresolved_symbols.count("ext_call") == 1);
}

TEST_CASE("mutual recursion is broken with a forward declaration") {
    TempDir dir;
    write_file(dir.path(), "mutual.cpp",
               "static int is_odd(int n);\n"
               "static int is_even(int n) { return n == 0 ? 1 : is_odd(n - 1); }\n"
               "static int is_odd(int n) { return n == 0 ? 0 : is_even(n - 1); }\n"
               "int parity(int n) { return is_even(n); }\n");
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    const FunctionUnit* parity = nullptr;
    for (const auto& u : result.units) {
        if (u.primary_fn.name == "parity") parity = &u;
    }
    REQUIRE(parity != nullptr);
    CHECK(parity->closure.helper_fns.size() == 2);
    CHECK(parity->closure.has_cycle);
    REQUIRE(!parity->closure.forward_decls.empty());
}

TEST_CASE("cross-file helpers resolve through the index") {
    TempDir dir;
    write_file(dir.path(), "util.cpp", "int add_ints(int a, int b) { return a + b; }\n");
    write_file(dir.path(), "main.cpp", "int sum3(int a, int b, int c) { return add_ints(add_ints(a, b), c); }\n");
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    const FunctionUnit* sum3 = nullptr;
    for (const auto& u : result.units) {
        if (u.primary_fn.name == "sum3") sum3 = &u;
    }
    REQUIRE(sum3 != nullptr);
    REQUIRE(sum3->closure.helper_fns.size() == 1);
    CHECK(sum3->closure.helper_fns[0].name == "add_ints");
}

TEST_CASE("determinism: two scans yield identical unit lists") {
    TempDir dir;
    write_file(dir.path(), "a.cpp", kIsDigitSource);
    write_file(dir.path(), "b.cpp", kSimplesortSource);
    write_file(dir.path(), "c.cpp", kChainSource);
    auto r1 = scan_repository(dir.path(), HeaderWhitelist::standard());
    auto r2 = scan_repository(dir.path(), HeaderWhitelist::standard());
    REQUIRE(r1.units.size() == r2.units.size());
    for (size_t i = 0; i < r1.units.size(); ++i) {
        CHECK(r1.units[i].unit_id == r2.units[i].unit_id);
        CHECK(r1.units[i].primary_fn.name == r2.units[i].primary_fn.name);
    }
}

TEST_CASE("whole-repo scan equals union of per-file scans") {
    TempDir whole;
    write_file(whole.path(), "a.cpp", kIsDigitSource);
    write_file(whole.path(), "b.cpp", kOptAncSource);
    auto r_whole = scan_repository(whole.path(), HeaderWhitelist::standard(), "fix");

    std::vector<std::string> whole_names;
    for (const auto& u : r_whole.units) whole_names.push_back(u.primary_fn.name);

    std::vector<std::string> part_names;
    {
        TempDir part;
        write_file(part.path(), "a.cpp", kIsDigitSource);
        for (const auto& u : scan_repository(part.path(), HeaderWhitelist::standard(), "fix").units)
            part_names.push_back(u.primary_fn.name);
    }
    {
        TempDir part;
        write_file(part.path(), "b.cpp", kOptAncSource);
        for (const auto& u : scan_repository(part.path(), HeaderWhitelist::standard(), "fix").units)
            part_names.push_back(u.primary_fn.name);
    }
    std::sort(whole_names.begin(), whole_names.end());
    std::sort(part_names.begin(), part_names.end());
    CHECK(whole_names == part_names);
}

TEST_CASE("units round-trip through JSONL") {
    TempDir dir;
    write_file(dir.path(), "sort.cpp", kSimplesortSource);
    auto result = scan_repository(dir.path(), HeaderWhitelist::standard());
    TempDir out;
    auto path = out.path() / "units.jsonl";
    write_units(path, result.units);
    auto loaded = load_units(path);
    REQUIRE(loaded.size() == result.units.size());
    for (size_t i = 0; i < loaded.size(); ++i) {
        CHECK(unit_to_json(loaded[i]) == unit_to_json(result.units[i]));
    }
}

TEST_CASE("non-directory input raises an I/O error") {
    CHECK_THROWS_AS(scan_repository("/nonexistent/nowhere", HeaderWhitelist::standard()),
                    DataError);
}
