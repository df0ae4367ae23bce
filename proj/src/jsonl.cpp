#include "csb/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "csb/errors.hpp"

namespace csb {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void for_each_jsonl(const fs::path& path, const std::function<void(const Json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read file: " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json row = Json::parse(line, nullptr, false);
        if (row.is_discarded()) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": malformed JSON line");
        }
        fn(row);
    }
}

std::vector<Json> read_jsonl(const fs::path& path) {
    std::vector<Json> rows;
    for_each_jsonl(path, [&](const Json& row) { rows.push_back(row); });
    return rows;
}

void atomic_write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("short write: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_jsonl(const fs::path& path, const std::vector<Json>& rows) {
    std::string buf;
    for (const auto& row : rows) {
        buf += row.dump();
        buf += '\n';
    }
    atomic_write_file(path, buf);
}

}  // namespace csb
