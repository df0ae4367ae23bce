#include "csb/log.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

namespace csb {

static int level_rank(std::string_view level) {
    if (level == "debug") return 0;
    if (level == "info") return 1;
    if (level == "warn") return 2;
    return 3;
}

static int min_level() {
    static int cached = [] {
        const char* env = std::getenv("CSB_LOG_LEVEL");
        return env != nullptr ? level_rank(env) : 1;
    }();
    return cached;
}

void log_event(std::string_view level, std::string_view event, const nlohmann::json& fields) {
    if (level_rank(level) < min_level()) return;
    nlohmann::json line = fields;
    line["level"] = std::string(level);
    line["event"] = std::string(event);
    line["ts"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count();
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::fprintf(stderr, "%s\n", line.dump().c_str());
}

}  // namespace csb
