#pragma once

#include <string_view>

#include <json.hpp>

namespace csb {

// Structured logging: one JSON object per line on stderr.
// Levels: debug < info < warn < error. CSB_LOG_LEVEL selects the minimum.

void log_event(std::string_view level, std::string_view event,
               const nlohmann::json& fields = nlohmann::json::object());

inline void log_info(std::string_view event, const nlohmann::json& fields = nlohmann::json::object()) {
    log_event("info", event, fields);
}
inline void log_warn(std::string_view event, const nlohmann::json& fields = nlohmann::json::object()) {
    log_event("warn", event, fields);
}

}  // namespace csb
