#include "dap/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace dap {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("DAP_LOG_LEVEL");
        if (!env) return LogLevel::Info;
        const std::string s(env);
        if (s == "error") return LogLevel::Error;
        if (s == "info") return LogLevel::Info;
        if (s == "debug") return LogLevel::Debug;
        std::cerr << "[dap] ignoring unknown DAP_LOG_LEVEL '" << s << "'\n";
        return LogLevel::Info;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level > log_level()) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    const char* tag = level == LogLevel::Error ? "error" : level == LogLevel::Info ? "info" : "debug";
    std::cerr << "[dap " << tag << "] " << msg << "\n";
}

}  // namespace dap
