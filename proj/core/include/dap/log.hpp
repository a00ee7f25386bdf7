#pragma once

#include <string>

namespace dap {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from the DAP_LOG_LEVEL environment variable
// (error|info|debug), read once; default info.
LogLevel log_level();
void log_message(LogLevel level, const std::string& msg);

}  // namespace dap

#define LOG_ERROR(msg) ::dap::log_message(::dap::LogLevel::Error, (msg))
#define LOG_INFO(msg) ::dap::log_message(::dap::LogLevel::Info, (msg))
#define LOG_DEBUG(msg) ::dap::log_message(::dap::LogLevel::Debug, (msg))
