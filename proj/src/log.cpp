#include "mixhal/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

namespace mixhal::log {

namespace {
std::mutex g_mutex;
std::atomic<bool> g_quiet{false};

void emit(const char* level, const std::string& message) {
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[%s] %s\n", level, message.c_str());
}
}  // namespace

void info(const std::string& message) {
    if (!g_quiet.load()) emit("info", message);
}

void warn(const std::string& message) {
    if (!g_quiet.load()) emit("warn", message);
}

void error(const std::string& message) { emit("error", message); }

void set_quiet(bool quiet) { g_quiet.store(quiet); }

}  // namespace mixhal::log
