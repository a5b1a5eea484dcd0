#include "ouhjb/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace ouhjb::log {
namespace {

std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;

void emit(Level lvl, const char* tag, std::string_view message) {
    if (lvl < g_level.load(std::memory_order_relaxed)) return;
    const std::lock_guard<std::mutex> lock(g_mutex);
    std::clog << "[ouhjb " << tag << "] " << message << '\n';
}

}  // namespace

void set_level(Level lvl) { g_level.store(lvl, std::memory_order_relaxed); }
Level level() { return g_level.load(std::memory_order_relaxed); }

void debug(std::string_view message) { emit(Level::Debug, "debug", message); }
void info(std::string_view message) { emit(Level::Info, "info", message); }
void warn(std::string_view message) { emit(Level::Warn, "warn", message); }
void error(std::string_view message) { emit(Level::Error, "error", message); }

}  // namespace ouhjb::log
