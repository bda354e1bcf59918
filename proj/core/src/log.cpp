#include "mmc/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace mmc::log {
namespace {

std::atomic<Level> g_threshold{Level::Warning};
std::mutex g_mutex;
Sink g_sink;

const char* label(Level level) {
  switch (level) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warning: return "warning";
    case Level::Error: return "error";
    case Level::Off: break;
  }
  return "";
}

}  // namespace

void set_threshold(Level level) { g_threshold.store(level); }
Level threshold() { return g_threshold.load(); }

void set_sink(Sink sink) {
  std::lock_guard lock(g_mutex);
  g_sink = std::move(sink);
}

void reset_sink() {
  std::lock_guard lock(g_mutex);
  g_sink = nullptr;
}

void write(Level level, std::string_view message) {
  if (level < g_threshold.load() || level == Level::Off) return;
  std::lock_guard lock(g_mutex);
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::cerr << "[" << label(level) << "] " << message << '\n';
}

}  // namespace mmc::log
