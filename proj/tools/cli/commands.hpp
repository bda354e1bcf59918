#pragma once

#include <functional>

#include <CLI11.hpp>

#include "cli/common.hpp"

namespace mmc::cli {

using Action = std::function<int(Context&)>;

struct Command {
  CLI::App* app = nullptr;
  Action action;
};

Command register_gen(CLI::App& root);
Command register_fit(CLI::App& root);
Command register_predict(CLI::App& root);
Command register_certify(CLI::App& root);
Command register_bench(CLI::App& root);

/// Runs `f`, rethrowing any mmc::InputError it raises as a UsageError.
template <typename F>
auto validated(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace mmc::cli
