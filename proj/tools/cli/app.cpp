#include "cli/app.hpp"

#include <iostream>
#include <memory>

#include "cli/commands.hpp"
#include "mmc/errors.hpp"
#include "mmc/log.hpp"

namespace mmc::cli {

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App root{"Max-norm constrained 1-bit matrix completion", "mmc"};
  root.require_subcommand(1);
  root.set_config("--config", "", "key=value config file; flags override it");
  int threads = 0;
  bool verbose = false;
  bool quiet = false;
  root.add_option("--threads", threads, "Worker threads (default: MMC_THREADS or all cores)");
  root.add_flag("-v,--verbose", verbose, "Log progress to stderr");
  root.add_flag("-q,--quiet", quiet, "Only log errors");
  // Global flags may follow the subcommand; subcommands inherit this.
  root.fallthrough();

  std::vector<Command> commands{register_gen(root), register_fit(root), register_predict(root),
                                register_certify(root), register_bench(root)};

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    root.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    root.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    root.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    root.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    root.exit(e, out, err);
    return kExitUsage;
  }

  log::set_threshold(quiet ? log::Level::Error : verbose ? log::Level::Info : log::Level::Warning);
  log::set_sink([&err](log::Level level, std::string_view message) {
    const char* tag = level == log::Level::Error     ? "error"
                      : level == log::Level::Warning ? "warning"
                      : level == log::Level::Info    ? "info"
                                                     : "debug";
    err << "[" << tag << "] " << message << '\n';
  });
  struct SinkReset {
    ~SinkReset() {
      log::reset_sink();
      log::set_threshold(log::Level::Warning);
    }
  } reset;

  Context ctx{in, out, err, resolve_threads(threads)};
  for (auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return cmd.action(ctx);
    } catch (const UsageError& e) {
      err << "mmc " << cmd.app->get_name() << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "mmc " << cmd.app->get_name() << ": " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  return kExitUsage;
}

}  // namespace mmc::cli
