#include <omp.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "slads/config.hpp"
#include "slads/error.hpp"
#include "slads/harness.hpp"

namespace {

struct CommandSpec {
  const char* name;
  const char* help;
  void (*fn)(const slads::Config&, const slads::RunContext&);
};

// Every subcommand shares the same invocation shape: a config file plus
// --seed/--out/--threads. The command-specific behavior lives in the harness.
const CommandSpec kCommands[] = {
    {"generate", "Synthesize an image corpus of labeled or shaded grain patterns",
     slads::run_generate},
    {"train", "Build a training database and fit the regression model", slads::run_train},
    {"calibrate-c", "Sweep kernel width divisors and keep the best model",
     slads::run_calibrate_c},
    {"calibrate-stop", "Map distortion targets to stopping-signal thresholds",
     slads::run_calibrate_stop},
    {"run", "Sample a single image and record the full trace", slads::run_single},
    {"compare", "Compare sampling methods over a corpus", slads::run_comparison},
    {"stopping-eval", "Evaluate threshold stopping against desired distortion levels",
     slads::run_stopping_eval},
};

int dispatch(const CommandSpec& cmd, const std::string& config_path, std::string out_dir,
             std::uint64_t seed, int threads) {
  if (threads > 0) omp_set_num_threads(threads);

  const slads::Config cfg = slads::Config::parse_file(config_path);
  std::filesystem::path cfg_dir = std::filesystem::path(config_path).parent_path();
  if (cfg_dir.empty()) cfg_dir = ".";

  if (out_dir.empty()) out_dir = std::string(cmd.name) + "-seed" + std::to_string(seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw slads::IoError("cannot create output directory '" + out_dir + "': " + ec.message());

  slads::RunContext ctx;
  ctx.config_dir = cfg_dir.string();
  ctx.out_dir = out_dir;
  ctx.seed = seed;
  cmd.fn(cfg, ctx);
  std::printf("%s: artifacts written to %s\n", cmd.name, out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slads: dynamic sampling driven by a learned distortion-reduction model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  const CommandSpec* selected = nullptr;

  for (const CommandSpec& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("config", config_path, "Run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Root seed for every randomized step");
    sub->add_option("--out", out_dir, "Output directory (default: <command>-seed<seed>)");
    sub->add_option("--threads", threads, "OpenMP thread count (0 keeps the runtime default)");
    sub->callback([&selected, &cmd] { selected = &cmd; });
  }

  try {
    app.parse(argc, argv);
    return dispatch(*selected, config_path, out_dir, seed, threads);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const slads::ContractError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const slads::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
