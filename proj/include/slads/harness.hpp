#pragma once

#include "slads/config.hpp"

#include <cstdint>
#include <filesystem>

namespace slads {

// One CLI invocation's surroundings: where relative config paths resolve
// from, where artifacts go, and the run seed.
struct RunContext {
    std::filesystem::path config_dir;
    std::filesystem::path out_dir;
    uint64_t seed = 0;
};

void run_generate(const Config& cfg, const RunContext& ctx);
void run_train(const Config& cfg, const RunContext& ctx);
void run_calibrate_c(const Config& cfg, const RunContext& ctx);
void run_calibrate_stop(const Config& cfg, const RunContext& ctx);
void run_single(const Config& cfg, const RunContext& ctx);
void run_comparison(const Config& cfg, const RunContext& ctx);
void run_stopping_eval(const Config& cfg, const RunContext& ctx);

} // namespace slads
