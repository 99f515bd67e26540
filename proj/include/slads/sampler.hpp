#pragma once

#include "slads/features.hpp"
#include "slads/field.hpp"
#include "slads/image.hpp"
#include "slads/measurement.hpp"
#include "slads/model.hpp"
#include "slads/reconstruction.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace slads {

struct StopRule {
    enum class Kind { StepBudget, Threshold };
    Kind kind = Kind::StepBudget;
    int step_budget = 0;       // post-seed measurements, Kind::StepBudget
    double threshold = 0.0;    // stopping-signal bound, Kind::Threshold
    double min_fraction = 2.0; // percent measured before the threshold is consulted
};

struct SamplerConfig {
    RegressionModel model;
    double initial_fraction = 1.0; // percent seeded by the low-discrepancy pattern
    StopRule stop;
    int group_size = 1;
    DescriptorParams descriptor;
    ReconstructionParams recon;
    double beta = 0.0; // 0 derives the smoothing weight from the image size
    uint64_t seed = 0; // recorded for provenance; the greedy run itself is seed-free
    bool record_td = true;
    // When positive (and record_td is on), the run also halts once the true
    // distortion reaches this level.  Calibration uses it to trim trajectories;
    // deployment runs leave it at 0.
    double td_stop_target = 0.0;
};

// Exponentially smoothed disagreement between measured values and what the
// reconstruction predicted for them.
struct StoppingState {
    double epsilon = 0.0;
    int k = 0; // post-seed measurements folded in so far
    double beta = 0.0;
};

// One row per measurement.  Seed measurements carry NaN epsilon; td is NaN
// wherever no reconstruction was made directly after the row's measurement.
struct TraceStep {
    int k = 0; // measurement ordinal, 1-based, seed included
    PixelLocation loc;
    double value = 0.0;
    double epsilon = 0.0;
    double td = 0.0;
    double select_ms = 0.0; // selection wall time, recorded on group leaders
};

struct RunTrace {
    int width = 0;
    int height = 0;
    Mode mode = Mode::Discrete;
    int seed_count = 0;
    std::vector<TraceStep> steps;
    std::vector<uint8_t> final_mask; // row-major 0/1
    Image final_recon;
    std::string stop_reason; // "budget" | "threshold" | "full"
};

// Expected reduction in distortion for every unmeasured pixel: the model
// applied to that pixel's expanded features.  Values may be negative; nothing
// is clamped.  Reads only the measurement state and the reconstruction.
ScalarField erd_field(const MeasurementState& state, const Image& recon,
                      const RegressionModel& model, const DescriptorParams& params);
ScalarField erd_field_serial(const MeasurementState& state, const Image& recon,
                             const RegressionModel& model, const DescriptorParams& params);

// Location of the field's maximum; equal values resolve to the first in
// row-major order.
PixelLocation select_next(const ScalarField& field);

// Smoothing weight for the stopping signal as a function of image size:
// 0.004 at 64^2, 0.001 at 512^2, 0.0005 at 1024^2.
double beta_for_size(long long num_pixels);

// Fold one (measured, predicted) pair into the stopping signal.  The first
// pair initializes the signal to its disagreement outright.
StoppingState stopping_update(const StoppingState& st, double measured, double predicted,
                              Mode mode);

// Select a group of `group_size` distinct locations.  The first pick is the
// plain field argmax; each later pick re-evaluates the field with the earlier
// picks filled in as pseudo-measurements valued by `recon` (the estimate
// available before any of the group was measured).  The state is restored
// before returning.
std::vector<PixelLocation> groupwise_step(MeasurementState& state, const Image& recon,
                                          const RegressionModel& model, int group_size,
                                          const DescriptorParams& descriptor,
                                          const ReconstructionParams& recon_params);

// Full greedy run against a ground-truth oracle: seed, then
// measure-reconstruct-select until the stop rule fires.
RunTrace slads_run(const Image& oracle, const SamplerConfig& config);

// Static baselines producing traces of the same shape as slads_run.
RunTrace baseline_random(const Image& oracle, double fraction, uint64_t seed);
RunTrace baseline_low_discrepancy(const Image& oracle, double fraction);

void save_trace_csv(const RunTrace& trace, const std::filesystem::path& path);

} // namespace slads
