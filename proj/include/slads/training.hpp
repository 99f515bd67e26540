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
#include <utility>
#include <vector>

namespace slads {

struct TrainingPair {
    FeatureVector features{};
    double rd = 0.0;
    // provenance
    int image_id = 0;
    double density = 0.0; // percent of pixels measured in the simulated state
    PixelLocation loc;
};

struct TrainingDatabase {
    std::vector<TrainingPair> pairs;
    Mode mode = Mode::Discrete;
    RdKind rd_kind;
    DescriptorParams descriptor;
    // free-form provenance written to the sidecar (seed, corpus id, ...)
    std::vector<std::pair<std::string, std::string>> extra_meta;
};

struct TrainingParams {
    DescriptorParams descriptor;
    ReconstructionParams recon;
    // exact targets need a fresh reconstruction per candidate pixel; refuse
    // images beyond this edge length unless explicitly raised
    int exact_size_limit = 96;
};

// Reduction in total distortion from additionally measuring `s` at its true
// value: distortion of the current reconstruction minus distortion of the
// reconstruction with (s, X_s) added.  Negative when the extra measurement
// makes the reconstruction worse.  Cost: two full reconstructions.
double exact_rd(const Image& x, const MeasurementState& state, PixelLocation s,
                const ReconstructionParams& recon_params);

// exact_rd for every unmeasured location at once.  Equivalent to calling
// exact_rd per pixel but incremental: a candidate only perturbs the pixels
// whose neighbor sets it enters, so only those interpolants are redone.
ScalarField exact_rd_field(const Image& x, const MeasurementState& state,
                           const ReconstructionParams& recon_params);

// Kernel width at `s`: distance to the nearest measurement divided by c.
double sigma_s(PixelLocation s, const MeasurementState& state, double c);

// Gaussian falloff exp(-||r-s||^2 / (2 sigma^2)).
double kernel_weight(PixelLocation s, PixelLocation r, double sigma);

// Approximate reduction-in-distortion for every unmeasured s from a single
// reconstruction: sum over r of kernel_weight(s,r,sigma_s) times the
// reconstruction error at r.  The sum is truncated at trunc_sigmas kernel
// widths; at the default radius the discarded tail is below 1e-6 relative.
ScalarField approx_rd_field(const Image& x, const MeasurementState& state, const Image& recon,
                            double c, double trunc_sigmas = 7.0);
ScalarField approx_rd_field_serial(const Image& x, const MeasurementState& state,
                                   const Image& recon, double c, double trunc_sigmas = 7.0);

// Simulated-measurement training set: for each (image, density) draw a seeded
// uniform measurement mask, reconstruct once, and emit one pair per unmeasured
// pixel in row-major order.  Densities are percentages of the pixel count.
TrainingDatabase build_training_db(const std::vector<Image>& images,
                                   const std::vector<double>& densities, const RdKind& rd_kind,
                                   const TrainingParams& params, uint64_t seed);

struct FitInfo {
    double residual_rms = 0.0;
    int rank = 0;
};

// Minimum-norm least-squares fit of the feature-to-rd map.
RegressionModel fit_theta(const TrainingDatabase& db, FitInfo* info = nullptr);

// Area under a step-indexed mean-distortion curve by the trapezoid rule.
double distortion_metric(const std::vector<double>& td_means);

struct CCalibration {
    double c_star = 0.0;
    std::vector<std::pair<double, double>> dm_table; // (candidate c, DM)
    RegressionModel best_model;
    // mean TD per step for each candidate, same order as dm_table
    std::vector<std::vector<double>> td_curves;
};

// Pick c by training one model per candidate and scoring each with the area
// under its mean distortion curve over K greedy steps on the eval images.
// Ties resolve to the smaller candidate.  Feature extraction is shared across
// candidates; only the rd targets depend on c.
CCalibration calibrate_c(const std::vector<Image>& train_images,
                         const std::vector<double>& candidate_cs,
                         const std::vector<Image>& eval_images, int step_budget,
                         const std::vector<double>& densities, const TrainingParams& params,
                         uint64_t seed);

struct StoppingCalibration {
    // (desired distortion level T, stopping-signal threshold) sorted by
    // strictly increasing T
    std::vector<std::pair<double, double>> lut;
    double beta = 0.0;
    std::vector<std::string> warnings; // images that never reached some level
};

// For each desired level T, run the sampler over the calibration images with
// distortion tracking, find the first step where the true distortion falls to
// T, and average the stopping signal observed there.
StoppingCalibration calibrate_stopping(const std::vector<Image>& images,
                                       const RegressionModel& model,
                                       const std::vector<double>& t_list, double beta,
                                       const TrainingParams& params);

void save_training_db(const TrainingDatabase& db, const std::filesystem::path& path);
TrainingDatabase load_training_db(const std::filesystem::path& path);

void save_stopping_calibration(const StoppingCalibration& calib,
                               const std::filesystem::path& path);
StoppingCalibration load_stopping_calibration(const std::filesystem::path& path);

} // namespace slads
