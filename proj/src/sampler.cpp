#include "slads/sampler.hpp"

#include "slads/halton.hpp"
#include "slads/rng.hpp"
#include "slads/text.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace slads {

namespace {

double erd_at(const MeasurementState& state, const Image& recon, const RegressionModel& model,
              const DescriptorParams& params, const FeatureContext& ctx, PixelLocation s) {
    const DescriptorVector d = compute_descriptors(state, recon, s, params, ctx);
    return model.predict(expand_features(d));
}

ScalarField erd_impl(const MeasurementState& state, const Image& recon,
                     const RegressionModel& model, const DescriptorParams& params,
                     bool parallel) {
    if (state.count() == static_cast<size_t>(state.width()) * state.height())
        throw ContractError("erd_field: no unmeasured pixels");
    if (recon.width() != state.width() || recon.height() != state.height())
        throw ContractError("erd_field: reconstruction shape mismatch");

    const FeatureContext ctx(state.width(), state.height(), params.lambda);
    ScalarField field(state.width(), state.height());
    const int w = state.width();
    const int n_px = w * state.height();
    const auto& mask = state.mask();
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 256)
        for (int idx = 0; idx < n_px; ++idx) {
            if (mask[static_cast<size_t>(idx)]) continue;
            const PixelLocation s{idx / w, idx % w};
            field.set(s, erd_at(state, recon, model, params, ctx, s));
        }
    } else {
        for (int idx = 0; idx < n_px; ++idx) {
            if (mask[static_cast<size_t>(idx)]) continue;
            const PixelLocation s{idx / w, idx % w};
            field.set(s, erd_at(state, recon, model, params, ctx, s));
        }
    }
    return field;
}

} // namespace

ScalarField erd_field(const MeasurementState& state, const Image& recon,
                      const RegressionModel& model, const DescriptorParams& params) {
    return erd_impl(state, recon, model, params, true);
}

ScalarField erd_field_serial(const MeasurementState& state, const Image& recon,
                             const RegressionModel& model, const DescriptorParams& params) {
    return erd_impl(state, recon, model, params, false);
}

PixelLocation select_next(const ScalarField& field) {
    PixelLocation best{-1, -1};
    double best_value = 0.0;
    for (int row = 0; row < field.height; ++row) {
        for (int col = 0; col < field.width; ++col) {
            const PixelLocation p{row, col};
            const double v = field.at(p);
            if (std::isnan(v)) continue;
            if (best.row < 0 || v > best_value) {
                best = p;
                best_value = v;
            }
        }
    }
    if (best.row < 0) throw ContractError("select_next: empty field");
    return best;
}

double beta_for_size(long long num_pixels) {
    if (num_pixels < 1) throw ContractError("beta_for_size: need at least one pixel");
    const double log2n = std::log2(static_cast<double>(num_pixels));
    if (num_pixels <= 512LL * 512LL)
        return 0.001 * ((18.0 - log2n) / 2.0 + 1.0);
    return 0.001 / ((log2n - 18.0) / 2.0 + 1.0);
}

StoppingState stopping_update(const StoppingState& st, double measured, double predicted,
                              Mode mode) {
    const double d = pixel_distortion(measured, predicted, mode);
    StoppingState next = st;
    next.epsilon = st.k == 0 ? d : (1.0 - st.beta) * st.epsilon + st.beta * d;
    next.k = st.k + 1;
    return next;
}

std::vector<PixelLocation> groupwise_step(MeasurementState& state, const Image& recon,
                                          const RegressionModel& model, int group_size,
                                          const DescriptorParams& descriptor,
                                          const ReconstructionParams& recon_params) {
    if (group_size < 1) throw ContractError("groupwise_step: group size must be >= 1");
    const size_t remaining = static_cast<size_t>(state.width()) * state.height() - state.count();
    if (static_cast<size_t>(group_size) > remaining)
        throw ContractError("groupwise_step: group size exceeds unmeasured pixels");

    std::vector<PixelLocation> group;
    group.reserve(static_cast<size_t>(group_size));
    Image scratch;
    for (int b = 0; b < group_size; ++b) {
        // the first pick sees the true field; later picks see the field with
        // earlier picks standing in as pseudo-measurements
        const Image* view = &recon;
        if (b > 0) {
            scratch = reconstruct_full(state, recon_params);
            view = &scratch;
        }
        const PixelLocation pick = select_next(erd_field(state, *view, model, descriptor));
        group.push_back(pick);
        if (b + 1 < group_size)
            state.add(pick, recon.at(pick)); // estimate from before the group began
    }
    for (int b = 0; b + 1 < group_size; ++b) state.pop_last();
    return group;
}

namespace {

RunTrace make_trace_shell(const Image& oracle) {
    RunTrace trace;
    trace.width = oracle.width();
    trace.height = oracle.height();
    trace.mode = oracle.mode();
    return trace;
}

void finalize_trace(RunTrace& trace, const MeasurementState& state,
                    const ReconstructionParams& recon_params) {
    trace.final_mask = state.mask();
    trace.final_recon = reconstruct_full(state, recon_params);
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

} // namespace

RunTrace slads_run(const Image& oracle, const SamplerConfig& config) {
    if (oracle.mode() != config.model.mode)
        throw ContractError("slads_run: model mode does not match image mode");
    if (config.initial_fraction <= 0.0 || config.initial_fraction >= 100.0)
        throw ContractError("slads_run: initial fraction must be in (0, 100)");
    if (config.group_size < 1) throw ContractError("slads_run: group size must be >= 1");
    if (config.stop.kind == StopRule::Kind::StepBudget && config.stop.step_budget < 0)
        throw ContractError("slads_run: negative step budget");

    const long long n_px = oracle.size();
    const long long seed_count =
        std::llround(config.initial_fraction / 100.0 * static_cast<double>(n_px));
    if (seed_count < 1)
        throw ContractError("slads_run: initial fraction seeds no pixels");

    RunTrace trace = make_trace_shell(oracle);
    trace.seed_count = static_cast<int>(seed_count);

    MeasurementState state(oracle.width(), oracle.height(), oracle.mode());
    int k = 0;
    for (PixelLocation p : low_discrepancy_pattern(oracle.width(), oracle.height(), seed_count)) {
        state.add(p, oracle.at(p));
        trace.steps.push_back({++k, p, oracle.at(p), kNan, kNan, 0.0});
    }

    Image recon = reconstruct_full(state, config.recon);
    if (config.record_td)
        trace.steps.back().td = normalized_td(oracle, recon);

    const bool td_target_active = config.td_stop_target > 0.0 && config.record_td;
    if (td_target_active && trace.steps.back().td <= config.td_stop_target) {
        trace.stop_reason = "td-target";
        trace.final_mask = state.mask();
        trace.final_recon = std::move(recon);
        return trace;
    }

    StoppingState stopping;
    stopping.beta = config.beta > 0.0 ? config.beta : beta_for_size(n_px);

    const long long min_count_for_stop =
        std::llround(config.stop.min_fraction / 100.0 * static_cast<double>(n_px));

    int post_seed = 0;
    bool halted = false;
    while (!halted) {
        const long long remaining = n_px - static_cast<long long>(state.count());
        if (remaining == 0) {
            trace.stop_reason = "full";
            break;
        }
        if (config.stop.kind == StopRule::Kind::StepBudget &&
            post_seed >= config.stop.step_budget) {
            trace.stop_reason = "budget";
            break;
        }

        int group = config.group_size;
        group = static_cast<int>(std::min<long long>(group, remaining));
        if (config.stop.kind == StopRule::Kind::StepBudget)
            group = std::min(group, config.stop.step_budget - post_seed);

        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<PixelLocation> picks =
            groupwise_step(state, recon, config.model, group, config.descriptor, config.recon);
        const auto t1 = std::chrono::steady_clock::now();
        const double select_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();

        for (size_t i = 0; i < picks.size(); ++i) {
            const PixelLocation s = picks[i];
            const double predicted = recon.at(s);
            const double value = oracle.at(s);
            state.add(s, value);
            stopping = stopping_update(stopping, value, predicted, oracle.mode());
            ++post_seed;
            trace.steps.push_back({++k, s, value, stopping.epsilon, kNan,
                                   i == 0 ? select_ms : 0.0});
            if (config.stop.kind == StopRule::Kind::Threshold &&
                static_cast<long long>(state.count()) >= min_count_for_stop &&
                stopping.epsilon <= config.stop.threshold) {
                trace.stop_reason = "threshold";
                halted = true;
                break;
            }
        }

        recon = reconstruct_full(state, config.recon);
        if (config.record_td)
            trace.steps.back().td = normalized_td(oracle, recon);
        if (!halted && td_target_active && trace.steps.back().td <= config.td_stop_target) {
            trace.stop_reason = "td-target";
            halted = true;
        }
    }

    trace.final_mask = state.mask();
    trace.final_recon = std::move(recon);
    return trace;
}

RunTrace baseline_random(const Image& oracle, double fraction, uint64_t seed) {
    if (fraction <= 0.0 || fraction > 100.0)
        throw ContractError("baseline_random: fraction must be in (0, 100]");
    const long long n_px = oracle.size();
    const long long count = std::llround(fraction / 100.0 * static_cast<double>(n_px));
    if (count < 1) throw ContractError("baseline_random: fraction selects no pixels");

    std::mt19937_64 rng(mix_seed(seed, 0x52414e44ULL));
    const std::vector<int64_t> chosen = sample_distinct(n_px, count, rng);

    RunTrace trace = make_trace_shell(oracle);
    MeasurementState state(oracle.width(), oracle.height(), oracle.mode());
    int k = 0;
    for (int64_t idx : chosen) {
        const PixelLocation p = oracle.location_of(idx);
        state.add(p, oracle.at(p));
        trace.steps.push_back({++k, p, oracle.at(p), kNan, kNan, 0.0});
    }
    trace.seed_count = static_cast<int>(count);
    trace.stop_reason = "budget";
    finalize_trace(trace, state, ReconstructionParams{});
    return trace;
}

RunTrace baseline_low_discrepancy(const Image& oracle, double fraction) {
    if (fraction <= 0.0 || fraction > 100.0)
        throw ContractError("baseline_low_discrepancy: fraction must be in (0, 100]");
    const long long n_px = oracle.size();
    const long long count = std::llround(fraction / 100.0 * static_cast<double>(n_px));
    if (count < 1) throw ContractError("baseline_low_discrepancy: fraction selects no pixels");

    RunTrace trace = make_trace_shell(oracle);
    MeasurementState state(oracle.width(), oracle.height(), oracle.mode());
    int k = 0;
    for (PixelLocation p : low_discrepancy_pattern(oracle.width(), oracle.height(), count)) {
        state.add(p, oracle.at(p));
        trace.steps.push_back({++k, p, oracle.at(p), kNan, kNan, 0.0});
    }
    trace.seed_count = static_cast<int>(count);
    trace.stop_reason = "budget";
    finalize_trace(trace, state, ReconstructionParams{});
    return trace;
}

void save_trace_csv(const RunTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace: " + path.string());
    out << "step,row,col,value,epsilon,td\n";
    for (const TraceStep& s : trace.steps) {
        out << s.k << "," << s.loc.row << "," << s.loc.col << "," << fmt_double(s.value) << ","
            << fmt_double(s.epsilon) << "," << fmt_double(s.td) << "\n";
    }
}

} // namespace slads
