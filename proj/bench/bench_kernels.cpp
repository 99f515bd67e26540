#include <benchmark/benchmark.h>

#include "slads/grain.hpp"
#include "slads/halton.hpp"
#include "slads/measurement.hpp"
#include "slads/model.hpp"
#include "slads/reconstruction.hpp"
#include "slads/sampler.hpp"
#include "slads/training.hpp"

namespace {

// One 128x128 continuous scene at 5% measured, shared by every benchmark so
// the serial and parallel variants chew on identical inputs.
struct KernelInputs {
    slads::Image oracle;
    slads::MeasurementState state;
    slads::Image recon;
    slads::RegressionModel model;
    slads::DescriptorParams descriptor;
    slads::ReconstructionParams recon_params;

    KernelInputs() : state(1, 1, slads::Mode::Continuous) {}
};

const KernelInputs& inputs() {
    static const KernelInputs fixed = [] {
        KernelInputs in;
        slads::SyntheticGrainSpec spec;
        spec.width = 128;
        spec.height = 128;
        spec.grain_count = 60;
        spec.seed = 7;
        in.oracle = slads::generate_shaded_grain_image(spec);

        in.state = slads::MeasurementState(spec.width, spec.height, slads::Mode::Continuous);
        const long long target = static_cast<long long>(spec.width) * spec.height * 5 / 100;
        for (slads::PixelLocation p :
             slads::low_discrepancy_pattern(spec.width, spec.height, target)) {
            in.state.add(p, in.oracle.at(p));
        }
        in.recon = slads::reconstruct_full(in.state, in.recon_params);

        in.model.mode = slads::Mode::Continuous;
        in.model.rd_kind.approximate = true;
        in.model.rd_kind.c = 2.0;
        for (int i = 0; i < slads::kFeatureCount; ++i) {
            in.model.theta[static_cast<size_t>(i)] = 0.01 * (i % 7) - 0.02;
        }
        return in;
    }();
    return fixed;
}

void bm_reconstruct_serial(benchmark::State& bench) {
    const KernelInputs& in = inputs();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(slads::reconstruct_full_serial(in.state, in.recon_params));
    }
}

void bm_reconstruct_parallel(benchmark::State& bench) {
    const KernelInputs& in = inputs();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(slads::reconstruct_full(in.state, in.recon_params));
    }
}

void bm_erd_serial(benchmark::State& bench) {
    const KernelInputs& in = inputs();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(
            slads::erd_field_serial(in.state, in.recon, in.model, in.descriptor));
    }
}

void bm_erd_parallel(benchmark::State& bench) {
    const KernelInputs& in = inputs();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(slads::erd_field(in.state, in.recon, in.model, in.descriptor));
    }
}

void bm_approx_rd_serial(benchmark::State& bench) {
    const KernelInputs& in = inputs();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(
            slads::approx_rd_field_serial(in.oracle, in.state, in.recon, 2.0));
    }
}

void bm_approx_rd_parallel(benchmark::State& bench) {
    const KernelInputs& in = inputs();
    for (auto _ : bench) {
        benchmark::DoNotOptimize(slads::approx_rd_field(in.oracle, in.state, in.recon, 2.0));
    }
}

BENCHMARK(bm_reconstruct_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_reconstruct_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_erd_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_erd_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_approx_rd_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_approx_rd_parallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
