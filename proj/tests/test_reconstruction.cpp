#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "slads/error.hpp"
#include "slads/reconstruction.hpp"
#include "test_util.hpp"

using namespace slads;

TEST_CASE("weighted mode favors a close singleton over a split pair") {
    // Labels: 1 at distance 1, 2 at distance 2 twice. Normalized weights are
    // (2/3, 1/6, 1/6); label 1 scores 2/3 against 1/3 for each label-2 entry.
    MeasurementState state(16, 16, Mode::Discrete);
    state.add({0, 1}, 1.0);
    state.add({0, 2}, 2.0);
    state.add({2, 0}, 2.0);
    const NeighborSet n = state.nearest({0, 0}, 3);
    const std::vector<double> w = inverse_square_weights(n);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(w[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(interpolate_value(n, w, Mode::Discrete, ModeScore::CandidateWeight) == 1.0);
    CHECK(interpolate_value(n, w, Mode::Discrete, ModeScore::AgreeingWeight) == 1.0);
}

TEST_CASE("the two mode scores can disagree") {
    // Label 5 sits alone at distance 2. Label 3 appears at distance 3 and twice
    // at distance 10, so its members carry very uneven weights. Scaling the
    // best label-3 weight by its count of three beats the singleton, while the
    // plain sum of label-3 weights does not.
    MeasurementState state(16, 16, Mode::Discrete);
    state.add({0, 2}, 5.0);
    state.add({0, 3}, 3.0);
    state.add({0, 10}, 3.0);
    state.add({10, 0}, 3.0);
    const NeighborSet n = state.nearest({0, 0}, 4);
    const std::vector<double> w = inverse_square_weights(n);
    CHECK(interpolate_value(n, w, Mode::Discrete, ModeScore::CandidateWeight) == 3.0);
    CHECK(interpolate_value(n, w, Mode::Discrete, ModeScore::AgreeingWeight) == 5.0);
}

TEST_CASE("mode ties resolve to the smaller label") {
    MeasurementState state(8, 8, Mode::Discrete);
    state.add({0, 3}, 4.0);
    state.add({3, 0}, 1.0); // same distance, same weight, same score
    const NeighborSet n = state.nearest({0, 0}, 2);
    const std::vector<double> w = inverse_square_weights(n);
    CHECK(interpolate_value(n, w, Mode::Discrete, ModeScore::CandidateWeight) == 1.0);
    CHECK(interpolate_value(n, w, Mode::Discrete, ModeScore::AgreeingWeight) == 1.0);
}

TEST_CASE("weighted mean blends by inverse squared distance") {
    MeasurementState state(16, 16, Mode::Continuous);
    state.add({0, 1}, 10.0);
    state.add({0, 2}, 30.0);
    const NeighborSet n = state.nearest({0, 0}, 2);
    const std::vector<double> w = inverse_square_weights(n);
    CHECK(interpolate_value(n, w, Mode::Continuous, ModeScore::CandidateWeight)
          == doctest::Approx(14.0).epsilon(1e-15));
}

TEST_CASE("a lone neighbor reproduces its own value in both modes") {
    for (Mode mode : {Mode::Discrete, Mode::Continuous}) {
        MeasurementState state(8, 8, mode);
        state.add({5, 5}, 3.0);
        const NeighborSet n = state.nearest({1, 2}, 10);
        const std::vector<double> w = inverse_square_weights(n);
        CHECK(interpolate_value(n, w, mode, ModeScore::CandidateWeight) == 3.0);
    }
}

TEST_CASE("reconstruction leaves measured pixels untouched") {
    std::mt19937_64 rng(21);
    Image img = testutil::random_continuous(24, 24, rng);
    MeasurementState state = testutil::random_state(img, 80, rng);
    const Image recon = reconstruct_full(state, {});
    for (const Measurement& m : state.entries()) CHECK(recon.at(m.loc) == m.value);
}

TEST_CASE("fully measured states reconstruct to the original image") {
    std::mt19937_64 rng(22);
    Image img = testutil::random_discrete(12, 9, 4, rng);
    MeasurementState state(12, 9, Mode::Discrete);
    for (long long i = 0; i < img.size(); ++i)
        state.add(img.location_of(i), img.pixels()[static_cast<size_t>(i)]);
    const Image recon = reconstruct_full(state, {});
    CHECK(recon.pixels() == img.pixels());
}

TEST_CASE("a single measurement paints the whole image") {
    MeasurementState state(16, 16, Mode::Continuous);
    state.add({7, 3}, 42.5);
    const Image recon = reconstruct_full(state, {});
    for (double v : recon.pixels()) CHECK(v == 42.5);
}

TEST_CASE("an empty state cannot be reconstructed") {
    MeasurementState state(8, 8, Mode::Discrete);
    CHECK_THROWS_AS(reconstruct_full(state, {}), ContractError);
}

TEST_CASE("a sampled half-plane is recovered away from the boundary") {
    // Left half label 0, right half label 7; measure every other pixel.
    const int n = 8;
    Image img(n, n, Mode::Discrete);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) img.set(r, c, c < n / 2 ? 0.0 : 7.0);
    MeasurementState state(n, n, Mode::Discrete);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if ((r + c) % 2 == 0) state.add({r, c}, img.at(r, c));
    const Image recon = reconstruct_full(state, {});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (c >= n / 2 - 2 && c < n / 2 + 2) continue; // boundary band
            CAPTURE(r);
            CAPTURE(c);
            CHECK(recon.at(r, c) == img.at(r, c));
        }
}

TEST_CASE("continuous estimates stay inside the neighbor value range") {
    std::mt19937_64 rng(23);
    Image img = testutil::random_continuous(20, 20, rng);
    MeasurementState state = testutil::random_state(img, 30, rng);
    const ReconstructionParams params{};
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
            const PixelLocation s{r, c};
            if (state.measured(s)) continue;
            const NeighborSet n = state.nearest(s, params.neighbor_count);
            double lo = n[0].value, hi = n[0].value;
            for (const Neighbor& nb : n) {
                lo = std::min(lo, nb.value);
                hi = std::max(hi, nb.value);
            }
            const double v = reconstruct_pixel(state, s, params);
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
}

TEST_CASE("discrete estimates only emit labels present among the neighbors") {
    std::mt19937_64 rng(24);
    Image img = testutil::random_discrete(20, 20, 6, rng);
    MeasurementState state = testutil::random_state(img, 25, rng);
    const ReconstructionParams params{};
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
            const PixelLocation s{r, c};
            if (state.measured(s)) continue;
            const NeighborSet n = state.nearest(s, params.neighbor_count);
            const double v = reconstruct_pixel(state, s, params);
            CHECK(std::any_of(n.begin(), n.end(),
                              [v](const Neighbor& nb) { return nb.value == v; }));
        }
}

TEST_CASE("parallel and serial reconstruction agree bit for bit") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 4; ++trial) {
        const bool discrete = trial % 2 == 0;
        Image img = discrete ? testutil::random_discrete(33, 27, 5, rng)
                             : testutil::random_continuous(33, 27, rng);
        MeasurementState state = testutil::random_state(img, 50 + 30 * trial, rng);
        const Image a = reconstruct_full(state, {});
        const Image b = reconstruct_full_serial(state, {});
        CHECK(a.pixels() == b.pixels());
    }
}

TEST_CASE("the agreeing-weight variant is honored by full reconstruction") {
    // Same geometry as the disagreement case, embedded in a full grid pass.
    MeasurementState state(16, 16, Mode::Discrete);
    state.add({0, 2}, 5.0);
    state.add({0, 3}, 3.0);
    state.add({0, 10}, 3.0);
    state.add({10, 0}, 3.0);
    ReconstructionParams params{};
    params.neighbor_count = 4;
    params.mode_score = ModeScore::CandidateWeight;
    CHECK(reconstruct_full(state, params).at(0, 0) == 3.0);
    params.mode_score = ModeScore::AgreeingWeight;
    CHECK(reconstruct_full(state, params).at(0, 0) == 5.0);
}
