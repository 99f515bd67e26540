#include "slads/reconstruction.hpp"

namespace slads {

namespace {

double weighted_mode(const NeighborSet& neighbors, const std::vector<double>& weights,
                     ModeScore score) {
    double best_label = 0.0;
    double best_score = 0.0;
    bool have_best = false;
    for (size_t r = 0; r < neighbors.size(); ++r) {
        double s = 0.0;
        if (score == ModeScore::CandidateWeight) {
            int agreeing = 0;
            for (const Neighbor& t : neighbors)
                if (t.value == neighbors[r].value) ++agreeing;
            s = weights[r] * agreeing;
        } else {
            for (size_t t = 0; t < neighbors.size(); ++t)
                if (neighbors[t].value == neighbors[r].value) s += weights[t];
        }
        if (!have_best || s > best_score ||
            (s == best_score && neighbors[r].value < best_label)) {
            best_score = s;
            best_label = neighbors[r].value;
            have_best = true;
        }
    }
    return best_label;
}

double weighted_mean(const NeighborSet& neighbors, const std::vector<double>& weights) {
    double sum = 0.0;
    for (size_t r = 0; r < neighbors.size(); ++r)
        sum += weights[r] * neighbors[r].value;
    return sum;
}

} // namespace

double interpolate_value(const NeighborSet& neighbors, const std::vector<double>& weights,
                         Mode mode, ModeScore score) {
    if (neighbors.empty())
        throw ContractError("interpolate_value: empty neighbor set");
    if (weights.size() != neighbors.size())
        throw ContractError("interpolate_value: weight/neighbor size mismatch");
    return mode == Mode::Discrete ? weighted_mode(neighbors, weights, score)
                                  : weighted_mean(neighbors, weights);
}

double reconstruct_pixel(const MeasurementState& state, PixelLocation s,
                         const ReconstructionParams& params) {
    if (state.measured(s)) return state.value_at(s);
    const NeighborSet n = state.nearest(s, params.neighbor_count);
    return interpolate_value(n, inverse_square_weights(n), state.mode(), params.mode_score);
}

namespace {

Image reconstruct_impl(const MeasurementState& state, const ReconstructionParams& params,
                       bool parallel) {
    if (state.empty())
        throw ContractError("reconstruct_full: no measurements");
    Image out(state.width(), state.height(), state.mode());
    for (const Measurement& m : state.entries())
        out.set(m.loc, m.value);

    const int w = state.width();
    const int n_px = w * state.height();
    const auto& mask = state.mask();
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 256)
        for (int idx = 0; idx < n_px; ++idx) {
            if (mask[static_cast<size_t>(idx)]) continue;
            const PixelLocation s{idx / w, idx % w};
            const NeighborSet n = state.nearest(s, params.neighbor_count);
            out.set(s, interpolate_value(n, inverse_square_weights(n), state.mode(),
                                         params.mode_score));
        }
    } else {
        for (int idx = 0; idx < n_px; ++idx) {
            if (mask[static_cast<size_t>(idx)]) continue;
            const PixelLocation s{idx / w, idx % w};
            const NeighborSet n = state.nearest(s, params.neighbor_count);
            out.set(s, interpolate_value(n, inverse_square_weights(n), state.mode(),
                                         params.mode_score));
        }
    }
    return out;
}

} // namespace

Image reconstruct_full(const MeasurementState& state, const ReconstructionParams& params) {
    return reconstruct_impl(state, params, true);
}

Image reconstruct_full_serial(const MeasurementState& state, const ReconstructionParams& params) {
    return reconstruct_impl(state, params, false);
}

} // namespace slads
