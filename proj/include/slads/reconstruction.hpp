#pragma once

#include "slads/image.hpp"
#include "slads/measurement.hpp"

#include <vector>

namespace slads {

// How the discrete weighted mode scores a candidate label drawn from the
// neighbor set.  CandidateWeight multiplies the candidate's own weight by the
// number of agreeing neighbors; AgreeingWeight sums the weights of all
// agreeing neighbors instead.  CandidateWeight is the default behavior.
enum class ModeScore {
    CandidateWeight,
    AgreeingWeight,
};

struct ReconstructionParams {
    int neighbor_count = 10;
    ModeScore mode_score = ModeScore::CandidateWeight;
};

// Value interpolated from an already-located neighbor set.  `weights` must
// come from inverse_square_weights(neighbors).  Discrete images take the
// weighted mode of the neighbor labels; continuous images take the weighted
// mean.  Label ties resolve to the smaller label.
double interpolate_value(const NeighborSet& neighbors, const std::vector<double>& weights,
                         Mode mode, ModeScore score);

// Reconstruction value for a single pixel: the measured value if `s` has been
// measured, otherwise the interpolant over its nearest neighbors.
double reconstruct_pixel(const MeasurementState& state, PixelLocation s,
                         const ReconstructionParams& params);

// Full-image reconstruction.  Measured pixels keep their measured values;
// every unmeasured pixel is interpolated independently, so the parallel and
// serial variants produce bit-identical images.
Image reconstruct_full(const MeasurementState& state, const ReconstructionParams& params);
Image reconstruct_full_serial(const MeasurementState& state, const ReconstructionParams& params);

} // namespace slads
