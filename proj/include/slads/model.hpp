#pragma once

#include "slads/features.hpp"
#include "slads/image.hpp"

#include <filesystem>
#include <string>

namespace slads {

// Provenance of the regression targets: exact reduction-in-distortion, or the
// Gaussian-kernel approximation with its calibration constant c.
struct RdKind {
    bool approximate = false;
    double c = 0.0; // meaningful only when approximate

    bool operator==(const RdKind&) const = default;
};

std::string rd_kind_name(const RdKind& kind);

struct RegressionModel {
    FeatureVector theta{};
    RdKind rd_kind;
    Mode mode = Mode::Discrete;
    DescriptorParams descriptor;
    std::string corpus_id; // free-form provenance tag

    double predict(const FeatureVector& features) const {
        double sum = 0.0;
        for (size_t i = 0; i < features.size(); ++i) sum += theta[i] * features[i];
        return sum;
    }
};

// One coefficient per line in `path`; metadata (mode, rd kind, c, descriptor
// params, corpus id) in a key-value sidecar at `path` + ".meta".
void save_model(const RegressionModel& model, const std::filesystem::path& path);
RegressionModel load_model(const std::filesystem::path& path);

} // namespace slads
