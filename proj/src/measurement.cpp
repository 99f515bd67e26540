#include "slads/measurement.hpp"

#include <algorithm>
#include <string>

namespace slads {

namespace {

// ordering key for ties: (distance, row, col)
inline bool closer(long long d2a, PixelLocation a, long long d2b, PixelLocation b) {
    if (d2a != d2b) return d2a < d2b;
    return a < b;
}

} // namespace

MeasurementState::MeasurementState(int width, int height, Mode mode)
    : width_(width), height_(height), mode_(mode) {
    if (width <= 0 || height <= 0)
        throw ContractError("MeasurementState: dimensions must be positive");
    grid_w_ = (width + kCell - 1) / kCell;
    grid_h_ = (height + kCell - 1) / kCell;
    mask_.assign(static_cast<size_t>(width) * height, 0);
    cells_.assign(static_cast<size_t>(grid_w_) * grid_h_, {});
}

bool MeasurementState::measured(PixelLocation p) const {
    return mask_[static_cast<size_t>(p.row) * width_ + p.col] != 0;
}

double MeasurementState::value_at(PixelLocation p) const {
    const int cell = cell_of(p);
    for (int32_t i : cells_[static_cast<size_t>(cell)])
        if (entries_[static_cast<size_t>(i)].loc == p)
            return entries_[static_cast<size_t>(i)].value;
    throw ContractError("value_at: location not measured");
}

void MeasurementState::add(PixelLocation p, double value) {
    if (p.row < 0 || p.row >= height_ || p.col < 0 || p.col >= width_)
        throw ContractError("add: location out of bounds");
    if (measured(p))
        throw ContractError("add: location (" + std::to_string(p.row) + "," +
                            std::to_string(p.col) + ") already measured");
    mask_[static_cast<size_t>(p.row) * width_ + p.col] = 1;
    cells_[static_cast<size_t>(cell_of(p))].push_back(static_cast<int32_t>(entries_.size()));
    entries_.push_back({p, value});
}

void MeasurementState::pop_last() {
    if (entries_.empty()) throw ContractError("pop_last: no measurements");
    const PixelLocation p = entries_.back().loc;
    mask_[static_cast<size_t>(p.row) * width_ + p.col] = 0;
    auto& cell = cells_[static_cast<size_t>(cell_of(p))];
    cell.pop_back(); // entries are appended in insertion order, so last in cell
    entries_.pop_back();
}

NeighborSet MeasurementState::nearest(PixelLocation s, int k) const {
    if (entries_.empty()) throw ContractError("nearest: no measurements");
    if (k < 1) throw ContractError("nearest: k must be >= 1");
    const int want = static_cast<int>(std::min<size_t>(static_cast<size_t>(k), entries_.size()));

    // worst kept candidate on top
    struct Cand { long long d2; PixelLocation loc; double value; };
    auto worse = [](const Cand& a, const Cand& b) {
        return closer(a.d2, a.loc, b.d2, b.loc);
    };
    std::vector<Cand> heap;
    heap.reserve(static_cast<size_t>(want) + 1);

    const int cr = s.row / kCell, cc = s.col / kCell;
    const int max_ring = std::max(grid_w_, grid_h_);
    for (int ring = 0; ring <= max_ring; ++ring) {
        // once full, stop when no pixel in this ring can beat the worst kept
        if (static_cast<int>(heap.size()) == want && ring > 0) {
            const long long lo = static_cast<long long>(ring - 1) * kCell;
            if (lo * lo > heap.front().d2) break;
        }
        const int r0 = cr - ring, r1 = cr + ring, c0 = cc - ring, c1 = cc + ring;
        auto scan_cell = [&](int gr, int gc) {
            if (gr < 0 || gr >= grid_h_ || gc < 0 || gc >= grid_w_) return;
            for (int32_t i : cells_[static_cast<size_t>(gr) * grid_w_ + gc]) {
                const Measurement& m = entries_[static_cast<size_t>(i)];
                const Cand cand{dist2(s, m.loc), m.loc, m.value};
                if (static_cast<int>(heap.size()) < want) {
                    heap.push_back(cand);
                    std::push_heap(heap.begin(), heap.end(), worse);
                } else if (closer(cand.d2, cand.loc, heap.front().d2, heap.front().loc)) {
                    std::pop_heap(heap.begin(), heap.end(), worse);
                    heap.back() = cand;
                    std::push_heap(heap.begin(), heap.end(), worse);
                }
            }
        };
        if (ring == 0) {
            scan_cell(cr, cc);
        } else {
            for (int gc = c0; gc <= c1; ++gc) { scan_cell(r0, gc); scan_cell(r1, gc); }
            for (int gr = r0 + 1; gr <= r1 - 1; ++gr) { scan_cell(gr, c0); scan_cell(gr, c1); }
        }
    }

    NeighborSet out(heap.size());
    std::sort_heap(heap.begin(), heap.end(), worse);
    for (size_t i = 0; i < heap.size(); ++i)
        out[i] = {heap[i].loc, heap[i].d2, heap[i].value};
    return out;
}

long long MeasurementState::nearest_d2(PixelLocation s) const {
    return nearest(s, 1).front().d2;
}

std::vector<double> inverse_square_weights(const NeighborSet& neighbors) {
    if (neighbors.empty()) throw ContractError("inverse_square_weights: empty neighbor set");
    std::vector<double> w(neighbors.size(), 0.0);
    for (size_t i = 0; i < neighbors.size(); ++i) {
        if (neighbors[i].d2 == 0) { // query coincides with a measurement
            w[i] = 1.0;
            return w;
        }
        w[i] = 1.0 / static_cast<double>(neighbors[i].d2);
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return w;
}

} // namespace slads
