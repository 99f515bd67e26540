#include "slads/training.hpp"

#include "slads/lsq.hpp"
#include "slads/rng.hpp"
#include "slads/sampler.hpp"
#include "slads/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace slads {

double exact_rd(const Image& x, const MeasurementState& state, PixelLocation s,
                const ReconstructionParams& recon_params) {
    if (x.width() != state.width() || x.height() != state.height() || x.mode() != state.mode())
        throw ContractError("exact_rd: image/state mismatch");
    if (state.measured(s)) throw ContractError("exact_rd: location already measured");
    const double d_before = total_distortion(x, reconstruct_full(state, recon_params));
    MeasurementState augmented = state;
    augmented.add(s, x.at(s));
    const double d_after = total_distortion(x, reconstruct_full(augmented, recon_params));
    return d_before - d_after;
}

namespace {

int integer_sqrt(long long v) {
    int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
    while (static_cast<long long>(r + 1) * (r + 1) <= v) ++r;
    while (static_cast<long long>(r) * r > v) --r;
    return r;
}

} // namespace

ScalarField exact_rd_field(const Image& x, const MeasurementState& state0,
                           const ReconstructionParams& recon_params) {
    if (x.width() != state0.width() || x.height() != state0.height() ||
        x.mode() != state0.mode())
        throw ContractError("exact_rd_field: image/state mismatch");
    if (state0.count() == 0) throw ContractError("exact_rd_field: no measurements");

    const int w = state0.width();
    const int h = state0.height();
    const int n_px = w * h;
    const int want = recon_params.neighbor_count;
    const Mode mode = x.mode();

    MeasurementState state = state0;
    const auto& mask = state.mask();

    // base interpolant and the boundary of each unmeasured pixel's neighbor
    // set: a candidate perturbs the pixel only if it sorts before that boundary
    std::vector<int32_t> unmeasured;
    std::vector<double> d_base(static_cast<size_t>(n_px), 0.0);
    std::vector<long long> edge_d2(static_cast<size_t>(n_px), 0);
    std::vector<PixelLocation> edge_loc(static_cast<size_t>(n_px));
    std::vector<uint8_t> underfull(static_cast<size_t>(n_px), 0);

    auto interp_at = [&](PixelLocation p) {
        const NeighborSet ns = state.nearest(p, want);
        return interpolate_value(ns, inverse_square_weights(ns), mode, recon_params.mode_score);
    };

    for (int idx = 0; idx < n_px; ++idx) {
        if (mask[static_cast<size_t>(idx)]) continue;
        const PixelLocation s{idx / w, idx % w};
        const NeighborSet ns = state.nearest(s, want);
        const double v =
            interpolate_value(ns, inverse_square_weights(ns), mode, recon_params.mode_score);
        d_base[static_cast<size_t>(idx)] = pixel_distortion(x.at(s), v, mode);
        if (static_cast<int>(ns.size()) < want) {
            underfull[static_cast<size_t>(idx)] = 1;
        } else {
            edge_d2[static_cast<size_t>(idx)] = ns.back().d2;
            edge_loc[static_cast<size_t>(idx)] = ns.back().loc;
        }
        unmeasured.push_back(idx);
    }

    std::vector<std::vector<int32_t>> affected(static_cast<size_t>(n_px));
    std::vector<int32_t> affected_by_all;
    for (int32_t idx : unmeasured) {
        if (underfull[static_cast<size_t>(idx)]) {
            affected_by_all.push_back(idx);
            continue;
        }
        const PixelLocation r{idx / w, idx % w};
        const long long bound = edge_d2[static_cast<size_t>(idx)];
        const int radius = integer_sqrt(bound);
        for (int dr = -radius; dr <= radius; ++dr) {
            for (int dc = -radius; dc <= radius; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const PixelLocation s{r.row + dr, r.col + dc};
                if (s.row < 0 || s.row >= h || s.col < 0 || s.col >= w) continue;
                const int sidx = s.row * w + s.col;
                if (mask[static_cast<size_t>(sidx)]) continue;
                const long long d2 = static_cast<long long>(dr) * dr +
                                     static_cast<long long>(dc) * dc;
                if (d2 < bound || (d2 == bound && s < edge_loc[static_cast<size_t>(idx)]))
                    affected[static_cast<size_t>(sidx)].push_back(idx);
            }
        }
    }

    ScalarField out(w, h);
    for (int32_t idx : unmeasured) {
        const PixelLocation s{idx / w, idx % w};
        state.add(s, x.at(s));
        double rd = d_base[static_cast<size_t>(idx)]; // s itself becomes distortion-free
        auto revisit = [&](int32_t ridx) {
            if (ridx == idx) return;
            const PixelLocation r{ridx / w, ridx % w};
            const double d_new = pixel_distortion(x.at(r), interp_at(r), mode);
            rd += d_base[static_cast<size_t>(ridx)] - d_new;
        };
        for (int32_t ridx : affected[static_cast<size_t>(idx)]) revisit(ridx);
        for (int32_t ridx : affected_by_all) revisit(ridx);
        state.pop_last();
        out.set(s, rd);
    }
    return out;
}

double sigma_s(PixelLocation s, const MeasurementState& state, double c) {
    if (c <= 0.0) throw ContractError("sigma_s: c must be positive");
    if (state.count() == 0) throw ContractError("sigma_s: no measurements");
    return std::sqrt(static_cast<double>(state.nearest_d2(s))) / c;
}

double kernel_weight(PixelLocation s, PixelLocation r, double sigma) {
    if (sigma <= 0.0) throw ContractError("kernel_weight: sigma must be positive");
    return std::exp(-static_cast<double>(dist2(s, r)) / (2.0 * sigma * sigma));
}

namespace {

ScalarField approx_rd_impl(const Image& x, const MeasurementState& state, const Image& recon,
                           double c, double trunc_sigmas, bool parallel) {
    if (x.width() != state.width() || x.height() != state.height() || x.mode() != state.mode())
        throw ContractError("approx_rd_field: image/state mismatch");
    if (!recon.same_shape(x) || recon.mode() != x.mode())
        throw ContractError("approx_rd_field: reconstruction shape mismatch");
    if (c <= 0.0) throw ContractError("approx_rd_field: c must be positive");
    if (trunc_sigmas <= 0.0) throw ContractError("approx_rd_field: truncation must be positive");
    if (state.count() == 0) throw ContractError("approx_rd_field: no measurements");
    for (const Measurement& m : state.entries())
        if (recon.at(m.loc) != m.value)
            throw ContractError("approx_rd_field: reconstruction disagrees with measurements");

    const int w = x.width();
    const int h = x.height();
    const int n_px = w * h;
    const Mode mode = x.mode();

    std::vector<double> d_cache(static_cast<size_t>(n_px), 0.0);
    for (int idx = 0; idx < n_px; ++idx) {
        const PixelLocation p{idx / w, idx % w};
        d_cache[static_cast<size_t>(idx)] = pixel_distortion(x.at(p), recon.at(p), mode);
    }

    const auto& mask = state.mask();
    ScalarField field(w, h);
    auto eval = [&](int idx) {
        const PixelLocation s{idx / w, idx % w};
        const double sigma = std::sqrt(static_cast<double>(state.nearest_d2(s))) / c;
        const double max_d2 = trunc_sigmas * sigma * trunc_sigmas * sigma;
        const int radius = static_cast<int>(std::floor(trunc_sigmas * sigma)) + 1;
        const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
        double sum = 0.0;
        for (int dr = -radius; dr <= radius; ++dr) {
            const int row = s.row + dr;
            if (row < 0 || row >= h) continue;
            for (int dc = -radius; dc <= radius; ++dc) {
                const int col = s.col + dc;
                if (col < 0 || col >= w) continue;
                const long long d2 = static_cast<long long>(dr) * dr +
                                     static_cast<long long>(dc) * dc;
                if (static_cast<double>(d2) > max_d2) continue;
                const double d = d_cache[static_cast<size_t>(row) * w + col];
                if (d != 0.0) sum += std::exp(-static_cast<double>(d2) * inv_two_sigma2) * d;
            }
        }
        field.set(s, sum);
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 256)
        for (int idx = 0; idx < n_px; ++idx)
            if (!mask[static_cast<size_t>(idx)]) eval(idx);
    } else {
        for (int idx = 0; idx < n_px; ++idx)
            if (!mask[static_cast<size_t>(idx)]) eval(idx);
    }
    return field;
}

} // namespace

ScalarField approx_rd_field(const Image& x, const MeasurementState& state, const Image& recon,
                            double c, double trunc_sigmas) {
    return approx_rd_impl(x, state, recon, c, trunc_sigmas, true);
}

ScalarField approx_rd_field_serial(const Image& x, const MeasurementState& state,
                                   const Image& recon, double c, double trunc_sigmas) {
    return approx_rd_impl(x, state, recon, c, trunc_sigmas, false);
}

namespace {

struct SimulatedState {
    int image_id = 0;
    double density = 0.0;
    MeasurementState state;
    Image recon;

    SimulatedState(int id, double dens, MeasurementState st, Image rc)
        : image_id(id), density(dens), state(std::move(st)), recon(std::move(rc)) {}
};

// one simulated acquisition per (image, density), deterministic in (seed,
// image index, density index)
std::vector<SimulatedState> simulate_states(const std::vector<Image>& images,
                                            const std::vector<double>& densities,
                                            const ReconstructionParams& recon_params,
                                            uint64_t seed) {
    if (images.empty()) throw ContractError("training: no images");
    if (densities.empty()) throw ContractError("training: no densities");
    for (const Image& img : images)
        if (img.mode() != images.front().mode() )
            throw ContractError("training: images mix distortion modes");
    for (size_t ii = 0; ii < images.size(); ++ii) {
        const long long n_px = images[ii].size();
        for (double d : densities) {
            if (d <= 0.0 || d >= 100.0)
                throw ContractError("training: density " + fmt_double(d) +
                                    " outside (0, 100)");
            if (std::llround(d / 100.0 * static_cast<double>(n_px)) < 1)
                throw ContractError("training: density " + fmt_double(d) +
                                    " selects no pixels");
        }
    }

    std::vector<SimulatedState> tasks;
    tasks.reserve(images.size() * densities.size());
    for (size_t ii = 0; ii < images.size(); ++ii) {
        for (size_t di = 0; di < densities.size(); ++di) {
            const Image& img = images[ii];
            const long long n_px = img.size();
            const long long m = std::llround(densities[di] / 100.0 * static_cast<double>(n_px));
            std::mt19937_64 rng(mix_seed(seed, ii, di));
            MeasurementState state(img.width(), img.height(), img.mode());
            for (int64_t idx : sample_distinct(n_px, m, rng))
                state.add(img.location_of(idx), img.at(img.location_of(idx)));
            Image recon = reconstruct_full(state, recon_params);
            tasks.emplace_back(static_cast<int>(ii), densities[di], std::move(state),
                               std::move(recon));
        }
    }
    return tasks;
}

void append_pairs(TrainingDatabase& db, const SimulatedState& task, const Image& img,
                  const ScalarField& rd, const DescriptorParams& descriptor,
                  const FeatureContext& ctx) {
    const int w = img.width();
    const int n_px = w * img.height();
    const auto& mask = task.state.mask();
    for (int idx = 0; idx < n_px; ++idx) {
        if (mask[static_cast<size_t>(idx)]) continue;
        const PixelLocation s{idx / w, idx % w};
        TrainingPair pair;
        pair.features =
            expand_features(compute_descriptors(task.state, task.recon, s, descriptor, ctx));
        pair.rd = rd.at(s);
        pair.image_id = task.image_id;
        pair.density = task.density;
        pair.loc = s;
        db.pairs.push_back(pair);
    }
}

} // namespace

TrainingDatabase build_training_db(const std::vector<Image>& images,
                                   const std::vector<double>& densities, const RdKind& rd_kind,
                                   const TrainingParams& params, uint64_t seed) {
    if (!rd_kind.approximate) {
        for (const Image& img : images)
            if (img.width() > params.exact_size_limit || img.height() > params.exact_size_limit)
                throw ContractError(
                    "build_training_db: exact targets limited to images up to " +
                    std::to_string(params.exact_size_limit) + " pixels per side");
    } else if (rd_kind.c <= 0.0) {
        throw ContractError("build_training_db: approximate targets need c > 0");
    }

    const std::vector<SimulatedState> tasks =
        simulate_states(images, densities, params.recon, seed);

    TrainingDatabase db;
    db.mode = images.front().mode();
    db.rd_kind = rd_kind;
    db.descriptor = params.descriptor;

    for (const SimulatedState& task : tasks) {
        const Image& img = images[static_cast<size_t>(task.image_id)];
        const ScalarField rd =
            rd_kind.approximate
                ? approx_rd_field(img, task.state, task.recon, rd_kind.c)
                : exact_rd_field(img, task.state, params.recon);
        const FeatureContext ctx(img.width(), img.height(), params.descriptor.lambda);
        append_pairs(db, task, img, rd, params.descriptor, ctx);
    }
    return db;
}

RegressionModel fit_theta(const TrainingDatabase& db, FitInfo* info) {
    const size_t n = db.pairs.size();
    if (n < static_cast<size_t>(kFeatureCount))
        throw ContractError("fit_theta: need at least " + std::to_string(kFeatureCount) +
                            " training pairs, have " + std::to_string(n));

    std::vector<double> a(n * kFeatureCount);
    std::vector<double> b(n);
    for (size_t i = 0; i < n; ++i) {
        for (int j = 0; j < kFeatureCount; ++j)
            a[i * kFeatureCount + static_cast<size_t>(j)] = db.pairs[i].features[static_cast<size_t>(j)];
        b[i] = db.pairs[i].rd;
    }
    const LsqResult res = solve_least_squares(a, static_cast<int>(n), kFeatureCount, b);

    RegressionModel model;
    std::copy(res.coeffs.begin(), res.coeffs.end(), model.theta.begin());
    model.rd_kind = db.rd_kind;
    model.mode = db.mode;
    model.descriptor = db.descriptor;
    if (info) {
        info->residual_rms = res.residual_rms;
        info->rank = res.rank;
    }
    return model;
}

double distortion_metric(const std::vector<double>& td_means) {
    if (td_means.size() < 2)
        throw ContractError("distortion_metric: need at least two curve points");
    double area = 0.0;
    for (size_t k = 1; k < td_means.size(); ++k)
        area += (td_means[k - 1] + td_means[k]) / 2.0;
    return area;
}

CCalibration calibrate_c(const std::vector<Image>& train_images,
                         const std::vector<double>& candidate_cs,
                         const std::vector<Image>& eval_images, int step_budget,
                         const std::vector<double>& densities, const TrainingParams& params,
                         uint64_t seed) {
    if (candidate_cs.empty()) throw ContractError("calibrate_c: no candidates");
    if (step_budget < 2) throw ContractError("calibrate_c: step budget must be >= 2");
    if (eval_images.empty()) throw ContractError("calibrate_c: no eval images");
    for (double c : candidate_cs)
        if (c <= 0.0) throw ContractError("calibrate_c: candidate c must be positive");

    // states and features are c-independent; only the rd targets change
    const std::vector<SimulatedState> tasks =
        simulate_states(train_images, densities, params.recon, seed);

    TrainingDatabase features_only;
    features_only.mode = train_images.front().mode();
    features_only.descriptor = params.descriptor;
    for (const SimulatedState& task : tasks) {
        const Image& img = train_images[static_cast<size_t>(task.image_id)];
        ScalarField zero(img.width(), img.height());
        const auto& mask = task.state.mask();
        for (int idx = 0; idx < img.width() * img.height(); ++idx)
            if (!mask[static_cast<size_t>(idx)])
                zero.values[static_cast<size_t>(idx)] = 0.0;
        const FeatureContext ctx(img.width(), img.height(), params.descriptor.lambda);
        append_pairs(features_only, task, img, zero, params.descriptor, ctx);
    }

    CCalibration out;
    double best_dm = 0.0;
    bool have_best = false;
    for (double c : candidate_cs) {
        TrainingDatabase db = features_only;
        db.rd_kind = {true, c};
        size_t cursor = 0;
        for (const SimulatedState& task : tasks) {
            const Image& img = train_images[static_cast<size_t>(task.image_id)];
            const ScalarField rd = approx_rd_field(img, task.state, task.recon, c);
            const auto& mask = task.state.mask();
            for (int idx = 0; idx < img.width() * img.height(); ++idx) {
                if (mask[static_cast<size_t>(idx)]) continue;
                db.pairs[cursor++].rd =
                    rd.values[static_cast<size_t>(idx)];
            }
        }

        const RegressionModel model = fit_theta(db);

        std::vector<double> td_mean(static_cast<size_t>(step_budget), 0.0);
        for (const Image& eval : eval_images) {
            SamplerConfig cfg;
            cfg.model = model;
            cfg.stop = {StopRule::Kind::StepBudget, step_budget, 0.0, 2.0};
            cfg.descriptor = params.descriptor;
            cfg.recon = params.recon;
            const RunTrace trace = slads_run(eval, cfg);
            int k = 0;
            for (const TraceStep& step : trace.steps) {
                if (step.k <= trace.seed_count) continue;
                td_mean[static_cast<size_t>(k++)] += step.td;
            }
            if (k != step_budget)
                throw ContractError("calibrate_c: eval run ended before the step budget");
        }
        for (double& v : td_mean) v /= static_cast<double>(eval_images.size());

        const double dm = distortion_metric(td_mean);
        out.dm_table.emplace_back(c, dm);
        out.td_curves.push_back(td_mean);
        if (!have_best || dm < best_dm || (dm == best_dm && c < out.c_star)) {
            have_best = true;
            best_dm = dm;
            out.c_star = c;
            out.best_model = model;
        }
    }
    return out;
}

StoppingCalibration calibrate_stopping(const std::vector<Image>& images,
                                       const RegressionModel& model,
                                       const std::vector<double>& t_list, double beta,
                                       const TrainingParams& params) {
    if (images.empty()) throw ContractError("calibrate_stopping: no images");
    if (t_list.empty()) throw ContractError("calibrate_stopping: no levels");
    if (beta <= 0.0) throw ContractError("calibrate_stopping: beta must be positive");
    for (size_t i = 1; i < t_list.size(); ++i)
        if (t_list[i] <= t_list[i - 1])
            throw ContractError("calibrate_stopping: levels must be strictly increasing");

    const double t_min = t_list.front();
    std::vector<double> sums(t_list.size(), 0.0);
    std::vector<int> counts(t_list.size(), 0);
    std::vector<double> best_td(images.size(), 1e300);
    StoppingCalibration calib;
    calib.beta = beta;

    for (size_t m = 0; m < images.size(); ++m) {
        const Image& img = images[m];
        SamplerConfig cfg;
        cfg.model = model;
        cfg.stop.kind = StopRule::Kind::StepBudget;
        cfg.stop.step_budget = static_cast<int>(img.size());
        cfg.descriptor = params.descriptor;
        cfg.recon = params.recon;
        cfg.beta = beta;
        cfg.td_stop_target = t_min;
        const RunTrace trace = slads_run(img, cfg);

        for (size_t ti = 0; ti < t_list.size(); ++ti) {
            bool found = false;
            for (const TraceStep& step : trace.steps) {
                if (step.k <= trace.seed_count || std::isnan(step.td)) continue;
                best_td[m] = std::min(best_td[m], step.td);
                if (step.td <= t_list[ti]) {
                    sums[ti] += step.epsilon;
                    ++counts[ti];
                    found = true;
                    break;
                }
            }
            if (!found)
                calib.warnings.push_back("image " + std::to_string(m) +
                                         " never reached level " + fmt_double(t_list[ti]));
        }
    }

    for (size_t ti = 0; ti < t_list.size(); ++ti) {
        if (counts[ti] == 0) {
            double best = 1e300;
            for (double v : best_td) best = std::min(best, v);
            throw ContractError("calibrate_stopping: no image reached level " +
                                fmt_double(t_list[ti]) + "; best distortion achieved " +
                                fmt_double(best));
        }
        calib.lut.emplace_back(t_list[ti], sums[ti] / counts[ti]);
    }
    return calib;
}

void save_training_db(const TrainingDatabase& db, const std::filesystem::path& path) {
    {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write training database: " + path.string());
        for (int j = 0; j < kFeatureCount; ++j) out << "f" << j << ",";
        out << "rd,image_id,density,row,col\n";
        for (const TrainingPair& p : db.pairs) {
            for (double v : p.features) out << fmt_double(v) << ",";
            out << fmt_double(p.rd) << "," << p.image_id << "," << fmt_double(p.density) << ","
                << p.loc.row << "," << p.loc.col << "\n";
        }
    }
    std::ofstream meta(path.string() + ".meta");
    if (!meta) throw IoError("cannot write training metadata: " + path.string() + ".meta");
    meta << "mode=" << mode_name(db.mode) << "\n";
    meta << "rd_kind=" << rd_kind_name(db.rd_kind) << "\n";
    if (db.rd_kind.approximate) meta << "c=" << fmt_double(db.rd_kind.c) << "\n";
    meta << "neighbor_count=" << db.descriptor.neighbor_count << "\n";
    meta << "lambda=" << fmt_double(db.descriptor.lambda) << "\n";
    meta << "pairs=" << db.pairs.size() << "\n";
    for (const auto& [key, value] : db.extra_meta) meta << key << "=" << value << "\n";
}

TrainingDatabase load_training_db(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read training database: " + path.string());
    TrainingDatabase db;
    std::string line;
    if (!std::getline(in, line))
        throw ContractError("training database is empty: " + path.string());
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != static_cast<size_t>(kFeatureCount) + 5)
            throw ContractError("training database row has " + std::to_string(cells.size()) +
                                " columns");
        TrainingPair p;
        try {
            for (int j = 0; j < kFeatureCount; ++j)
                p.features[static_cast<size_t>(j)] = std::stod(cells[static_cast<size_t>(j)]);
            p.rd = std::stod(cells[static_cast<size_t>(kFeatureCount)]);
            p.image_id = std::stoi(cells[static_cast<size_t>(kFeatureCount) + 1]);
            p.density = std::stod(cells[static_cast<size_t>(kFeatureCount) + 2]);
            p.loc.row = std::stoi(cells[static_cast<size_t>(kFeatureCount) + 3]);
            p.loc.col = std::stoi(cells[static_cast<size_t>(kFeatureCount) + 4]);
        } catch (const std::exception&) {
            throw ContractError("training database: malformed row '" + line + "'");
        }
        db.pairs.push_back(p);
    }

    std::ifstream meta(path.string() + ".meta");
    if (!meta) throw IoError("cannot read training metadata: " + path.string() + ".meta");
    std::map<std::string, std::string> kv;
    while (std::getline(meta, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) continue;
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    if (kv.count("mode")) db.mode = mode_from_name(kv["mode"]);
    if (kv.count("rd_kind")) {
        db.rd_kind.approximate = kv["rd_kind"] == "approximate";
        if (db.rd_kind.approximate && kv.count("c")) db.rd_kind.c = std::stod(kv["c"]);
    }
    if (kv.count("neighbor_count")) db.descriptor.neighbor_count = std::stoi(kv["neighbor_count"]);
    if (kv.count("lambda")) db.descriptor.lambda = std::stod(kv["lambda"]);
    return db;
}

void save_stopping_calibration(const StoppingCalibration& calib,
                               const std::filesystem::path& path) {
    {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write stopping table: " + path.string());
        out << "t,t_tilde\n";
        for (const auto& [t, t_tilde] : calib.lut)
            out << fmt_double(t) << "," << fmt_double(t_tilde) << "\n";
    }
    std::ofstream meta(path.string() + ".meta");
    if (!meta) throw IoError("cannot write stopping metadata: " + path.string() + ".meta");
    meta << "beta=" << fmt_double(calib.beta) << "\n";
    for (size_t i = 0; i < calib.warnings.size(); ++i)
        meta << "warning" << i << "=" << calib.warnings[i] << "\n";
}

StoppingCalibration load_stopping_calibration(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read stopping table: " + path.string());
    StoppingCalibration calib;
    std::string line;
    if (!std::getline(in, line))
        throw ContractError("stopping table is empty: " + path.string());
    double prev_t = -1e300;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 2)
            throw ContractError("stopping table row needs two columns: '" + line + "'");
        double t = 0.0, t_tilde = 0.0;
        try {
            t = std::stod(cells[0]);
            t_tilde = std::stod(cells[1]);
        } catch (const std::exception&) {
            throw ContractError("stopping table: malformed row '" + line + "'");
        }
        if (t <= prev_t)
            throw ContractError("stopping table levels must be strictly increasing");
        prev_t = t;
        calib.lut.emplace_back(t, t_tilde);
    }

    std::ifstream meta(path.string() + ".meta");
    if (meta) {
        while (std::getline(meta, line)) {
            const std::string t = trim(line);
            const size_t eq = t.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = trim(t.substr(0, eq));
            if (key == "beta")
                calib.beta = std::stod(trim(t.substr(eq + 1)));
            else if (key.rfind("warning", 0) == 0)
                calib.warnings.push_back(t.substr(eq + 1));
        }
    }
    return calib;
}

} // namespace slads
