#include "slads/harness.hpp"

#include "slads/grain.hpp"
#include "slads/image_io.hpp"
#include "slads/rng.hpp"
#include "slads/sampler.hpp"
#include "slads/text.hpp"
#include "slads/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace slads {

namespace {

namespace fs = std::filesystem;

fs::path resolve(const RunContext& ctx, const std::string& path) {
    const fs::path p(path);
    return p.is_absolute() ? p : ctx.config_dir / p;
}

Mode mode_key(const Config& cfg, const std::string& key = "mode") {
    return mode_from_name(cfg.get_string(key));
}

struct Corpus {
    std::vector<Image> images;
    std::vector<std::string> names;
};

Corpus load_corpus(const Config& cfg, const std::string& key, Mode mode,
                   const RunContext& ctx) {
    Corpus corpus;
    for (const std::string& name : cfg.get_string_list(key)) {
        corpus.images.push_back(load_image(resolve(ctx, name).string(), mode));
        corpus.names.push_back(name);
    }
    return corpus;
}

std::ofstream open_out(const RunContext& ctx, const std::string& name) {
    const fs::path p = ctx.out_dir / name;
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

void write_meta(const Config& cfg, const RunContext& ctx, const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    std::ofstream out = open_out(ctx, "run.meta");
    out << "command=" << command << "\n";
    out << "seed=" << ctx.seed << "\n";
    for (const auto& [key, value] : cfg.entries()) out << key << "=" << value << "\n";
    for (const auto& [key, value] : extra) out << key << "=" << value << "\n";
}

// Reconstruction and descriptors share the neighbor count.
TrainingParams params_from_descriptor(const DescriptorParams& d) {
    TrainingParams p;
    p.descriptor = d;
    p.recon.neighbor_count = d.neighbor_count;
    return p;
}

DescriptorParams descriptor_from_cfg(const Config& cfg) {
    DescriptorParams d;
    d.neighbor_count = cfg.get_int("neighbor_count", d.neighbor_count);
    d.lambda = cfg.get_double("lambda", d.lambda);
    if (d.neighbor_count < 1)
        throw ContractError("config key 'neighbor_count' must be >= 1");
    if (d.lambda <= 0.0) throw ContractError("config key 'lambda' must be positive");
    return d;
}

long long checkpoint_count(long long n_px, int percent) {
    return std::llround(static_cast<double>(percent) / 100.0 * static_cast<double>(n_px));
}

// TD along a fixed measurement order, evaluated at whole-percent checkpoints
// by reconstructing each prefix.
std::vector<double> prefix_td_curve(const Image& oracle, const RunTrace& trace,
                                    const std::vector<int>& percents,
                                    const ReconstructionParams& recon_params) {
    std::vector<double> out;
    MeasurementState state(oracle.width(), oracle.height(), oracle.mode());
    size_t cursor = 0;
    for (int p : percents) {
        const long long want = checkpoint_count(oracle.size(), p);
        while (cursor < trace.steps.size() && static_cast<long long>(state.count()) < want) {
            const TraceStep& s = trace.steps[cursor++];
            state.add(s.loc, s.value);
        }
        if (static_cast<long long>(state.count()) < want)
            throw ContractError("trace ends before the " + std::to_string(p) + "% checkpoint");
        out.push_back(normalized_td(oracle, reconstruct_full(state, recon_params)));
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

} // namespace

void run_generate(const Config& cfg, const RunContext& ctx) {
    const Mode mode = mode_key(cfg);
    SyntheticGrainSpec spec;
    spec.width = cfg.get_int("width", 64);
    spec.height = cfg.get_int("height", 64);
    spec.grain_count = cfg.get_int("grain_count", 40);
    spec.label_count = cfg.get_int("label_count", 4);
    const int count = cfg.get_int("count");
    const std::string prefix = cfg.get_string("prefix", "image");
    cfg.ensure_all_consumed();
    if (count < 1) throw ContractError("config key 'count' must be >= 1");
    if (mode == Mode::Discrete && spec.label_count < 2)
        throw ContractError("config key 'label_count' must be >= 2 for discrete images");

    std::ofstream manifest = open_out(ctx, "manifest.txt");
    for (int i = 0; i < count; ++i) {
        spec.seed = mix_seed(ctx.seed, static_cast<uint64_t>(i));
        std::ostringstream name;
        name << prefix << "_" << std::setw(3) << std::setfill('0') << i
             << (mode == Mode::Discrete ? ".csv" : ".pgm");
        const fs::path path = ctx.out_dir / name.str();
        if (mode == Mode::Discrete) {
            bool fallback = false;
            const Image img = generate_grain_image(spec, &fallback);
            save_discrete_csv(path.string(), img);
            manifest << name.str();
            if (fallback) manifest << "  # some touching grains share a label";
            manifest << "\n";
        } else {
            save_pgm(path.string(), generate_shaded_grain_image(spec));
            manifest << name.str() << "\n";
        }
    }
    write_meta(cfg, ctx, "generate");
}

void run_train(const Config& cfg, const RunContext& ctx) {
    const Mode mode = mode_key(cfg);
    const Corpus corpus = load_corpus(cfg, "images", mode, ctx);
    const std::string rd_name = cfg.get_string("rd", "approx");
    RdKind rd_kind;
    if (rd_name == "approx") {
        rd_kind.approximate = true;
        rd_kind.c = cfg.get_double("c");
    } else if (rd_name == "exact") {
        rd_kind.approximate = false;
    } else {
        throw ContractError("config key 'rd' must be 'exact' or 'approx', got '" + rd_name + "'");
    }
    const std::vector<double> densities =
        cfg.get_double_list("densities", {5.0, 10.0, 20.0, 40.0, 80.0});
    TrainingParams params = params_from_descriptor(descriptor_from_cfg(cfg));
    params.exact_size_limit = cfg.get_int("exact_limit", params.exact_size_limit);
    cfg.ensure_all_consumed();

    TrainingDatabase db = build_training_db(corpus.images, densities, rd_kind, params, ctx.seed);
    db.extra_meta.emplace_back("seed", std::to_string(ctx.seed));
    std::string names;
    for (const std::string& n : corpus.names) names += (names.empty() ? "" : ",") + n;
    db.extra_meta.emplace_back("corpus", names);
    save_training_db(db, ctx.out_dir / "db.csv");

    FitInfo info;
    RegressionModel model = fit_theta(db, &info);
    model.corpus_id = names;
    save_model(model, ctx.out_dir / "model.txt");

    std::ofstream report = open_out(ctx, "report.txt");
    report << "training pairs: " << db.pairs.size() << "\n";
    report << "rd kind: " << rd_kind_name(rd_kind) << "\n";
    if (rd_kind.approximate) report << "c: " << fmt_double(rd_kind.c) << "\n";
    report << "fit residual rms: " << fmt_double(info.residual_rms) << "\n";
    report << "fit rank: " << info.rank << " of " << kFeatureCount << "\n";
    write_meta(cfg, ctx, "train");
}

void run_calibrate_c(const Config& cfg, const RunContext& ctx) {
    const Mode mode = mode_key(cfg);
    const Corpus train = load_corpus(cfg, "train_images", mode, ctx);
    const Corpus eval = load_corpus(cfg, "eval_images", mode, ctx);
    const std::vector<double> candidates = cfg.get_double_list("candidates");
    const std::vector<double> densities =
        cfg.get_double_list("densities", {5.0, 10.0, 20.0, 40.0, 80.0});
    const double eval_fraction = cfg.get_double("eval_fraction", 5.0);
    const TrainingParams params = params_from_descriptor(descriptor_from_cfg(cfg));
    cfg.ensure_all_consumed();

    for (const Image& img : eval.images)
        if (!img.same_shape(eval.images.front()))
            throw ContractError("calibrate-c eval images must share one size");
    const long long n_px = eval.images.front().size();
    const int step_budget =
        static_cast<int>(std::llround(eval_fraction / 100.0 * static_cast<double>(n_px)) -
                         std::llround(1.0 / 100.0 * static_cast<double>(n_px)));
    if (step_budget < 2)
        throw ContractError("config key 'eval_fraction' leaves fewer than two steps");

    const CCalibration calib = calibrate_c(train.images, candidates, eval.images, step_budget,
                                           densities, params, ctx.seed);

    {
        std::ofstream out = open_out(ctx, "dm_table.csv");
        out << "c,dm\n";
        for (const auto& [c, dm] : calib.dm_table)
            out << fmt_double(c) << "," << fmt_double(dm) << "\n";
    }
    RegressionModel model = calib.best_model;
    save_model(model, ctx.out_dir / "model.txt");

    std::ofstream report = open_out(ctx, "report.txt");
    report << "chosen c: " << fmt_double(calib.c_star) << "\n";
    report << "eval steps per run: " << step_budget << "\n";
    for (const auto& [c, dm] : calib.dm_table)
        report << "c=" << fmt_double(c) << " dm=" << fmt_double(dm) << "\n";
    write_meta(cfg, ctx, "calibrate-c",
               {{"chosen_c", fmt_double(calib.c_star)}});
}

void run_calibrate_stop(const Config& cfg, const RunContext& ctx) {
    const RegressionModel model = load_model(resolve(ctx, cfg.get_string("model")));
    const Corpus corpus = load_corpus(cfg, "images", model.mode, ctx);
    const std::vector<double> levels = cfg.get_double_list("levels");
    double beta = cfg.get_double("beta", 0.0);
    cfg.ensure_all_consumed();
    if (beta <= 0.0) beta = beta_for_size(corpus.images.front().size());

    const TrainingParams params = params_from_descriptor(model.descriptor);
    const StoppingCalibration calib =
        calibrate_stopping(corpus.images, model, levels, beta, params);
    save_stopping_calibration(calib, ctx.out_dir / "stopping.csv");

    std::ofstream report = open_out(ctx, "report.txt");
    report << "beta: " << fmt_double(beta) << "\n";
    for (const auto& [t, t_tilde] : calib.lut)
        report << "t=" << fmt_double(t) << " t_tilde=" << fmt_double(t_tilde) << "\n";
    for (const std::string& w : calib.warnings) report << "warning: " << w << "\n";
    write_meta(cfg, ctx, "calibrate-stop");
}

namespace {

SamplerConfig sampler_config_from(const Config& cfg, const RegressionModel& model,
                                  const RunContext& ctx, long long n_px) {
    SamplerConfig sc;
    sc.model = model;
    sc.descriptor = model.descriptor;
    sc.recon.neighbor_count = model.descriptor.neighbor_count;
    sc.initial_fraction = cfg.get_double("initial_fraction", 1.0);
    sc.group_size = cfg.get_int("group_size", 1);
    sc.beta = cfg.get_double("beta", 0.0);
    sc.seed = ctx.seed;

    const std::string stop = cfg.get_string("stop", "budget");
    if (stop == "budget") {
        sc.stop.kind = StopRule::Kind::StepBudget;
        if (cfg.has("step_budget")) {
            sc.stop.step_budget = cfg.get_int("step_budget");
        } else {
            const double target = cfg.get_double("target_fraction", 10.0);
            sc.stop.step_budget = static_cast<int>(
                std::llround(target / 100.0 * static_cast<double>(n_px)) -
                std::llround(sc.initial_fraction / 100.0 * static_cast<double>(n_px)));
        }
        if (sc.stop.step_budget < 0)
            throw ContractError("config: step budget resolves negative");
    } else if (stop == "threshold") {
        sc.stop.kind = StopRule::Kind::Threshold;
        if (cfg.has("threshold")) {
            sc.stop.threshold = cfg.get_double("threshold");
        } else {
            const StoppingCalibration calib =
                load_stopping_calibration(resolve(ctx, cfg.get_string("stopping")));
            const double level = cfg.get_double("level");
            bool found = false;
            for (const auto& [t, t_tilde] : calib.lut) {
                if (std::abs(t - level) <= 1e-12 * std::max(1.0, std::abs(level))) {
                    sc.stop.threshold = t_tilde;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw ContractError("config key 'level' not present in the stopping table");
        }
        sc.stop.min_fraction = cfg.get_double("min_fraction", 2.0);
    } else {
        throw ContractError("config key 'stop' must be 'budget' or 'threshold', got '" + stop +
                            "'");
    }
    return sc;
}

} // namespace

void run_single(const Config& cfg, const RunContext& ctx) {
    const RegressionModel model = load_model(resolve(ctx, cfg.get_string("model")));
    const Image oracle =
        load_image(resolve(ctx, cfg.get_string("image")).string(), model.mode);
    const SamplerConfig sc = sampler_config_from(cfg, model, ctx, oracle.size());
    cfg.ensure_all_consumed();

    const RunTrace trace = slads_run(oracle, sc);
    save_trace_csv(trace, ctx.out_dir / "trace.csv");
    save_mask_png((ctx.out_dir / "mask.png").string(), trace.final_mask, trace.width,
                  trace.height);
    if (model.mode == Mode::Discrete)
        save_discrete_csv((ctx.out_dir / "recon.csv").string(), trace.final_recon);
    else
        save_png((ctx.out_dir / "recon.png").string(), trace.final_recon);

    std::vector<double> times;
    for (const TraceStep& s : trace.steps)
        if (s.k > trace.seed_count && s.select_ms > 0.0) times.push_back(s.select_ms);

    const double final_td = normalized_td(oracle, trace.final_recon);
    std::ofstream report = open_out(ctx, "report.txt");
    report << "measurements: " << trace.steps.size() << "\n";
    report << "seed measurements: " << trace.seed_count << "\n";
    report << "stop reason: " << trace.stop_reason << "\n";
    report << "final td: " << fmt_double(final_td) << "\n";
    report << "median selection ms: " << fmt_double(median(times)) << "\n";
    write_meta(cfg, ctx, "run", {{"stop_reason", trace.stop_reason}});
}

void run_comparison(const Config& cfg, const RunContext& ctx) {
    const RegressionModel model = load_model(resolve(ctx, cfg.get_string("model")));
    const Corpus corpus = load_corpus(cfg, "images", model.mode, ctx);
    const double target_fraction = cfg.get_double("target_fraction", 10.0);
    const double initial_fraction = cfg.get_double("initial_fraction", 1.0);
    std::vector<double> group_sizes;
    if (cfg.has("group_sizes")) group_sizes = cfg.get_double_list("group_sizes");
    std::vector<std::string> methods = {"slads", "rs", "ls"};
    if (cfg.has("methods")) methods = cfg.get_string_list("methods");
    cfg.ensure_all_consumed();

    if (target_fraction <= initial_fraction)
        throw ContractError("config: target_fraction must exceed initial_fraction");
    for (double b : group_sizes) {
        if (b < 2.0 || b != std::floor(b))
            throw ContractError("config key 'group_sizes' entries must be integers >= 2");
        methods.push_back("slads-b" + std::to_string(static_cast<int>(b)));
    }

    std::vector<int> percents;
    for (int p = static_cast<int>(std::ceil(initial_fraction));
         p <= static_cast<int>(std::floor(target_fraction)); ++p)
        percents.push_back(p);
    if (percents.size() < 2)
        throw ContractError("config: need at least two whole-percent checkpoints");

    ReconstructionParams recon_params;
    recon_params.neighbor_count = model.descriptor.neighbor_count;

    std::ofstream report = open_out(ctx, "report.txt");
    report << "images: " << corpus.images.size() << "\n";
    report << "checkpoints: " << percents.front() << "%.." << percents.back() << "%\n";

    for (size_t mi = 0; mi < methods.size(); ++mi) {
        const std::string& method = methods[mi];
        std::vector<std::vector<double>> curves; // per image, per checkpoint
        std::vector<double> select_times;

        for (size_t ii = 0; ii < corpus.images.size(); ++ii) {
            const Image& oracle = corpus.images[ii];
            RunTrace trace;
            if (method == "rs") {
                trace = baseline_random(oracle, target_fraction,
                                        mix_seed(ctx.seed, mi, ii));
            } else if (method == "ls") {
                trace = baseline_low_discrepancy(oracle, target_fraction);
            } else if (method == "slads" || method.rfind("slads-b", 0) == 0) {
                SamplerConfig sc;
                sc.model = model;
                sc.descriptor = model.descriptor;
                sc.recon = recon_params;
                sc.initial_fraction = initial_fraction;
                sc.seed = ctx.seed;
                sc.group_size =
                    method == "slads" ? 1 : std::stoi(method.substr(std::string("slads-b").size()));
                sc.stop.kind = StopRule::Kind::StepBudget;
                sc.stop.step_budget = static_cast<int>(
                    checkpoint_count(oracle.size(), percents.back()) -
                    std::llround(initial_fraction / 100.0 *
                                 static_cast<double>(oracle.size())));
                trace = slads_run(oracle, sc);
                for (const TraceStep& s : trace.steps)
                    if (s.k > trace.seed_count && s.select_ms > 0.0)
                        select_times.push_back(s.select_ms);
            } else {
                throw ContractError("config key 'methods' has unknown method '" + method + "'");
            }
            curves.push_back(prefix_td_curve(oracle, trace, percents, recon_params));
        }

        std::ofstream out = open_out(ctx, "curve_" + method + ".csv");
        out << "fraction,mean_td,std_td\n";
        std::vector<double> means;
        for (size_t pi = 0; pi < percents.size(); ++pi) {
            double mean = 0.0;
            for (const auto& c : curves) mean += c[pi];
            mean /= static_cast<double>(curves.size());
            double var = 0.0;
            for (const auto& c : curves) var += (c[pi] - mean) * (c[pi] - mean);
            var /= static_cast<double>(curves.size());
            out << percents[pi] << "," << fmt_double(mean) << "," << fmt_double(std::sqrt(var))
                << "\n";
            means.push_back(mean);
        }
        report << method << ": td at " << percents.back()
               << "% = " << fmt_double(means.back()) << ", dm = "
               << fmt_double(distortion_metric(means)) << "\n";
        if (!select_times.empty())
            report << method << ": median selection ms = " << fmt_double(median(select_times))
                   << " over " << select_times.size() << " steps\n";
    }
    write_meta(cfg, ctx, "compare");
}

void run_stopping_eval(const Config& cfg, const RunContext& ctx) {
    const RegressionModel model = load_model(resolve(ctx, cfg.get_string("model")));
    const Corpus corpus = load_corpus(cfg, "images", model.mode, ctx);
    const StoppingCalibration calib =
        load_stopping_calibration(resolve(ctx, cfg.get_string("stopping")));
    const double min_fraction = cfg.get_double("min_fraction", 2.0);
    const double initial_fraction = cfg.get_double("initial_fraction", 1.0);
    cfg.ensure_all_consumed();
    if (calib.lut.empty()) throw ContractError("stopping table is empty");

    double t_tilde_min = calib.lut.front().second;
    for (const auto& [t, t_tilde] : calib.lut) t_tilde_min = std::min(t_tilde_min, t_tilde);

    // One trajectory per image, stopped by the strictest level.  Selection
    // never looks at the stop rule, so the trace prefix at each level's first
    // crossing is exactly the run that level would have produced.
    struct LevelStats {
        std::vector<double> tds;
        std::vector<double> fractions;
    };
    std::vector<LevelStats> stats(calib.lut.size());

    std::ofstream report = open_out(ctx, "report.txt");
    for (size_t ii = 0; ii < corpus.images.size(); ++ii) {
        const Image& oracle = corpus.images[ii];
        SamplerConfig sc;
        sc.model = model;
        sc.descriptor = model.descriptor;
        sc.recon.neighbor_count = model.descriptor.neighbor_count;
        sc.initial_fraction = initial_fraction;
        sc.beta = calib.beta;
        sc.seed = ctx.seed;
        sc.stop.kind = StopRule::Kind::Threshold;
        sc.stop.threshold = t_tilde_min;
        sc.stop.min_fraction = min_fraction;
        const RunTrace trace = slads_run(oracle, sc);
        if (trace.stop_reason != "threshold")
            report << "warning: image " << corpus.names[ii]
                   << " exhausted sampling before the strictest level\n";

        const long long n_px = oracle.size();
        const long long min_count =
            std::llround(min_fraction / 100.0 * static_cast<double>(n_px));
        for (size_t li = 0; li < calib.lut.size(); ++li) {
            const double t_tilde = calib.lut[li].second;
            for (const TraceStep& s : trace.steps) {
                if (s.k <= trace.seed_count || std::isnan(s.epsilon)) continue;
                if (s.k < min_count || s.epsilon > t_tilde) continue;
                if (std::isnan(s.td))
                    throw ContractError("stopping-eval: trace row without distortion");
                stats[li].tds.push_back(s.td);
                stats[li].fractions.push_back(100.0 * static_cast<double>(s.k) /
                                              static_cast<double>(n_px));
                break;
            }
        }
    }

    std::ofstream out = open_out(ctx, "eval.csv");
    out << "t,mean_td,std_td,mean_fraction,runs\n";
    for (size_t li = 0; li < calib.lut.size(); ++li) {
        const auto& st = stats[li];
        double mean = 0.0, mean_frac = 0.0;
        for (double v : st.tds) mean += v;
        for (double v : st.fractions) mean_frac += v;
        const double n = static_cast<double>(st.tds.size());
        if (!st.tds.empty()) {
            mean /= n;
            mean_frac /= n;
        }
        double var = 0.0;
        for (double v : st.tds) var += (v - mean) * (v - mean);
        if (!st.tds.empty()) var /= n;
        out << fmt_double(calib.lut[li].first) << "," << fmt_double(mean) << ","
            << fmt_double(std::sqrt(var)) << "," << fmt_double(mean_frac) << "," << st.tds.size()
            << "\n";
        report << "t=" << fmt_double(calib.lut[li].first) << " mean_td=" << fmt_double(mean)
               << " runs=" << st.tds.size() << "\n";
    }
    write_meta(cfg, ctx, "stopping-eval");
}

} // namespace slads
