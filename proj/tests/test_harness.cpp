#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "slads/model.hpp"
#include "slads/training.hpp"
#include "test_util.hpp"

// Subprocess tests of the command-line tool.  SLADS_CLI_PATH is injected by
// the build so the suite always drives the binary it was built alongside.

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

CliResult run_cli(const testutil::TempDir& dir, const std::string& tag,
                  const std::string& args) {
    const std::filesystem::path out_file = dir.file(tag + ".out");
    const std::filesystem::path err_file = dir.file(tag + ".err");
    const std::string cmd = std::string(SLADS_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + err_file.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

int line_count(const std::string& text) {
    int n = 0;
    std::istringstream ss(text);
    for (std::string line; std::getline(ss, line);)
        if (!line.empty()) ++n;
    return n;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

std::string last_nonempty_line(const std::string& text) {
    std::istringstream ss(text);
    std::string last;
    for (std::string line; std::getline(ss, line);)
        if (!line.empty()) last = line;
    return last;
}

} // namespace

TEST_CASE("generate writes a manifest and the requested images") {
    testutil::TempDir dir("cli-gen");
    write_file(dir.file("gen.cfg"),
               "mode = discrete\n"
               "width = 16\n"
               "height = 16\n"
               "grain_count = 6\n"
               "label_count = 3\n"
               "count = 3\n"
               "prefix = img\n");
    const CliResult r = run_cli(dir, "gen",
                                "generate " + dir.file("gen.cfg").string() +
                                    " --seed 7 --out " + dir.file("gen").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("artifacts written") != std::string::npos);

    const std::string manifest = slurp(dir.file("gen") / "manifest.txt");
    CHECK(line_count(manifest) == 3);
    CHECK(manifest.find("img_000.csv") != std::string::npos);
    CHECK(manifest.find("img_002.csv") != std::string::npos);
    for (const char* name : {"img_000.csv", "img_001.csv", "img_002.csv"})
        CHECK(std::filesystem::exists(dir.file("gen") / name));

    const std::string meta = slurp(dir.file("gen") / "run.meta");
    CHECK(meta.find("command=generate\n") != std::string::npos);
    CHECK(meta.find("seed=7\n") != std::string::npos);
    CHECK(meta.find("width=16\n") != std::string::npos);
}

TEST_CASE("generate then train then run yields a model and a trace") {
    testutil::TempDir dir("cli-chain");
    write_file(dir.file("gen.cfg"),
               "mode = discrete\nwidth = 16\nheight = 16\n"
               "grain_count = 6\nlabel_count = 3\ncount = 3\nprefix = img\n");
    REQUIRE(run_cli(dir, "gen",
                    "generate " + dir.file("gen.cfg").string() + " --seed 7 --out " +
                        dir.file("gen").string())
                .code == 0);

    write_file(dir.file("train.cfg"),
               "mode = discrete\n"
               "images = gen/img_000.csv, gen/img_001.csv\n"
               "rd = approx\n"
               "c = 2\n"
               "densities = 10, 30\n");
    const CliResult tr = run_cli(dir, "train",
                                 "train " + dir.file("train.cfg").string() +
                                     " --seed 3 --out " + dir.file("tr").string());
    CHECK(tr.code == 0);
    CHECK(std::filesystem::exists(dir.file("tr") / "db.csv"));
    const std::string report = slurp(dir.file("tr") / "report.txt");
    CHECK(report.find("training pairs:") != std::string::npos);
    CHECK(report.find("rd kind: approx") != std::string::npos);

    // The saved model is loadable in-process and carries the corpus names.
    const slads::RegressionModel model =
        slads::load_model(dir.file("tr") / "model.txt");
    CHECK(model.mode == slads::Mode::Discrete);
    CHECK(model.corpus_id.find("img_000.csv") != std::string::npos);

    write_file(dir.file("run.cfg"),
               "model = tr/model.txt\n"
               "image = gen/img_002.csv\n"
               "stop = budget\n"
               "initial_fraction = 2\n"
               "target_fraction = 8\n");
    const CliResult rn = run_cli(dir, "run",
                                 "run " + dir.file("run.cfg").string() +
                                     " --seed 5 --out " + dir.file("run1").string());
    CHECK(rn.code == 0);
    CHECK(std::filesystem::exists(dir.file("run1") / "mask.png"));
    CHECK(std::filesystem::exists(dir.file("run1") / "recon.csv"));

    // 2% of 256 seeds, 8% total: 5 seed rows + 15 selected rows.
    const std::string trace = slurp(dir.file("run1") / "trace.csv");
    CHECK(first_line(trace) == "step,row,col,value,epsilon,td");
    CHECK(line_count(trace) == 21);
    const std::string last = last_nonempty_line(trace);
    CHECK(last.substr(0, last.find(',')) == "20");

    const std::string run_report = slurp(dir.file("run1") / "report.txt");
    CHECK(run_report.find("stop reason: budget") != std::string::npos);
    CHECK(slurp(dir.file("run1") / "run.meta").find("stop_reason=budget") !=
          std::string::npos);
}

TEST_CASE("compare writes one curve per method") {
    testutil::TempDir dir("cli-compare");
    write_file(dir.file("gen.cfg"),
               "mode = discrete\nwidth = 16\nheight = 16\n"
               "grain_count = 6\nlabel_count = 3\ncount = 4\nprefix = img\n");
    REQUIRE(run_cli(dir, "gen",
                    "generate " + dir.file("gen.cfg").string() + " --seed 11 --out " +
                        dir.file("gen").string())
                .code == 0);
    write_file(dir.file("train.cfg"),
               "mode = discrete\nimages = gen/img_000.csv, gen/img_001.csv\n"
               "rd = approx\nc = 2\ndensities = 10, 30\n");
    REQUIRE(run_cli(dir, "train",
                    "train " + dir.file("train.cfg").string() + " --seed 3 --out " +
                        dir.file("tr").string())
                .code == 0);

    write_file(dir.file("cmp.cfg"),
               "model = tr/model.txt\n"
               "images = gen/img_002.csv, gen/img_003.csv\n"
               "initial_fraction = 1\n"
               "target_fraction = 6\n");
    const CliResult r = run_cli(dir, "cmp",
                                "compare " + dir.file("cmp.cfg").string() +
                                    " --seed 9 --out " + dir.file("cmp").string());
    CHECK(r.code == 0);
    for (const char* method : {"slads", "rs", "ls"}) {
        const std::string curve =
            slurp(dir.file("cmp") / (std::string("curve_") + method + ".csv"));
        CHECK(first_line(curve) == "fraction,mean_td,std_td");
        CHECK(line_count(curve) == 7); // header + checkpoints 1%..6%
    }
    const std::string report = slurp(dir.file("cmp") / "report.txt");
    CHECK(report.find("images: 2") != std::string::npos);
    CHECK(report.find("slads: median selection ms") != std::string::npos);
}

TEST_CASE("calibrate-c keeps the winning model and tabulates every candidate") {
    testutil::TempDir dir("cli-calc");
    write_file(dir.file("gen.cfg"),
               "mode = discrete\nwidth = 16\nheight = 16\n"
               "grain_count = 6\nlabel_count = 3\ncount = 4\nprefix = img\n");
    REQUIRE(run_cli(dir, "gen",
                    "generate " + dir.file("gen.cfg").string() + " --seed 13 --out " +
                        dir.file("gen").string())
                .code == 0);
    write_file(dir.file("cal.cfg"),
               "mode = discrete\n"
               "train_images = gen/img_000.csv, gen/img_001.csv\n"
               "eval_images = gen/img_002.csv, gen/img_003.csv\n"
               "candidates = 2, 4\n"
               "densities = 10, 30\n"
               "eval_fraction = 5\n");
    const CliResult r = run_cli(dir, "calc",
                                "calibrate-c " + dir.file("cal.cfg").string() +
                                    " --seed 17 --out " + dir.file("cal").string());
    CHECK(r.code == 0);
    const std::string table = slurp(dir.file("cal") / "dm_table.csv");
    CHECK(first_line(table) == "c,dm");
    CHECK(line_count(table) == 3);
    CHECK(std::filesystem::exists(dir.file("cal") / "model.txt"));
    const std::string meta = slurp(dir.file("cal") / "run.meta");
    const bool chose_2 = meta.find("chosen_c=2") != std::string::npos;
    const bool chose_4 = meta.find("chosen_c=4") != std::string::npos;
    CHECK((chose_2 || chose_4));
}

TEST_CASE("calibrate-stop and stopping-eval round trip a threshold table") {
    testutil::TempDir dir("cli-stop");
    write_file(dir.file("gen.cfg"),
               "mode = discrete\nwidth = 16\nheight = 16\n"
               "grain_count = 6\nlabel_count = 3\ncount = 3\nprefix = img\n");
    REQUIRE(run_cli(dir, "gen",
                    "generate " + dir.file("gen.cfg").string() + " --seed 19 --out " +
                        dir.file("gen").string())
                .code == 0);
    write_file(dir.file("train.cfg"),
               "mode = discrete\nimages = gen/img_000.csv, gen/img_001.csv\n"
               "rd = approx\nc = 2\ndensities = 10, 30\n");
    REQUIRE(run_cli(dir, "train",
                    "train " + dir.file("train.cfg").string() + " --seed 3 --out " +
                        dir.file("tr").string())
                .code == 0);

    write_file(dir.file("stop.cfg"),
               "model = tr/model.txt\n"
               "images = gen/img_002.csv\n"
               "levels = 0.2\n");
    const CliResult cs = run_cli(dir, "calstop",
                                 "calibrate-stop " + dir.file("stop.cfg").string() +
                                     " --seed 23 --out " + dir.file("stop").string());
    CHECK(cs.code == 0);
    const slads::StoppingCalibration calib =
        slads::load_stopping_calibration(dir.file("stop") / "stopping.csv");
    REQUIRE(calib.lut.size() == 1);
    CHECK(calib.lut.front().first == doctest::Approx(0.2));
    CHECK(calib.beta > 0.0);

    write_file(dir.file("eval.cfg"),
               "model = tr/model.txt\n"
               "images = gen/img_002.csv\n"
               "stopping = stop/stopping.csv\n");
    const CliResult ev = run_cli(dir, "stopeval",
                                 "stopping-eval " + dir.file("eval.cfg").string() +
                                     " --seed 23 --out " + dir.file("ev").string());
    CHECK(ev.code == 0);
    const std::string eval_csv = slurp(dir.file("ev") / "eval.csv");
    CHECK(first_line(eval_csv) == "t,mean_td,std_td,mean_fraction,runs");
    CHECK(line_count(eval_csv) == 2);
}

TEST_CASE("contract violations exit 1 and name the offending key") {
    testutil::TempDir dir("cli-err1");

    write_file(dir.file("unknown.cfg"),
               "mode = discrete\nwidth = 16\nheight = 16\ncount = 1\ntypo_key = 1\n");
    CliResult r = run_cli(dir, "unknown",
                          "generate " + dir.file("unknown.cfg").string() + " --out " +
                              dir.file("o1").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.err.find("typo_key") != std::string::npos);

    write_file(dir.file("dup.cfg"), "mode = discrete\nwidth = 8\nwidth = 9\ncount = 1\n");
    r = run_cli(dir, "dup",
                "generate " + dir.file("dup.cfg").string() + " --out " +
                    dir.file("o2").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("width") != std::string::npos);

    write_file(dir.file("missing-key.cfg"), "mode = discrete\nwidth = 8\nheight = 8\n");
    r = run_cli(dir, "missing-key",
                "generate " + dir.file("missing-key.cfg").string() + " --out " +
                    dir.file("o3").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("count") != std::string::npos);

    write_file(dir.file("bare.cfg"), "mode = discrete\njust a bare line\ncount = 1\n");
    r = run_cli(dir, "bare",
                "generate " + dir.file("bare.cfg").string() + " --out " +
                    dir.file("o4").string());
    CHECK(r.code == 1);
}

TEST_CASE("missing inputs exit 2 and name the path") {
    testutil::TempDir dir("cli-err2");

    write_file(dir.file("train.cfg"),
               "mode = discrete\nimages = nowhere.csv\nrd = approx\nc = 2\n");
    CliResult r = run_cli(dir, "noimg",
                          "train " + dir.file("train.cfg").string() + " --out " +
                              dir.file("o1").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("nowhere.csv") != std::string::npos);

    write_file(dir.file("run.cfg"), "model = nope.txt\nimage = also-nope.csv\n");
    r = run_cli(dir, "nomodel",
                "run " + dir.file("run.cfg").string() + " --out " +
                    dir.file("o2").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("nope.txt") != std::string::npos);

    // A config path that does not exist is rejected by argument parsing.
    r = run_cli(dir, "nocfg", "run " + dir.file("ghost.cfg").string());
    CHECK(r.code != 0);
    CHECK(r.err.find("ghost.cfg") != std::string::npos);
}
