#include "doctest.h"

#include <fstream>

#include "slads/config.hpp"
#include "test_util.hpp"

using namespace slads;

TEST_CASE("key-value parsing with comments and blank lines") {
    const Config cfg = Config::parse_string(
        "# leading comment\n"
        "mode = discrete\n"
        "\n"
        "; alt comment style\n"
        "width=64  # trailing comment\n"
        "densities = 5, 10, 20\n"
        "flag =\n");
    CHECK(cfg.get_string("mode") == "discrete");
    CHECK(cfg.get_int("width") == 64);
    CHECK(cfg.get_double_list("densities") == std::vector<double>{5.0, 10.0, 20.0});
    CHECK(cfg.has("flag"));
    CHECK_FALSE(cfg.has("absent"));
}

TEST_CASE("duplicate keys are rejected by name") {
    try {
        Config::parse_string("a=1\nb=2\na=3\n");
        FAIL("expected a parse error");
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).find("a") != std::string::npos);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("missing keys raise diagnostics naming the key") {
    const Config cfg = Config::parse_string("present=1\n");
    try {
        cfg.get_string("needed_thing");
        FAIL("expected an error");
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).find("needed_thing") != std::string::npos);
    }
}

TEST_CASE("typed getters validate their parses") {
    const Config cfg = Config::parse_string("num=7\nnot_num=seven\nreal=2.5\n");
    CHECK(cfg.get_int("num") == 7);
    CHECK(cfg.get_double("real") == 2.5);
    CHECK_THROWS_AS(cfg.get_int("not_num"), ContractError);
    CHECK_THROWS_AS(cfg.get_double("not_num"), ContractError);
    CHECK(cfg.get_int("absent", 42) == 42);
    CHECK(cfg.get_double("absent", 1.5) == 1.5);
    CHECK(cfg.get_string("absent", "dflt") == "dflt");
    CHECK(cfg.get_u64("absent", 99) == 99);
}

TEST_CASE("lists split on commas and trim whitespace") {
    const Config cfg = Config::parse_string("names = alpha , beta,gamma\nempty_item=a,,b\n");
    CHECK(cfg.get_string_list("names") == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK_THROWS_AS(cfg.get_string_list("empty_item"), ContractError);
}

TEST_CASE("unconsumed keys are flagged as unknown") {
    const Config cfg = Config::parse_string("wanted=1\ntypo_key=2\n");
    cfg.get_int("wanted");
    try {
        cfg.ensure_all_consumed();
        FAIL("expected an error");
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
    }
    // After consuming everything the check passes.
    cfg.get_int("typo_key");
    CHECK_NOTHROW(cfg.ensure_all_consumed());
}

TEST_CASE("files parse like strings and missing files are IO errors") {
    testutil::TempDir dir("config");
    {
        std::ofstream out(dir.file("run.cfg"));
        out << "alpha=1\nbeta=two\n";
    }
    const Config cfg = Config::parse_file(dir.file("run.cfg"));
    CHECK(cfg.get_int("alpha") == 1);
    CHECK(cfg.get_string("beta") == "two");
    CHECK_THROWS_AS(Config::parse_file(dir.file("missing.cfg")), IoError);
}

TEST_CASE("lines without an equals sign are rejected") {
    CHECK_THROWS_AS(Config::parse_string("just a bare line\n"), ContractError);
}
