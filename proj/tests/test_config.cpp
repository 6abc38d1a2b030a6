#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "config.hpp"
#include "runners.hpp"

using namespace ghf::cli;

TEST_CASE("values, defaults and unknown keys") {
    auto c = Config::parse(R"({"d": 3, "s": 0.25, "source": "exp", "extra": 1})");
    CHECK(c.get<int>("d", 2) == 3);
    CHECK(c.get<double>("s", 0.5) == 0.25);
    CHECK(c.get<double>("gamma", 1.5) == 1.5);
    CHECK(c.choice("source", "exp", {"exp", "algebraic"}) == "exp");
    try {
        c.finish();
        FAIL("unknown key accepted");
    } catch (const config_error& e) {
        CHECK(e.key == "extra");
    }
}

TEST_CASE("type and choice errors name the key") {
    auto c = Config::parse(R"({"K": 2.5, "source": "sine", "N": "four"})");
    CHECK_THROWS_AS(c.get<int>("K", 1), config_error);
    CHECK_THROWS_AS(c.get<int>("N", 1), config_error);
    try {
        c.choice("source", "exp", {"exp", "algebraic"});
        FAIL("bad choice accepted");
    } catch (const config_error& e) {
        CHECK(e.key == "source");
    }
    CHECK_THROWS_AS(c.require<double>("missing"), config_error);
}

TEST_CASE("malformed text reports its line") {
    try {
        Config::parse("{\n  \"d\": 2,\n  \"s\": ,\n}");
        FAIL("malformed config accepted");
    } catch (const config_error& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(Config::parse("[1, 2]"), config_error);
}

TEST_CASE("hash ignores key order and whitespace") {
    auto a = Config::parse(R"({"d": 2, "s": 0.5})");
    auto b = Config::parse("{\n \"s\": 0.5,\n \"d\": 2\n}");
    auto c = Config::parse(R"({"d": 2, "s": 0.51})");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
    CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
}

TEST_CASE("validation happens before any output") {
    auto dir = std::filesystem::temp_directory_path() / "ghf_config_test";
    std::filesystem::remove_all(dir);
    RunContext ctx;
    ctx.out_dir = dir;
    auto c = Config::parse(R"({"d": 2, "s": 0.5, "K": 4, "lattice_step": -1})");
    CHECK_THROWS_AS(dispatch("solve-fl", c, ctx), config_error);
    CHECK_FALSE(std::filesystem::exists(dir / "fl_error.csv"));
    auto e = Config::parse(R"({"potential": "coulomb", "Z": 1.0})");
    CHECK_THROWS_AS(dispatch("eigen", e, ctx), config_error);
}

TEST_CASE("csv carries the config hash") {
    auto dir = std::filesystem::temp_directory_path() / "ghf_config_test_ok";
    std::filesystem::remove_all(dir);
    RunContext ctx;
    ctx.out_dir = dir;
    auto c = Config::parse(R"({"family": "ghf", "d": 2, "members": [[1, 2, 2]], "points": [[0.3, 0.4]]})");
    dispatch("basis", c, ctx);
    REQUIRE(ctx.written.size() == 1);
    std::ifstream in(ctx.written[0]);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# ghf basis config_hash=" + c.hash());
}
