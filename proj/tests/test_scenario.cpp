#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dsrsim/dsrsim.hpp"

using namespace dsrsim;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("the default scenario is the reference setup", "[scenario]") {
    ScenarioConfig c;
    CHECK(c.nodes == 50);
    CHECK(c.area_x == 600.0);
    CHECK(c.area_y == 300.0);
    CHECK(c.speed == 10.0);
    CHECK(c.speed_margin == 1.0);
    CHECK(c.pause == 10.0);
    CHECK(c.tx_range == 100.0);
    CHECK(c.bandwidth == 2e6);
    CHECK(c.p_cache == 30);
    CHECK(c.s_cache == 64);
    CHECK(c.flows == 10);
    CHECK(c.packet_size == 64);
    CHECK(c.rate == 2000.0);
    CHECK(c.start_window == 10.0);
    CHECK(c.buffer_capacity == 64);
    CHECK(c.buffer_timeout == 30.0);
    CHECK(c.max_retries == 8);
    CHECK(c.backoff_base == 0.5);
    CHECK(c.sim_time == 1000.0);
    CHECK(c.seed == 1);
    REQUIRE_NOTHROW(c.validate());
}

TEST_CASE("validation errors name the offending key", "[scenario]") {
    auto expect = [](void (*mutate)(ScenarioConfig&), const char* key) {
        ScenarioConfig c;
        mutate(c);
        REQUIRE_THROWS_WITH(c.validate(), ContainsSubstring(key));
    };
    expect([](ScenarioConfig& c) { c.nodes = 0; }, "nodes");
    expect([](ScenarioConfig& c) { c.area_x = 0; }, "area_x");
    expect([](ScenarioConfig& c) { c.speed = -1; }, "speed");
    expect([](ScenarioConfig& c) { c.p_cache = 0; }, "p_cache");
    expect([](ScenarioConfig& c) { c.s_cache = -3; }, "s_cache");
    expect([](ScenarioConfig& c) { c.rate = 0; }, "rate");
    expect([](ScenarioConfig& c) { c.sim_time = 0; }, "sim_time");
    expect([](ScenarioConfig& c) { c.buffer_timeout = 0; }, "buffer_timeout");
    expect([](ScenarioConfig& c) { c.nodes = 2; c.flows = 3; }, "flows");
    expect([](ScenarioConfig& c) { c.nodes = 1; c.flows = 1; }, "flows");
}

TEST_CASE("json overrides apply and echo back byte-identically", "[scenario]") {
    nlohmann::json j = {{"nodes", 12},
                        {"speed", 2.5},
                        {"p_cache", 5},
                        {"s_cache", 10},
                        {"seed", 99},
                        {"sim_time", 42.0}};
    ScenarioConfig c;
    apply_json(c, j);
    CHECK(c.nodes == 12);
    CHECK(c.speed == 2.5);
    CHECK(c.p_cache == 5);
    CHECK(c.s_cache == 10);
    CHECK(c.seed == 99);
    CHECK(c.sim_time == 42.0);
    CHECK(c.flows == 10); // untouched keys keep their defaults

    // echo -> parse -> apply reproduces the exact same echo
    ScenarioConfig again;
    apply_json(again, nlohmann::json::parse(echo_config(c)));
    REQUIRE(echo_config(again) == echo_config(c));
}

TEST_CASE("unknown keys and wrong types are hard errors", "[scenario]") {
    ScenarioConfig c;
    REQUIRE_THROWS_WITH(apply_json(c, nlohmann::json{{"node", 12}}),
                        ContainsSubstring("unknown config key: node"));
    REQUIRE_THROWS_WITH(apply_json(c, nlohmann::json{{"nodes", "fifty"}}),
                        ContainsSubstring("nodes: wrong value type"));
    REQUIRE_THROWS_WITH(apply_json(c, nlohmann::json::parse("[1,2]")),
                        ContainsSubstring("object"));
}

TEST_CASE("config files load, and missing ones fail loudly", "[scenario]") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "dsrsim_cfg_test.json";
    {
        std::ofstream out(path);
        out << R"({"nodes": 7, "flows": 2, "sim_time": 3.5})";
    }
    ScenarioConfig c = load_config_file(path.string());
    CHECK(c.nodes == 7);
    CHECK(c.flows == 2);
    CHECK(c.sim_time == 3.5);
    std::remove(path.string().c_str());

    REQUIRE_THROWS_WITH(load_config_file(path.string()),
                        ContainsSubstring("cannot open config file"));

    fs::path garbled = fs::temp_directory_path() / "dsrsim_cfg_bad.json";
    {
        std::ofstream out(garbled);
        out << "{not json";
    }
    REQUIRE_THROWS_AS(load_config_file(garbled.string()), ConfigError);
    std::remove(garbled.string().c_str());
}

TEST_CASE("sweep enumeration is speed-major, then cache pair, then seed",
          "[scenario]") {
    SweepPlan plan;
    plan.speeds = {1, 5};
    plan.cache_pairs = {{1, 1}, {2, 3}};
    plan.seeds = {7, 8};
    auto grid = plan.enumerate();
    REQUIRE(grid.size() == 8);

    auto at = [&](std::size_t i) {
        return std::tuple{grid[i].speed, grid[i].p_cache, grid[i].s_cache,
                          grid[i].seed};
    };
    CHECK(at(0) == std::tuple{1.0, 1, 1, 7ull});
    CHECK(at(1) == std::tuple{1.0, 1, 1, 8ull});
    CHECK(at(2) == std::tuple{1.0, 2, 3, 7ull});
    CHECK(at(3) == std::tuple{1.0, 2, 3, 8ull});
    CHECK(at(4) == std::tuple{5.0, 1, 1, 7ull});
    CHECK(at(7) == std::tuple{5.0, 2, 3, 8ull});
    // everything else inherits the base config
    CHECK(grid[0].nodes == plan.base.nodes);
    CHECK(grid[0].sim_time == plan.base.sim_time);
}

TEST_CASE("a sweep emits one CSV row per run regardless of thread count",
          "[scenario]") {
    SweepPlan plan;
    plan.base.nodes = 10;
    plan.base.flows = 2;
    plan.base.sim_time = 5;
    plan.base.area_x = 300;
    plan.base.area_y = 300;
    plan.speeds = {0, 10};
    plan.cache_pairs = {{2, 4}};
    plan.seeds = {1, 2};

    SweepOutcome serial = run_sweep(plan, 1);
    REQUIRE(serial.ok());
    REQUIRE(serial.results.size() == 4);

    std::size_t lines = 0;
    for (char ch : serial.csv)
        if (ch == '\n') ++lines;
    REQUIRE(lines == 5); // header + 4 rows
    REQUIRE(serial.csv.rfind(csv_header(), 0) == 0);

    SweepOutcome parallel = run_sweep(plan, 4);
    REQUIRE(parallel.ok());
    REQUIRE(parallel.csv == serial.csv); // plan-order assembly, same runs

    // rows carry the labels of their runs, in plan order
    REQUIRE(serial.results[0].label.speed_mps == 0.0);
    REQUIRE(serial.results[0].label.seed == 1);
    REQUIRE(serial.results[3].label.speed_mps == 10.0);
    REQUIRE(serial.results[3].label.seed == 2);
    for (const RunResult& r : serial.results) {
        REQUIRE(r.metrics.conserved());
        REQUIRE(r.metrics.accounting_errors() == 0);
    }
}

TEST_CASE("the same config always produces the same run", "[scenario]") {
    ScenarioConfig cfg;
    cfg.nodes = 15;
    cfg.flows = 3;
    cfg.sim_time = 8;
    cfg.speed = 12;
    cfg.seed = 5;

    RunResult a = run_scenario(cfg);
    RunResult b = run_scenario(cfg);
    REQUIRE(csv_row(a.label, a.metrics) == csv_row(b.label, b.metrics));
    REQUIRE(a.events_fired == b.events_fired);
    REQUIRE(a.metrics.sent() > 0);
    REQUIRE(a.metrics.conserved());
}
