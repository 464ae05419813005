#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "dsrsim/dsrsim.hpp"

using namespace dsrsim;

TEST_CASE("the nominal period for 64-byte messages at 2 kb/s is 0.256 s",
          "[workload]") {
    WorkloadConfig cfg;
    cfg.packet_size = 64;
    cfg.rate_bps = 2000;
    REQUIRE(cfg.period_s() == 0.256);
    cfg.packet_size = 128;
    REQUIRE(cfg.period_s() == 0.512);
}

TEST_CASE("flows get distinct ordered endpoint pairs", "[workload]") {
    WorkloadConfig cfg;
    cfg.flow_count = 40;
    RngStream rng(1, "traffic");
    auto flows = generate_flows(cfg, 10, rng);
    REQUIRE(flows.size() == 40);
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const Flow& f : flows) {
        REQUIRE(f.src != f.dst);
        REQUIRE(f.src < 10);
        REQUIRE(f.dst < 10);
        REQUIRE(pairs.insert({f.src, f.dst}).second); // no repeats
    }
    for (std::size_t i = 0; i < flows.size(); ++i)
        REQUIRE(flows[i].flow_id == static_cast<int>(i));
}

TEST_CASE("start times fall inside the start window", "[workload]") {
    WorkloadConfig cfg;
    cfg.flow_count = 30;
    cfg.start_window_s = 10;
    RngStream rng(2, "traffic");
    for (const Flow& f : generate_flows(cfg, 20, rng)) {
        REQUIRE(f.start_at.seconds() >= 0.0);
        REQUIRE(f.start_at.seconds() < 10.0);
    }
}

TEST_CASE("asking for more flows than ordered pairs is a config error",
          "[workload]") {
    WorkloadConfig cfg;
    cfg.flow_count = 3;
    RngStream rng(3, "traffic");
    REQUIRE_THROWS_AS(generate_flows(cfg, 2, rng), ConfigError); // 2 nodes: 2 pairs
    cfg.flow_count = 2;
    RngStream rng2(3, "traffic");
    REQUIRE_NOTHROW(generate_flows(cfg, 2, rng2));
}

TEST_CASE("degenerate workload parameters are rejected", "[workload]") {
    RngStream rng(4, "traffic");
    WorkloadConfig cfg;
    cfg.flow_count = -1;
    REQUIRE_THROWS_AS(generate_flows(cfg, 10, rng), ConfigError);
    cfg = {};
    cfg.packet_size = 0;
    REQUIRE_THROWS_AS(generate_flows(cfg, 10, rng), ConfigError);
    cfg = {};
    cfg.rate_bps = 0;
    REQUIRE_THROWS_AS(generate_flows(cfg, 10, rng), ConfigError);
    cfg = {};
    cfg.start_window_s = -1;
    REQUIRE_THROWS_AS(generate_flows(cfg, 10, rng), ConfigError);
    cfg = {};
    cfg.flow_count = 1;
    REQUIRE_THROWS_AS(generate_flows(cfg, 1, rng), ConfigError); // needs 2 nodes
}

TEST_CASE("departure jitter stays within ten percent of the period", "[workload]") {
    WorkloadConfig cfg; // 0.256 s nominal
    RngStream rng(5, "cbr");
    double sum = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        SimTime gap = next_departure(cfg, 0_us, rng);
        REQUIRE(gap.seconds() >= 0.256 * 0.9 - 1e-9);
        REQUIRE(gap.seconds() < 0.256 * 1.1 + 1e-9);
        sum += gap.seconds();
    }
    // uniform jitter is mean-preserving; 1e4 draws pin the mean within 1%
    REQUIRE(sum / n == Catch::Approx(0.256).epsilon(0.01));
}

TEST_CASE("generation replays under the same stream", "[workload]") {
    WorkloadConfig cfg;
    cfg.flow_count = 10;
    RngStream a(6, "traffic");
    RngStream b(6, "traffic");
    auto fa = generate_flows(cfg, 50, a);
    auto fb = generate_flows(cfg, 50, b);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        REQUIRE(fa[i].src == fb[i].src);
        REQUIRE(fa[i].dst == fb[i].dst);
        REQUIRE(fa[i].start_at == fb[i].start_at);
    }
}

TEST_CASE("flow export is line-oriented with a header", "[workload]") {
    WorkloadConfig cfg;
    cfg.flow_count = 3;
    RngStream rng(7, "traffic");
    auto flows = generate_flows(cfg, 10, rng);
    std::ostringstream os;
    export_flows(flows, os);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "flow_id src dst start_s");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    REQUIRE(rows == 3);
}
