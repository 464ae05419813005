#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dsrsim/channel.hpp"
#include "dsrsim/errors.hpp"
#include "dsrsim/mobility.hpp"
#include "dsrsim/node.hpp"
#include "dsrsim/route_cache.hpp"
#include "dsrsim/workload.hpp"

namespace dsrsim {

// Single source of truth for a run. Defaults are the reference setup: 50
// nodes in 600x300 m, 100 m radio range at 2 Mb/s, random waypoint with 10 s
// pauses, 64-byte CBR messages at 2 kb/s, caches at (p=30, s=64), 1000 s.
struct ScenarioConfig {
    int nodes = 50;
    double area_x = 600;
    double area_y = 300;
    double speed = 10;          // m/s nominal; drawn +/- speed_margin, 0 = static
    double speed_margin = 1;
    double pause = 10;          // s at each waypoint
    double tx_range = 100;      // m, inclusive
    double bandwidth = 2e6;     // bit/s
    int p_cache = 30;
    int s_cache = 64;
    int flows = 10;
    int packet_size = 64;       // bytes
    double rate = 2000;         // bit/s per flow
    double start_window = 10;   // s over which flows start
    int buffer_capacity = 64;
    double buffer_timeout = 30; // s
    int max_retries = 8;
    double backoff_base = 0.5;  // s
    double sim_time = 1000;     // s
    std::uint64_t seed = 1;

    MobilityConfig mobility() const {
        return MobilityConfig{area_x, area_y, nodes, speed, speed_margin, pause, sim_time};
    }
    ChannelConfig channel() const { return ChannelConfig{tx_range, bandwidth}; }
    CacheConfig cache() const { return CacheConfig{p_cache, s_cache}; }
    WorkloadConfig workload() const {
        return WorkloadConfig{flows, packet_size, rate, start_window, sim_time};
    }
    ProtocolConfig protocol() const {
        return ProtocolConfig{buffer_capacity, buffer_timeout, max_retries, backoff_base, 1.0};
    }

    void validate() const {
        auto bad = [](const std::string& key, const std::string& why) {
            throw ConfigError(key + ": " + why);
        };
        if (nodes < 1) bad("nodes", "must be >= 1");
        if (area_x <= 0) bad("area_x", "must be > 0");
        if (area_y <= 0) bad("area_y", "must be > 0");
        if (speed < 0) bad("speed", "must be >= 0");
        if (speed_margin < 0) bad("speed_margin", "must be >= 0");
        if (pause < 0) bad("pause", "must be >= 0");
        if (tx_range <= 0) bad("tx_range", "must be > 0");
        if (bandwidth <= 0) bad("bandwidth", "must be > 0");
        if (p_cache < 1) bad("p_cache", "capacity must be >= 1");
        if (s_cache < 1) bad("s_cache", "capacity must be >= 1");
        if (flows < 0) bad("flows", "must be >= 0");
        if (flows > 0 && nodes < 2) bad("flows", "requires at least 2 nodes");
        if (flows > 0 &&
            static_cast<std::uint64_t>(flows) >
                static_cast<std::uint64_t>(nodes) * (nodes - 1))
            bad("flows", "exceeds the number of distinct ordered node pairs");
        if (packet_size < 1) bad("packet_size", "must be >= 1");
        if (rate <= 0) bad("rate", "must be > 0");
        if (start_window < 0) bad("start_window", "must be >= 0");
        if (buffer_capacity < 1) bad("buffer_capacity", "must be >= 1");
        if (buffer_timeout <= 0) bad("buffer_timeout", "must be > 0");
        if (max_retries < 0) bad("max_retries", "must be >= 0");
        if (backoff_base <= 0) bad("backoff_base", "must be > 0");
        if (sim_time <= 0) bad("sim_time", "must be > 0");
    }
};

// Flat JSON object, same keys as the struct; unknown keys are an error so a
// typo can never silently fall back to a default.
inline void apply_json(ScenarioConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("config root must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "nodes") cfg.nodes = value.get<int>();
            else if (key == "area_x") cfg.area_x = value.get<double>();
            else if (key == "area_y") cfg.area_y = value.get<double>();
            else if (key == "speed") cfg.speed = value.get<double>();
            else if (key == "speed_margin") cfg.speed_margin = value.get<double>();
            else if (key == "pause") cfg.pause = value.get<double>();
            else if (key == "tx_range") cfg.tx_range = value.get<double>();
            else if (key == "bandwidth") cfg.bandwidth = value.get<double>();
            else if (key == "p_cache") cfg.p_cache = value.get<int>();
            else if (key == "s_cache") cfg.s_cache = value.get<int>();
            else if (key == "flows") cfg.flows = value.get<int>();
            else if (key == "packet_size") cfg.packet_size = value.get<int>();
            else if (key == "rate") cfg.rate = value.get<double>();
            else if (key == "start_window") cfg.start_window = value.get<double>();
            else if (key == "buffer_capacity") cfg.buffer_capacity = value.get<int>();
            else if (key == "buffer_timeout") cfg.buffer_timeout = value.get<double>();
            else if (key == "max_retries") cfg.max_retries = value.get<int>();
            else if (key == "backoff_base") cfg.backoff_base = value.get<double>();
            else if (key == "sim_time") cfg.sim_time = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else throw ConfigError("unknown config key: " + key);
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(key + ": wrong value type");
        }
    }
}

inline ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    ScenarioConfig cfg;
    apply_json(cfg, j);
    return cfg;
}

// Fully resolved config as JSON, keys in declaration order; echoing this is
// enough to re-run the scenario exactly.
inline std::string echo_config(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["nodes"] = c.nodes;
    j["area_x"] = c.area_x;
    j["area_y"] = c.area_y;
    j["speed"] = c.speed;
    j["speed_margin"] = c.speed_margin;
    j["pause"] = c.pause;
    j["tx_range"] = c.tx_range;
    j["bandwidth"] = c.bandwidth;
    j["p_cache"] = c.p_cache;
    j["s_cache"] = c.s_cache;
    j["flows"] = c.flows;
    j["packet_size"] = c.packet_size;
    j["rate"] = c.rate;
    j["start_window"] = c.start_window;
    j["buffer_capacity"] = c.buffer_capacity;
    j["buffer_timeout"] = c.buffer_timeout;
    j["max_retries"] = c.max_retries;
    j["backoff_base"] = c.backoff_base;
    j["sim_time"] = c.sim_time;
    j["seed"] = c.seed;
    return j.dump(2);
}

} // namespace dsrsim
