#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "dsrsim/errors.hpp"
#include "dsrsim/mobility.hpp"
#include "dsrsim/rng.hpp"
#include "dsrsim/sim_time.hpp"

namespace dsrsim {

struct WorkloadConfig {
    int flow_count = 10;
    int packet_size = 64;        // bytes of payload per message
    double rate_bps = 2000;      // constant bit rate per flow
    double start_window_s = 10;  // flow start times drawn uniformly in [0, window)
    double duration_s = 1000;    // flows stop originating at this time

    // Nominal inter-departure interval, before jitter.
    double period_s() const {
        return static_cast<double>(packet_size) * 8.0 / rate_bps;
    }
};

struct Flow {
    int flow_id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    SimTime start_at;
};

// Draws flow endpoints as distinct ordered (src, dst) pairs, src != dst.
// Rejection sampling keeps the selection insensitive to node_count's
// representation, and a fixed draw order keeps it reproducible.
inline std::vector<Flow> generate_flows(const WorkloadConfig& cfg, int node_count,
                                        RngStream& rng) {
    if (cfg.flow_count < 0)
        throw ConfigError("flows must be >= 0");
    if (node_count < 2 && cfg.flow_count > 0)
        throw ConfigError("flows requires at least 2 nodes");
    if (cfg.packet_size < 1)
        throw ConfigError("packet_size must be >= 1");
    if (cfg.rate_bps <= 0)
        throw ConfigError("rate must be > 0");
    if (cfg.start_window_s < 0)
        throw ConfigError("start_window must be >= 0");
    const std::uint64_t max_pairs =
        static_cast<std::uint64_t>(node_count) * (node_count - 1);
    if (static_cast<std::uint64_t>(cfg.flow_count) > max_pairs)
        throw ConfigError("flows exceeds the number of distinct ordered node pairs");

    std::vector<Flow> flows;
    std::vector<std::uint64_t> taken;
    flows.reserve(cfg.flow_count);
    for (int i = 0; i < cfg.flow_count; ++i) {
        NodeId src, dst;
        std::uint64_t pair;
        do {
            src = static_cast<NodeId>(rng.uniform_int(node_count));
            dst = static_cast<NodeId>(rng.uniform_int(node_count));
            pair = (static_cast<std::uint64_t>(src) << 32) | dst;
        } while (src == dst ||
                 std::find(taken.begin(), taken.end(), pair) != taken.end());
        taken.push_back(pair);
        Flow f;
        f.flow_id = i;
        f.src = src;
        f.dst = dst;
        f.start_at = SimTime::from_seconds(rng.uniform(0.0, cfg.start_window_s));
        flows.push_back(f);
    }
    return flows;
}

// Next departure after `now`: the nominal period scaled by a multiplicative
// jitter factor drawn uniformly from [0.9, 1.1).
inline SimTime next_departure(const WorkloadConfig& cfg, SimTime now, RngStream& rng) {
    const double jitter = rng.uniform(0.9, 1.1);
    return now + SimTime::from_seconds(cfg.period_s() * jitter);
}

inline void export_flows(const std::vector<Flow>& flows, std::ostream& os) {
    os << "flow_id src dst start_s\n";
    for (const auto& f : flows)
        os << f.flow_id << ' ' << f.src << ' ' << f.dst << ' ' << f.start_at.str()
           << '\n';
}

} // namespace dsrsim
