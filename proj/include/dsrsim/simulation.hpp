#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dsrsim/audit.hpp"
#include "dsrsim/channel.hpp"
#include "dsrsim/event_queue.hpp"
#include "dsrsim/metrics.hpp"
#include "dsrsim/mobility.hpp"
#include "dsrsim/node.hpp"
#include "dsrsim/scenario.hpp"
#include "dsrsim/workload.hpp"

namespace dsrsim {

struct RunResult {
    RunLabel label;
    MetricsAccumulator metrics;
    std::uint64_t events_fired = 0;
};

// Wires one scenario together: mobility trace, channel, nodes, CBR sources.
// Three independent random streams (mobility, endpoint selection, departure
// jitter) hang off the run seed, so changing e.g. the cache sizes can never
// shift anything else.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg, AuditLog audit = {})
        : Simulation(cfg,
                     MobilityTrace::generate(validated(cfg).mobility(),
                                             RngStream(cfg.seed, "mobility")),
                     std::move(audit)) {}

    // Same wiring on a caller-supplied trace (frozen topologies in tests).
    Simulation(const ScenarioConfig& cfg, MobilityTrace trace, AuditLog audit = {})
        : cfg_(validated(cfg)),
          trace_(std::move(trace)),
          audit_(std::move(audit)),
          channel_(cfg.channel(), trace_, queue_),
          ctx_{queue_, channel_, metrics_, audit_, cfg.protocol()},
          end_(SimTime::from_seconds(cfg.sim_time)) {
        if (trace_.node_count() != cfg_.nodes)
            throw ConfigError("nodes: trace covers a different node count");
        nodes_.reserve(cfg_.nodes);
        for (int i = 0; i < cfg_.nodes; ++i)
            nodes_.emplace_back(static_cast<NodeId>(i), cfg_.cache());
        channel_.set_delivery_sink(
            [this](NodeId receiver, const Frame& f, DeliveryKind kind, SimTime t) {
                nodes_[receiver].on_frame(ctx_, f, kind, t);
            });

        RngStream endpoint_rng(cfg_.seed, "traffic");
        flows_ = generate_flows(cfg_.workload(), cfg_.nodes, endpoint_rng);
        seqs_.assign(flows_.size(), 0);
        for (const Flow& f : flows_) {
            jitter_.push_back(RngStream(cfg_.seed, "cbr", static_cast<std::uint64_t>(f.flow_id)));
            metrics_.ensure_flow(f.flow_id);
            if (f.start_at < end_)
                schedule_departure(f.flow_id, f.start_at);
        }
    }

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    RunResult run() {
        RunSummary s = queue_.run_until(end_);
        metrics_.finalize(cfg_.sim_time);
        return RunResult{label(), metrics_, s.events_fired};
    }

    // Stepwise driving and direct node access for tests.
    void run_until(SimTime t) { queue_.run_until(t); }
    void finalize() { metrics_.finalize(cfg_.sim_time); }
    DsrNode& node(NodeId id) { return nodes_[id]; }
    SimContext& ctx() { return ctx_; }
    EventQueue& queue() { return queue_; }
    Channel& channel() { return channel_; }
    MetricsAccumulator& metrics() { return metrics_; }
    const std::vector<Flow>& flows() const { return flows_; }
    const MobilityTrace& trace() const { return trace_; }

    RunLabel label() const {
        return RunLabel{cfg_.speed, cfg_.p_cache, cfg_.s_cache, cfg_.seed, cfg_.flows};
    }

private:
    static const ScenarioConfig& validated(const ScenarioConfig& cfg) {
        cfg.validate();
        return cfg;
    }

    void schedule_departure(int flow_id, SimTime at) {
        queue_.schedule(at, [this, flow_id] { departure(flow_id); });
    }

    void departure(int flow_id) {
        const Flow& f = flows_[flow_id];
        SimTime now = queue_.now();
        nodes_[f.src].originate(ctx_, f.flow_id, seqs_[flow_id]++, f.dst,
                                cfg_.packet_size, now);
        SimTime next = next_departure(cfg_.workload(), now, jitter_[flow_id]);
        if (next < end_)
            schedule_departure(flow_id, next);
    }

    ScenarioConfig cfg_;
    EventQueue queue_;
    MetricsAccumulator metrics_;
    MobilityTrace trace_;
    AuditLog audit_;
    Channel channel_;
    SimContext ctx_;
    std::vector<DsrNode> nodes_;
    std::vector<Flow> flows_;
    std::vector<RngStream> jitter_;
    std::vector<std::uint64_t> seqs_;
    SimTime end_;
};

inline RunResult run_scenario(const ScenarioConfig& cfg, AuditLog audit = {}) {
    Simulation sim(cfg, std::move(audit));
    return sim.run();
}

} // namespace dsrsim
