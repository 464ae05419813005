#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "dsrsim/event_queue.hpp"
#include "dsrsim/mobility.hpp"
#include "dsrsim/packet.hpp"

namespace dsrsim {

constexpr NodeId BROADCAST = 0xffffffffu;

struct ChannelConfig {
    double tx_range = 100;        // meters, inclusive boundary
    double bandwidth_bps = 2e6;
};

struct Frame {
    NodeId src = 0;               // current transmitter, not the packet origin
    NodeId dst = 0;               // next hop, or BROADCAST for request floods
    int size = 0;                 // bytes on the air
    Packet payload;
};

enum class DeliveryKind { Directed, Overheard };

struct DeliveryOutcome {
    std::vector<NodeId> delivered_to; // everyone in range at transmit time
    bool unicast_ack = false;         // dst was in range (always true for broadcast)
    SimTime started_at;               // after any queueing behind earlier frames
    SimTime completes_at;             // started_at + size*8/bandwidth
};

// Idealized shared radio: no collisions, no propagation delay, no fading.
// Connectivity is purely geometric; every node within range of the
// transmitter receives exactly one copy, the addressed one as a directed
// delivery and the rest as overheard copies. Frames from one sender
// serialize behind each other.
class Channel {
public:
    using DeliverFn =
        std::function<void(NodeId receiver, const Frame&, DeliveryKind, SimTime)>;

    Channel(ChannelConfig cfg, const MobilityTrace& trace, EventQueue& queue)
        : cfg_(cfg), trace_(&trace), queue_(&queue),
          busy_until_(trace.node_count()) {}

    void set_delivery_sink(DeliverFn fn) { sink_ = std::move(fn); }

    bool link_up(NodeId a, NodeId b, SimTime t) const {
        return distance(pos(a, t), pos(b, t)) <= cfg_.tx_range;
    }

    DeliveryOutcome transmit(NodeId sender, Frame frame, SimTime t) {
        DeliveryOutcome out;
        out.started_at = std::max(t, busy_until_[sender]);
        out.completes_at = out.started_at + tx_time(frame.size);
        busy_until_[sender] = out.completes_at;

        Position sp = pos(sender, out.started_at);
        for (NodeId n = 0; n < static_cast<NodeId>(trace_->node_count()); ++n) {
            if (n == sender) continue;
            if (distance(sp, pos(n, out.started_at)) <= cfg_.tx_range)
                out.delivered_to.push_back(n);
        }
        bool broadcast = frame.dst == BROADCAST;
        out.unicast_ack = broadcast ||
                          std::find(out.delivered_to.begin(), out.delivered_to.end(),
                                    frame.dst) != out.delivered_to.end();

        auto shared = std::make_shared<const Frame>(std::move(frame));
        for (NodeId n : out.delivered_to) {
            DeliveryKind kind = (broadcast || n == shared->dst)
                                    ? DeliveryKind::Directed
                                    : DeliveryKind::Overheard;
            queue_->schedule(out.completes_at, [this, n, shared, kind] {
                sink_(n, *shared, kind, queue_->now());
            });
        }
        return out;
    }

    SimTime tx_time(int size_bytes) const {
        auto bw = static_cast<std::int64_t>(cfg_.bandwidth_bps);
        std::int64_t bits = static_cast<std::int64_t>(size_bytes) * 8;
        return SimTime::from_us((bits * 1000000 + bw - 1) / bw);
    }

    const ChannelConfig& config() const { return cfg_; }

private:
    Position pos(NodeId n, SimTime t) const {
        // transmissions queued past the end of the trace see final positions
        SimTime cap = SimTime::from_seconds(trace_->duration());
        return trace_->position_at(n, std::min(t, cap));
    }

    ChannelConfig cfg_;
    const MobilityTrace* trace_;
    EventQueue* queue_;
    std::vector<SimTime> busy_until_;
    DeliverFn sink_;
};

} // namespace dsrsim
