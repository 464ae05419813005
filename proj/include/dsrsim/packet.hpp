#pragma once

#include <cstdint>
#include <variant>

#include "dsrsim/route.hpp"
#include "dsrsim/sim_time.hpp"

namespace dsrsim {

// Application payload with its source-route header. hop_index is the position
// of the node currently responsible for the packet; a frame in flight carries
// the receiver's index.
struct DataPacket {
    int flow_id = 0;
    std::uint64_t seq = 0;
    NodeId src = 0;
    NodeId dst = 0;
    Route source_route;
    std::size_t hop_index = 0;
    int payload_size = 64;
    SimTime originated_at;
    bool salvaged = false;
};

// Flooded discovery probe; accumulated begins with src and stays loop-free.
struct RouteRequest {
    std::uint32_t request_id = 0;
    NodeId src = 0;
    NodeId target = 0;
    std::vector<NodeId> accumulated;
};

// Travels from the replier back to `to` (== route.front()) hop by hop; each
// forwarder locates itself in `route` and hands the reply to the previous
// node, so no separate reverse path is carried.
struct RouteReply {
    std::uint32_t request_id = 0;
    Route route;
    NodeId to = 0;
};

// Reports the broken link to `to` (== path.back()); `path` is the reverse
// source route the error follows, starting at the detecting node.
struct RouteError {
    NodeId broken_from = 0;
    NodeId broken_to = 0;
    std::vector<NodeId> path;
    NodeId to = 0;
};

using Packet = std::variant<DataPacket, RouteRequest, RouteReply, RouteError>;

// Data frames: payload plus 4 bytes per hop of source route; control frames:
// 16 bytes plus 4 per listed node (an error lists the broken pair too).
inline int wire_size(const Packet& p) {
    struct Sizer {
        int operator()(const DataPacket& d) const {
            return d.payload_size + 4 * static_cast<int>(d.source_route.length());
        }
        int operator()(const RouteRequest& r) const {
            return 16 + 4 * static_cast<int>(r.accumulated.size());
        }
        int operator()(const RouteReply& r) const {
            return 16 + 4 * static_cast<int>(r.route.length());
        }
        int operator()(const RouteError& r) const {
            return 16 + 4 * static_cast<int>(2 + r.path.size());
        }
    };
    return std::visit(Sizer{}, p);
}

} // namespace dsrsim
