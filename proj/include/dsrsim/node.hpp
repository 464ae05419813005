#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dsrsim/audit.hpp"
#include "dsrsim/channel.hpp"
#include "dsrsim/event_queue.hpp"
#include "dsrsim/metrics.hpp"
#include "dsrsim/packet.hpp"
#include "dsrsim/route.hpp"
#include "dsrsim/route_cache.hpp"

namespace dsrsim {

// Link-layer ack emulation: a unicast frame is attempted up to this many
// times, re-checking geometry, before the link is declared broken.
inline constexpr int kUnicastAttempts = 3;

struct ProtocolConfig {
    int buffer_capacity = 64;
    double buffer_timeout_s = 30;
    int max_retries = 8;              // discovery re-floods after the initial one
    double backoff_base_s = 0.5;      // doubles with every retry
    double gratuitous_interval_s = 1; // per-(src,dst) volunteer-reply rate limit
};

// Everything a node needs from its surroundings. Owned by the simulation (or
// the test fixture) and stable for its whole lifetime: deferred handlers
// capture a pointer to it.
struct SimContext {
    EventQueue& queue;
    Channel& channel;
    MetricsAccumulator& metrics;
    AuditLog& audit;
    ProtocolConfig proto;
};

// One DSR node: originates and forwards source-routed data, floods route
// requests, answers them (as target or from cache), propagates route errors,
// salvages around breaks, and learns routes promiscuously.
class DsrNode {
public:
    DsrNode(NodeId id, const CacheConfig& cache_cfg) : id_(id), cache_(id, cache_cfg) {}

    NodeId id() const { return id_; }
    RouteCache& cache() { return cache_; }
    const RouteCache& cache() const { return cache_; }

    // Application-level send. Counted as sent here, whether or not a route
    // exists yet.
    void originate(SimContext& ctx, int flow_id, std::uint64_t seq, NodeId dst,
                   int payload_size, SimTime t) {
        if (dst == id_)
            throw std::logic_error("originate: destination is the node itself");
        ctx.metrics.on_originated(flow_id, seq);
        DataPacket pkt;
        pkt.flow_id = flow_id;
        pkt.seq = seq;
        pkt.src = id_;
        pkt.dst = dst;
        pkt.payload_size = payload_size;
        pkt.originated_at = t;
        if (ctx.audit.enabled())
            ctx.audit.emit(t, id_, "originate", pkt_tag(pkt) + " dst=" + std::to_string(dst));
        if (auto route = cache_.lookup(dst)) {
            pkt.source_route = *route;
            pkt.hop_index = 0;
            transmit_data(ctx, pkt, t);
        } else {
            buffer_packet(ctx, std::move(pkt), t);
            maybe_start_discovery(ctx, dst, t);
        }
    }

    // Channel delivery sink entry point.
    void on_frame(SimContext& ctx, const Frame& frame, DeliveryKind kind, SimTime t) {
        if (kind == DeliveryKind::Overheard) {
            overhear(ctx, frame, t);
            return;
        }
        if (const auto* d = std::get_if<DataPacket>(&frame.payload))
            handle_data(ctx, *d, t);
        else if (const auto* rq = std::get_if<RouteRequest>(&frame.payload))
            handle_request(ctx, *rq, t);
        else if (const auto* rp = std::get_if<RouteReply>(&frame.payload))
            handle_reply(ctx, *rp, t);
        else if (const auto* re = std::get_if<RouteError>(&frame.payload))
            handle_error(ctx, *re, t);
    }

    // Test introspection.
    std::size_t buffered_count() const { return buffer_.size(); }
    bool discovery_pending(NodeId dst) const { return pending_.count(dst) > 0; }

private:
    // --- data plane ----------------------------------------------------------

    void handle_data(SimContext& ctx, const DataPacket& pkt, SimTime t) {
        const Route& r = pkt.source_route;
        if (pkt.hop_index >= r.length() || r.hops[pkt.hop_index] != id_)
            return; // stray frame; no custody
        if (id_ == pkt.dst) {
            ctx.metrics.on_delivered(pkt.flow_id, pkt.seq, pkt.originated_at, t);
            if (ctx.audit.enabled())
                ctx.audit.emit(t, id_, "deliver", pkt_tag(pkt));
            return;
        }
        transmit_data(ctx, pkt, t);
    }

    // Send a data packet we hold (pkt.hop_index is our position) to the next
    // hop, with link-layer retries; failure runs route maintenance.
    void transmit_data(SimContext& ctx, const DataPacket& pkt, SimTime t) {
        const Route& r = pkt.source_route;
        if (pkt.hop_index + 1 >= r.length() || r.hops[pkt.hop_index] != id_) {
            drop(ctx, pkt, DropCause::BrokenRoute, "drop_malformed", t);
            return;
        }
        NodeId next = r.hops[pkt.hop_index + 1];
        DataPacket wire = pkt;
        wire.hop_index = pkt.hop_index + 1;

        SimContext* cp = &ctx;
        DataPacket held = pkt;
        auto on_fail = [this, cp, held](SimTime ft) { data_tx_failed(*cp, held, ft); };
        auto on_attempt = [this, cp, flow = pkt.flow_id, seq = pkt.seq, next,
                           hop = pkt.hop_index,
                           route = pkt.source_route](const DeliveryOutcome& out) {
            cp->metrics.on_data_tx(out.started_at);
            if (cp->audit.enabled())
                cp->audit.emit(out.started_at, id_, out.unicast_ack ? "data_tx" : "data_tx_fail",
                               "flow=" + std::to_string(flow) + " seq=" + std::to_string(seq) +
                                   " to=" + std::to_string(next) + " hop=" + std::to_string(hop) +
                                   " route=" + route.str());
        };
        send_unicast(ctx, next, Packet{std::move(wire)}, t, 0, std::move(on_fail),
                     std::move(on_attempt));
    }

    // All link-layer attempts for this hop failed: truncate own cache, report
    // the break to the source, then try to salvage.
    void data_tx_failed(SimContext& ctx, DataPacket pkt, SimTime t) {
        NodeId from = id_;
        NodeId to = pkt.source_route.hops[pkt.hop_index + 1];
        cache_.handle_link_break(from, to);
        if (ctx.audit.enabled())
            ctx.audit.emit(t, id_, "link_break",
                           std::to_string(from) + "->" + std::to_string(to));

        if (id_ != pkt.src) {
            std::vector<NodeId> path(pkt.source_route.hops.begin(),
                                     pkt.source_route.hops.begin() + pkt.hop_index + 1);
            std::reverse(path.begin(), path.end()); // [self, ..., src]
            RouteError rerr{from, to, std::move(path), pkt.src};
            if (rerr.path.size() >= 2) {
                NodeId next = rerr.path[1];
                if (ctx.audit.enabled())
                    ctx.audit.emit(t, id_, "rerr_send", std::to_string(from) + "->" +
                                                            std::to_string(to) + " to=" +
                                                            std::to_string(rerr.to));
                send_unicast(ctx, next, Packet{std::move(rerr)}, t, 0,
                             drop_note(ctx, "rerr_lost"));
            }
        }

        if (pkt.salvaged) { // one salvage per packet
            drop(ctx, pkt, DropCause::BrokenRoute, "drop_broken", t);
            return;
        }
        if (auto alt = cache_.lookup(pkt.dst)) {
            Route spliced = pkt.source_route.prefix(pkt.hop_index);
            spliced.hops.insert(spliced.hops.end(), alt->hops.begin() + 1, alt->hops.end());
            if (spliced.loop_free()) {
                pkt.source_route = std::move(spliced);
                pkt.salvaged = true;
                if (ctx.audit.enabled())
                    ctx.audit.emit(t, id_, "salvage",
                                   pkt_tag(pkt) + " route=" + pkt.source_route.str());
                transmit_data(ctx, pkt, t);
                return;
            }
        }
        drop(ctx, pkt, DropCause::BrokenRoute, "drop_broken", t);
    }

    // --- route discovery ------------------------------------------------------

    void maybe_start_discovery(SimContext& ctx, NodeId dst, SimTime t) {
        if (pending_.count(dst)) return;
        send_request(ctx, dst, t, 0);
    }

    void send_request(SimContext& ctx, NodeId dst, SimTime t, int attempts) {
        std::uint32_t rid = next_request_id_++;
        seen_.insert(request_key(id_, rid));
        Pending p;
        p.request_id = rid;
        p.attempts = attempts;
        SimTime delay =
            SimTime::from_seconds(ctx.proto.backoff_base_s *
                                  static_cast<double>(std::uint64_t{1} << attempts));
        SimContext* cp = &ctx;
        p.retry = ctx.queue.schedule(
            t + delay, [this, cp, dst] { retry_discovery(*cp, dst, cp->queue.now()); });
        pending_[dst] = p;

        RouteRequest rreq{rid, id_, dst, {id_}};
        if (ctx.audit.enabled())
            ctx.audit.emit(t, id_, attempts == 0 ? "rreq_send" : "rreq_retry",
                           "id=" + std::to_string(rid) + " target=" + std::to_string(dst) +
                               " attempt=" + std::to_string(attempts));
        broadcast(ctx, Packet{std::move(rreq)}, t);
    }

    void retry_discovery(SimContext& ctx, NodeId dst, SimTime t) {
        auto it = pending_.find(dst);
        if (it == pending_.end()) return; // answered in the meantime
        int attempts = it->second.attempts;
        pending_.erase(it);
        if (attempts >= ctx.proto.max_retries) {
            if (ctx.audit.enabled())
                ctx.audit.emit(t, id_, "rreq_giveup", "target=" + std::to_string(dst));
            give_up(ctx, dst, t);
            return;
        }
        send_request(ctx, dst, t, attempts + 1);
    }

    void handle_request(SimContext& ctx, const RouteRequest& rreq, SimTime t) {
        std::uint64_t key = request_key(rreq.src, rreq.request_id);
        if (seen_.count(key)) return;
        if (std::find(rreq.accumulated.begin(), rreq.accumulated.end(), id_) !=
            rreq.accumulated.end())
            return;
        seen_.insert(key);

        if (id_ == rreq.target) {
            Route route{rreq.accumulated};
            route.hops.push_back(id_);
            if (ctx.audit.enabled())
                ctx.audit.emit(t, id_, "reply_target", "route=" + route.str());
            send_reply(ctx, RouteReply{rreq.request_id, std::move(route), rreq.src}, t);
            return;
        }
        // Cache replay: answer from our own cache when the splice stays
        // loop-free; the route we used counts as used (promotes a secondary).
        if (auto cached = cache_.peek(rreq.target)) {
            Route spliced{rreq.accumulated};
            spliced.hops.insert(spliced.hops.end(), cached->hops.begin(), cached->hops.end());
            if (spliced.loop_free()) {
                cache_.lookup(rreq.target);
                if (ctx.audit.enabled())
                    ctx.audit.emit(t, id_, "reply_cache", "route=" + spliced.str());
                send_reply(ctx, RouteReply{rreq.request_id, std::move(spliced), rreq.src}, t);
                return;
            }
        }
        RouteRequest fwd = rreq;
        fwd.accumulated.push_back(id_);
        broadcast(ctx, Packet{std::move(fwd)}, t);
    }

    // A reply travels toward route.front(); every carrier locates itself in
    // the route and hands the packet to the previous node.
    void send_reply(SimContext& ctx, const RouteReply& reply, SimTime t) {
        std::size_t i = reply.route.index_of(id_);
        if (i == Route::npos || i == 0) return;
        send_unicast(ctx, reply.route.hops[i - 1], Packet{reply}, t, 0,
                     drop_note(ctx, "rrep_lost"));
    }

    void handle_reply(SimContext& ctx, const RouteReply& reply, SimTime t) {
        if (id_ == reply.to) {
            cache_.insert(reply.route, CacheTier::Primary);
            NodeId target = reply.route.back();
            if (ctx.audit.enabled())
                ctx.audit.emit(t, id_, "route_learned", "route=" + reply.route.str());
            if (auto it = pending_.find(target); it != pending_.end()) {
                ctx.queue.cancel(it->second.retry);
                pending_.erase(it);
            }
            flush_buffer(ctx, target, t);
            return;
        }
        std::size_t i = reply.route.index_of(id_);
        if (i == Route::npos || i == 0) return;
        if (i + 2 <= reply.route.length())
            cache_.insert(reply.route.suffix(i), CacheTier::Secondary);
        send_unicast(ctx, reply.route.hops[i - 1], Packet{reply}, t, 0,
                     drop_note(ctx, "rrep_lost"));
    }

    // --- route maintenance ----------------------------------------------------

    void handle_error(SimContext& ctx, const RouteError& rerr, SimTime t) {
        cache_.handle_link_break(rerr.broken_from, rerr.broken_to);
        if (ctx.audit.enabled())
            ctx.audit.emit(t, id_, "rerr_recv",
                           std::to_string(rerr.broken_from) + "->" +
                               std::to_string(rerr.broken_to));
        if (id_ == rerr.to) return;
        auto it = std::find(rerr.path.begin(), rerr.path.end(), id_);
        if (it == rerr.path.end()) return;
        std::size_t i = static_cast<std::size_t>(it - rerr.path.begin());
        if (i + 1 >= rerr.path.size()) return;
        send_unicast(ctx, rerr.path[i + 1], Packet{rerr}, t, 0, drop_note(ctx, "rerr_lost"));
    }

    // --- promiscuous listening --------------------------------------------------

    void overhear(SimContext& ctx, const Frame& frame, SimTime t) {
        if (const auto* d = std::get_if<DataPacket>(&frame.payload)) {
            const Route& r = d->source_route;
            if (d->hop_index == 0 || d->hop_index >= r.length()) return;
            std::size_t h = d->hop_index - 1; // transmitter's position
            learn_from_route(r, h);
            if (id_ != d->src && id_ != d->dst) maybe_gratuitous(ctx, *d, h, t);
        } else if (const auto* rp = std::get_if<RouteReply>(&frame.payload)) {
            std::size_t j = rp->route.index_of(frame.src);
            if (j != Route::npos) learn_from_route(rp->route, j);
        }
        // overheard requests cannot occur (floods are directed broadcasts)
    }

    // Overheard route r, transmitted by the node at position h: keep our own
    // suffix if we are on the route, otherwise the transmitter's tail
    // reachable through the link we just witnessed.
    void learn_from_route(const Route& r, std::size_t h) {
        std::size_t i = r.index_of(id_);
        if (i != Route::npos) {
            if (i + 2 <= r.length())
                cache_.insert(r.suffix(i), CacheTier::Secondary);
        } else {
            Route learned{{id_}};
            learned.hops.insert(learned.hops.end(), r.hops.begin() + h, r.hops.end());
            cache_.insert(learned, CacheTier::Secondary);
        }
    }

    // Volunteer a strictly shorter remainder to the packet's source, at most
    // once per (src,dst) per interval.
    void maybe_gratuitous(SimContext& ctx, const DataPacket& d, std::size_t h, SimTime t) {
        const Route& r = d.source_route;
        std::size_t remaining = r.length() - 1 - h; // hops still ahead of the packet
        auto cached = cache_.peek(d.dst);
        if (!cached || cached->length() >= remaining) return;
        Route spliced = r.prefix(h);
        spliced.hops.insert(spliced.hops.end(), cached->hops.begin(), cached->hops.end());
        if (!spliced.loop_free()) return;

        std::uint64_t key = (static_cast<std::uint64_t>(d.src) << 32) | d.dst;
        auto it = grat_last_.find(key);
        if (it != grat_last_.end() &&
            (t - it->second) < SimTime::from_seconds(ctx.proto.gratuitous_interval_s))
            return;
        grat_last_[key] = t;
        if (ctx.audit.enabled())
            ctx.audit.emit(t, id_, "gratuitous",
                           pkt_tag(d) + " route=" + spliced.str());
        send_reply(ctx, RouteReply{0, std::move(spliced), d.src}, t);
    }

    // --- send buffer -----------------------------------------------------------

    void buffer_packet(SimContext& ctx, DataPacket pkt, SimTime t) {
        if (static_cast<int>(buffer_.size()) >= ctx.proto.buffer_capacity) {
            drop(ctx, pkt, DropCause::BufferOverflow, "drop_overflow", t);
            return;
        }
        std::uint64_t uid = ++buffer_uid_;
        SimContext* cp = &ctx;
        EventHandle timeout = ctx.queue.schedule(
            t + SimTime::from_seconds(ctx.proto.buffer_timeout_s),
            [this, cp, uid] { buffer_timeout(*cp, uid, cp->queue.now()); });
        buffer_.push_back(Buffered{uid, std::move(pkt), timeout});
    }

    void buffer_timeout(SimContext& ctx, std::uint64_t uid, SimTime t) {
        for (auto it = buffer_.begin(); it != buffer_.end(); ++it) {
            if (it->uid != uid) continue;
            DataPacket pkt = std::move(it->pkt);
            buffer_.erase(it);
            drop(ctx, pkt, DropCause::BufferOverflow, "drop_buffer_timeout", t);
            return;
        }
    }

    // A usable route to dst appeared: send everything waiting for it, oldest
    // first (transmissions serialize on the channel, preserving the order).
    void flush_buffer(SimContext& ctx, NodeId dst, SimTime t) {
        std::vector<DataPacket> ready;
        for (auto it = buffer_.begin(); it != buffer_.end();) {
            if (it->pkt.dst == dst) {
                ctx.queue.cancel(it->timeout);
                ready.push_back(std::move(it->pkt));
                it = buffer_.erase(it);
            } else {
                ++it;
            }
        }
        for (DataPacket& pkt : ready) {
            if (auto route = cache_.lookup(dst)) {
                pkt.source_route = *route;
                pkt.hop_index = 0;
                transmit_data(ctx, pkt, t);
            } else {
                drop(ctx, pkt, DropCause::NoRoute, "drop_noroute", t);
            }
        }
    }

    void give_up(SimContext& ctx, NodeId dst, SimTime t) {
        for (auto it = buffer_.begin(); it != buffer_.end();) {
            if (it->pkt.dst == dst) {
                ctx.queue.cancel(it->timeout);
                DataPacket pkt = std::move(it->pkt);
                it = buffer_.erase(it);
                drop(ctx, pkt, DropCause::NoRoute, "drop_noroute", t);
            } else {
                ++it;
            }
        }
    }

    // --- plumbing ---------------------------------------------------------------

    // Unicast with geometry-checked retries; on_attempt sees every attempt,
    // on_fail runs once after the last one fails (at its completion time).
    void send_unicast(SimContext& ctx, NodeId next, Packet payload, SimTime t, int attempt,
                      std::function<void(SimTime)> on_fail,
                      std::function<void(const DeliveryOutcome&)> on_attempt = {}) {
        Frame frame{id_, next, wire_size(payload), payload};
        DeliveryOutcome out = ctx.channel.transmit(id_, std::move(frame), t);
        if (on_attempt) on_attempt(out);
        if (out.unicast_ack) return;
        SimContext* cp = &ctx;
        if (attempt + 1 < kUnicastAttempts) {
            ctx.queue.schedule(out.completes_at,
                               [this, cp, next, payload = std::move(payload), attempt,
                                on_fail = std::move(on_fail),
                                on_attempt = std::move(on_attempt)]() mutable {
                                   send_unicast(*cp, next, std::move(payload),
                                                cp->queue.now(), attempt + 1,
                                                std::move(on_fail), std::move(on_attempt));
                               });
        } else if (on_fail) {
            ctx.queue.schedule(out.completes_at, [cp, on_fail = std::move(on_fail)] {
                on_fail(cp->queue.now());
            });
        }
    }

    void broadcast(SimContext& ctx, Packet payload, SimTime t) {
        Frame frame{id_, BROADCAST, wire_size(payload), std::move(payload)};
        ctx.channel.transmit(id_, std::move(frame), t);
    }

    void drop(SimContext& ctx, const DataPacket& pkt, DropCause cause, const char* kind,
              SimTime t) {
        ctx.metrics.on_dropped(pkt.flow_id, pkt.seq, cause);
        if (ctx.audit.enabled()) ctx.audit.emit(t, id_, kind, pkt_tag(pkt));
    }

    // on_fail for control packets nobody re-sends: note it and move on.
    std::function<void(SimTime)> drop_note(SimContext& ctx, const char* kind) {
        SimContext* cp = &ctx;
        return [this, cp, kind](SimTime ft) {
            if (cp->audit.enabled()) cp->audit.emit(ft, id_, kind, "");
        };
    }

    static std::uint64_t request_key(NodeId src, std::uint32_t rid) {
        return (static_cast<std::uint64_t>(src) << 32) | rid;
    }

    static std::string pkt_tag(const DataPacket& pkt) {
        return "flow=" + std::to_string(pkt.flow_id) + " seq=" + std::to_string(pkt.seq);
    }

    struct Pending {
        std::uint32_t request_id = 0;
        int attempts = 0;
        EventHandle retry;
    };
    struct Buffered {
        std::uint64_t uid = 0;
        DataPacket pkt;
        EventHandle timeout;
    };

    NodeId id_;
    RouteCache cache_;
    std::uint32_t next_request_id_ = 1;
    std::uint64_t buffer_uid_ = 0;
    std::unordered_set<std::uint64_t> seen_;          // (src, request_id) pairs
    std::unordered_map<NodeId, Pending> pending_;     // per-destination discovery
    std::deque<Buffered> buffer_;                     // packets awaiting a route
    std::unordered_map<std::uint64_t, SimTime> grat_last_;
};

} // namespace dsrsim
