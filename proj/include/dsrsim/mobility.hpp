#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsrsim/geometry.hpp"
#include "dsrsim/rng.hpp"
#include "dsrsim/sim_time.hpp"

namespace dsrsim {

using NodeId = std::uint32_t;

struct MobilityConfig {
    double area_x = 600;
    double area_y = 300;
    int node_count = 50;
    double nominal_speed = 10; // m/s; 0 means fully static nodes
    double speed_margin = 1;   // uniform draw in [nominal-margin, nominal+margin]
    double pause = 10;         // seconds spent at each waypoint
    double duration = 1000;    // seconds covered by the trace
};

// One straight-line trip plus the pause at its endpoint. Motion happens in
// [start_t, arrive_t]; the node sits at `to` during [arrive_t, end_t].
struct Leg {
    double start_t = 0;
    double arrive_t = 0;
    double end_t = 0;
    Position from;
    Position to;
    double speed = 0;
};

// Random-waypoint schedule for every node; answers "where is node i at time t"
// by linear interpolation. Pure after construction.
class MobilityTrace {
public:
    MobilityTrace() = default;

    static MobilityTrace generate(const MobilityConfig& cfg, RngStream rng) {
        MobilityTrace trace;
        trace.duration_ = cfg.duration;
        trace.tracks_.resize(cfg.node_count);
        for (int n = 0; n < cfg.node_count; ++n) {
            RngStream node_rng = rng.substream(static_cast<std::uint64_t>(n));
            trace.tracks_[n] = make_track(cfg, node_rng);
        }
        return trace;
    }

    // Trace with every node pinned to a given position; used for frozen
    // topologies in tests and oracles.
    static MobilityTrace fixed(const std::vector<Position>& positions, double duration) {
        MobilityTrace trace;
        trace.duration_ = duration;
        trace.tracks_.reserve(positions.size());
        for (const Position& p : positions)
            trace.tracks_.push_back({Leg{0, 0, duration, p, p, 0}});
        return trace;
    }

    int node_count() const { return static_cast<int>(tracks_.size()); }
    double duration() const { return duration_; }

    Position position_at(NodeId node, SimTime t) const {
        double ts = t.seconds();
        if (ts < 0 || ts > duration_)
            throw std::out_of_range("position_at: t=" + t.str() + " outside trace");
        const auto& legs = tracks_[node];
        // last leg whose start_t <= ts
        auto it = std::upper_bound(legs.begin(), legs.end(), ts,
                                   [](double v, const Leg& l) { return v < l.start_t; });
        const Leg& leg = it == legs.begin() ? legs.front() : *std::prev(it);
        if (ts >= leg.arrive_t)
            return leg.to;
        double travel = leg.arrive_t - leg.start_t;
        double f = travel > 0 ? (ts - leg.start_t) / travel : 1.0;
        return {leg.from.x + f * (leg.to.x - leg.from.x),
                leg.from.y + f * (leg.to.y - leg.from.y)};
    }

    const std::vector<Leg>& legs(NodeId node) const { return tracks_[node]; }

    // One line per leg: `node t_start x0 y0 x1 y1 speed`.
    void export_legs(std::ostream& os) const {
        for (NodeId n = 0; n < tracks_.size(); ++n)
            for (const Leg& l : tracks_[n])
                os << n << ' ' << fmt(l.start_t) << ' ' << fmt(l.from.x) << ' '
                   << fmt(l.from.y) << ' ' << fmt(l.to.x) << ' ' << fmt(l.to.y)
                   << ' ' << fmt(l.speed) << '\n';
    }

private:
    static std::vector<Leg> make_track(const MobilityConfig& cfg, RngStream& rng) {
        std::vector<Leg> legs;
        Position pos{rng.uniform(0, cfg.area_x), rng.uniform(0, cfg.area_y)};
        if (cfg.nominal_speed <= 0) {
            legs.push_back(Leg{0, 0, cfg.duration, pos, pos, 0});
            return legs;
        }
        // "0 +/- 1" would permit non-positive speeds, so the draw interval is
        // clamped below at 0.1 m/s.
        double lo = std::max(0.1, cfg.nominal_speed - cfg.speed_margin);
        double hi = cfg.nominal_speed + cfg.speed_margin;
        double t = 0;
        while (t < cfg.duration) {
            Position dest{rng.uniform(0, cfg.area_x), rng.uniform(0, cfg.area_y)};
            double speed = rng.uniform(lo, hi);
            double travel = distance(pos, dest) / speed;
            legs.push_back(Leg{t, t + travel, t + travel + cfg.pause, pos, dest, speed});
            t = legs.back().end_t;
            pos = dest;
        }
        return legs;
    }

    static std::string fmt(double v) {
        char buf[32];
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    std::vector<std::vector<Leg>> tracks_;
    double duration_ = 0;
};

} // namespace dsrsim
