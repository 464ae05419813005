#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "dsrsim/sim_time.hpp"

namespace dsrsim {

enum class DropCause { NoRoute, BufferOverflow, BrokenRoute };

struct FlowStats {
    std::uint64_t sent = 0;       // packets handed to the routing layer
    std::uint64_t delivered = 0;
    std::uint64_t drops_noroute = 0;
    std::uint64_t drops_buffer = 0;
    std::uint64_t drops_broken = 0;
    std::uint64_t in_flight_at_end = 0; // measured from live-packet tracking

    std::uint64_t drops() const { return drops_noroute + drops_buffer + drops_broken; }
    bool conserved() const {
        return sent == delivered + drops() + in_flight_at_end;
    }
};

// Per-run counters and timestamps behind the three headline metrics. Every
// data packet is tracked from origination to exactly one terminal state
// (delivered, dropped, or still in flight at the end), so the conservation
// identity is checked against real packet identities rather than assumed.
class MetricsAccumulator {
public:
    void ensure_flow(int flow_id) {
        if (flow_id >= static_cast<int>(flows_.size()))
            flows_.resize(flow_id + 1);
    }

    void on_originated(int flow, std::uint64_t seq) {
        ensure_flow(flow);
        flows_[flow].sent += 1;
        if (!live_.insert(key(flow, seq)).second)
            ++accounting_errors_;
    }

    void on_data_tx(SimTime t) {
        if (!first_tx_ || t < *first_tx_) first_tx_ = t;
    }

    void on_delivered(int flow, std::uint64_t seq, SimTime originated_at, SimTime at) {
        if (!retire(flow, seq)) return;
        flows_[flow].delivered += 1;
        delay_sum_us_ += (at - originated_at).us();
        ++delay_count_;
        if (!first_arrival_ || at < *first_arrival_) first_arrival_ = at;
    }

    void on_dropped(int flow, std::uint64_t seq, DropCause cause) {
        if (!retire(flow, seq)) return;
        switch (cause) {
            case DropCause::NoRoute: flows_[flow].drops_noroute += 1; break;
            case DropCause::BufferOverflow: flows_[flow].drops_buffer += 1; break;
            case DropCause::BrokenRoute: flows_[flow].drops_broken += 1; break;
        }
    }

    void finalize(double sim_duration_s) {
        sim_duration_s_ = sim_duration_s;
        for (auto& f : flows_) f.in_flight_at_end = 0;
        for (std::uint64_t k : live_) {
            int flow = static_cast<int>(k >> 40);
            if (flow < static_cast<int>(flows_.size()))
                flows_[flow].in_flight_at_end += 1;
        }
    }

    std::uint64_t sent() const { return total(&FlowStats::sent); }
    std::uint64_t delivered() const { return total(&FlowStats::delivered); }
    std::uint64_t drops_noroute() const { return total(&FlowStats::drops_noroute); }
    std::uint64_t drops_buffer() const { return total(&FlowStats::drops_buffer); }
    std::uint64_t drops_broken() const { return total(&FlowStats::drops_broken); }
    std::uint64_t accounting_errors() const { return accounting_errors_; }
    const std::vector<FlowStats>& flows() const { return flows_; }
    double sim_duration_s() const { return sim_duration_s_; }

    // Delivered over sent; absent (not zero) when nothing was sent.
    std::optional<double> delivery_ratio() const {
        if (sent() == 0) return std::nullopt;
        return static_cast<double>(delivered()) / static_cast<double>(sent());
    }

    // Mean origination-to-arrival time over delivered packets; origination is
    // the application enqueue, so route-discovery buffering counts.
    std::optional<double> average_delay_s() const {
        if (delay_count_ == 0) return std::nullopt;
        return static_cast<double>(delay_sum_us_) / static_cast<double>(delay_count_) / 1e6;
    }

    // Literal reading of the first-packet formulation: first arrival anywhere
    // minus first data transmission anywhere.
    std::optional<double> first_packet_delay_s() const {
        if (!first_arrival_ || !first_tx_) return std::nullopt;
        return (*first_arrival_ - *first_tx_).seconds();
    }

    double throughput_msg_s() const {
        if (sim_duration_s_ <= 0)
            throw std::logic_error("throughput requires a positive sim duration");
        return static_cast<double>(delivered()) / sim_duration_s_;
    }

    bool conserved() const {
        for (const auto& f : flows_)
            if (!f.conserved()) return false;
        return accounting_errors_ == 0;
    }

private:
    static std::uint64_t key(int flow, std::uint64_t seq) {
        return (static_cast<std::uint64_t>(flow) << 40) | (seq & 0xffffffffffull);
    }

    bool retire(int flow, std::uint64_t seq) {
        ensure_flow(flow);
        if (live_.erase(key(flow, seq)) == 0) {
            ++accounting_errors_; // terminal state reported twice
            return false;
        }
        return true;
    }

    std::uint64_t total(std::uint64_t FlowStats::* field) const {
        std::uint64_t sum = 0;
        for (const auto& f : flows_) sum += f.*field;
        return sum;
    }

    std::vector<FlowStats> flows_;
    std::unordered_set<std::uint64_t> live_;
    std::uint64_t accounting_errors_ = 0;
    std::int64_t delay_sum_us_ = 0;
    std::uint64_t delay_count_ = 0;
    std::optional<SimTime> first_tx_;
    std::optional<SimTime> first_arrival_;
    double sim_duration_s_ = 0;
};

// --- CSV emission -----------------------------------------------------------

struct RunLabel {
    double speed_mps = 0;
    int p_cache = 0;
    int s_cache = 0;
    std::uint64_t seed = 0;
    int flows = 0;
};

inline const char* csv_header() {
    return "speed_mps,p_cache,s_cache,seed,flows,sent,delivered,delivery_ratio,"
           "avg_delay_s,first_packet_delay_s,throughput_msg_s,drops_noroute,"
           "drops_broken,drops_buffer";
}

namespace detail {
inline std::string num(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}
inline std::string num(std::optional<double> v) {
    return v ? num(*v) : std::string();
}
} // namespace detail

inline std::string csv_row(const RunLabel& label, const MetricsAccumulator& m) {
    std::string row;
    row += detail::num(label.speed_mps);
    row += ',' + std::to_string(label.p_cache);
    row += ',' + std::to_string(label.s_cache);
    row += ',' + std::to_string(label.seed);
    row += ',' + std::to_string(label.flows);
    row += ',' + std::to_string(m.sent());
    row += ',' + std::to_string(m.delivered());
    row += ',' + detail::num(m.delivery_ratio());
    row += ',' + detail::num(m.average_delay_s());
    row += ',' + detail::num(m.first_packet_delay_s());
    row += ',' + detail::num(m.throughput_msg_s());
    row += ',' + std::to_string(m.drops_noroute());
    row += ',' + std::to_string(m.drops_broken());
    row += ',' + std::to_string(m.drops_buffer());
    return row;
}

} // namespace dsrsim
