#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dsrsim/sim_time.hpp"

namespace dsrsim {

struct EventHandle {
    std::uint64_t id = 0;
};

enum class CancelResult { Cancelled, AlreadyFired, AlreadyCancelled };

struct RunSummary {
    std::uint64_t events_fired = 0;
    SimTime final_clock;
};

class SchedulingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Single-threaded discrete-event kernel. Events with equal fire times run in
// scheduling order (FIFO), so a run is a pure function of its inputs.
class EventQueue {
public:
    using Handler = std::function<void()>;

    SimTime now() const { return now_; }

    EventHandle schedule(SimTime at, Handler fn) {
        if (at < now_)
            throw SchedulingError("schedule: fire time " + at.str() +
                                  " is before current clock " + now_.str());
        std::uint64_t id = next_id_++;
        heap_.push(Entry{at, seq_++, id});
        pending_.emplace(id, std::move(fn));
        return EventHandle{id};
    }

    CancelResult cancel(EventHandle h) {
        if (auto it = pending_.find(h.id); it != pending_.end()) {
            pending_.erase(it);
            cancelled_.insert(h.id);
            return CancelResult::Cancelled;
        }
        if (cancelled_.count(h.id))
            return CancelResult::AlreadyCancelled;
        return CancelResult::AlreadyFired;
    }

    // Fires every event with fire_at <= t_end, in order, then advances the
    // clock to t_end. A handler that throws aborts the run; the exception
    // carries the offending event time.
    RunSummary run_until(SimTime t_end) {
        if (t_end < now_)
            throw SchedulingError("run_until: target time precedes clock");
        RunSummary summary;
        while (!heap_.empty() && heap_.top().at <= t_end) {
            Entry top = heap_.top();
            heap_.pop();
            auto it = pending_.find(top.id);
            if (it == pending_.end())
                continue; // cancelled
            Handler fn = std::move(it->second);
            pending_.erase(it);
            now_ = top.at;
            try {
                fn();
            } catch (const std::exception& e) {
                throw std::runtime_error("event handler failed at t=" + now_.str() +
                                         ": " + e.what());
            }
            ++summary.events_fired;
        }
        now_ = t_end;
        summary.final_clock = now_;
        return summary;
    }

    std::size_t pending_count() const { return pending_.size(); }

private:
    struct Entry {
        SimTime at;
        std::uint64_t seq;
        std::uint64_t id;
        bool operator>(const Entry& o) const {
            if (at != o.at) return at > o.at;
            return seq > o.seq;
        }
    };

    SimTime now_;
    std::uint64_t next_id_ = 1;
    std::uint64_t seq_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    std::unordered_map<std::uint64_t, Handler> pending_;
    std::unordered_set<std::uint64_t> cancelled_;
};

} // namespace dsrsim
