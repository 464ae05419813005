#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dsrsim/mobility.hpp"
#include "dsrsim/sim_time.hpp"

namespace dsrsim {

// Structured protocol trace, off by default. Tests replay it against the
// mobility trace to check route validity, loop freedom and packet accounting;
// the CLI can stream it as `t | node | kind | detail` lines.
struct AuditEvent {
    SimTime t;
    NodeId node = 0;
    std::string kind;
    std::string detail;

    std::string line() const {
        return t.str() + " | " + std::to_string(node) + " | " + kind + " | " + detail;
    }
};

class AuditLog {
public:
    using Sink = std::function<void(const AuditEvent&)>;

    AuditLog() = default;
    explicit AuditLog(Sink sink) : sink_(std::move(sink)), enabled_(bool(sink_)) {}

    bool enabled() const { return enabled_; }

    void emit(SimTime t, NodeId node, const char* kind, std::string detail) const {
        if (enabled_)
            sink_(AuditEvent{t, node, kind, std::move(detail)});
    }

    // Collecting sink for tests.
    static AuditLog collect(std::vector<AuditEvent>& into) {
        return AuditLog{[&into](const AuditEvent& e) { into.push_back(e); }};
    }

private:
    Sink sink_;
    bool enabled_ = false;
};

} // namespace dsrsim
