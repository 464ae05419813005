#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dsrsim/mobility.hpp" // NodeId

namespace dsrsim {

// A source route: ordered node list from source to destination. Valid routes
// have at least two nodes and no repeats.
struct Route {
    std::vector<NodeId> hops;

    Route() = default;
    Route(std::initializer_list<NodeId> ids) : hops(ids) {}
    explicit Route(std::vector<NodeId> ids) : hops(std::move(ids)) {}

    std::size_t length() const { return hops.size(); }
    std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
    NodeId front() const { return hops.front(); }
    NodeId back() const { return hops.back(); }

    bool loop_free() const {
        for (std::size_t i = 0; i < hops.size(); ++i)
            for (std::size_t j = i + 1; j < hops.size(); ++j)
                if (hops[i] == hops[j])
                    return false;
        return true;
    }

    // Index of `id` in the hop list, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(NodeId id) const {
        auto it = std::find(hops.begin(), hops.end(), id);
        return it == hops.end() ? npos : static_cast<std::size_t>(it - hops.begin());
    }

    Route prefix(std::size_t end_index) const { // nodes [0, end_index]
        return Route{std::vector<NodeId>(hops.begin(), hops.begin() + end_index + 1)};
    }
    Route suffix(std::size_t start_index) const { // nodes [start_index, end)
        return Route{std::vector<NodeId>(hops.begin() + start_index, hops.end())};
    }
    Route reversed() const {
        return Route{std::vector<NodeId>(hops.rbegin(), hops.rend())};
    }

    friend bool operator==(const Route& a, const Route& b) { return a.hops == b.hops; }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < hops.size(); ++i) {
            if (i) s += '-';
            s += std::to_string(hops[i]);
        }
        return s;
    }
};

inline Route concat(const Route& a, const Route& b) {
    Route r = a;
    r.hops.insert(r.hops.end(), b.hops.begin(), b.hops.end());
    return r;
}

} // namespace dsrsim
