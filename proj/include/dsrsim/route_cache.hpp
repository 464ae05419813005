#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "dsrsim/route.hpp"

namespace dsrsim {

struct CacheConfig {
    int p_capacity = 30; // primary: routes this node actively uses
    int s_capacity = 64; // secondary: routes overheard or learned in passing
};

enum class CacheTier { Primary, Secondary };

struct InsertOutcome {
    enum Kind { Stored, Refreshed, Rejected } kind = Rejected;
    int evicted = 0; // routes dropped from the cache to make room
};

// Two-tier path cache. The primary tier holds routes the node requested or
// actively sends on; the secondary holds everything picked up speculatively.
// A secondary route that gets used is promoted to primary. Entries never
// expire on their own: only link breaks and capacity pressure remove them.
//
// Replacement: secondary evicts oldest-inserted (FIFO); a full primary demotes
// its least-recently-used route into the secondary rather than dropping it.
class RouteCache {
public:
    RouteCache(NodeId owner, CacheConfig cfg) : owner_(owner), cfg_(cfg) {
        if (cfg.p_capacity < 1 || cfg.s_capacity < 1)
            throw std::invalid_argument("cache capacities must be >= 1");
    }

    NodeId owner() const { return owner_; }
    const CacheConfig& config() const { return cfg_; }

    InsertOutcome insert(const Route& route, CacheTier tier) {
        if (route.length() < 2 || route.front() != owner_ || !route.loop_free())
            return {InsertOutcome::Rejected, 0};

        // Identical hop lists refresh recency instead of duplicating; an
        // entry already sitting in the primary is never demoted by a
        // secondary re-insert.
        if (Entry* p = find_exact(primary_, route)) {
            if (tier == CacheTier::Primary) {
                p->inserted = ++stamp_;
                p->used = stamp_;
            }
            return {InsertOutcome::Refreshed, 0};
        }
        if (Entry* s = find_exact(secondary_, route)) {
            if (tier == CacheTier::Secondary) {
                s->inserted = ++stamp_;
                return {InsertOutcome::Refreshed, 0};
            }
            // requested a primary insert for a route we only knew second-hand
            remove_exact(secondary_, route);
            return {InsertOutcome::Stored, store(route, CacheTier::Primary)};
        }
        return {InsertOutcome::Stored, store(route, tier)};
    }

    // Best cached route to dst: fewest hops wins, ties go to the most
    // recently inserted entry regardless of tier. A route passing through dst
    // counts via its prefix. A secondary hit is promoted into the primary
    // (this is the "use" signal); call peek() for a side-effect-free read.
    std::optional<Route> lookup(NodeId dst) { return find(dst, true); }
    std::optional<Route> peek(NodeId dst) const {
        return const_cast<RouteCache*>(this)->find(dst, false);
    }

    // The directed hop from->to is dead: cut every route containing it right
    // after `from`. Routes left with fewer than two nodes are removed.
    // Returns how many routes were truncated or removed.
    int handle_link_break(NodeId from, NodeId to) {
        int count = 0;
        count += break_in(primary_, from, to);
        count += break_in(secondary_, from, to);
        if (count > 0)
            dedup(); // truncation may have left identical copies behind
        return count;
    }

    int primary_size() const { return static_cast<int>(primary_.size()); }
    int secondary_size() const { return static_cast<int>(secondary_.size()); }

    std::optional<CacheTier> tier_of(const Route& route) const {
        if (find_exact(primary_, route)) return CacheTier::Primary;
        if (find_exact(secondary_, route)) return CacheTier::Secondary;
        return std::nullopt;
    }

    void dump(std::ostream& os) const {
        os << "node " << owner_ << " primary(" << primary_.size() << '/'
           << cfg_.p_capacity << "):\n";
        for (const Entry& e : primary_) os << "  " << e.route.str() << '\n';
        os << "node " << owner_ << " secondary(" << secondary_.size() << '/'
           << cfg_.s_capacity << "):\n";
        for (const Entry& e : secondary_) os << "  " << e.route.str() << '\n';
    }

    // Structural self-check used by the fuzz tests.
    void validate() const {
        if (primary_size() > cfg_.p_capacity || secondary_size() > cfg_.s_capacity)
            throw std::logic_error("cache capacity exceeded");
        for (const auto* tier : {&primary_, &secondary_})
            for (const Entry& e : *tier) {
                if (e.route.length() < 2) throw std::logic_error("short route cached");
                if (e.route.front() != owner_) throw std::logic_error("foreign route cached");
                if (!e.route.loop_free()) throw std::logic_error("loop cached");
            }
        for (const Entry& p : primary_)
            if (find_exact(secondary_, p.route))
                throw std::logic_error("route present in both tiers");
    }

private:
    struct Entry {
        Route route;
        std::uint64_t inserted = 0;
        std::uint64_t used = 0;
    };

    static const Entry* find_exact(const std::vector<Entry>& v, const Route& r) {
        for (const Entry& e : v)
            if (e.route == r) return &e;
        return nullptr;
    }
    static Entry* find_exact(std::vector<Entry>& v, const Route& r) {
        for (Entry& e : v)
            if (e.route == r) return &e;
        return nullptr;
    }
    static void remove_exact(std::vector<Entry>& v, const Route& r) {
        for (auto it = v.begin(); it != v.end(); ++it)
            if (it->route == r) { v.erase(it); return; }
    }

    // Place a validated, not-yet-present route; returns eviction count.
    int store(const Route& route, CacheTier tier) {
        int evicted = 0;
        if (tier == CacheTier::Primary) {
            if (static_cast<int>(primary_.size()) >= cfg_.p_capacity)
                evicted += demote_lru();
            ++stamp_;
            primary_.push_back(Entry{route, stamp_, stamp_});
        } else {
            if (static_cast<int>(secondary_.size()) >= cfg_.s_capacity) {
                evict_oldest(secondary_);
                evicted += 1;
            }
            ++stamp_;
            secondary_.push_back(Entry{route, stamp_, stamp_});
        }
        return evicted;
    }

    // Move the least-recently-used primary route down into the secondary.
    int demote_lru() {
        std::size_t victim = 0;
        for (std::size_t i = 1; i < primary_.size(); ++i)
            if (primary_[i].used < primary_[victim].used) victim = i;
        Route demoted = std::move(primary_[victim].route);
        primary_.erase(primary_.begin() + victim);

        int evicted = 0;
        if (Entry* dup = find_exact(secondary_, demoted)) {
            dup->inserted = ++stamp_;
            return evicted;
        }
        if (static_cast<int>(secondary_.size()) >= cfg_.s_capacity) {
            evict_oldest(secondary_);
            evicted += 1;
        }
        ++stamp_;
        secondary_.push_back(Entry{std::move(demoted), stamp_, stamp_});
        return evicted;
    }

    static void evict_oldest(std::vector<Entry>& v) {
        std::size_t victim = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i].inserted < v[victim].inserted) victim = i;
        v.erase(v.begin() + victim);
    }

    std::optional<Route> find(NodeId dst, bool promote) {
        if (dst == owner_)
            throw std::invalid_argument("lookup for own address");
        Entry* best = nullptr;
        bool best_primary = false;
        std::size_t best_hops = 0;

        auto consider = [&](Entry& e, bool is_primary) {
            std::size_t i = e.route.index_of(dst);
            if (i == Route::npos || i == 0) return;
            if (!best || i < best_hops ||
                (i == best_hops && e.inserted > best->inserted)) {
                best = &e;
                best_primary = is_primary;
                best_hops = i;
            }
        };
        for (Entry& e : primary_) consider(e, true);
        for (Entry& e : secondary_) consider(e, false);

        if (!best)
            return std::nullopt;
        Route result = best->route.prefix(best_hops);
        if (promote) {
            if (best_primary) {
                best->used = ++stamp_;
            } else {
                Route full = best->route; // copy: remove_exact matches by value
                remove_exact(secondary_, full);
                store(full, CacheTier::Primary);
            }
        }
        return result;
    }

    static int break_in(std::vector<Entry>& v, NodeId from, NodeId to) {
        int count = 0;
        for (std::size_t i = 0; i < v.size();) {
            const auto& hops = v[i].route.hops;
            std::size_t cut = Route::npos;
            for (std::size_t k = 0; k + 1 < hops.size(); ++k)
                if (hops[k] == from && hops[k + 1] == to) { cut = k; break; }
            if (cut == Route::npos) { ++i; continue; }
            ++count;
            if (cut == 0) {
                v.erase(v.begin() + i);
            } else {
                v[i].route.hops.resize(cut + 1);
                ++i;
            }
        }
        return count;
    }

    // Drop exact duplicates, keeping the first occurrence in primary-then-
    // secondary scan order.
    void dedup() {
        std::vector<Route> seen;
        auto already_seen = [&](const Route& r) {
            for (const Route& s : seen)
                if (s == r) return true;
            return false;
        };
        for (auto* tier : {&primary_, &secondary_})
            for (std::size_t i = 0; i < tier->size();) {
                if (already_seen((*tier)[i].route)) {
                    tier->erase(tier->begin() + i);
                } else {
                    seen.push_back((*tier)[i].route);
                    ++i;
                }
            }
    }

    NodeId owner_;
    CacheConfig cfg_;
    std::uint64_t stamp_ = 0;
    std::vector<Entry> primary_;
    std::vector<Entry> secondary_;
};

} // namespace dsrsim
