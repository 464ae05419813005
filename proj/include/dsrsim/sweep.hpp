#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dsrsim/simulation.hpp"

namespace dsrsim {

// Cartesian grid over node speed, cache sizing and seed; everything else
// comes from the base config. Enumeration order (speed-major, then cache
// pair, then seed) fixes the CSV row order.
struct SweepPlan {
    ScenarioConfig base;
    std::vector<double> speeds{0, 1, 5, 10, 15};
    std::vector<std::pair<int, int>> cache_pairs{{1, 1}, {5, 10}, {10, 20}, {30, 64}};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

    std::vector<ScenarioConfig> enumerate() const {
        std::vector<ScenarioConfig> out;
        out.reserve(speeds.size() * cache_pairs.size() * seeds.size());
        for (double speed : speeds)
            for (auto [p, s] : cache_pairs)
                for (std::uint64_t seed : seeds) {
                    ScenarioConfig c = base;
                    c.speed = speed;
                    c.p_cache = p;
                    c.s_cache = s;
                    c.seed = seed;
                    out.push_back(c);
                }
        return out;
    }
};

struct SweepOutcome {
    std::string csv;                 // header + one row per completed run, plan order
    std::vector<std::string> errors; // "<row>: <what>" for runs that aborted
    std::vector<RunResult> results;  // completed runs, plan order

    bool ok() const { return errors.empty(); }
};

// Runs the whole grid. Runs are independent, so they may execute on several
// threads; rows are assembled in plan order either way, making the CSV a pure
// function of the plan.
inline SweepOutcome run_sweep(const SweepPlan& plan, unsigned threads = 1) {
    std::vector<ScenarioConfig> configs = plan.enumerate();
    const std::size_t n = configs.size();
    std::vector<std::optional<RunResult>> results(n);
    std::vector<std::string> errors(n);

    auto worker = [&](std::size_t i) {
        try {
            results[i] = run_scenario(configs[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    threads = std::max(1u, threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) worker(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
        pool.reserve(count);
        for (unsigned w = 0; w < count; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    worker(i);
            });
        for (auto& t : pool) t.join();
    }

    SweepOutcome out;
    out.csv = std::string(csv_header()) + "\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (results[i]) {
            out.csv += csv_row(results[i]->label, results[i]->metrics) + "\n";
            out.results.push_back(std::move(*results[i]));
        } else {
            out.errors.push_back("row " + std::to_string(i) + ": " + errors[i]);
        }
    }
    return out;
}

} // namespace dsrsim
