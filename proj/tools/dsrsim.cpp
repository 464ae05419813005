// Command-line front end: single runs, parameter sweeps, and trace/workload
// exports. Exit codes: 0 ok, 2 bad configuration, 3 a run aborted.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsrsim/dsrsim.hpp"

namespace {

using dsrsim::ScenarioConfig;

struct Overrides {
    std::string config_file;
    std::optional<int> nodes, p_cache, s_cache, flows, packet_size, buffer_capacity,
        max_retries;
    std::optional<double> area_x, area_y, speed, speed_margin, pause, tx_range, bandwidth,
        rate, start_window, buffer_timeout, backoff_base, sim_time;
    std::optional<std::uint64_t> seed;
};

void add_scenario_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_file, "JSON config file (flat object)");
    cmd->add_option("--nodes", o.nodes, "number of nodes");
    cmd->add_option("--area-x", o.area_x, "area width, m");
    cmd->add_option("--area-y", o.area_y, "area height, m");
    cmd->add_option("--speed", o.speed, "nominal node speed, m/s (0 = static)");
    cmd->add_option("--speed-margin", o.speed_margin, "speed draw half-width, m/s");
    cmd->add_option("--pause", o.pause, "waypoint pause, s");
    cmd->add_option("--tx-range", o.tx_range, "radio range, m");
    cmd->add_option("--bandwidth", o.bandwidth, "channel bandwidth, bit/s");
    cmd->add_option("--p-cache", o.p_cache, "primary cache capacity");
    cmd->add_option("--s-cache", o.s_cache, "secondary cache capacity");
    cmd->add_option("--flows", o.flows, "number of CBR flows");
    cmd->add_option("--packet-size", o.packet_size, "payload size, bytes");
    cmd->add_option("--rate", o.rate, "per-flow bit rate, bit/s");
    cmd->add_option("--start-window", o.start_window, "flow start window, s");
    cmd->add_option("--buffer-capacity", o.buffer_capacity, "send buffer capacity");
    cmd->add_option("--buffer-timeout", o.buffer_timeout, "send buffer timeout, s");
    cmd->add_option("--max-retries", o.max_retries, "discovery retry limit");
    cmd->add_option("--backoff-base", o.backoff_base, "first discovery retry delay, s");
    cmd->add_option("--sim-time", o.sim_time, "simulated duration, s");
    cmd->add_option("--seed", o.seed, "run seed");
}

ScenarioConfig resolve(const Overrides& o) {
    ScenarioConfig cfg;
    if (!o.config_file.empty())
        cfg = dsrsim::load_config_file(o.config_file);
    auto set = [](auto& field, const auto& opt) { if (opt) field = *opt; };
    set(cfg.nodes, o.nodes);
    set(cfg.area_x, o.area_x);
    set(cfg.area_y, o.area_y);
    set(cfg.speed, o.speed);
    set(cfg.speed_margin, o.speed_margin);
    set(cfg.pause, o.pause);
    set(cfg.tx_range, o.tx_range);
    set(cfg.bandwidth, o.bandwidth);
    set(cfg.p_cache, o.p_cache);
    set(cfg.s_cache, o.s_cache);
    set(cfg.flows, o.flows);
    set(cfg.packet_size, o.packet_size);
    set(cfg.rate, o.rate);
    set(cfg.start_window, o.start_window);
    set(cfg.buffer_capacity, o.buffer_capacity);
    set(cfg.buffer_timeout, o.buffer_timeout);
    set(cfg.max_retries, o.max_retries);
    set(cfg.backoff_base, o.backoff_base);
    set(cfg.sim_time, o.sim_time);
    set(cfg.seed, o.seed);
    cfg.validate();
    return cfg;
}

// Everything informational goes to stderr so stdout stays machine-readable.
void echo(const ScenarioConfig& cfg) {
    std::cerr << "config:\n" << dsrsim::echo_config(cfg) << "\n";
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write " + out_path);
    out << text;
}

std::vector<std::pair<int, int>> parse_cache_pairs(const std::vector<std::string>& specs) {
    std::vector<std::pair<int, int>> pairs;
    for (const std::string& s : specs) {
        auto colon = s.find(':');
        if (colon == std::string::npos)
            throw dsrsim::ConfigError("cache pair must look like P:S, got " + s);
        try {
            pairs.emplace_back(std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1)));
        } catch (const std::exception&) {
            throw dsrsim::ConfigError("cache pair must look like P:S, got " + s);
        }
    }
    return pairs;
}

int cmd_run(const Overrides& o, bool audit, const std::string& out_path) {
    ScenarioConfig cfg = resolve(o);
    echo(cfg);
    dsrsim::AuditLog log;
    if (audit)
        log = dsrsim::AuditLog([](const dsrsim::AuditEvent& e) {
            std::cerr << e.line() << "\n";
        });
    dsrsim::RunResult res = dsrsim::run_scenario(cfg, std::move(log));
    std::string csv = std::string(dsrsim::csv_header()) + "\n" +
                      dsrsim::csv_row(res.label, res.metrics) + "\n";
    write_output(csv, out_path);
    if (!res.metrics.conserved()) {
        std::cerr << "error: packet accounting failed to balance\n";
        return 3;
    }
    return 0;
}

int cmd_sweep(const Overrides& o, const std::vector<double>& speeds,
              const std::vector<std::string>& cache_specs,
              const std::vector<std::uint64_t>& seeds, unsigned threads,
              const std::string& out_path) {
    dsrsim::SweepPlan plan;
    plan.base = resolve(o);
    if (!speeds.empty()) plan.speeds = speeds;
    if (!cache_specs.empty()) plan.cache_pairs = parse_cache_pairs(cache_specs);
    if (!seeds.empty()) plan.seeds.assign(seeds.begin(), seeds.end());
    echo(plan.base);
    std::cerr << "sweep: " << plan.speeds.size() << " speeds x " << plan.cache_pairs.size()
              << " cache pairs x " << plan.seeds.size() << " seeds\n";

    dsrsim::SweepOutcome outcome = dsrsim::run_sweep(plan, threads);
    write_output(outcome.csv, out_path);
    for (const std::string& err : outcome.errors)
        std::cerr << "error: " << err << "\n";
    return outcome.ok() ? 0 : 3;
}

int cmd_mobility_gen(const Overrides& o, const std::string& out_path) {
    ScenarioConfig cfg = resolve(o);
    echo(cfg);
    auto trace = dsrsim::MobilityTrace::generate(cfg.mobility(),
                                                 dsrsim::RngStream(cfg.seed, "mobility"));
    std::ostringstream os;
    trace.export_legs(os);
    write_output(os.str(), out_path);
    return 0;
}

int cmd_traffic_gen(const Overrides& o, const std::string& out_path) {
    ScenarioConfig cfg = resolve(o);
    echo(cfg);
    dsrsim::RngStream rng(cfg.seed, "traffic");
    auto flows = dsrsim::generate_flows(cfg.workload(), cfg.nodes, rng);
    std::ostringstream os;
    dsrsim::export_flows(flows, os);
    write_output(os.str(), out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dsrsim: packet-level DSR simulator with a two-tier route cache"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o, mob_o, traf_o;
    std::string run_out, sweep_out, mob_out, traf_out;
    bool run_audit = false;
    std::vector<double> sweep_speeds;
    std::vector<std::string> sweep_caches;
    std::vector<std::uint64_t> sweep_seeds;
    unsigned sweep_threads = 1;

    CLI::App* run = app.add_subcommand("run", "simulate one scenario, print one CSV row");
    add_scenario_options(run, run_o);
    run->add_flag("--audit", run_audit, "stream the protocol audit log to stderr");
    run->add_option("--out", run_out, "write CSV here instead of stdout");

    CLI::App* sweep = app.add_subcommand("sweep", "run a speed x cache-size x seed grid");
    add_scenario_options(sweep, sweep_o);
    sweep->add_option("--speeds", sweep_speeds, "speeds to sweep, m/s")->delimiter(',');
    sweep->add_option("--cache-pairs", sweep_caches, "cache sizes to sweep, as P:S")->delimiter(',');
    sweep->add_option("--seeds", sweep_seeds, "seeds to sweep")->delimiter(',');
    sweep->add_option("--threads", sweep_threads, "worker threads (rows stay in plan order)");
    sweep->add_option("--out", sweep_out, "write CSV here instead of stdout");

    CLI::App* mob = app.add_subcommand("mobility-gen", "export the waypoint schedule");
    add_scenario_options(mob, mob_o);
    mob->add_option("--out", mob_out, "write the schedule here instead of stdout");

    CLI::App* traf = app.add_subcommand("traffic-gen", "export the generated flow set");
    add_scenario_options(traf, traf_o);
    traf->add_option("--out", traf_out, "write the flow set here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_o, run_audit, run_out);
        if (sweep->parsed())
            return cmd_sweep(sweep_o, sweep_speeds, sweep_caches, sweep_seeds,
                             sweep_threads, sweep_out);
        if (mob->parsed()) return cmd_mobility_gen(mob_o, mob_out);
        if (traf->parsed()) return cmd_traffic_gen(traf_o, traf_out);
    } catch (const dsrsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
