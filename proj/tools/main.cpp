#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mwsn/csv.hpp"
#include "mwsn/engine.hpp"

namespace fs = std::filesystem;
using namespace mwsn;

namespace {

int config_failure(const ConfigError& e) {
    std::cerr << "config error";
    if (!e.key.empty()) std::cerr << " [" << e.key << "]";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.message << "\n";
    return 2;
}

ConfigDoc load_doc(const std::string& config_path) {
    if (config_path.empty()) return {};
    return ConfigDoc::load_file(config_path);
}

// seed precedence: --seed flag > MWSN_SEED env > sim.seed in the file
void apply_seed(ConfigDoc& doc, const std::string& seed_flag) {
    if (!seed_flag.empty()) {
        doc.set("sim.seed", seed_flag);
        return;
    }
    if (const char* env = std::getenv("MWSN_SEED"); env && *env) doc.set("sim.seed", env);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) items.push_back(item);
    return items;
}

int cmd_run(const std::string& config_path, const std::string& seed_flag, const std::string& out_dir) {
    SimConfig cfg;
    try {
        ConfigDoc doc = load_doc(config_path);
        apply_seed(doc, seed_flag);
        cfg = resolve_config(doc);
    } catch (const ConfigError& e) {
        return config_failure(e);
    }
    fs::create_directories(out_dir);
    std::ofstream events(fs::path(out_dir) / "events.log");
    if (!events) {
        std::cerr << "cannot open " << out_dir << "/events.log for writing\n";
        return 1;
    }
    const TrialResult result = run_trial(cfg, &events);
    write_file(fs::path(out_dir) / "trial.csv", trial_csv_header() + "\n" + trial_csv_row(result) + "\n");
    std::cerr << "trial done: rounds=" << result.rounds_completed << " lifetime=" << result.lifetime_rounds
              << (result.censored ? " (censored)" : "") << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& protocols_arg,
              const std::string& nodes_arg, const std::string& speeds_arg, int seeds, int jobs,
              const std::string& out_dir) {
    SweepRequest req;
    try {
        req.base = load_doc(config_path);
        apply_seed(req.base, "");
        if (protocols_arg == "all") {
            req.protocols = {ProtocolKind::DECA, ProtocolKind::DEMC, ProtocolKind::DEMC_RECOVERY,
                             ProtocolKind::MAR, ProtocolKind::GRC, ProtocolKind::GRC_RECOVERY};
        } else {
            for (const auto& name : split_csv(protocols_arg)) {
                const auto p = parse_protocol(name);
                if (!p) throw ConfigError{"--protocols", 0, "unknown protocol '" + name + "'"};
                req.protocols.push_back(*p);
            }
        }
        for (const auto& n : split_csv(nodes_arg)) {
            const long v = std::strtol(n.c_str(), nullptr, 10);
            if (v < 1) throw ConfigError{"--nodes", 0, "invalid node count '" + n + "'"};
            req.node_counts.push_back(static_cast<std::uint32_t>(v));
        }
        for (const auto& s : split_csv(speeds_arg)) {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0' || v < 0)
                throw ConfigError{"--speeds", 0, "invalid speed '" + s + "'"};
            req.speeds.push_back(v);
        }
        if (req.protocols.empty()) throw ConfigError{"--protocols", 0, "no protocols given"};
        if (req.node_counts.empty()) throw ConfigError{"--nodes", 0, "no node counts given"};
        if (req.speeds.empty()) throw ConfigError{"--speeds", 0, "no speeds given"};
        if (seeds < 1) throw ConfigError{"--seeds", 0, "need at least one seed"};
        req.seeds = seeds;
        req.jobs = jobs;
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    SweepResult result;
    try {
        result = run_sweep(req);
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    // all trials succeeded; only now touch the output directory
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "sweep_raw.csv", sweep_raw_csv(result.trials));
    write_file(fs::path(out_dir) / "sweep_agg.csv", sweep_agg_csv(result.aggregate));
    for (const auto& [name, content] : figure_csvs(result))
        write_file(fs::path(out_dir) / name, content);
    std::cerr << "sweep done: " << result.trials.size() << " trials, " << result.aggregate.size()
              << " cells -> " << out_dir << "\n";
    return 0;
}

int cmd_describe_config() {
    std::printf("%-32s %-6s %-14s %-26s %-9s %s\n", "key", "type", "unit", "default", "source",
                "description");
    for (const auto& k : describe_config_keys()) {
        std::printf("%-32s %-6s %-14s %-26s %-9s %s\n", k.key.c_str(), k.type.c_str(), k.unit.c_str(),
                    k.default_value.c_str(), k.provenance.c_str(), k.description.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mwsnsim - cluster-based routing comparison for mobile wireless sensor networks"};
    app.require_subcommand(1);

    std::string config_path, seed_flag, out_dir = "out";
    auto* run = app.add_subcommand("run", "run one trial, writing trial.csv and events.log");
    run->add_option("--config", config_path, "config file (key = value lines)");
    run->add_option("--seed", seed_flag, "seed override (flag > MWSN_SEED > file)");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();

    std::string sw_config, sw_protocols = "all", sw_nodes = "50,100,150,200",
                sw_speeds = "0,5,10,15,20";
    int sw_seeds = 10, sw_jobs = 1;
    std::string sw_out = "out";
    auto* sweep = app.add_subcommand("sweep", "run a (protocol x nodes x speed x seed) grid");
    sweep->add_option("--config", sw_config, "base config file");
    sweep->add_option("--protocols", sw_protocols, "comma list or 'all'")->capture_default_str();
    sweep->add_option("--nodes", sw_nodes, "comma list of node counts")->capture_default_str();
    sweep->add_option("--speeds", sw_speeds, "comma list of mean speeds [m/s]")->capture_default_str();
    sweep->add_option("--seeds", sw_seeds, "seeds per cell")->capture_default_str();
    sweep->add_option("--jobs", sw_jobs, "worker threads (output is identical for any value)")
        ->capture_default_str();
    sweep->add_option("--out", sw_out, "output directory")->capture_default_str();

    auto* describe =
        app.add_subcommand("describe-config", "print every config key, default, and provenance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, seed_flag, out_dir);
        if (sweep->parsed()) return cmd_sweep(sw_config, sw_protocols, sw_nodes, sw_speeds, sw_seeds,
                                              sw_jobs, sw_out);
        if (describe->parsed()) return cmd_describe_config();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
