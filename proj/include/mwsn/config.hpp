#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwsn/geometry.hpp"
#include "mwsn/types.hpp"

namespace mwsn {

// Raised on any malformed key, value, or constraint violation; `line` is 0
// when the problem is not tied to a file location.
struct ConfigError {
    std::string key;
    int line = 0;
    std::string message;
};

// Fully resolved, validated parameterization of one trial.
struct SimConfig {
    FieldGeometry field{};
    ZoneGrid grid{};
    ProtocolKind protocol = ProtocolKind::DEMC;

    double range_m = 0.0;                 // resolved; default derived from zone size
    double e_elec_nj_per_bit = 50.0;
    double e_amp_pj_per_bit_m_exp = 0.0013;
    int path_loss_exponent = 2;

    double e_elec_j_per_bit() const { return e_elec_nj_per_bit * 1e-9; }
    double e_amp_j_per_bit_m_exp() const { return e_amp_pj_per_bit_m_exp * 1e-12; }

    double initial_j = 3.0;

    std::uint32_t data_bytes = 100;
    std::uint32_t control_bytes = 25;

    double mean_speed_mps = 5.0;
    double speed_stddev_mps = 1.0;        // resolved; default 0.2 * mean speed
    double turn_stddev_rad = 0.5;
    double update_interval_s = 5.0;

    int ticks_per_round = 20;
    int data_tick = 5;
    int inter_tick = 10;
    double t_max_s = 1.0;

    double w1 = 0.9;
    double w2 = 0.1;
    double w3 = 0.0;

    int hello_period_ticks = 10;

    double fix_cost_j = 7e-4;
    double fix_displacement_m = 25.0;

    Vec2 sink{500.0, 500.0};

    std::uint32_t nodes = 100;
    std::uint64_t max_rounds = 10000;
    std::uint64_t seed = 1;

    bool operator==(const SimConfig&) const = default;
};

// Ordered `key = value` document. Keys are namespaced ("radio.range_m");
// unknown keys and duplicates are hard errors at parse time.
class ConfigDoc {
public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };

    static ConfigDoc parse(const std::string& text);
    static ConfigDoc load_file(const std::string& path);

    // Upserts a key (overrides any file value). Used for CLI flags and sweeps.
    void set(const std::string& key, const std::string& value);

    void erase(const std::string& key);

    const std::string* find(const std::string& key) const;
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

// Applies defaults (including per-protocol weight defaults and the derived
// transmission-range / speed-stddev defaults), then validates every
// SimConfig invariant. Throws ConfigError naming the offending key.
SimConfig resolve_config(const ConfigDoc& doc);

// Canonical emission; resolve_config(parse(print_config(c))) == c.
std::string print_config(const SimConfig& cfg);

// One row per config key for `describe-config`.
struct ConfigKeyInfo {
    std::string key;
    std::string type;
    std::string unit;
    std::string default_value;
    std::string provenance;  // "baseline" | "derived" | "chosen"
    std::string description;
};
std::vector<ConfigKeyInfo> describe_config_keys();

}  // namespace mwsn
