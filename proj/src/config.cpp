#include "mwsn/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace mwsn {

const char* protocol_name(ProtocolKind p) {
    switch (p) {
        case ProtocolKind::DECA: return "deca";
        case ProtocolKind::DEMC: return "demc";
        case ProtocolKind::DEMC_RECOVERY: return "demc_recovery";
        case ProtocolKind::MAR: return "mar";
        case ProtocolKind::GRC: return "grc";
        case ProtocolKind::GRC_RECOVERY: return "grc_recovery";
    }
    return "?";
}

std::optional<ProtocolKind> parse_protocol(const std::string& name) {
    if (name == "deca") return ProtocolKind::DECA;
    if (name == "demc") return ProtocolKind::DEMC;
    if (name == "demc_recovery") return ProtocolKind::DEMC_RECOVERY;
    if (name == "mar") return ProtocolKind::MAR;
    if (name == "grc") return ProtocolKind::GRC;
    if (name == "grc_recovery") return ProtocolKind::GRC_RECOVERY;
    return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k;
        for (const auto& info : describe_config_keys()) k.insert(info.key);
        return k;
    }();
    return keys;
}

double parse_double(const ConfigDoc::Entry& e) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError{e.key, e.line, "expected a finite number, got '" + e.value + "'"};
    return v;
}

std::uint64_t parse_u64(const ConfigDoc::Entry& e) {
    const double v = parse_double(e);
    if (v < 0 || v != std::floor(v))
        throw ConfigError{e.key, e.line, "expected a nonnegative integer, got '" + e.value + "'"};
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const ConfigDoc::Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw ConfigError{e.key, e.line, "expected true/false, got '" + e.value + "'"};
}

// Looks a key up and converts it, or leaves the preset default untouched.
struct Reader {
    const ConfigDoc& doc;

    bool has(const std::string& key) const { return doc.find(key) != nullptr; }

    const ConfigDoc::Entry* entry(const std::string& key) const {
        for (const auto& e : doc.entries())
            if (e.key == key) return &e;
        return nullptr;
    }

    void num(const std::string& key, double& out) const {
        if (const auto* e = entry(key)) out = parse_double(*e);
    }
    void integer(const std::string& key, int& out) const {
        if (const auto* e = entry(key)) out = static_cast<int>(parse_u64(*e));
    }
    void u32(const std::string& key, std::uint32_t& out) const {
        if (const auto* e = entry(key)) out = static_cast<std::uint32_t>(parse_u64(*e));
    }
    void u64(const std::string& key, std::uint64_t& out) const {
        if (const auto* e = entry(key)) out = parse_u64(*e);
    }
};

void require(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw ConfigError{key, 0, msg};
}

std::string fmt_double(double v) {
    char buf[64];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest form that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[64];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

}  // namespace

ConfigDoc ConfigDoc::parse(const std::string& text) {
    ConfigDoc doc;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError{"", lineno, "expected 'key = value', got '" + trim(raw) + "'"};
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError{key, lineno, "empty key or value"};
        if (!known_keys().count(key))
            throw ConfigError{key, lineno, "unknown key '" + key + "'"};
        for (const auto& e : doc.entries_)
            if (e.key == key)
                throw ConfigError{key, lineno, "duplicate key '" + key + "' (first set on line " +
                                                   std::to_string(e.line) + ")"};
        doc.entries_.push_back({key, value, lineno});
    }
    return doc;
}

ConfigDoc ConfigDoc::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError{"", 0, "cannot open config file '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ConfigDoc::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError{key, 0, "unknown key '" + key + "'"};
    for (auto& e : entries_) {
        if (e.key == key) {
            e.value = value;
            return;
        }
    }
    entries_.push_back({key, value, 0});
}

void ConfigDoc::erase(const std::string& key) {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                  [&](const Entry& e) { return e.key == key; }),
                   entries_.end());
}

const std::string* ConfigDoc::find(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.key == key) return &e.value;
    return nullptr;
}

SimConfig resolve_config(const ConfigDoc& doc) {
    Reader rd{doc};
    SimConfig c;

    rd.num("field.width", c.field.width);
    rd.num("field.height", c.field.height);
    rd.integer("zones.rows", c.grid.rows);
    rd.integer("zones.cols", c.grid.cols);

    // protocol kind first: weight defaults depend on it
    std::string kind_name = "demc";
    if (const auto* v = doc.find("protocol.kind")) kind_name = *v;
    const auto kind = parse_protocol(kind_name);
    if (!kind)
        throw ConfigError{"protocol.kind", 0,
                          "unknown protocol '" + kind_name +
                              "' (expected deca|demc|demc_recovery|mar|grc|grc_recovery)"};
    c.protocol = *kind;

    if (rd.has("recovery.enabled")) {
        const bool want = parse_bool(*rd.entry("recovery.enabled"));
        const bool have = has_recovery(c.protocol);
        if (want && !have) {
            if (c.protocol == ProtocolKind::DEMC)
                c.protocol = ProtocolKind::DEMC_RECOVERY;
            else if (c.protocol == ProtocolKind::GRC)
                c.protocol = ProtocolKind::GRC_RECOVERY;
            else
                throw ConfigError{"recovery.enabled", 0,
                                  std::string("no recovery variant exists for protocol '") +
                                      protocol_name(c.protocol) + "'"};
        } else if (!want && have) {
            throw ConfigError{"recovery.enabled", 0,
                              std::string("contradicts protocol.kind = ") + protocol_name(c.protocol)};
        }
    }

    // per-protocol weight defaults
    switch (c.protocol) {
        case ProtocolKind::DECA:
            c.w1 = 0.6; c.w2 = 0.3; c.w3 = 0.1;
            break;
        case ProtocolKind::DEMC:
        case ProtocolKind::DEMC_RECOVERY:
            c.w1 = 0.9; c.w2 = 0.1; c.w3 = 0.0;
            break;
        case ProtocolKind::GRC:
        case ProtocolKind::GRC_RECOVERY:
        case ProtocolKind::MAR:
            c.w1 = 0.7; c.w2 = 0.3; c.w3 = 0.0;
            break;
    }
    rd.num("protocol.w1", c.w1);
    rd.num("protocol.w2", c.w2);
    rd.num("protocol.w3", c.w3);
    rd.num("protocol.t_max_s", c.t_max_s);

    rd.num("radio.e_elec_nj_per_bit", c.e_elec_nj_per_bit);
    rd.num("radio.e_amp_pj_per_bit_m_exp", c.e_amp_pj_per_bit_m_exp);
    rd.integer("radio.path_loss_exponent", c.path_loss_exponent);

    rd.num("energy.initial_j", c.initial_j);
    rd.u32("packet.data_bytes", c.data_bytes);
    rd.u32("packet.control_bytes", c.control_bytes);

    rd.num("mobility.mean_speed_mps", c.mean_speed_mps);
    // floor keeps the mass-mobility model alive at mean speed 0: nodes with
    // mass and momentum drift, they do not freeze
    c.speed_stddev_mps = std::max(0.25, 0.2 * c.mean_speed_mps);
    rd.num("mobility.speed_stddev_mps", c.speed_stddev_mps);
    rd.num("mobility.turn_stddev_rad", c.turn_stddev_rad);
    rd.num("mobility.update_interval_s", c.update_interval_s);

    rd.integer("round.ticks", c.ticks_per_round);
    rd.integer("round.data_tick", c.data_tick);
    rd.integer("round.inter_tick", c.inter_tick);

    rd.integer("deca.hello_period_ticks", c.hello_period_ticks);
    rd.num("loc.fix_cost_j", c.fix_cost_j);
    rd.num("loc.fix_displacement_m", c.fix_displacement_m);

    rd.num("sink.x", c.sink.x);
    rd.num("sink.y", c.sink.y);
    rd.u32("sim.nodes", c.nodes);
    rd.u64("sim.max_rounds", c.max_rounds);
    rd.u64("sim.seed", c.seed);

    // validation
    require(c.field.width > 0 && c.field.height > 0, "field.width", "field dimensions must be positive");
    require(c.grid.rows >= 1 && c.grid.cols >= 1, "zones.rows", "zone grid must be at least 1x1");

    // transmission range defaults to the zone diagonal so a center-placed
    // cluster head covers its whole zone
    c.range_m = std::sqrt(cell_width(c.grid, c.field) * cell_width(c.grid, c.field) +
                          cell_height(c.grid, c.field) * cell_height(c.grid, c.field));
    rd.num("radio.range_m", c.range_m);

    require(c.range_m > 0, "radio.range_m", "transmission range must be positive");
    require(c.e_elec_nj_per_bit >= 0, "radio.e_elec_nj_per_bit", "must be nonnegative");
    require(c.e_amp_pj_per_bit_m_exp >= 0, "radio.e_amp_pj_per_bit_m_exp", "must be nonnegative");
    require(c.path_loss_exponent == 2 || c.path_loss_exponent == 4, "radio.path_loss_exponent",
            "path loss exponent must be 2 or 4");
    require(c.initial_j > 0, "energy.initial_j", "initial energy must be positive");
    require(c.data_bytes > 0 && c.control_bytes > 0, "packet.data_bytes", "packet sizes must be positive");
    require(c.mean_speed_mps >= 0, "mobility.mean_speed_mps", "must be nonnegative");
    require(c.speed_stddev_mps >= 0, "mobility.speed_stddev_mps", "must be nonnegative");
    require(c.turn_stddev_rad >= 0, "mobility.turn_stddev_rad", "must be nonnegative");
    require(c.update_interval_s > 0, "mobility.update_interval_s", "must be positive");
    require(c.ticks_per_round >= 3, "round.ticks", "a round needs at least 3 ticks");
    require(0 < c.data_tick && c.data_tick < c.inter_tick && c.inter_tick < c.ticks_per_round,
            "round.data_tick", "need 0 < data_tick < inter_tick < round.ticks");
    require(c.t_max_s > 0, "protocol.t_max_s", "election window must be positive");
    require(c.hello_period_ticks >= 1, "deca.hello_period_ticks", "must be >= 1");
    require(c.fix_cost_j >= 0, "loc.fix_cost_j", "must be nonnegative");
    require(c.fix_displacement_m > 0, "loc.fix_displacement_m", "must be positive");
    require(c.field.contains(c.sink), "sink.x", "sink must lie inside the field");
    require(c.nodes >= 1, "sim.nodes", "need at least one node");

    const bool needs_two_weights = c.protocol == ProtocolKind::DEMC ||
                                   c.protocol == ProtocolKind::DEMC_RECOVERY ||
                                   c.protocol == ProtocolKind::GRC ||
                                   c.protocol == ProtocolKind::GRC_RECOVERY;
    if (needs_two_weights) {
        require(std::abs(c.w1 + c.w2 - 1.0) <= 1e-9, "protocol.w1", "w1 + w2 must equal 1");
        require(0 < c.w2 && c.w2 < c.w1, "protocol.w2", "need 0 < w2 < w1");
    }
    if (c.protocol == ProtocolKind::DECA) {
        require(std::abs(c.w1 + c.w2 + c.w3 - 1.0) <= 1e-9, "protocol.w1", "w1 + w2 + w3 must equal 1");
        require(c.w1 > c.w2 && c.w2 > c.w3 && c.w3 > 0, "protocol.w2", "need w1 > w2 > w3 > 0");
    }
    return c;
}

std::string print_config(const SimConfig& c) {
    std::ostringstream out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    kv("field.width", fmt_double(c.field.width));
    kv("field.height", fmt_double(c.field.height));
    kv("zones.rows", std::to_string(c.grid.rows));
    kv("zones.cols", std::to_string(c.grid.cols));
    kv("protocol.kind", protocol_name(c.protocol));
    kv("protocol.w1", fmt_double(c.w1));
    kv("protocol.w2", fmt_double(c.w2));
    kv("protocol.w3", fmt_double(c.w3));
    kv("protocol.t_max_s", fmt_double(c.t_max_s));
    kv("recovery.enabled", has_recovery(c.protocol) ? "true" : "false");
    kv("radio.range_m", fmt_double(c.range_m));
    kv("radio.e_elec_nj_per_bit", fmt_double(c.e_elec_nj_per_bit));
    kv("radio.e_amp_pj_per_bit_m_exp", fmt_double(c.e_amp_pj_per_bit_m_exp));
    kv("radio.path_loss_exponent", std::to_string(c.path_loss_exponent));
    kv("energy.initial_j", fmt_double(c.initial_j));
    kv("packet.data_bytes", std::to_string(c.data_bytes));
    kv("packet.control_bytes", std::to_string(c.control_bytes));
    kv("mobility.mean_speed_mps", fmt_double(c.mean_speed_mps));
    kv("mobility.speed_stddev_mps", fmt_double(c.speed_stddev_mps));
    kv("mobility.turn_stddev_rad", fmt_double(c.turn_stddev_rad));
    kv("mobility.update_interval_s", fmt_double(c.update_interval_s));
    kv("round.ticks", std::to_string(c.ticks_per_round));
    kv("round.data_tick", std::to_string(c.data_tick));
    kv("round.inter_tick", std::to_string(c.inter_tick));
    kv("deca.hello_period_ticks", std::to_string(c.hello_period_ticks));
    kv("loc.fix_cost_j", fmt_double(c.fix_cost_j));
    kv("loc.fix_displacement_m", fmt_double(c.fix_displacement_m));
    kv("sink.x", fmt_double(c.sink.x));
    kv("sink.y", fmt_double(c.sink.y));
    kv("sim.nodes", std::to_string(c.nodes));
    kv("sim.max_rounds", std::to_string(c.max_rounds));
    kv("sim.seed", std::to_string(c.seed));
    return out.str();
}

std::vector<ConfigKeyInfo> describe_config_keys() {
    return {
        {"field.width", "float", "m", "1000", "baseline", "sensing field width"},
        {"field.height", "float", "m", "1000", "baseline", "sensing field height"},
        {"zones.rows", "int", "", "4", "baseline", "zone grid rows (rows*cols zones, position-based protocols)"},
        {"zones.cols", "int", "", "4", "baseline", "zone grid columns"},
        {"protocol.kind", "enum", "", "demc", "chosen",
         "one of deca, demc, demc_recovery, mar, grc, grc_recovery"},
        {"protocol.w1", "float", "", "per protocol", "chosen",
         "energy weight; defaults: grc/mar 0.7, demc 0.9, deca 0.6"},
        {"protocol.w2", "float", "", "per protocol", "chosen",
         "second election weight; defaults: grc/mar 0.3, demc 0.1, deca 0.3"},
        {"protocol.w3", "float", "", "per protocol", "chosen", "deca id weight; default 0.1"},
        {"protocol.t_max_s", "float", "s", "1", "chosen", "election timer window"},
        {"recovery.enabled", "bool", "", "per protocol", "chosen",
         "hop-by-hop recovery; implied by *_recovery protocol kinds"},
        {"radio.range_m", "float", "m", "353.553 (zone diagonal)", "derived",
         "transmission range; default derived from zone size, not a baseline value"},
        {"radio.e_elec_nj_per_bit", "float", "nJ/bit", "50", "baseline", "transceiver electronics energy"},
        {"radio.e_amp_pj_per_bit_m_exp", "float", "pJ/bit/m^exp", "0.0013", "baseline",
         "amplifier energy coefficient"},
        {"radio.path_loss_exponent", "int", "", "2", "chosen", "amplifier distance exponent, 2 or 4"},
        {"energy.initial_j", "float", "J", "3", "baseline", "battery energy per node at startup"},
        {"packet.data_bytes", "int", "bytes", "100", "baseline", "data packet size"},
        {"packet.control_bytes", "int", "bytes", "25", "baseline", "control/broadcast packet size"},
        {"mobility.mean_speed_mps", "float", "m/s", "5", "chosen", "mean node speed (experiment axis)"},
        {"mobility.speed_stddev_mps", "float", "m/s", "max(0.25, 0.2 * mean)", "derived", "speed draw stddev"},
        {"mobility.turn_stddev_rad", "float", "rad", "0.5", "chosen", "heading change stddev per update"},
        {"mobility.update_interval_s", "float", "s", "5", "chosen", "time between speed/heading redraws"},
        {"round.ticks", "int", "ticks", "20", "chosen", "ticks per round (1 tick = 1 s)"},
        {"round.data_tick", "int", "tick", "5", "chosen", "intra-cluster data tick"},
        {"round.inter_tick", "int", "tick", "10", "chosen", "inter-cluster forwarding tick"},
        {"deca.hello_period_ticks", "int", "ticks", "10", "chosen",
         "fastest hello cadence; a barely-moving node falls back to one hello per round"},
        {"loc.fix_cost_j", "float", "J", "0.0007", "chosen",
         "energy charged per position fix (position-based protocols)"},
        {"loc.fix_displacement_m", "float", "m", "25", "chosen",
         "displacement that triggers a position fix"},
        {"sink.x", "float", "m", "500", "chosen", "sink x coordinate"},
        {"sink.y", "float", "m", "500", "chosen", "sink y coordinate"},
        {"sim.nodes", "int", "", "100", "baseline", "number of sensor nodes (sink excluded)"},
        {"sim.max_rounds", "int", "rounds", "10000", "chosen",
         "round cap; a trial with no death by then reports a censored lifetime"},
        {"sim.seed", "int", "", "1", "chosen", "trial seed (flag > env MWSN_SEED > file)"},
    };
}

}  // namespace mwsn
