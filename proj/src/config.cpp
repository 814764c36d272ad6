#include "thermocc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace thermocc {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw Error("config: unknown key '" + path + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw Error("config: '" + path + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t get_u64(const json& obj, const std::string& path, const char* key,
                      std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw Error("config: '" + path + key + "' must be an integer");
    }
    return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw Error("config: '" + path + key + "' must be a boolean");
    return v.get<bool>();
}

std::pair<double, double> get_pair(const json& obj, const std::string& path, const char* key,
                                   std::pair<double, double> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw Error("config: '" + path + key + "' must be an array of two numbers");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void parse_channel(const json& obj, ChannelParams& p) {
    const std::string path = "channel.";
    check_keys(obj, path,
               {"slot_T", "temp_H", "temp_L", "diff_D", "observable_O", "gamma", "mu",
                "maf_window_w", "sample_rate"});
    p.slot_T = get_number(obj, path, "slot_T", p.slot_T);
    p.temp_H = get_number(obj, path, "temp_H", p.temp_H);
    p.temp_L = get_number(obj, path, "temp_L", p.temp_L);
    p.diff_D = obj.contains("diff_D") ? get_number(obj, path, "diff_D", 0.0)
                                      : (p.temp_H - p.temp_L);
    if (obj.contains("observable_O") && !obj.at("observable_O").is_null()) {
        p.observable_O = get_number(obj, path, "observable_O", 0.0);
    }
    p.gamma = get_number(obj, path, "gamma", p.gamma);
    p.mu = get_number(obj, path, "mu", p.mu);
    p.maf_window_w = static_cast<std::size_t>(get_u64(obj, path, "maf_window_w", p.maf_window_w));
    p.sample_rate = get_number(obj, path, "sample_rate", p.sample_rate);
}

void parse_environment(const json& obj, EnvironmentModel& e) {
    const std::string path = "environment.";
    check_keys(obj, path,
               {"ascent_rate", "descent_rate", "ambient_temp", "sensor_offset", "noise_sigma",
                "rng_seed"});
    e.ascent_rate = get_number(obj, path, "ascent_rate", e.ascent_rate);
    e.descent_rate = get_number(obj, path, "descent_rate", e.descent_rate);
    e.ambient_temp = get_number(obj, path, "ambient_temp", e.ambient_temp);
    e.sensor_offset = get_number(obj, path, "sensor_offset", e.sensor_offset);
    e.noise_sigma = get_number(obj, path, "noise_sigma", e.noise_sigma);
    e.rng_seed = get_u64(obj, path, "rng_seed", e.rng_seed);
}

void parse_sensor(const json& obj, SensorModel& s) {
    const std::string path = "sensor.";
    check_keys(obj, path, {"resolution_gamma", "sample_rate"});
    s.resolution_gamma = get_number(obj, path, "resolution_gamma", s.resolution_gamma);
    s.sample_rate = get_number(obj, path, "sample_rate", s.sample_rate);
}

void parse_detector(const json& obj, DetectorConfig& d) {
    const std::string path = "detector.";
    check_keys(obj, path,
               {"quiet_window", "min_cycles", "period_band", "amplitude_floor", "alarm_threshold",
                "detrend_window_factor"});
    const auto quiet = get_pair(obj, path, "quiet_window", {d.quiet_start_s, d.quiet_end_s});
    d.quiet_start_s = quiet.first;
    d.quiet_end_s = quiet.second;
    d.min_cycles = static_cast<int>(get_u64(obj, path, "min_cycles", d.min_cycles));
    const auto band = get_pair(obj, path, "period_band", {d.period_min_s, d.period_max_s});
    d.period_min_s = band.first;
    d.period_max_s = band.second;
    d.amplitude_floor = get_number(obj, path, "amplitude_floor", d.amplitude_floor);
    d.alarm_threshold = get_number(obj, path, "alarm_threshold", d.alarm_threshold);
    d.detrend_window_factor =
        get_number(obj, path, "detrend_window_factor", d.detrend_window_factor);
}

void parse_framing(const json& obj, FramingConfig& f) {
    const std::string path = "framing.";
    check_keys(obj, path, {"parity", "opcodes", "rx_window", "warmup"});
    f.parity = get_bool(obj, path, "parity", f.parity);
    f.warmup = get_bool(obj, path, "warmup", f.warmup);
    if (obj.contains("rx_window") && !obj.at("rx_window").is_null()) {
        const auto w = get_pair(obj, path, "rx_window", {0.0, 0.0});
        f.rx_window = RxWindow{w.first, w.second};
    }
    if (obj.contains("opcodes")) {
        const json& arr = obj.at("opcodes");
        if (!arr.is_array() || arr.empty()) {
            throw Error("config: 'framing.opcodes' must be a non-empty array");
        }
        OpcodeTable table;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& entry = arr[i];
            const std::string epath = path + "opcodes[" + std::to_string(i) + "].";
            if (!entry.is_object()) throw Error("config: '" + epath + "' must be an object");
            check_keys(entry, epath, {"code", "name", "payload_bits"});
            if (!entry.contains("code") || !entry.at("code").is_string()) {
                throw Error("config: '" + epath + "code' must be a 3-bit binary string");
            }
            const std::string code = entry.at("code").get<std::string>();
            if (code.size() != 3 || code.find_first_not_of("01") != std::string::npos) {
                throw Error("config: '" + epath + "code' must be a 3-bit binary string");
            }
            std::uint8_t opcode = 0;
            for (char c : code) opcode = static_cast<std::uint8_t>((opcode << 1) | (c == '1'));
            std::string name = "op" + code;
            if (entry.contains("name")) {
                if (!entry.at("name").is_string()) {
                    throw Error("config: '" + epath + "name' must be a string");
                }
                name = entry.at("name").get<std::string>();
            }
            const std::uint64_t nbits = get_u64(entry, epath, "payload_bits", 0);
            if (nbits < 1) throw Error("config: '" + epath + "payload_bits' must be >= 1");
            table.set(opcode, name, static_cast<std::size_t>(nbits));
        }
        f.opcodes = table;
    }
}

}  // namespace

std::vector<std::string> Config::validate() const {
    environment.validate();
    sensor.validate();
    detector.validate();
    std::vector<std::string> warnings = channel.validate();
    if (std::fabs(channel.gamma - sensor.resolution_gamma) > 1e-12) {
        throw Error("config: channel.gamma and sensor.resolution_gamma disagree");
    }
    if (std::fabs(channel.sample_rate - sensor.sample_rate) > 1e-12) {
        throw Error("config: channel.sample_rate and sensor.sample_rate disagree");
    }
    return warnings;
}

Config default_config() {
    return Config{};  // member initializers carry the reference values
}

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw Error("config: top level must be an object");
    check_keys(root, "", {"channel", "environment", "sensor", "detector", "framing"});

    Config cfg = default_config();
    if (root.contains("channel")) parse_channel(root.at("channel"), cfg.channel);
    if (root.contains("environment")) parse_environment(root.at("environment"), cfg.environment);
    if (root.contains("sensor")) parse_sensor(root.at("sensor"), cfg.sensor);
    if (root.contains("detector")) parse_detector(root.at("detector"), cfg.detector);
    if (root.contains("framing")) parse_framing(root.at("framing"), cfg.framing);
    cfg.validate();
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace thermocc
