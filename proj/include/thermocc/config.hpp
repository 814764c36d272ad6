#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "thermocc/detector.hpp"
#include "thermocc/framing.hpp"
#include "thermocc/modem.hpp"
#include "thermocc/thermal_env.hpp"

namespace thermocc {

struct FramingConfig {
    bool parity = true;
    OpcodeTable opcodes = OpcodeTable::default_table();
    std::optional<RxWindow> rx_window;
    bool warmup = false;
};

/// One JSON document with top-level objects channel, environment, sensor,
/// detector and framing. Unknown keys are rejected.
struct Config {
    ChannelParams channel;
    EnvironmentModel environment;
    SensorModel sensor;
    DetectorConfig detector;
    FramingConfig framing;

    /// Cross-section consistency (gamma and sample rate appear in both the
    /// channel and sensor sections). Throws Error; returns warnings.
    std::vector<std::string> validate() const;
};

/// The frozen reference parameter set (small office room, centralized AC,
/// closed-chassis desktop receiver).
Config default_config();

Config parse_config(const std::string& json_text);
Config load_config(const std::filesystem::path& path);

}  // namespace thermocc
