#pragma once

#include <optional>
#include <string>

#include "paramguide/model.hpp"

namespace paramguide {

struct QpumpSettings {
    double band_width = 0.0;  // rad/s
    int bands = 2;
};

struct LoadedConfig {
    DeviceConfig device;
    std::optional<QpumpSettings> qpump;
    std::string canonical;  // sorted, compact JSON of the input document
    std::string hash;       // sha256 of canonical, hex
};

// Throws ConfigError on malformed JSON, unknown keys or missing fields, and
// InvalidParameterError/ConfigError from DeviceConfig::validate.
LoadedConfig parse_config(const std::string& json_text);
LoadedConfig load_config(const std::string& path);

std::string sha256_hex(const std::string& data);

} // namespace paramguide
