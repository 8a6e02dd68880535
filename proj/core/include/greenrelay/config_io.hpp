#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "greenrelay/model.hpp"

namespace greenrelay {

/// Parses a flat `key = value` document. Blank lines and `#` comments are
/// ignored; keys not present keep the value from `base`. Unknown keys and
/// malformed values throw ConfigError.
///
/// `renewable_states` is written as `value:probability` pairs separated by
/// commas, e.g. `195:0.6, 100:0.4`. `num_utility` is `log` or `linear`.
SystemConfig parse_config(std::string_view text, const SystemConfig& base = SystemConfig{});

SystemConfig load_config(const std::filesystem::path& path, const SystemConfig& base = SystemConfig{});

/// Writes every key in a form parse_config reads back exactly.
std::string format_config(const SystemConfig& cfg);

} // namespace greenrelay
