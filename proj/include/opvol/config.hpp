#pragma once

// JSON scenario files. Every key is optional; unknown keys are rejected and
// errors name the offending field.

#include "opvol/experiments.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace opvol {

struct LoadedConfig {
  CoupledScenario scenario;
  /// Seed given in the file, if any.
  std::optional<std::uint64_t> seed;
};

/// Parses and validates a scenario document. Throws ConfigError.
LoadedConfig parse_config(const std::string& text);
LoadedConfig load_config_file(const std::string& path);

/// Default master seed when no other source provides one.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Precedence: flag, then config file, then the OPVOL_SEED value, then kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config,
                           const char* env_value);

/// Parses a decimal unsigned 64-bit seed; throws ConfigError naming `field`.
std::uint64_t parse_seed(const std::string& text, const std::string& field);

}  // namespace opvol
