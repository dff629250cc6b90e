#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bhsim/engine.hpp"

namespace bh::scenario {

/// Raised for malformed scenario text. The message names the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses INI-style scenario text on top of the built-in defaults. Unknown
/// sections or keys, unparsable numbers and out-of-range values all throw
/// ConfigError. The returned config has passed SimConfig::validate().
engine::SimConfig parse(std::istream& in);
engine::SimConfig load(const std::filesystem::path& path);

/// Canonical text for a config; parse(render(c)) reproduces c.
std::string render(const engine::SimConfig& config);

}  // namespace bh::scenario
