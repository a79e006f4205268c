#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trajsim/scenarios.hpp"

namespace trajsim {

struct ParsedConfig {
  ScenarioConfig config;  // resolved
  std::string canonical;  // canonical JSON text of the input document
  std::string hash;       // 16 hex digits, FNV-1a 64 of `canonical`
  bool seed_from_config = false;
};

/// Strict JSON parse: unknown keys raise SchemaError with their key path, unit-bearing
/// fields that are missing or written without a unit suffix raise UnitsError.
/// Relative field paths are taken relative to `base_dir`. When the document has no
/// "seed", TRAJSIM_SEED is used, then 0.
ParsedConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
ParsedConfig parse_config(const std::filesystem::path& path);

std::string fnv1a_hex(const std::string& text);

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string start_timestamp;  // UTC, ISO 8601
  std::vector<std::string> output_paths;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
std::string utc_timestamp();

/// Seed from TRAJSIM_SEED, if set and numeric.
std::optional<std::uint64_t> env_seed();

}  // namespace trajsim
