#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace sqsim {

// Content hash of a file (FNV-1a 64 over the raw bytes), hex encoded.
std::string file_digest(const std::string& path);

// Every CLI run writes a manifest beside its outputs: what ran, with which
// resolved configuration, on which exact inputs, under which seeds, and how
// long it took.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;
  std::vector<std::string> inputs;
  std::vector<std::uint64_t> seeds;
  double duration_sec = 0.0;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace sqsim
