#include "sqsim/manifest.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "sqsim/error.hpp"
#include "sqsim/rng.hpp"
#include "sqsim/version.hpp"

namespace sqsim {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open input for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  const std::uint64_t h = fnv1a64(bytes.data(), bytes.size());
  std::ostringstream hex;
  hex << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& in : manifest.inputs) inputs[in] = file_digest(in);
  nlohmann::json j{{"tool", "sqsim"},
                   {"version", kVersion},
                   {"subcommand", manifest.subcommand},
                   {"config", manifest.config},
                   {"inputs", inputs},
                   {"seeds", manifest.seeds},
                   {"duration_sec", manifest.duration_sec}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw_io("write failed: " + path);
}

}  // namespace sqsim
