#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqsim/model/config.hpp"

namespace sqsim::train {

// Training hyperparameters plus the architecture they instantiate.
// Defaults mirror the reference setup: Adam at 0.001, batches of 256,
// 100 epochs, 20% dropout, and five replicas seeded base+index.
struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 256;
  int epochs = 100;
  double dropout = 0.2;
  int chunk = 8;
  int hidden = 256;
  int input_dim = 1024;
  std::vector<int> head = {1024, 512, 256, 128};
  std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
  std::string precision = "f64";  // "f64" | "f32"
  double forget_bias = 0.0;
  std::string emb_combine = "mean";

  model::ModelConfig model_config() const {
    model::ModelConfig m;
    m.input_dim = input_dim;
    m.hidden = hidden;
    m.chunk = chunk;
    m.head = head;
    m.dropout = dropout;
    return m;
  }

  void set_base_seed(std::uint64_t base) {
    seeds.clear();
    for (std::uint64_t i = 0; i < 5; ++i) seeds.push_back(base + i);
  }

  // Strict validation used at the CLI boundary; library callers may run
  // degenerate configurations (e.g. identical seeds) deliberately.
  void validate() const;

  nlohmann::json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
  static TrainConfig from_json_file(const std::string& path);
};

}  // namespace sqsim::train
