#pragma once

#include <vector>

#include "sqsim/error.hpp"

namespace sqsim::model {

// Architecture of the siamese encoder. Defaults follow the reference
// configuration: 1024-dim inputs, two bidirectional recurrent layers with
// 256 hidden units and chunk size 8, attention pooling over the second
// layer, and a 1024/512/256/128 ReLU head with a sigmoid output.
struct ModelConfig {
  int input_dim = 1024;
  int hidden = 256;
  int chunk = 8;
  std::vector<int> head = {1024, 512, 256, 128};
  double dropout = 0.2;

  // Width of the per-step encoder output (both directions concatenated)
  // and of the final question representation.
  int encoder_width() const { return 2 * hidden; }

  void validate() const {
    if (input_dim < 1) throw_schema("input_dim must be >= 1");
    if (hidden < 1) throw_schema("hidden must be >= 1");
    if (chunk < 1) throw_schema("chunk must be >= 1");
    if (hidden % chunk != 0)
      throw_schema("hidden (" + std::to_string(hidden) +
                   ") must be divisible by chunk (" + std::to_string(chunk) +
                   ")");
    for (int h : head)
      if (h < 1) throw_schema("head layer sizes must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0)
      throw_schema("dropout must be in [0, 1)");
  }

  bool operator==(const ModelConfig&) const = default;
};

}  // namespace sqsim::model
