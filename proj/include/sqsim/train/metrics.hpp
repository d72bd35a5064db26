#pragma once

#include <vector>

namespace sqsim::train {

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

// Positive class is 1; any zero denominator yields 0 for that measure.
Metrics f1_score(const std::vector<int>& predicted,
                 const std::vector<int>& truth);

// Per-item label with >= 3 of the 5 votes. Requires exactly five
// equal-length label lists.
std::vector<int> majority_vote(const std::vector<std::vector<int>>& votes);

}  // namespace sqsim::train
