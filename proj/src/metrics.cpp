#include "sqsim/train/metrics.hpp"

#include "sqsim/error.hpp"

namespace sqsim::train {

Metrics f1_score(const std::vector<int>& predicted,
                 const std::vector<int>& truth) {
  if (predicted.size() != truth.size())
    throw_runtime("f1_score: prediction/truth length mismatch");
  Metrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool t = truth[i] == 1;
    if (p && t)
      ++m.tp;
    else if (p && !t)
      ++m.fp;
    else if (!p && t)
      ++m.fn;
    else
      ++m.tn;
  }
  m.precision = (m.tp + m.fp) > 0
                    ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp)
                    : 0.0;
  m.recall = (m.tp + m.fn) > 0
                 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn)
                 : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  const auto total = predicted.size();
  m.accuracy = total > 0
                   ? static_cast<double>(m.tp + m.tn) / static_cast<double>(total)
                   : 0.0;
  return m;
}

std::vector<int> majority_vote(const std::vector<std::vector<int>>& votes) {
  if (votes.size() != 5)
    throw_runtime("majority_vote: exactly five vote lists required");
  const std::size_t n = votes[0].size();
  for (const auto& v : votes)
    if (v.size() != n) throw_runtime("majority_vote: ragged vote lists");
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    int ones = 0;
    for (const auto& v : votes) ones += v[i] == 1 ? 1 : 0;
    out[i] = ones >= 3 ? 1 : 0;
  }
  return out;
}

}  // namespace sqsim::train
