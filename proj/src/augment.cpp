#include "sqsim/augment.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sqsim/error.hpp"

namespace sqsim::augment {

namespace {

std::uint64_t unordered_key(int a, int b) {
  std::uint32_t lo = static_cast<std::uint32_t>(a < b ? a : b);
  std::uint32_t hi = static_cast<std::uint32_t>(a < b ? b : a);
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

std::uint64_t ordered_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

StageCount count_stage(const std::string& name, const Dataset& data) {
  StageCount c;
  c.name = name;
  c.pairs = static_cast<int>(data.pairs.size());
  c.positive = data.positives();
  c.negative = c.pairs - c.positive;
  return c;
}

Dataset apply_transitive(const Dataset& data, Summary* summary) {
  validate_dataset(data);
  Dataset out = data;

  // Label per unordered pair in the input; validate_dataset guarantees
  // consistency.
  std::unordered_map<std::uint64_t, int> input_label;
  // Question id -> indices of pairs it appears in, ascending.
  std::unordered_map<int, std::vector<int>> by_question;
  for (int i = 0; i < static_cast<int>(data.pairs.size()); ++i) {
    const auto& p = data.pairs[i];
    input_label.emplace(unordered_key(p.q1, p.q2), p.label);
    by_question[p.q1].push_back(i);
    if (p.q2 != p.q1) by_question[p.q2].push_back(i);
  }

  std::unordered_map<std::uint64_t, int> derived_label;
  for (int i = 0; i < static_cast<int>(data.pairs.size()); ++i) {
    const auto& first = data.pairs[i];
    if (first.label != 1) continue;
    const int a = first.q1;
    const int b = first.q2;
    auto it = by_question.find(b);
    if (it == by_question.end()) continue;
    for (int j : it->second) {
      if (j == i) continue;
      const auto& second = data.pairs[j];
      int c;
      if (second.q1 == b)
        c = second.q2;
      else if (second.q2 == b)
        c = second.q1;
      else
        continue;
      if (c == a) continue;
      const int label = second.label;
      const auto key = unordered_key(a, c);
      auto in = input_label.find(key);
      if (in != input_label.end()) {
        if (in->second != label && summary)
          summary->conflicts.push_back({out.questions[a], out.questions[c],
                                        in->second, label, out.questions[b]});
        continue;
      }
      auto dv = derived_label.find(key);
      if (dv != derived_label.end()) {
        if (dv->second != label && summary)
          summary->conflicts.push_back({out.questions[a], out.questions[c],
                                        dv->second, label, out.questions[b]});
        continue;
      }
      derived_label.emplace(key, label);
      out.pairs.push_back({a, c, label, Provenance::Transitive});
    }
  }
  return out;
}

Dataset apply_symmetric(const Dataset& data) {
  validate_dataset(data);
  Dataset out = data;
  std::unordered_set<std::uint64_t> present;
  for (const auto& p : data.pairs) present.insert(ordered_key(p.q1, p.q2));
  for (const auto& p : data.pairs) {
    if (p.q1 == p.q2) continue;
    if (present.count(ordered_key(p.q2, p.q1))) continue;
    present.insert(ordered_key(p.q2, p.q1));
    out.pairs.push_back({p.q2, p.q1, p.label, Provenance::Symmetric});
  }
  return out;
}

Dataset apply_reflexive(const Dataset& data) {
  validate_dataset(data);
  Dataset out = data;
  std::unordered_set<int> self_paired;
  for (const auto& p : data.pairs)
    if (p.q1 == p.q2) self_paired.insert(p.q1);
  for (int q = 0; q < static_cast<int>(data.questions.size()); ++q) {
    if (self_paired.count(q)) continue;
    out.pairs.push_back({q, q, 1, Provenance::Reflexive});
  }
  return out;
}

Dataset apply_stages(const Dataset& data, const std::vector<std::string>& stages,
                     Summary& summary) {
  Dataset cur = data;
  validate_dataset(cur);
  summary.stages.push_back(count_stage("original", cur));
  for (const auto& s : stages) {
    if (s == "t") {
      cur = apply_transitive(cur, &summary);
      summary.stages.push_back(count_stage("transitive", cur));
    } else if (s == "s") {
      cur = apply_symmetric(cur);
      summary.stages.push_back(count_stage("symmetric", cur));
    } else if (s == "r") {
      cur = apply_reflexive(cur);
      summary.stages.push_back(count_stage("reflexive", cur));
    } else {
      throw_usage("unknown augmentation stage '" + s + "' (expected t, s or r)");
    }
  }
  return cur;
}

Dataset augment_all(const Dataset& data, Summary& summary) {
  return apply_stages(data, {"t", "s", "r"}, summary);
}

std::string summary_to_json(const Summary& summary) {
  nlohmann::json j;
  j["stages"] = nlohmann::json::array();
  for (const auto& s : summary.stages) {
    j["stages"].push_back({{"name", s.name},
                           {"pairs", s.pairs},
                           {"positive", s.positive},
                           {"negative", s.negative}});
  }
  j["stage_counts"] = nlohmann::json::array();
  for (const auto& s : summary.stages) j["stage_counts"].push_back(s.pairs);
  j["conflicts_dropped"] = summary.conflicts.size();
  j["conflicts"] = nlohmann::json::array();
  for (const auto& c : summary.conflicts) {
    j["conflicts"].push_back({{"q1", c.q1},
                              {"q2", c.q2},
                              {"kept_label", c.kept_label},
                              {"dropped_label", c.dropped_label},
                              {"via", c.via}});
  }
  return j.dump(2) + "\n";
}

}  // namespace sqsim::augment
