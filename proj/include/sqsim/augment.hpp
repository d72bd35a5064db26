#pragma once

#include <string>
#include <vector>

#include "sqsim/dataset.hpp"

namespace sqsim::augment {

// A derived pair that was dropped because its label contradicted either an
// input pair or an earlier derivation for the same unordered pair.
struct Conflict {
  std::string q1;
  std::string q2;
  int kept_label = 0;
  int dropped_label = 0;
  std::string via;  // the shared middle question
};

struct StageCount {
  std::string name;  // "original", "transitive", ...
  int pairs = 0;
  int positive = 0;
  int negative = 0;
};

struct Summary {
  std::vector<StageCount> stages;  // counts after each applied stage
  std::vector<Conflict> conflicts;
};

// One derivation pass: for every positive pair (A,B) and every other pair
// sharing B in either orientation, (B,C,l) or (C,B,l), derive (A,C,l).
// Candidates whose unordered pair already exists keep the existing label
// (conflicting derivations are dropped and recorded); among derivations the
// first one wins. Derived pairs never act as premises within the pass.
Dataset apply_transitive(const Dataset& data, Summary* summary = nullptr);

// Append (B,A,l) for every (A,B,l) with A != B whose mirror is absent.
Dataset apply_symmetric(const Dataset& data);

// Append (Q,Q,1) for every indexed question with no existing self pair.
Dataset apply_reflexive(const Dataset& data);

// transitive -> symmetric -> reflexive with per-stage counts recorded.
Dataset augment_all(const Dataset& data, Summary& summary);

// Subset/reordering of stages for ablation runs; stage codes are
// "t", "s", "r".
Dataset apply_stages(const Dataset& data, const std::vector<std::string>& stages,
                     Summary& summary);

StageCount count_stage(const std::string& name, const Dataset& data);

std::string summary_to_json(const Summary& summary);

}  // namespace sqsim::augment
