#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace sqsim {

enum class Provenance { Original, Transitive, Symmetric, Reflexive };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

// A labeled question pair. q1/q2 index into Dataset::questions so equal
// question texts share one id (identity is exact string equality of the
// canonical, preprocessed text).
struct LabeledPair {
  int q1 = -1;
  int q2 = -1;
  int label = 0;  // 0 or 1
  Provenance prov = Provenance::Original;
};

struct Dataset {
  std::vector<std::string> questions;             // id -> canonical text
  std::unordered_map<std::string, int> index;     // canonical text -> id
  std::vector<LabeledPair> pairs;

  int intern(const std::string& text);
  int positives() const;
};

// Pair TSV files: header row `question1<TAB>question2<TAB>label` with an
// optional fourth `provenance` column, UTF-8 throughout.
Dataset read_pairs_tsv(const std::string& path);
void write_pairs_tsv(const Dataset& data, const std::string& path);

// Rejects duplicate ordered pairs and unordered pairs carrying two labels.
void validate_dataset(const Dataset& data);

}  // namespace sqsim
