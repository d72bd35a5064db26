#include "sqsim/dataset.hpp"

#include <cstdint>
#include <fstream>
#include <unordered_map>

#include "sqsim/error.hpp"

namespace sqsim {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

// Key for an unordered question pair.
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

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Original:
      return "original";
    case Provenance::Transitive:
      return "transitive";
    case Provenance::Symmetric:
      return "symmetric";
    case Provenance::Reflexive:
      return "reflexive";
  }
  return "original";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "original") return Provenance::Original;
  if (name == "transitive") return Provenance::Transitive;
  if (name == "symmetric") return Provenance::Symmetric;
  if (name == "reflexive") return Provenance::Reflexive;
  throw_schema("unknown provenance value: " + name);
}

int Dataset::intern(const std::string& text) {
  auto it = index.find(text);
  if (it != index.end()) return it->second;
  int id = static_cast<int>(questions.size());
  questions.push_back(text);
  index.emplace(text, id);
  return id;
}

int Dataset::positives() const {
  int n = 0;
  for (const auto& p : pairs) n += p.label;
  return n;
}

Dataset read_pairs_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open pair file: " + path);

  Dataset data;
  std::string line;
  if (!std::getline(in, line))
    throw_schema("pair file is empty (header row required): " + path);
  auto header = split_tabs(strip_cr(line));
  if (header.size() < 3 || header[0] != "question1" ||
      header[1] != "question2" || header[2] != "label")
    throw_schema("bad header row, expected question1<TAB>question2<TAB>label: " +
                 path);
  bool has_prov = header.size() >= 4 && header[3] == "provenance";

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() < 3 || cols.size() > 4)
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": expected 3 or 4 tab-separated columns");
    if (cols[0].empty() || cols[1].empty())
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": invalid-input: empty question");
    LabeledPair p;
    p.q1 = data.intern(cols[0]);
    p.q2 = data.intern(cols[1]);
    if (cols[2] == "0")
      p.label = 0;
    else if (cols[2] == "1")
      p.label = 1;
    else
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": label must be 0 or 1, got '" + cols[2] + "'");
    if (cols.size() == 4 && has_prov)
      p.prov = provenance_from_name(cols[3]);
    else if (cols.size() == 4)
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": 4 columns but header has no provenance column");
    data.pairs.push_back(p);
  }
  return data;
}

void write_pairs_tsv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write pair file: " + path);
  out << "question1\tquestion2\tlabel\tprovenance\n";
  for (const auto& p : data.pairs) {
    out << data.questions[p.q1] << '\t' << data.questions[p.q2] << '\t'
        << p.label << '\t' << provenance_name(p.prov) << '\n';
  }
  if (!out) throw_io("write failed: " + path);
}

void validate_dataset(const Dataset& data) {
  std::unordered_map<std::uint64_t, int> labels;  // unordered pair -> label
  std::unordered_map<std::uint64_t, bool> seen;   // ordered pair
  for (const auto& p : data.pairs) {
    auto ok = ordered_key(p.q1, p.q2);
    if (seen.count(ok))
      throw_schema("invalid-dataset: duplicate pair (" +
                   data.questions[p.q1] + ", " + data.questions[p.q2] + ")");
    seen.emplace(ok, true);
    auto uk = unordered_key(p.q1, p.q2);
    auto it = labels.find(uk);
    if (it == labels.end())
      labels.emplace(uk, p.label);
    else if (it->second != p.label)
      throw_schema("invalid-dataset: conflicting labels for pair (" +
                   data.questions[p.q1] + ", " + data.questions[p.q2] + ")");
  }
}

}  // namespace sqsim
