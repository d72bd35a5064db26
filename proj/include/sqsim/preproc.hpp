#pragma once

#include <set>
#include <string>
#include <vector>

namespace sqsim::preproc {

// Punctuation code points that get isolated from the surrounding letters.
// The default covers Arabic sentence punctuation plus the usual Latin set;
// the membership is configurable through a text file (one code point per
// whitespace-separated run).
class PunctuationSet {
 public:
  PunctuationSet() = default;
  explicit PunctuationSet(std::set<char32_t> chars);

  static PunctuationSet defaults();
  static PunctuationSet from_file(const std::string& path);

  bool contains(char32_t cp) const { return chars_.count(cp) != 0; }
  const std::set<char32_t>& chars() const { return chars_; }

 private:
  std::set<char32_t> chars_;
};

// Decode/encode helpers; all preprocessing operates on Unicode scalar
// values with no normalization applied.
std::u32string decode_utf8(const std::string& text);
std::string encode_utf8(const std::u32string& cps);

// Surround every configured punctuation character with single spaces,
// collapse whitespace runs and trim. Character order and content are
// otherwise unchanged. Throws on input that is empty after trimming.
std::string separate_punctuation(const std::string& text,
                                 const PunctuationSet& punct);

// Whitespace tokenization of an already punctuation-separated question.
// Throws on all-whitespace input.
std::vector<std::string> tokenize(const std::string& text);

}  // namespace sqsim::preproc
