#include "sqsim/preproc.hpp"

#include <fstream>
#include <sstream>

#include "sqsim/error.hpp"

namespace sqsim::preproc {

namespace {

bool is_space(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v';
}

}  // namespace

PunctuationSet::PunctuationSet(std::set<char32_t> chars)
    : chars_(std::move(chars)) {
  if (chars_.empty()) throw_schema("punctuation set must not be empty");
}

PunctuationSet PunctuationSet::defaults() {
  return PunctuationSet(std::set<char32_t>{
      U'،',  // Arabic comma
      U'؟',  // Arabic question mark
      U'؛',  // Arabic semicolon
      U'.', U',', U'!', U'?', U':', U';', U'"', U'\'', U'(', U')',
  });
}

PunctuationSet PunctuationSet::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open punctuation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::set<char32_t> chars;
  for (char32_t cp : decode_utf8(buf.str())) {
    if (!is_space(cp)) chars.insert(cp);
  }
  if (chars.empty())
    throw_schema("punctuation file contains no characters: " + path);
  return PunctuationSet(std::move(chars));
}

std::u32string decode_utf8(const std::string& text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto n = text.size();
  while (i < n) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      throw_schema("invalid UTF-8 byte in input");
    }
    if (i + len > n) throw_schema("truncated UTF-8 sequence in input");
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) throw_schema("invalid UTF-8 continuation byte");
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMin[len]) throw_schema("overlong UTF-8 sequence");
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw_schema("invalid Unicode scalar value");
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::string separate_punctuation(const std::string& text,
                                 const PunctuationSet& punct) {
  std::u32string cps = decode_utf8(text);
  std::u32string spaced;
  spaced.reserve(cps.size() + 8);
  for (char32_t cp : cps) {
    if (punct.contains(cp)) {
      spaced.push_back(U' ');
      spaced.push_back(cp);
      spaced.push_back(U' ');
    } else if (is_space(cp)) {
      spaced.push_back(U' ');
    } else {
      spaced.push_back(cp);
    }
  }
  // Collapse runs of spaces and trim the ends.
  std::u32string out;
  out.reserve(spaced.size());
  for (char32_t cp : spaced) {
    if (cp == U' ' && (out.empty() || out.back() == U' ')) continue;
    out.push_back(cp);
  }
  if (!out.empty() && out.back() == U' ') out.pop_back();
  if (out.empty()) throw_schema("invalid-input: question is empty");
  return encode_utf8(out);
}

std::vector<std::string> tokenize(const std::string& text) {
  std::u32string cps = decode_utf8(text);
  std::vector<std::string> tokens;
  std::u32string cur;
  for (char32_t cp : cps) {
    if (is_space(cp)) {
      if (!cur.empty()) {
        tokens.push_back(encode_utf8(cur));
        cur.clear();
      }
    } else {
      cur.push_back(cp);
    }
  }
  if (!cur.empty()) tokens.push_back(encode_utf8(cur));
  if (tokens.empty()) throw_schema("invalid-input: question is empty");
  return tokens;
}

}  // namespace sqsim::preproc
