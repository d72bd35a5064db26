#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "sqsim/model/siamese.hpp"

namespace sqsim::model {

// Model file layout (all integers and floats little-endian):
//   magic "SQSM" | u32 version | u32 input_dim | u32 hidden | u32 chunk |
//   f64 dropout | u32 head_count | u32 head[i]... | u32 tensor_count |
//   per tensor: u16 name_len | name bytes | u32 rows | u32 cols |
//               f64 values in row-major order
// Values are written as 64-bit floats regardless of the in-memory scalar.

namespace detail {

inline constexpr char kMagic[4] = {'S', 'Q', 'S', 'M'};
inline constexpr std::uint32_t kVersion = 1;

inline void put_u16(std::ostream& os, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF)};
  os.write(b, 2);
}

inline void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b, 4);
}

inline void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  os.write(b, 8);
}

inline std::uint16_t get_u16(std::istream& is) {
  unsigned char b[2];
  if (!is.read(reinterpret_cast<char*>(b), 2))
    throw_schema("model file truncated");
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    throw_schema("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8))
    throw_schema("model file truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace detail

// Returns the trainable parameter count (also reported by the CLI on save).
template <class S>
std::size_t save_params(const SiameseParams<S>& p, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw_io("cannot write model file: " + path);
  os.write(detail::kMagic, 4);
  detail::put_u32(os, detail::kVersion);
  detail::put_u32(os, static_cast<std::uint32_t>(p.config.input_dim));
  detail::put_u32(os, static_cast<std::uint32_t>(p.config.hidden));
  detail::put_u32(os, static_cast<std::uint32_t>(p.config.chunk));
  detail::put_f64(os, p.config.dropout);
  detail::put_u32(os, static_cast<std::uint32_t>(p.config.head.size()));
  for (int h : p.config.head) detail::put_u32(os, static_cast<std::uint32_t>(h));

  std::uint32_t count = 0;
  visit_params(p, [&](const std::string&, const auto&) { ++count; });
  detail::put_u32(os, count);

  std::size_t values = 0;
  visit_params(p, [&](const std::string& name, const auto& m) {
    detail::put_u16(os, static_cast<std::uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    detail::put_u32(os, static_cast<std::uint32_t>(m.rows()));
    detail::put_u32(os, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        detail::put_f64(os, static_cast<double>(m(i, j)));
    values += static_cast<std::size_t>(m.size());
  });
  if (!os) throw_io("write failed: " + path);
  return values;
}

template <class S>
SiameseParams<S> load_params(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw_io("cannot open model file: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, detail::kMagic, 4) != 0)
    throw_schema("not a model file (bad magic): " + path);
  const std::uint32_t version = detail::get_u32(is);
  if (version != detail::kVersion)
    throw_schema("model file version mismatch (got " + std::to_string(version) +
                 ", expected " + std::to_string(detail::kVersion) + "): " + path);
  ModelConfig cfg;
  cfg.input_dim = static_cast<int>(detail::get_u32(is));
  cfg.hidden = static_cast<int>(detail::get_u32(is));
  cfg.chunk = static_cast<int>(detail::get_u32(is));
  cfg.dropout = detail::get_f64(is);
  const std::uint32_t head_count = detail::get_u32(is);
  cfg.head.clear();
  for (std::uint32_t i = 0; i < head_count; ++i)
    cfg.head.push_back(static_cast<int>(detail::get_u32(is)));
  cfg.validate();

  SiameseParams<S> p = SiameseParams<S>::zeros(cfg);
  std::uint32_t expected = 0;
  visit_params(p, [&](const std::string&, const auto&) { ++expected; });
  const std::uint32_t count = detail::get_u32(is);
  if (count != expected)
    throw_schema("model file tensor count mismatch: " + path);

  visit_params(p, [&](const std::string& name, auto& m) {
    const std::uint16_t len = detail::get_u16(is);
    std::string got(len, '\0');
    if (!is.read(got.data(), len)) throw_schema("model file truncated");
    if (got != name)
      throw_schema("model file tensor order mismatch (got '" + got +
                   "', expected '" + name + "'): " + path);
    const auto rows = static_cast<Eigen::Index>(detail::get_u32(is));
    const auto cols = static_cast<Eigen::Index>(detail::get_u32(is));
    if (rows != m.rows() || cols != m.cols())
      throw_schema("model file shape mismatch for tensor '" + name +
                   "': " + path);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        m(i, j) = static_cast<S>(detail::get_f64(is));
  });
  // The tensor table must account for the entire file.
  is.peek();
  if (!is.eof()) throw_schema("trailing bytes after model data: " + path);
  return p;
}

}  // namespace sqsim::model
