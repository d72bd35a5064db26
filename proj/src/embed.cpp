#include "sqsim/embed.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "sqsim/error.hpp"
#include "sqsim/preproc.hpp"
#include "sqsim/rng.hpp"

namespace sqsim::embed {

Combine combine_from_name(const std::string& name) {
  if (name == "mean") return Combine::Mean;
  if (name == "sum") return Combine::Sum;
  throw_usage("embedding combine mode must be 'mean' or 'sum', got '" + name +
              "'");
}

VectorXd average_layers(const VectorXd& layer0, const VectorXd& layer1,
                        const VectorXd& layer2) {
  if (layer0.size() != layer1.size() || layer0.size() != layer2.size())
    throw_schema("layer dimension mismatch in embedding record");
  return (layer0 + layer1 + layer2) / 3.0;
}

bool EmbeddingStore::contains(const std::string& question) const {
  return entries_.count(question) != 0;
}

const MatrixXd& EmbeddingStore::lookup(const std::string& question) const {
  auto it = entries_.find(question);
  if (it == entries_.end())
    throw_schema("missing embedding for question: " + question);
  return it->second;
}

void EmbeddingStore::insert(const std::string& question, MatrixXd emb) {
  if (emb.cols() < 1) throw_schema("embedding with zero tokens: " + question);
  if (!emb.allFinite())
    throw_schema("embedding contains NaN or Inf: " + question);
  if (dim_ == 0)
    dim_ = static_cast<int>(emb.rows());
  else if (emb.rows() != dim_)
    throw_schema("embedding dimension mismatch for question: " + question);
  auto tokens = preproc::tokenize(question);
  if (static_cast<Eigen::Index>(tokens.size()) != emb.cols())
    throw_schema("embedding token count (" + std::to_string(emb.cols()) +
                 ") does not match tokenized question (" +
                 std::to_string(tokens.size()) + "): " + question);
  auto it = entries_.find(question);
  if (it != entries_.end()) {
    if (it->second.rows() != emb.rows() || it->second.cols() != emb.cols() ||
        it->second != emb)
      throw_schema("duplicate question with differing vectors: " + question);
    return;
  }
  order_.push_back(question);
  entries_.emplace(question, std::move(emb));
}

namespace {

MatrixXd parse_token_matrix(const nlohmann::json& rows, const std::string& q) {
  if (!rows.is_array() || rows.empty())
    throw_schema("embedding array must be a non-empty list of rows: " + q);
  const std::size_t t = rows.size();
  std::size_t d = 0;
  MatrixXd emb;
  for (std::size_t i = 0; i < t; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.empty())
      throw_schema("embedding row must be a non-empty array: " + q);
    if (i == 0) {
      d = row.size();
      emb.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t));
    } else if (row.size() != d) {
      throw_schema("ragged embedding rows for question: " + q);
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!row[j].is_number())
        throw_schema("non-numeric embedding value for question: " + q);
      emb(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          row[j].get<double>();
    }
  }
  return emb;
}

}  // namespace

EmbeddingStore load_store(const std::string& path, Combine combine) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open embeddings file: " + path);
  EmbeddingStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": malformed JSON record: " + e.what());
    }
    if (!j.is_object() || !j.contains("q") || !j["q"].is_string())
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": record must be an object with a string 'q'");
    const std::string q = j["q"].get<std::string>();
    MatrixXd emb;
    if (j.contains("emb")) {
      emb = parse_token_matrix(j["emb"], q);
    } else if (j.contains("layers")) {
      const auto& layers = j["layers"];
      if (!layers.is_array() || layers.size() != 3)
        throw_schema(path + ":" + std::to_string(lineno) +
                     ": 'layers' must hold exactly 3 layer arrays");
      MatrixXd l0 = parse_token_matrix(layers[0], q);
      MatrixXd l1 = parse_token_matrix(layers[1], q);
      MatrixXd l2 = parse_token_matrix(layers[2], q);
      if (l0.rows() != l1.rows() || l0.rows() != l2.rows() ||
          l0.cols() != l1.cols() || l0.cols() != l2.cols())
        throw_schema(path + ":" + std::to_string(lineno) +
                     ": layer shape mismatch for question: " + q);
      emb.resize(l0.rows(), l0.cols());
      for (Eigen::Index t = 0; t < l0.cols(); ++t)
        emb.col(t) = average_layers(l0.col(t), l1.col(t), l2.col(t));
      if (combine == Combine::Sum) emb *= 3.0;
    } else {
      throw_schema(path + ":" + std::to_string(lineno) +
                   ": record needs an 'emb' or 'layers' field");
    }
    try {
      store.insert(q, std::move(emb));
    } catch (const Error& e) {
      throw Error(e.kind(),
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return store;
}

void save_store(const EmbeddingStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write embeddings file: " + path);
  for (const auto& q : store.questions()) {
    const MatrixXd& emb = store.lookup(q);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index t = 0; t < emb.cols(); ++t) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index i = 0; i < emb.rows(); ++i) row.push_back(emb(i, t));
      rows.push_back(std::move(row));
    }
    nlohmann::json j;
    j["q"] = q;
    j["emb"] = std::move(rows);
    out << j.dump() << '\n';
  }
  if (!out) throw_io("write failed: " + path);
}

MatrixXd stub_embed(const std::vector<std::string>& tokens, int dim,
                    std::uint64_t seed) {
  if (dim < 1) throw_schema("stub embedding dimension must be >= 1");
  if (tokens.empty()) throw_schema("stub_embed needs at least one token");
  MatrixXd emb(dim, static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const std::uint64_t token_hash = fnv1a64(tokens[t].data(), tokens[t].size());
    for (int i = 0; i < dim; ++i) {
      std::uint64_t x = token_hash;
      x = mix_u64(x ^ (seed * 0x9E3779B97F4A7C15ull));
      x = mix_u64(x ^ (static_cast<std::uint64_t>(t) * 0xC2B2AE3D27D4EB4Full));
      x = mix_u64(x ^ (static_cast<std::uint64_t>(i) * 0x165667B19E3779F9ull));
      emb(i, static_cast<Eigen::Index>(t)) =
          2.0 * (static_cast<double>(x >> 11) * 0x1.0p-53) - 1.0;
    }
  }
  return emb;
}

}  // namespace sqsim::embed
