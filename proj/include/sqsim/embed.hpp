#pragma once

#include <Eigen/Core>
#include <string>
#include <unordered_map>
#include <vector>

namespace sqsim::embed {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// How a three-layer record is collapsed into one vector per token. The
// difference is a constant factor 3 that downstream weights absorb.
enum class Combine { Mean, Sum };

Combine combine_from_name(const std::string& name);

// Elementwise arithmetic mean of the three encoder layers of one token.
VectorXd average_layers(const VectorXd& layer0, const VectorXd& layer1,
                        const VectorXd& layer2);

// Per-token contextual embeddings for a set of questions, keyed by the
// canonical question text. A question with T tokens maps to a dim x T
// matrix (one column per token). Immutable after load.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& question) const;

  // Missing questions are a hard error, never a zero vector.
  const MatrixXd& lookup(const std::string& question) const;

  // Insertion validates dimensions, finiteness and duplicate consistency.
  void insert(const std::string& question, MatrixXd emb);

  const std::vector<std::string>& questions() const { return order_; }

 private:
  int dim_ = 0;
  std::vector<std::string> order_;  // insertion order, for stable saves
  std::unordered_map<std::string, MatrixXd> entries_;
};

// JSONL with one object per line:
//   {"q": <text>, "emb": [[f,...],...]}            (T x D)
//   {"q": <text>, "layers": [[[f,...],...] x 3]}   (3 x T x D, combined)
EmbeddingStore load_store(const std::string& path,
                          Combine combine = Combine::Mean);
void save_store(const EmbeddingStore& store, const std::string& path);

// Deterministic stand-in for the real contextual embedder: every value is a
// pure integer-hash function of (token text, position, seed, coordinate)
// mapped into [-1, 1], so tests reproduce bit-exactly on any platform.
MatrixXd stub_embed(const std::vector<std::string>& tokens, int dim,
                    std::uint64_t seed);

}  // namespace sqsim::embed
