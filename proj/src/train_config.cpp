#include "sqsim/train/config.hpp"

#include <fstream>
#include <set>

#include "sqsim/error.hpp"

namespace sqsim::train {

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw_schema("learning_rate must be positive");
  if (batch_size < 1) throw_schema("batch_size must be >= 1");
  if (epochs < 1) throw_schema("epochs must be >= 1");
  if (seeds.empty()) throw_schema("seeds must not be empty");
  std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
  if (distinct.size() != seeds.size())
    throw_schema("seeds must be distinct");
  if (precision != "f64" && precision != "f32")
    throw_schema("precision must be 'f64' or 'f32'");
  if (emb_combine != "mean" && emb_combine != "sum")
    throw_schema("emb_combine must be 'mean' or 'sum'");
  model_config().validate();
}

nlohmann::json TrainConfig::to_json() const {
  return nlohmann::json{{"learning_rate", learning_rate},
                        {"batch_size", batch_size},
                        {"epochs", epochs},
                        {"dropout", dropout},
                        {"chunk", chunk},
                        {"hidden", hidden},
                        {"input_dim", input_dim},
                        {"head", head},
                        {"seeds", seeds},
                        {"precision", precision},
                        {"forget_bias", forget_bias},
                        {"emb_combine", emb_combine}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw_schema("training config must be a JSON object");
  TrainConfig c;
  static const std::set<std::string> known = {
      "learning_rate", "batch_size", "epochs",    "dropout",
      "chunk",         "hidden",     "input_dim", "head",
      "seeds",         "precision",  "forget_bias", "emb_combine"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key))
      throw_schema("unknown training config key: '" + key + "'");
  try {
    if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<int>();
    if (j.contains("epochs")) c.epochs = j["epochs"].get<int>();
    if (j.contains("dropout")) c.dropout = j["dropout"].get<double>();
    if (j.contains("chunk")) c.chunk = j["chunk"].get<int>();
    if (j.contains("hidden")) c.hidden = j["hidden"].get<int>();
    if (j.contains("input_dim")) c.input_dim = j["input_dim"].get<int>();
    if (j.contains("head")) c.head = j["head"].get<std::vector<int>>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("precision")) c.precision = j["precision"].get<std::string>();
    if (j.contains("forget_bias")) c.forget_bias = j["forget_bias"].get<double>();
    if (j.contains("emb_combine")) c.emb_combine = j["emb_combine"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw_schema(std::string("bad training config value: ") + e.what());
  }
  return c;
}

TrainConfig TrainConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw_schema("malformed config JSON (" + path + "): " + e.what());
  }
  return from_json(j);
}

}  // namespace sqsim::train
