#include "sqsim/train/report.hpp"

#include <fstream>

#include "sqsim/error.hpp"

namespace sqsim::train {

nlohmann::json report_to_json(const EnsembleReport& report,
                              const TrainConfig& config) {
  return nlohmann::json{{"per_model_f1", report.per_model_f1},
                        {"min", report.min},
                        {"max", report.max},
                        {"avg", report.avg},
                        {"vote", report.vote_f1},
                        {"config", config.to_json()},
                        {"seeds", report.seeds},
                        {"durations_sec", report.durations_sec}};
}

EnsembleReport report_from_json(const nlohmann::json& j) {
  EnsembleReport r;
  try {
    r.per_model_f1 = j.at("per_model_f1").get<std::vector<double>>();
    r.min = j.at("min").get<double>();
    r.max = j.at("max").get<double>();
    r.avg = j.at("avg").get<double>();
    r.vote_f1 = j.at("vote").get<double>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.durations_sec = j.at("durations_sec").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw_schema(std::string("malformed report JSON: ") + e.what());
  }
  return r;
}

void write_report(const EnsembleReport& report, const TrainConfig& config,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write report: " + path);
  out << report_to_json(report, config).dump(2) << '\n';
  if (!out) throw_io("write failed: " + path);
}

void write_loss_history(const std::vector<double>& losses,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write loss history: " + path);
  out << nlohmann::json(losses).dump() << '\n';
  if (!out) throw_io("write failed: " + path);
}

}  // namespace sqsim::train
