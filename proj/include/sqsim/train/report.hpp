#pragma once

#include <string>

#include "json.hpp"
#include "sqsim/train/config.hpp"
#include "sqsim/train/trainer.hpp"

namespace sqsim::train {

nlohmann::json report_to_json(const EnsembleReport& report,
                              const TrainConfig& config);
EnsembleReport report_from_json(const nlohmann::json& j);

void write_report(const EnsembleReport& report, const TrainConfig& config,
                  const std::string& path);

// Loss history files hold one JSON array of per-epoch mean losses.
void write_loss_history(const std::vector<double>& losses,
                        const std::string& path);

}  // namespace sqsim::train
