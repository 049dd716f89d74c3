#pragma once

#include <string>

#include <json.hpp>

#include "tcur/trainer.hpp"

namespace tcur {

enum class ReportFormat { Json, Csv };

nlohmann::json to_json(const ReportRecord& r);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const TrainHistory& h);
nlohmann::json to_json(const ParamReport& p);
nlohmann::json to_json(const MatrixParamReport& p);
nlohmann::json dims_json(const Dims& d);

/// One header line plus one line per record.
std::string to_csv(const ComparisonReport& r);
std::string to_csv(const TrainHistory& h);

}  // namespace tcur
