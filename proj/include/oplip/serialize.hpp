#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "oplip/core.hpp"
#include "oplip/experiments.hpp"
#include "oplip/kernels.hpp"

namespace oplip {

// {"dim": n, "entries": [[re, im], ...]} in row-major order; square matrices only.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

// {"K": window, "values": [f(-K), ..., f(K)]}
nlohmann::json profile_to_json(const IntegerProfile& p);
IntegerProfile profile_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const nlohmann::json& j);

// Locale-independent, 17 significant digits.
std::string format_number(double x);

}  // namespace oplip
