#include "oplip/serialize.hpp"

#include <cstdlib>
#include <locale>
#include <sstream>

namespace oplip {

nlohmann::json matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_to_json: only square matrices are serialized");
  nlohmann::json entries = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const Index dim = j.at("dim").get<Index>();
  const auto& entries = j.at("entries");
  if (dim < 0 || entries.size() != static_cast<std::size_t>(dim * dim))
    throw DimensionError("matrix_from_json: entry count does not match dim");
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index k = 0; k < dim; ++k) {
      const auto& e = entries.at(static_cast<std::size_t>(i * dim + k));
      m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

nlohmann::json profile_to_json(const IntegerProfile& p) { return {{"K", p.window()}, {"values", p.values()}}; }

IntegerProfile profile_from_json(const nlohmann::json& j) {
  return IntegerProfile(j.at("K").get<int>(), j.at("values").get<std::vector<std::int64_t>>());
}

nlohmann::json record_to_json(const ExperimentRecord& r) {
  return {{"kind", r.kind},
          {"label", r.label},
          {"alpha", r.alpha.to_string()},
          {"dim", r.dim},
          {"trials", r.trials},
          {"steps", r.steps},
          {"seed", r.seed},
          {"best_ratio", r.best_ratio},
          {"contrast", r.contrast()},
          {"witness", r.witness},
          {"metrics", r.metrics},
          {"config_hash", r.config_hash},
          {"runtime_ms", r.runtime_ms}};
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.label = j.value("label", std::string());
  r.alpha = SchattenIndex::parse(j.at("alpha").get<std::string>());
  r.dim = j.at("dim").get<Index>();
  r.trials = j.at("trials").get<int>();
  r.steps = j.value("steps", 0);
  r.seed = j.at("seed").get<std::uint64_t>();
  r.best_ratio = j.at("best_ratio").get<double>();
  r.witness = j.value("witness", nlohmann::json::object());
  r.metrics = j.value("metrics", std::map<std::string, double>{});
  r.config_hash = j.value("config_hash", std::string());
  r.runtime_ms = j.value("runtime_ms", std::int64_t{0});
  return r;
}

std::string format_number(double x) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace oplip
