#include "cheshire/qstate_json.hpp"

#include "cheshire/errors.hpp"

namespace cheshire {

nlohmann::json to_json(const StateVector& s) {
  nlohmann::json space = nlohmann::json::array();
  for (const auto& f : s.space()) space.push_back({{"name", f.name()}, {"labels", f.labels()}});
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    amps.push_back({s.amplitudes()(i).real(), s.amplitudes()(i).imag()});
  }
  return {{"space", std::move(space)}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const nlohmann::json& j) {
  try {
    Space space;
    for (const auto& f : j.at("space")) {
      space.emplace_back(f.at("name").get<std::string>(), f.at("labels").get<std::vector<std::string>>());
    }
    const auto& amps = j.at("amplitudes");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = Complex(amps[i].at(0).get<double>(), amps[i].at(1).get<double>());
    }
    return StateVector(std::move(space), std::move(v));
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("malformed state JSON: ") + e.what());
  }
}

}  // namespace cheshire
