#pragma once

#include <string>

#include "json.hpp"

#include "banditlab/environment.hpp"

namespace banditlab {

// Instance file layout:
//   {d, L, s, M, R, theta0: [...], protected: [[...], ...],
//    action_space: {kind, ...kind-specific fields}}

nlohmann::json instance_to_json(const ProtectedInstance& instance);
ProtectedInstance instance_from_json(const nlohmann::json& j);

void write_instance(const std::string& path, const ProtectedInstance& instance);
ProtectedInstance read_instance(const std::string& path);

nlohmann::json action_space_to_json(const ActionSpaceSpec& space);
ActionSpaceSpec action_space_from_json(const nlohmann::json& j);

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j, const std::string& what);

}  // namespace banditlab
