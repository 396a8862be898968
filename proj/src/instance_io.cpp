#include "banditlab/instance_io.hpp"

#include <fstream>
#include <set>

#include "banditlab/errors.hpp"

namespace banditlab {

nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec vec_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(what + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

namespace {

nlohmann::json space_to_json(const ActionSpaceSpec& space) {
  nlohmann::json j;
  j["kind"] = to_string(space.kind);
  switch (space.kind) {
    case ActionSpaceKind::UnitBall:
      break;
    case ActionSpaceKind::FiniteFixed: {
      nlohmann::json arms = nlohmann::json::array();
      for (const Vec& a : space.arms) arms.push_back(vec_to_json(a));
      j["arms"] = std::move(arms);
      break;
    }
    case ActionSpaceKind::FiniteResampled:
      j["count"] = space.count;
      j["seed"] = space.seed;
      break;
    case ActionSpaceKind::LowerBoundPair:
      j["alpha"] = space.alpha;
      j["seed"] = space.seed;
      break;
  }
  return j;
}

template <typename T>
T required(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidInput(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(where + ": field '" + std::string(key) + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw InvalidInput(where + ": unknown field '" + it.key() + "'");
}

ActionSpaceSpec space_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidInput("action_space must be an object");
  const ActionSpaceKind kind = action_space_kind_from_string(required<std::string>(j, "kind", "action_space"));
  switch (kind) {
    case ActionSpaceKind::UnitBall:
      reject_unknown(j, {"kind"}, "action_space");
      return ActionSpaceSpec::unit_ball();
    case ActionSpaceKind::FiniteFixed: {
      reject_unknown(j, {"kind", "arms"}, "action_space");
      if (!j.contains("arms") || !j["arms"].is_array()) throw InvalidInput("action_space: 'arms' must be an array");
      std::vector<Vec> arms;
      for (const auto& a : j["arms"]) arms.push_back(vec_from_json(a, "action_space.arms[]"));
      return ActionSpaceSpec::finite_fixed(std::move(arms));
    }
    case ActionSpaceKind::FiniteResampled:
      reject_unknown(j, {"kind", "count", "seed"}, "action_space");
      return ActionSpaceSpec::finite_resampled(required<int>(j, "count", "action_space"),
                                               j.value("seed", std::uint64_t{0}));
    case ActionSpaceKind::LowerBoundPair:
      reject_unknown(j, {"kind", "alpha", "seed"}, "action_space");
      return ActionSpaceSpec::lower_bound_pair(required<double>(j, "alpha", "action_space"),
                                               j.value("seed", std::uint64_t{0}));
  }
  throw InvalidInput("action_space: unsupported kind");
}

}  // namespace

nlohmann::json instance_to_json(const ProtectedInstance& instance) {
  nlohmann::json j;
  j["d"] = instance.d();
  j["L"] = instance.L();
  j["s"] = instance.s();
  j["M"] = instance.M();
  j["R"] = instance.R();
  j["theta0"] = vec_to_json(instance.theta0());
  nlohmann::json prot = nlohmann::json::array();
  for (const Vec& v : instance.protected_vectors()) prot.push_back(vec_to_json(v));
  j["protected"] = std::move(prot);
  j["action_space"] = space_to_json(instance.action_space());
  return j;
}

ProtectedInstance instance_from_json(const nlohmann::json& j) {
  const std::string where = "instance";
  if (!j.is_object()) throw InvalidInput("instance file must hold a JSON object");
  reject_unknown(j, {"d", "L", "s", "M", "R", "theta0", "protected", "action_space"}, where);
  const int d = required<int>(j, "d", where);
  const int L = required<int>(j, "L", where);
  const int s = required<int>(j, "s", where);
  const double M = required<double>(j, "M", where);
  const double R = required<double>(j, "R", where);
  if (!j.contains("theta0")) throw InvalidInput("instance: missing field 'theta0'");
  Vec theta0 = vec_from_json(j["theta0"], "theta0");
  if (theta0.size() != d) throw InvalidInput("instance: theta0 length does not match d");
  if (!j.contains("protected") || !j["protected"].is_array()) throw InvalidInput("instance: 'protected' must be an array");
  std::vector<Vec> prot;
  for (const auto& v : j["protected"]) prot.push_back(vec_from_json(v, "protected[]"));
  if (static_cast<int>(prot.size()) != L) throw InvalidInput("instance: number of protected vectors does not match L");
  if (!j.contains("action_space")) throw InvalidInput("instance: missing field 'action_space'");
  return ProtectedInstance(std::move(theta0), std::move(prot), M, R, s, space_from_json(j["action_space"]));
}

void write_instance(const std::string& path, const ProtectedInstance& instance) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write instance file '" + path + "'");
  out << instance_to_json(instance).dump(2) << '\n';
}

ProtectedInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("instance file '" + path + "' is not valid JSON: " + e.what());
  }
  return instance_from_json(j);
}

nlohmann::json action_space_to_json(const ActionSpaceSpec& space) { return space_to_json(space); }

ActionSpaceSpec action_space_from_json(const nlohmann::json& j) { return space_from_json(j); }

}  // namespace banditlab
