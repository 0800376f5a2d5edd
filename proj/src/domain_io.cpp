#include "speclab/domain_io.hpp"

#include <fstream>

namespace speclab {
namespace {

Loop parse_loop(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidDomainError(what + " must be an array of [x, y] pairs");
  Loop loop;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw InvalidDomainError(what + " contains an entry that is not an [x, y] pair");
    }
    loop.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  // Tolerate an explicitly closed loop.
  if (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
  return loop;
}

nlohmann::json loop_to_json(const Loop& l) {
  auto arr = nlohmann::json::array();
  for (Point p : l) arr.push_back({p.x, p.y});
  return arr;
}

}  // namespace

LoadedDomain parse_domain(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidDomainError("domain document must be a JSON object");
  if (!j.contains("outer")) throw InvalidDomainError("domain document lacks \"outer\"");
  LoadedDomain out;
  out.domain.label = j.value("label", std::string("unnamed"));
  out.domain.outer = parse_loop(j["outer"], "outer");
  if (j.contains("holes")) {
    for (const auto& h : j["holes"]) out.domain.holes.push_back(parse_loop(h, "hole"));
  }
  if (j.contains("components")) {
    for (const auto& c : j["components"]) out.domain.components.push_back(parse_loop(c, "component"));
  }
  out.orientation_fixes = normalize_orientation(out.domain);
  validate_domain(out.domain);
  return out;
}

LoadedDomain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open domain file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidDomainError("malformed domain JSON in " + path + ": " + e.what());
  }
  return parse_domain(j);
}

nlohmann::json domain_to_json(const Domain& d) {
  nlohmann::json j;
  j["label"] = d.label;
  j["outer"] = loop_to_json(d.outer);
  j["holes"] = nlohmann::json::array();
  for (const auto& h : d.holes) j["holes"].push_back(loop_to_json(h));
  if (!d.components.empty()) {
    j["components"] = nlohmann::json::array();
    for (const auto& c : d.components) j["components"].push_back(loop_to_json(c));
  }
  return j;
}

void save_domain(const Domain& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << domain_to_json(d).dump(1) << '\n';
}

}  // namespace speclab
