#include "avoid/report.hpp"

namespace avoid {

using nlohmann::json;

json to_json(const ReductionReport& r) {
  return {{"stage", r.stage},
          {"n", r.n},
          {"m", r.m},
          {"min_out_before", r.min_out_before},
          {"min_out_after", r.min_out_after},
          {"rounds", r.rounds},
          {"restarts", r.restarts},
          {"seed", r.seed},
          {"verified", r.verified},
          {"violations", r.violations}};
}

json to_json(const GadgetInfo& info) {
  json params = json::object();
  for (const auto& [name, value] : info.parameters) params[name] = value;
  return {{"construction", info.construction},
          {"parameters", params},
          {"layer_sizes", info.layer_sizes},
          {"faithful", info.faithful}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j = {{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    if (!c.witness.empty()) j["witness"] = c.witness;
    checks.push_back(std::move(j));
  }
  return {{"passed", r.passed}, {"checks", checks}};
}

json to_json(const LayeredPartition& lp) { return lp.parts; }

json to_json(const GroundedCertificate& cert) {
  if (cert.verdict == GroundedVerdict::Grounded) {
    return {{"verdict", "grounded"}, {"heights", cert.heights.heights}};
  }
  return {{"verdict", "not_grounded"}, {"u", cert.u},         {"v", cert.v},
          {"path", cert.path},         {"forward", cert.forward}, {"backward", cert.backward}};
}

json to_json(const TypedPartition& tp) {
  std::string classes;
  for (const Part p : tp.classes) classes.push_back(to_char(p));
  json types = json::array();
  for (const auto& word : tp.types) {
    std::string w;
    for (const Part p : word) w.push_back(to_char(p));
    types.push_back(w);
  }
  return {{"classes", classes}, {"s", tp.s}, {"types", types}};
}

}  // namespace avoid
