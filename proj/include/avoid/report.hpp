#pragma once

#include <json.hpp>

#include "avoid/constructions.hpp"
#include "avoid/oracle.hpp"
#include "avoid/reductions.hpp"
#include "avoid/regular.hpp"

namespace avoid {

nlohmann::json to_json(const ReductionReport& r);
nlohmann::json to_json(const GadgetInfo& info);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const LayeredPartition& lp);
nlohmann::json to_json(const GroundedCertificate& cert);
nlohmann::json to_json(const TypedPartition& tp);

}  // namespace avoid
