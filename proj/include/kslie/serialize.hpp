#ifndef KSLIE_SERIALIZE_HPP
#define KSLIE_SERIALIZE_HPP

#include <json.hpp>

#include "kslie/liealg.hpp"
#include "kslie/motion.hpp"
#include "kslie/registry.hpp"
#include "kslie/verify.hpp"

namespace kslie {

// geometry <-> JSON, expressions carried as grammar text
nlohmann::json to_json(const VectorField& X);
nlohmann::json to_json(const OneForm& a);
nlohmann::json to_json(const TwoForm& w);
nlohmann::json to_json(const KSymplecticStructure& s);
nlohmann::json to_json(const LieAlgebraModel& model, const std::vector<std::string>& labels = {});
nlohmann::json to_json(const DriftReport& report);
nlohmann::json to_json(const std::vector<SuiteReport>& reports);

// user-supplied system files for the --load escape hatch
ExampleRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const ExampleRecord& r);

}  // namespace kslie

#endif
