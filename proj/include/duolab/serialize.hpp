// JSON round-trips for the core types. Doubles survive exactly (shortest
// round-trip formatting), so serialized snapshots restore bit-identically.
#pragma once

#include <json.hpp>

#include "duolab/types.hpp"

namespace duolab {

using json = nlohmann::json;

void to_json(json& j, const DatasetSchema& schema);
void from_json(const json& j, DatasetSchema& schema);

void to_json(json& j, const Sample& sample);
void from_json(const json& j, Sample& sample);

void to_json(json& j, const ModelSnapshot& snap);
void from_json(const json& j, ModelSnapshot& snap);

void to_json(json& j, const BatchMetrics& metrics);
void from_json(const json& j, BatchMetrics& metrics);

}  // namespace duolab
