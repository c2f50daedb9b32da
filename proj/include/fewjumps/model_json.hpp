#pragma once

#include <json.hpp>

#include "fewjumps/models.hpp"

namespace fewjumps {

/// Parses {"family": "...", parameters...}; throws PreconditionError on any
/// schema violation (unknown family, wrong shapes, bad parameter domains).
ModelSpec model_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const ModelSpec& spec);

}  // namespace fewjumps
