#pragma once

#include "trx/retraction.hpp"

#include <json.hpp>

namespace trx {

/// Records with lift coefficients, statuses, factorizations, faces and
/// seeds, plus the options and computed retractions.
nlohmann::json family_to_json(const FiniteSingularFamily& fam);

/// Rebuilds a family on the given ambient manifold and collection, which
/// must match the serialized member names. Recomputed ids, statuses and
/// factorizations are checked against the stored ones; any mismatch is a
/// SchemaError.
FiniteSingularFamily family_from_json(const nlohmann::json& j, ManifoldPtr ambient, TCollection Ts);

}  // namespace trx
