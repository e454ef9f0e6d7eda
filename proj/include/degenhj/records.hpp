#pragma once

#include "degenhj/regularity.hpp"
#include "degenhj/witness.hpp"

#include <json.hpp>

#include <string>

namespace degenhj {

using Record = nlohmann::ordered_json;

/// Endpoints, constants, measured energy against its bound, and the four pass flags.
[[nodiscard]] Record certificate_record(const WitnessCertificate& cert, const VerificationReport& report);

[[nodiscard]] Record time_lipschitz_record(const TimeLipschitzEstimate& est);

[[nodiscard]] Record holder_fit_record(const HolderFit& fit);

[[nodiscard]] Record vector_record(const Vector& v);

}  // namespace degenhj
