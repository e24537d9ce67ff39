#pragma once

#include <string>

#include "msqg/curve.hpp"

namespace msqg {

// {"grid_size": M, "curves": [[[x,y],...],...], "time": t,
//  "domain": "plane"|"half-plane"} — field names are part of the contract.
std::string state_to_json(const ContourState& state);

// Throws validation_error on malformed documents.
ContourState state_from_json(const std::string& text);

} // namespace msqg
