#pragma once

#include <string>

#include "vq/verifier.hpp"

namespace vq {

/// Serializes a report as
/// {suite, suites, grid{q, x, pairs, description}, tolerance{rel, abs}, pass,
///  violations[], observations[], checks[], failures[], points[]?}.
std::string report_to_json(const VerificationReport& report, int indent = 2);

}  // namespace vq
