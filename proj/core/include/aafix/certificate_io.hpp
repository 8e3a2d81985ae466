#pragma once

// Text form of contraction certificates: `key: value` lines followed by the
// inequality audit trail. The base point is not embedded; the solver
// recomputes it from the problem when a parsed certificate lacks one.

#include "aafix/certifier.hpp"

#include <iosfwd>
#include <string>

namespace aafix {

void write_certificate(std::ostream& out, const ContractionCertificate& c);
std::string certificate_to_string(const ContractionCertificate& c);

/// Inverse of write_certificate. Throws Error on malformed input.
ContractionCertificate read_certificate(std::istream& in);
ContractionCertificate certificate_from_string(const std::string& text);

}  // namespace aafix
