#pragma once

#include <string>
#include <vector>

#include "smlorenz/sepvalue.hpp"

namespace sml {

struct VerificationFailed : std::runtime_error {
  explicit VerificationFailed(const std::string& msg) : std::runtime_error(msg) {}
};

std::string homoclinic_to_json(const HomoclinicCertificate& cert,
                               const std::vector<std::string>& tube_refs);
std::string separatrix_to_json(const SeparatrixCertificate& cert);

HomoclinicCertificate homoclinic_from_json(const std::string& text);
SeparatrixCertificate separatrix_from_json(const std::string& text);

// Re-derives every stored inequality and derived quantity from the JSON text
// alone (no integration).  Returns the list of failures; empty means the
// certificate verifies.  Derived fields must match bit for bit, so mutating
// any stored digit of a sign-critical field fails the pass.
std::vector<std::string> verify_certificate_text(const std::string& text);

void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace sml
