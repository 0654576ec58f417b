#pragma once

#include <string>

#include "json.hpp"

namespace mkdv {

struct VerifyResult {
  bool pass = false;
  int checked = 0;
  int failed = 0;
  std::string table;  // one line per check
};

// Re-evaluates a report against the pinned acceptance bands for its
// experiment. Works from the measured numbers only; the report's own "pass"
// flags are recomputed, never trusted. Throws MkdvError on schema mismatch
// or unknown experiment/profile.
VerifyResult verify_report(const nlohmann::ordered_json& report,
                           const std::string& profile = "default");

}  // namespace mkdv
