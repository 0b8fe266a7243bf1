#pragma once

// Verification reports: per-case claim tables keyed into a fixed registry of
// checkable statements.

#include <string>
#include <vector>

namespace hotspots {

enum class ClaimOutcome { Pass, Fail, Inconclusive };

struct Claim {
  std::string id;  // registry key
  std::string predicted;
  std::string observed;
  ClaimOutcome outcome = ClaimOutcome::Inconclusive;
};

/// Fixed registry of claim ids -> statement text. Unknown ids are rejected
/// when a claim is appended.
const std::vector<std::pair<std::string, std::string>>& claim_registry();
std::string claim_statement(const std::string& id);

struct VerificationReport {
  std::string case_id;
  std::string spec_summary;
  double h = 0.0;
  double lambda1 = 0.0;
  double residual = 0.0;
  std::vector<Claim> claims;
  std::vector<std::string> artifacts;

  void add_claim(const std::string& id, const std::string& predicted,
                 const std::string& observed, ClaimOutcome outcome);
  bool passed() const;  // no Fail among claims
  int inconclusive_count() const;
  std::string to_text() const;
};

std::string to_string(ClaimOutcome o);

}  // namespace hotspots
