#pragma once

// Built-in consistency suite: block results against dense 2^N matrices,
// Wigner orthogonality, normalization identities and witness validity.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sqz {

struct SelftestCheck {
  std::string name;
  double measured = 0.0;   // worst error seen
  double tolerance = 0.0;
  bool passed = false;
  /// Passes at `tolerance` but not at tolerance / tighten.
  bool marginal = false;
  std::string detail;
};

struct SelftestOptions {
  double tighten = 1.0;
  /// Schur cache to validate; when empty a fresh one is written and re-read.
  std::optional<std::filesystem::path> schur_cache;
  int max_dense_n = 6;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool all_passed() const;
};

SelftestReport run_selftest(const SelftestOptions& options = {});

}  // namespace sqz
