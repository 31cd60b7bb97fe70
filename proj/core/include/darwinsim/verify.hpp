#pragma once

#include "darwinsim/oracle.hpp"

#include <string>
#include <vector>

namespace darwinsim {

struct VerifySuite {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifySuite> suites;
  // True when every suite that actually ran passed.
  bool all_passed() const;
};

struct VerifyOptions {
  DenseParams params;  // jx != jy selects the regime the closed form cannot reach
  unsigned seed = 12345;
  int draws = 20;
  double plateau_tol = 1e-3;
  double nullity_tol = 1e-8;
  // Deliberately corrupts one branch amplitude before the fidelity check, to
  // prove the check can fail.
  bool inject_amplitude_fault = false;
};

// Self-check battery: closed form against the brute-force evolution, the
// partial-information gap identity and bounds over random parameter draws,
// plateau structure, and block-certificate consistency with numeric discord.
VerifyReport run_verify(const VerifyOptions& opt);

std::string verify_report_json(const VerifyReport& report);

}  // namespace darwinsim
