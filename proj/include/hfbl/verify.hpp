#ifndef HFBL_VERIFY_HPP
#define HFBL_VERIFY_HPP

// Registry of the cross-module consistency checks: closed-form agreements,
// sign propagation, integral-identity convergence, phase-plane structure,
// necessary conditions and tail laws. The CLI `verify` subcommand and the
// acceptance suite both run through this registry.

#include <functional>
#include <string>
#include <vector>

namespace hfbl {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  double tol_scale = 1.0;           // < 1 tightens integration tolerances
  std::vector<std::string> only;    // run checks whose name contains any entry
  unsigned seed = 0x5eed1e55;       // randomized-grid seed
  int random_cases = 200;
};

struct Check {
  std::string name;
  std::function<CheckResult(const VerifyOptions&)> run;
};

const std::vector<Check>& verify_registry();

std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace hfbl

#endif
