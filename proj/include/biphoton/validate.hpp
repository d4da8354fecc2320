#pragma once

#include <string>
#include <vector>

namespace biphoton {

// One self-check outcome. Failures carry the mismatch (or the error message)
// in `detail`.
struct ValidationCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_ok() const;
};

// Cross-checks the closed-form pipeline against brute-force quadrature and
// the analytic derivatives against finite differences, over a fixed set of
// seed configurations. `deep` adds the direct five-dimensional kernel
// quadrature, which costs a few extra seconds.
ValidationReport run_validation(bool deep);

}  // namespace biphoton
