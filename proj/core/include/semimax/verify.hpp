#pragma once

#include "semimax/scenario.hpp"

namespace semimax {

/// Verification suites backing the acceptance checks.  Every tolerance is
/// pinned here.  Suites run on built-in default scenarios; a config can
/// override tolerances only.
///
///   spectral   eigensystem identities against the dense solver oracle
///   boundary   boundary pairing identities on the shell
///   wigner     transform invariants: hermiticity, Parseval, localisation
///   support    shell concentration trend of WKB families
///   pdo        operator calculus: quantizations, product rule, duality
///   decompose  the a0 + a1 k3 + a2 (v|k| - w) splitting
///   transport  ray integration, reflection, bookkeeping, MC pushforward
///   calderon   transmission-interface laws
///   curved     flat reduction and tilted-plane oracle
///   cross      field-side vs ray-side cross validation
RunReport verify_suite(const std::string& name,
                       const ScenarioConfig* config = nullptr, int threads = 0,
                       const std::string& out_dir = "");

/// All suite names in execution order.
std::vector<std::string> verify_suite_names();

}  // namespace semimax
