#pragma once

// torus-scatter commands. Exit codes: 0 success/pass, 1 verification
// failure, 2 usage, configuration or inapplicable suite.

#include "torus_scatter/causality_poles.hpp"
#include "torus_scatter/check.hpp"
#include "torus_scatter/config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus_scatter {

/// The requested suite does not apply to the configured model.
class InapplicableSuite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckResult> checks;
  nlohmann::json details = nlohmann::json::object();

  bool pass() const;
};

nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const VerificationReport& report);

/// Suites: symmetry, eom, wigner, poles, ep. `tol_override` replaces every
/// check tolerance. Throws InapplicableSuite or ConfigError.
VerificationReport run_suite(const RunConfig& config, const std::string& suite,
                             std::optional<double> tol_override = std::nullopt);

/// All applicable suites; inapplicable ones are listed under "skipped".
nlohmann::json run_all_suites(const RunConfig& config, std::optional<double> tol_override, bool& pass);

/// Header p,phi,theta,dphi_dp,dtheta_dp,kappa,V,quadrant; phi and theta in
/// [-pi, pi); kappa and V empty where singular or without a potential.
void write_trajectory_csv(const RunConfig& config, std::ostream& out);

/// Header p,phi,theta,ep plus ep_mc,ep_mc_stderr when ep_samples is set.
void write_ep_csv(const RunConfig& config, std::ostream& out);

/// {a, lambda|r, case, poles: [{re, im, mult}], lower_half}.
nlohmann::json pole_report(const PoleConfig& poles);

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torus_scatter
